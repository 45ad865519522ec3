#include "lassocert/optimality.hpp"

#include "lassocert/solver.hpp"

namespace lassocert {

IndexPartition active_partition(const ProblemInstance& p, const Vector& x, double tol) {
  if (!(tol > 0.0) || tol >= 1.0) fail(Errc::InvalidArgument, "active tolerance must be in (0, 1)");
  if (x.size() != p.n()) fail(Errc::InvalidArgument, "active_partition: x has wrong length");

  const Vector z = p.residual(x);
  if (p.loss().kind() == LossKind::L2Norm && z.norm() <= p.smooth_tol())
    fail(Errc::NonSmoothPoint,
         "Ax = b regime of the norm loss: the active partition is undefined");

  const double r = kkt_residual(p, x);
  if (r > 10.0 * tol)
    fail(Errc::NotStationary, "kkt residual " + std::to_string(r) + " exceeds 10*tol");

  const LossEval ev = loss_eval(p.loss(), z, 1);
  const Vector g = p.A().transpose() * (*ev.gradient);
  const double lam = p.lambda();

  IndexPartition part;
  part.tol_used = tol;
  for (int i = 0; i < p.n(); ++i) {
    const bool neg = g(i) <= -lam * (1.0 - tol);
    const bool pos = g(i) >= lam * (1.0 - tol);
    if (neg && pos) fail(Errc::NumericalBreakdown, "active partition tie; tol too large");
    if (neg) part.J1.push_back(i);
    if (pos) part.J2.push_back(i);
  }
  return part;
}

std::pair<IndexSet, IndexSet> sign_partition(const Vector& x) {
  IndexSet pos, neg;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > 0.0) pos.push_back(static_cast<int>(i));
    if (x(i) < 0.0) neg.push_back(static_cast<int>(i));
  }
  return {pos, neg};
}

}  // namespace lassocert
