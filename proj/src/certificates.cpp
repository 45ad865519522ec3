#include "lassocert/certificates.hpp"

#include <cmath>

#include "lassocert/linalg.hpp"
#include "lassocert/simplex.hpp"
#include "lassocert/solver.hpp"

namespace lassocert {

using nlohmann::json;

namespace {

json rank_info_json(const linalg::RankResult& r) {
  return json{{"rank", r.rank},
              {"sigma_max", r.sigma_max},
              {"sigma_min_accepted", r.sigma_min_accepted},
              {"sigma_max_rejected", r.sigma_max_rejected},
              {"threshold", r.threshold}};
}

json index_set_json(const IndexSet& s) { return json(s); }

bool loss_is(const ProblemInstance& p, LossKind k) { return p.loss().kind() == k; }

}  // namespace

CheckResult check_weak(const ProblemInstance& p, const Vector& x, const IndexPartition& part,
                       const CertifyTolerances& tols) {
  CheckResult out;
  const Vector z = p.residual(x);
  out.witness["J"] = index_set_json(part.J());
  out.witness["rank_tol"] = tols.rank_tol;

  const double radius = p.loss().smooth_radius(z);
  if (!(radius > 0.0)) {
    out.holds = false;
    out.witness["reason"] = "twice differentiability fails at the optimal residual";
    return out;
  }

  const LossEval ev = loss_eval(p.loss(), z, 2);
  const Matrix B = linalg::psd_sqrt(*ev.hessian);
  const Matrix AJ = columns(p.A(), part.J());
  const linalg::RankResult rank_AJ = linalg::rank_svd(AJ, tols.rank_tol);
  const linalg::RankResult rank_BAJ = linalg::rank_svd(B * AJ, tols.rank_tol);
  out.holds = rank_AJ.rank == rank_BAJ.rank;
  out.witness["rank_AJ"] = rank_info_json(rank_AJ);
  out.witness["rank_BAJ"] = rank_info_json(rank_BAJ);
  return out;
}

CheckResult check_strong(const ProblemInstance& p, const Vector& x, const IndexPartition& part,
                         const CertifyTolerances& tols) {
  CheckResult weak = check_weak(p, x, part, tols);
  CheckResult out;
  out.witness = weak.witness;
  if (!weak.holds) {
    out.holds = false;
    out.witness["reason"] = "weak condition fails";
    return out;
  }
  const Matrix AJ = columns(p.A(), part.J());
  const linalg::RankResult r = linalg::rank_svd(AJ, tols.rank_tol);
  out.holds = r.rank == static_cast<int>(part.J().size());  // empty J passes vacuously
  out.witness["full_column_rank"] = out.holds;
  return out;
}

SrCheckResult check_sr(const ProblemInstance& p, const Vector& x,
                       const std::optional<IndexPartition>& partition,
                       const CertifyTolerances& tols) {
  if (!loss_is(p, LossKind::L2Norm)) fail(Errc::WrongLoss, "check_sr needs the norm loss");
  SrCheckResult out;
  const Vector z = p.residual(x);
  const double rnorm = z.norm();
  out.witness["residual_norm"] = rnorm;
  out.witness["range_tol"] = tols.range_tol;

  if (rnorm <= p.smooth_tol()) {
    out.c13 = out.c14 = false;
    out.witness["reason"] =
        "Ax = b case: the hypothesis {Ax : x in S} != {b} of the characterization fails";
    return out;
  }

  const IndexPartition part =
      partition ? *partition : active_partition(p, x, tols.active_tol);
  const IndexSet J = part.J();
  out.witness["J"] = index_set_json(J);
  const Matrix AJ = columns(p.A(), J);
  const double lsq = linalg::range_residual(AJ, p.b());
  const bool b_outside = lsq > tols.range_tol * p.b().norm();
  out.witness["range_residual_b"] = lsq;
  const linalg::RankResult r = linalg::rank_svd(AJ, tols.rank_tol);
  out.witness["rank_AJ"] = rank_info_json(r);
  out.c13 = b_outside;
  out.c14 = out.c13 && r.rank == static_cast<int>(J.size());
  return out;
}

CheckResult check_tibshirani(const ProblemInstance& p, const Vector& x,
                             const CertifyTolerances& tols) {
  if (!loss_is(p, LossKind::L2Squared)) fail(Errc::WrongLoss, "check_tibshirani needs the squared loss");
  const IndexPartition part = active_partition(p, x, tols.active_tol);
  const IndexSet J = part.J();
  const linalg::RankResult r = linalg::rank_svd(columns(p.A(), J), tols.rank_tol);
  CheckResult out;
  out.holds = r.rank == static_cast<int>(J.size());
  out.witness["J_LA"] = index_set_json(J);
  out.witness["rank_AJ"] = rank_info_json(r);
  return out;
}

CheckResult check_un2(const ProblemInstance& p, const Vector& x, const CertifyTolerances& tols) {
  if (!loss_is(p, LossKind::L2Norm)) fail(Errc::WrongLoss, "check_un2 needs the norm loss");
  const Vector z = p.residual(x);
  const double rnorm = z.norm();
  if (rnorm <= p.smooth_tol())
    fail(Errc::NonSmoothPoint, "check_un2 needs Ax != b");

  CheckResult out;
  // Support rounding: first-order solvers leave dust on the support boundary.
  const double thr = tols.supp_tol * (1.0 + x.lpNorm<Eigen::Infinity>());
  IndexSet I;
  for (int i = 0; i < p.n(); ++i)
    if (std::abs(x(i)) > thr) I.push_back(i);
  const IndexSet IC = complement(I, p.n());
  out.witness["I"] = index_set_json(I);
  out.witness["supp_tol"] = tols.supp_tol;

  const Matrix AI = columns(p.A(), I);
  const linalg::RankResult r = linalg::rank_svd(AI, tols.rank_tol);
  const double lsq = linalg::range_residual(AI, p.b());
  const bool part_i = r.rank == static_cast<int>(I.size()) && lsq > tols.range_tol * p.b().norm();
  out.witness["rank_AI"] = rank_info_json(r);
  out.witness["range_residual_b"] = lsq;
  out.witness["part_i"] = part_i;
  if (!part_i) {
    out.holds = false;
    return out;
  }

  // Part (ii): minimize t s.t. A_I^T z = 0, <ybar, z> = 0,
  //            -t <= A_{I^C}^T (ybar + z) <= t componentwise.
  const Vector ybar = (p.b() - p.A() * x) / rnorm;
  const int m = p.m();
  const int nc = static_cast<int>(IC.size());
  double t_star = 0.0;
  if (nc == 0) {
    t_star = 0.0;  // empty max
  } else {
    const Matrix AIC = columns(p.A(), IC);
    lp::GeneralLp prog;  // variables v = (z, t)
    prog.A_eq = Matrix::Zero(static_cast<Eigen::Index>(I.size()) + 1, m + 1);
    prog.b_eq = Vector::Zero(static_cast<Eigen::Index>(I.size()) + 1);
    if (!I.empty()) prog.A_eq.block(0, 0, static_cast<Eigen::Index>(I.size()), m) = AI.transpose();
    prog.A_eq.block(static_cast<Eigen::Index>(I.size()), 0, 1, m) = ybar.transpose();
    prog.A_in = Matrix::Zero(2 * nc, m + 1);
    prog.b_in = Vector::Zero(2 * nc);
    const Vector base = AIC.transpose() * ybar;
    prog.A_in.block(0, 0, nc, m) = AIC.transpose();
    prog.A_in.block(nc, 0, nc, m) = -AIC.transpose();
    for (int i = 0; i < nc; ++i) {
      prog.A_in(i, m) = -1.0;
      prog.A_in(nc + i, m) = -1.0;
      prog.b_in(i) = -base(i);
      prog.b_in(nc + i) = base(i);
    }
    prog.c = Vector::Zero(m + 1);
    prog.c(m) = 1.0;
    const lp::GeneralResult lpres = lp::solve_general(prog, tols.lp_tol);
    if (lpres.status != lp::Status::Optimal)
      fail(Errc::LpFailure, std::string("uniqueness LP: ") + lp::status_name(lpres.status));
    t_star = lpres.objective;
  }
  out.witness["t_star"] = t_star;
  out.witness["lp_tol"] = tols.lp_tol;
  out.holds = t_star < p.lambda() - tols.lp_tol;
  return out;
}

ModulusBounds modulus_bounds(const ProblemInstance& p, const Vector& x,
                             const IndexPartition& part, const CertifyTolerances& tols) {
  const CheckResult weak = check_weak(p, x, part, tols);
  if (!weak.holds) fail(Errc::WeakConditionFails, "modulus bounds need the weak condition");

  ModulusBounds out;
  out.witness["J"] = json(part.J());
  if (part.J().empty()) {
    // rge(A_J) = {0}: the coercivity estimate is vacuous and the image map is locally
    // constant, so the image bound is zero.
    out.mu = 0.0;
    out.lip_H_bound = 0.0;
    out.locally_constant_image = true;
    out.witness["flag"] = "locally constant image";
    return out;
  }

  const Vector z = p.residual(x);
  const LossEval ev = loss_eval(p.loss(), z, 2);
  const Matrix M = *ev.hessian / p.lambda();
  const Matrix Q = linalg::orthonormal_range(columns(p.A(), part.J()), tols.rank_tol);
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q.transpose() * M * Q);
  const double lam_min = es.eigenvalues().minCoeff();
  if (!(lam_min > 0.0))
    fail(Errc::NumericalBreakdown, "subspace Hessian not positive definite despite weak condition");
  out.mu = 1.0 / lam_min;

  // Partial Jacobian of f(b, lambda, y) = dh(y - b)/lambda in (b, lambda).
  Matrix Jpar(p.m(), p.m() + 1);
  Jpar.leftCols(p.m()) = -M;
  Jpar.col(p.m()) = -(*ev.gradient) / (p.lambda() * p.lambda());
  out.lip_H_bound = out.mu * linalg::spectral_norm(Jpar);
  out.witness["subspace_lambda_min"] = lam_min;
  out.witness["param_jacobian_norm"] = linalg::spectral_norm(Jpar);
  return out;
}

bool StabilityCertificate::all_applicable_hold() const {
  if (!weak_holds || !strong_holds) return false;
  for (const auto& flag : {sr_c13_holds, sr_c14_holds, tibshirani_holds, un2_holds})
    if (flag.has_value() && !*flag) return false;
  return true;
}

StabilityCertificate certify(const ProblemInstance& p, const Vector& x,
                             const CertifyTolerances& tols) {
  StabilityCertificate cert;
  const Vector z = p.residual(x);
  const bool sr = loss_is(p, LossKind::L2Norm);
  const bool nonsmooth = sr && z.norm() <= p.smooth_tol();

  if (nonsmooth) {
    cert.weak_holds = false;
    cert.strong_holds = false;
    cert.witnesses["weak"] = {{"reason", "twice differentiability fails at the optimal residual"}};
    const SrCheckResult src = check_sr(p, x, std::nullopt, tols);
    cert.sr_c13_holds = src.c13;
    cert.sr_c14_holds = src.c14;
    cert.witnesses["sr"] = src.witness;
    cert.witnesses["un2"] = {{"reason", "Ax = b regime, dual certificate test undefined"}};
    return cert;
  }

  const IndexPartition part = active_partition(p, x, tols.active_tol);
  cert.partition = part;

  const CheckResult weak = check_weak(p, x, part, tols);
  cert.weak_holds = weak.holds;
  cert.witnesses["weak"] = weak.witness;

  const CheckResult strong = check_strong(p, x, part, tols);
  cert.strong_holds = strong.holds;
  cert.witnesses["strong"] = strong.witness;

  if (loss_is(p, LossKind::L2Squared)) {
    const CheckResult tib = check_tibshirani(p, x, tols);
    cert.tibshirani_holds = tib.holds;
    cert.witnesses["tibshirani"] = tib.witness;
  }
  if (sr) {
    const SrCheckResult src = check_sr(p, x, part, tols);
    cert.sr_c13_holds = src.c13;
    cert.sr_c14_holds = src.c14;
    cert.witnesses["sr"] = src.witness;
    const CheckResult un2 = check_un2(p, x, tols);
    cert.un2_holds = un2.holds;
    cert.witnesses["un2"] = un2.witness;
  }
  if (cert.weak_holds) {
    const ModulusBounds mb = modulus_bounds(p, x, part, tols);
    cert.mu = mb.mu;
    cert.lip_H_bound = mb.lip_H_bound;
    cert.locally_constant_image = mb.locally_constant_image;
    cert.witnesses["modulus"] = mb.witness;
  }
  return cert;
}

json certificate_to_json(const StabilityCertificate& cert, const CertifyTolerances& tols) {
  json doc;
  doc["weak_holds"] = cert.weak_holds;
  doc["strong_holds"] = cert.strong_holds;
  auto set_opt = [&doc](const char* key, const std::optional<bool>& v) {
    if (v.has_value()) doc[key] = *v;
  };
  set_opt("sr_c13_holds", cert.sr_c13_holds);
  set_opt("sr_c14_holds", cert.sr_c14_holds);
  set_opt("tibshirani_holds", cert.tibshirani_holds);
  set_opt("un2_holds", cert.un2_holds);
  if (cert.mu.has_value()) doc["mu"] = *cert.mu;
  if (cert.lip_H_bound.has_value()) doc["lip_H_bound"] = *cert.lip_H_bound;
  doc["locally_constant_image"] = cert.locally_constant_image;
  if (cert.partition.has_value()) {
    doc["J1"] = json(cert.partition->J1);
    doc["J2"] = json(cert.partition->J2);
    doc["active_tol"] = cert.partition->tol_used;
  }
  doc["witnesses"] = cert.witnesses;
  doc["tolerances"] = {{"rank_tol", tols.rank_tol},
                       {"range_tol", tols.range_tol},
                       {"active_tol", tols.active_tol},
                       {"supp_tol", tols.supp_tol},
                       {"lp_tol", tols.lp_tol}};
  doc["all_applicable_hold"] = cert.all_applicable_hold();
  return doc;
}

}  // namespace lassocert
