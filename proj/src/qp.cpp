#include "lassocert/qp.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace lassocert::qp {

namespace {

// Orthonormal basis of the null space of C (n columns); identity when C has no rows.
Matrix null_basis(const Matrix& C, int n) {
  if (C.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullV);
  const Vector s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-12 * smax && s(i) > 0.0) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace

Projection project(const Polyhedron& poly, const Vector& p, const Vector& start,
                   double tol, int max_pivots) {
  const int n = static_cast<int>(p.size());
  const int mi = static_cast<int>(poly.A_in.rows());
  Vector x = start;

  const double scale = 1.0 + p.norm() + x.norm();
  std::vector<bool> active(mi, false);
  for (int i = 0; i < mi; ++i)
    active[i] = poly.A_in.row(i).dot(x) >= poly.b_in(i) - 1e-9 * scale;

  Projection out;
  bool converged = false;
  for (int pivot = 0; pivot < max_pivots && !converged; ++pivot) {
    out.pivots = pivot;
    // Stack the equality rows and the working-set inequality rows.
    int na = 0;
    for (int i = 0; i < mi; ++i)
      if (active[i]) ++na;
    Matrix C(poly.A_eq.rows() + na, n);
    if (poly.A_eq.rows() > 0) C.topRows(poly.A_eq.rows()) = poly.A_eq;
    std::vector<int> wrows;
    wrows.reserve(na);
    for (int i = 0; i < mi; ++i) {
      if (active[i]) {
        C.row(poly.A_eq.rows() + static_cast<Eigen::Index>(wrows.size())) = poly.A_in.row(i);
        wrows.push_back(i);
      }
    }

    const Matrix Z = null_basis(C, n);
    Vector d = Vector::Zero(n);
    if (Z.cols() > 0) d = Z * (Z.transpose() * (p - x));

    if (d.norm() <= tol * (1.0 + p.norm())) {
      if (wrows.empty()) {
        converged = true;
        break;
      }
      // Multipliers: (p - x) = A_eq^T nu + sum mu_i a_i, require mu >= 0.
      const Vector mul = C.transpose().completeOrthogonalDecomposition().solve(p - x);
      int drop = -1;
      for (std::size_t k = 0; k < wrows.size(); ++k) {
        const double mu = mul(poly.A_eq.rows() + static_cast<Eigen::Index>(k));
        if (mu < -1e-9 * (1.0 + p.norm())) {
          drop = wrows[k];
          break;  // lowest-index negative multiplier, keeps pivoting deterministic
        }
      }
      if (drop < 0) {
        converged = true;
        break;
      }
      active[drop] = false;
      continue;
    }

    // Step to the projection within the working set, clipped by blocking constraints.
    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < mi; ++i) {
      if (active[i]) continue;
      const double ad = poly.A_in.row(i).dot(d);
      if (ad > 1e-13 * (1.0 + d.norm())) {
        const double gap = poly.b_in(i) - poly.A_in.row(i).dot(x);
        const double ai = gap / ad;
        if (ai < alpha - 1e-15) {
          alpha = ai;
          blocking = i;
        }
      }
    }
    if (alpha < 0.0) alpha = 0.0;
    x += alpha * d;
    if (blocking >= 0) active[blocking] = true;
  }
  if (!converged) fail(Errc::QpFailure, "projection active-set iteration cap exceeded");
  out.point = x;
  out.distance = (x - p).norm();
  return out;
}

}  // namespace lassocert::qp
