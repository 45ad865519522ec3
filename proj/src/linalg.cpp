#include "lassocert/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lassocert::linalg {

RankResult rank_svd(const Matrix& M, double rel_tol) {
  RankResult out;
  if (M.rows() == 0 || M.cols() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(M);
  const Vector s = svd.singularValues();
  out.sigma_max = s.size() > 0 ? s(0) : 0.0;
  out.threshold = rel_tol * out.sigma_max;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > out.threshold && s(i) > 0.0) {
      ++out.rank;
      out.sigma_min_accepted = s(i);
    } else if (out.sigma_max_rejected == 0.0) {
      out.sigma_max_rejected = s(i);
    }
  }
  return out;
}

Matrix orthonormal_range(const Matrix& M, double rel_tol) {
  if (M.rows() == 0 || M.cols() == 0) return Matrix(M.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
  const Vector s = svd.singularValues();
  const double thr = rel_tol * (s.size() > 0 ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr && s(i) > 0.0) ++r;
  return svd.matrixU().leftCols(r);
}

Matrix psd_sqrt(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
  Vector lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = lam(i) > 0.0 ? std::sqrt(lam(i)) : 0.0;
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

double range_residual(const Matrix& M, const Vector& v) {
  if (M.cols() == 0) return v.norm();
  const Vector t = M.completeOrthogonalDecomposition().solve(v);
  return (M * t - v).norm();
}

Vector least_norm_solve(const Matrix& M, const Vector& rhs) {
  return M.completeOrthogonalDecomposition().solve(rhs);
}

double gram_spectral_norm(const Matrix& A, double rel_tol, int max_iters) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  const Matrix G = A.transpose() * A;
  const Eigen::Index n = G.rows();
  if (G.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double lam_prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = G * v;
    const double nw = w.norm();
    if (nw == 0.0) {
      // v landed in the kernel; restart along the first coordinate axis.
      v = Vector::Unit(n, it % n);
      continue;
    }
    v = w / nw;
    const double lam = v.dot(G * v);
    if (std::abs(lam - lam_prev) <= rel_tol * std::abs(lam)) return lam;
    lam_prev = lam;
  }
  return lam_prev;
}

double spectral_norm(const Matrix& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

}  // namespace lassocert::linalg
