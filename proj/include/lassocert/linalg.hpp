#pragma once

#include "lassocert/types.hpp"

namespace lassocert::linalg {

struct RankResult {
  int rank = 0;
  double sigma_max = 0.0;           // largest singular value (0 for empty matrices)
  double sigma_min_accepted = 0.0;  // smallest singular value counted towards the rank
  double sigma_max_rejected = 0.0;  // largest singular value below the threshold
  double threshold = 0.0;
};

// Numerical rank: singular values above rel_tol * sigma_max count.
RankResult rank_svd(const Matrix& M, double rel_tol);

// Orthonormal basis of the numerical range of M (m x rank).
Matrix orthonormal_range(const Matrix& M, double rel_tol);

// Symmetric PSD square root (eigenvalues clamped at zero).
Matrix psd_sqrt(const Matrix& S);

// Least-squares residual norm min_t ||M t - v||. An empty M gives ||v||.
double range_residual(const Matrix& M, const Vector& v);

// Minimum-norm least-squares solution of M x = rhs.
Vector least_norm_solve(const Matrix& M, const Vector& rhs);

// ||A^T A||_2 by power iteration on the Gram matrix.
double gram_spectral_norm(const Matrix& A, double rel_tol = 1e-10, int max_iters = 100000);

// Operator 2-norm via SVD.
double spectral_norm(const Matrix& M);

}  // namespace lassocert::linalg
