#pragma once

#include <vector>

#include "lassocert/example_gen.hpp"
#include "lassocert/problem.hpp"
#include "lassocert/rng.hpp"

namespace lassocert::testutil {

inline ProblemInstance example_lasso(double lambda, double gamma = 0.5) {
  return generate_example(gamma, ExampleVariant::Lasso, lambda).problem;
}

inline ProblemInstance example_sr(double lambda, double gamma = 0.5) {
  return generate_example(gamma, ExampleVariant::Sr, lambda).problem;
}

// Closed-form LASSO segment point for gamma = 0.5: (-3s, s, 1 + gamma - lambda + 4s).
inline Vector lasso_segment_point(double s, double lambda, double gamma = 0.5) {
  Vector v(3);
  v << -3.0 * s, s, 1.0 + gamma - lambda + 4.0 * s;
  return v;
}

inline double dist_to_segment(const Vector& p, const Vector& a, const Vector& c) {
  const Vector d = c - a;
  double t = d.squaredNorm() > 0.0 ? (p - a).dot(d) / d.squaredNorm() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * d - p).norm();
}

// Random instance with entries in [-2, 2] and lambda a fraction of ||A^T b||_inf.
inline ProblemInstance random_instance(Rng& rng, int m, int n, LossKind kind,
                                       double lam_lo = 0.2, double lam_hi = 0.9) {
  while (true) {
    Matrix A(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = rng.uniform(-2.0, 2.0);
    Vector b(m);
    for (int i = 0; i < m; ++i) b(i) = rng.uniform(-2.0, 2.0);
    double scale = (A.transpose() * b).lpNorm<Eigen::Infinity>();
    if (kind == LossKind::L2Norm && b.norm() > 0.0)
      scale = (A.transpose() * (b / b.norm())).lpNorm<Eigen::Infinity>();
    if (scale < 1e-3) continue;  // degenerate draw
    const double lambda = rng.uniform(lam_lo, lam_hi) * scale;
    if (!(lambda > 0.0)) continue;
    return ProblemInstance(A, b, lambda,
                           kind == LossKind::L2Squared ? LossModel::l2_squared()
                                                       : LossModel::l2_norm());
  }
}

}  // namespace lassocert::testutil
