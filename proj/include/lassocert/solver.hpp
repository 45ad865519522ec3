#pragma once

#include <cstdint>
#include <vector>

#include "lassocert/problem.hpp"

namespace lassocert {

struct SolveOptions {
  int max_iters = 200000;
  double tol_kkt = 1e-9;
  bool polish = true;
  std::vector<Vector> starts;  // empty = origin start; solve() uses the first entry
  std::uint64_t seed = 0;      // drives multi-start initializations
};

struct SolutionPoint {
  Vector x;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

class MaxItersExceeded : public Error {
 public:
  explicit MaxItersExceeded(SolutionPoint best)
      : Error(Errc::MaxItersExceeded, "kkt tolerance not reached; best iterate attached"),
        best_(std::move(best)) {}
  const SolutionPoint& best() const { return best_; }

 private:
  SolutionPoint best_;
};

// Distance from 0 to A^T dh(Ax-b) + lambda * subdiff box of x. The norm-loss case
// with ||Ax-b|| below the smooth tolerance uses the full subdifferential ball of the
// norm at 0 (small convex projection, exact zero detection via LP + projection QP).
double kkt_residual(const ProblemInstance& problem, const Vector& x);

// High-accuracy minimizer. L2Squared: accelerated proximal gradient with
// soft-thresholding at step 1/||A^T A||_2. L2Norm: Chambolle-Pock primal-dual
// splitting. Polishing solves the stationarity equalities on the detected support.
SolutionPoint solve(const ProblemInstance& problem, const SolveOptions& opts = {});

struct ImageConsistency {
  Vector y_hat;                         // mean image over the multi-start solutions
  double max_spread = 0.0;              // max pairwise distance between images
  std::vector<SolutionPoint> solutions; // one per start, in start order
};

// k-start solve (origin plus k-1 scaled normal starts, seeded); exercises the
// single-valued image property.
ImageConsistency image_consistency(const ProblemInstance& problem, const SolveOptions& opts, int k);

}  // namespace lassocert
