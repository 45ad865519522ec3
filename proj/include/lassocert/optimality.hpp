#pragma once

#include <utility>

#include "lassocert/problem.hpp"

namespace lassocert {

// Active index sets of a stationary point: J1 collects gradients pinned at -lambda,
// J2 at +lambda; J = J1 u J2 is the equicorrelation set for the corresponding loss.
struct IndexPartition {
  IndexSet J1;
  IndexSet J2;
  double tol_used = 0.0;
  IndexSet J() const { return set_union(J1, J2); }
};

// Relative-in-lambda activity test: i in J1 iff A_i^T dh(Ax-b) <= -lambda(1 - tol),
// i in J2 iff >= lambda(1 - tol). Requires kkt_residual(problem, x) <= 10*tol.
IndexPartition active_partition(const ProblemInstance& problem, const Vector& x, double tol = 1e-6);

// Strict sign sets {i : x_i > 0} and {i : x_i < 0}; no tolerance.
std::pair<IndexSet, IndexSet> sign_partition(const Vector& x);

}  // namespace lassocert
