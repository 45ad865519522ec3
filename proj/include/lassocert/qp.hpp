#pragma once

#include "lassocert/types.hpp"

namespace lassocert::qp {

struct Polyhedron {
  Matrix A_eq;  // A_eq x = b_eq
  Vector b_eq;
  Matrix A_in;  // A_in x <= b_in
  Vector b_in;
};

struct Projection {
  Vector point;
  double distance = 0.0;
  int pivots = 0;
};

// Euclidean projection of p onto the polyhedron, primal active-set method with
// null-space steps. `start` must be feasible (up to ~1e-9). Pivot cap throws QpFailure.
Projection project(const Polyhedron& poly, const Vector& p, const Vector& start,
                   double tol = 1e-10, int max_pivots = 10000);

}  // namespace lassocert::qp
