#pragma once

#include "lassocert/types.hpp"

namespace lassocert::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterLimit };

const char* status_name(Status s);

struct Result {
  Status status = Status::IterLimit;
  Vector x;          // primal point (standard-form variables)
  double objective = 0.0;
  Vector duals;      // equality-row multipliers y with A^T y <= c at optimality
};

// min c^T x  s.t.  A x = b, x >= 0.
// Dense two-phase tableau simplex with Bland's rule (anti-cycling).
Result solve_standard(const Matrix& A, const Vector& b, const Vector& c,
                      double tol = 1e-9, int max_iters = 50000);

// min c^T v  s.t.  A_eq v = b_eq, A_in v <= b_in, v free.
struct GeneralLp {
  Matrix A_eq;  // may have zero rows
  Vector b_eq;
  Matrix A_in;  // may have zero rows
  Vector b_in;
  Vector c;
};

struct GeneralResult {
  Status status = Status::IterLimit;
  Vector v;
  double objective = 0.0;
};

GeneralResult solve_general(const GeneralLp& lp, double tol = 1e-9, int max_iters = 50000);

// Phase-1 feasibility of the general system (objective ignored).
bool feasible(const GeneralLp& lp, double tol = 1e-9);

// Optimal face of min ||x||_1 s.t. A x = b, described through one dual certificate:
// value, a primal minimizer, and c = A^T y with ||c||_inf <= 1.
struct L1MinFace {
  bool feasible = false;
  double value = 0.0;
  Vector x;
  Vector certificate;  // c = A^T y, length n
};

L1MinFace l1_min_face(const Matrix& A, const Vector& b, double tol = 1e-9);

}  // namespace lassocert::lp
