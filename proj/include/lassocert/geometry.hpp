#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "lassocert/problem.hpp"

namespace lassocert::geometry {

struct SignPattern {
  IndexSet J1;
  IndexSet J2;
  bool operator<(const SignPattern& o) const {
    return J1 != o.J1 ? J1 < o.J1 : J2 < o.J2;
  }
  bool operator==(const SignPattern& o) const { return J1 == o.J1 && J2 == o.J2; }
};

// Polyhedron in H-representation: general equality rows, coordinate sign constraints,
// zero pins, and optional general inequality rows; vertices cached after enumeration.
struct SolutionFace {
  int n = 0;
  Matrix eq_A{0, 0};
  Vector eq_rhs{0};
  IndexSet nonneg;
  IndexSet nonpos;
  IndexSet zero;
  Matrix ineq_A{0, 0};
  Vector ineq_rhs{0};
  std::vector<Vector> verts;
  bool is_empty = true;

  // Assembled equality system (general rows plus zero pins).
  std::pair<Matrix, Vector> equalities() const;
  // Assembled inequality system G x <= h (sign rows plus general rows).
  std::pair<Matrix, Vector> inequalities() const;

  bool contains(const Vector& x, double tol) const;
};

// All vertices of the (compact) face by active-subset enumeration, deduplicated at
// 1e-9 spacing; fills the cache. Complete for n <= 8.
const std::vector<Vector>& vertices(SolutionFace& face);

// Euclidean distance from a point to the face (projection QP).
double distance_to_face(const Vector& point, SolutionFace& face);

// The solution polytope from a certified image: pattern from the dual certificate
// c = A^T(b - y_hat)/lambda (squared loss) or c = A^T(b - y_hat)/(lambda ||y_hat - b||)
// (norm loss away from b). The norm loss with y_hat = b takes the optimal face of the
// l1-minimization program over Ax = b instead.
SolutionFace face_from_image(const ProblemInstance& problem, const Vector& y_hat,
                             double active_tol = 1e-6);

// The pattern piece S_{J1 J2}: stationarity equalities on the pattern, sign
// constraints, zero pins, and the off-pattern dual bounds (squared loss only).
SolutionFace s_pattern(const ProblemInstance& problem, const SignPattern& pattern,
                       double lp_tol = 1e-9);

// All nonempty pattern pieces; their union is the solution set. n <= 8.
std::map<SignPattern, SolutionFace> decompose(const ProblemInstance& problem);

// Hausdorff distance between two faces (max of the vertex excesses; exact for
// convex sets).
double hausdorff(SolutionFace& P, SolutionFace& Q);

// One-sided excess e(P, Q) = max over vertices of P of dist(., Q).
double excess(SolutionFace& P, SolutionFace& Q);

// Grid oracle: all points of the grid over [-box_radius, box_radius]^n within 1e-6
// of the grid minimum of the objective. Test-support only; n <= 3.
std::vector<Vector> brute_force_solutions(const ProblemInstance& problem, double box_radius,
                                          double grid_step);

nlohmann::json face_to_json(const SolutionFace& face);
SolutionFace face_from_json(const nlohmann::json& doc);
SolutionFace load_face(const std::string& path);
void save_face(const SolutionFace& face, const std::string& path);

}  // namespace lassocert::geometry
