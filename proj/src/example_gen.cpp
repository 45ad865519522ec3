#include "lassocert/example_gen.hpp"

namespace lassocert {

using geometry::SolutionFace;

namespace {

SolutionFace zero_face(int n) {
  SolutionFace f;
  f.n = n;
  for (int i = 0; i < n; ++i) f.zero.push_back(i);
  f.verts = {Vector::Zero(n)};
  f.is_empty = false;
  return f;
}

}  // namespace

GeneratedExample generate_example(double gamma, ExampleVariant variant, double lambda) {
  if (!(gamma > -1.0)) fail(Errc::InvalidArgument, "gamma must exceed -1");
  if (!(lambda > 0.0)) fail(Errc::InvalidArgument, "lambda must be positive");

  Matrix A(2, 3);
  A << 1, 3, 0, 1, -1, 1;
  Vector b(2);
  b << 0.0, 1.0 + gamma;
  const double g1 = 1.0 + gamma;

  SolutionFace face;
  face.n = 3;
  if (variant == ExampleVariant::Lasso) {
    GeneratedExample out{ProblemInstance(A, b, lambda, LossModel::l2_squared()), SolutionFace{}};
    if (lambda >= g1) {
      out.closed_form = zero_face(3);
      return out;
    }
    // Segment (-3s, s, 1+gamma-lambda+4s), (lambda-1-gamma)/4 <= s <= 0.
    const double smin = (lambda - g1) / 4.0;
    Vector v0(3), v1(3);
    v0 << 0.0, 0.0, g1 - lambda;
    v1 << -3.0 * smin, smin, 0.0;
    Vector yhat(2);
    yhat << 0.0, g1 - lambda;
    face.eq_A = A;
    face.eq_rhs = yhat;
    face.nonneg = {0, 2};
    face.nonpos = {1};
    face.verts = {v0, v1};
    face.is_empty = false;
    out.closed_form = face;
    return out;
  }

  GeneratedExample out{ProblemInstance(A, b, lambda, LossModel::l2_norm()), SolutionFace{}};
  if (lambda > 1.0) {
    out.closed_form = zero_face(3);
    return out;
  }
  if (lambda < 1.0) {
    // Segment (-3s, s, 1+gamma+4s), -(1+gamma)/4 <= s <= 0; every point maps to b.
    const double smin = -g1 / 4.0;
    Vector v0(3), v1(3);
    v0 << 0.0, 0.0, g1;
    v1 << -3.0 * smin, smin, 0.0;
    face.eq_A = A;
    face.eq_rhs = b;
    face.nonneg = {0, 2};
    face.nonpos = {1};
    face.verts = {v0, v1};
    face.is_empty = false;
    out.closed_form = face;
    return out;
  }
  // lambda == 1: the two-parameter family (-3s, s, t), -(1+gamma)/4 <= s <= 0,
  // 0 <= t <= 1+gamma+4s.
  face.eq_A = Matrix::Zero(1, 3);
  face.eq_A(0, 0) = 1.0;
  face.eq_A(0, 1) = 3.0;
  face.eq_rhs = Vector::Zero(1);
  face.nonpos = {1};
  face.nonneg = {2};
  face.ineq_A = Matrix::Zero(2, 3);
  face.ineq_rhs = Vector::Zero(2);
  face.ineq_A(0, 1) = -1.0;  // -x2 <= (1+gamma)/4
  face.ineq_rhs(0) = g1 / 4.0;
  face.ineq_A(1, 1) = -4.0;  // x3 - 4 x2 <= 1+gamma
  face.ineq_A(1, 2) = 1.0;
  face.ineq_rhs(1) = g1;
  Vector v0(3), v1(3), v2(3);
  v0 << 0.0, 0.0, 0.0;
  v1 << 0.0, 0.0, g1;
  v2 << 3.0 * g1 / 4.0, -g1 / 4.0, 0.0;
  face.verts = {v0, v1, v2};
  face.is_empty = false;
  out.closed_form = face;
  return out;
}

}  // namespace lassocert
