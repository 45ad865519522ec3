#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "lassocert/types.hpp"

namespace lassocert {

enum class LossKind { L2Squared, L2Norm, Pluggable };

const char* loss_kind_name(LossKind k);

struct LossEval {
  double value = 0.0;
  std::optional<Vector> gradient;
  std::optional<Matrix> hessian;
};

// User-supplied loss callbacks. `smooth_radius` answers "within which radius of z is
// the loss twice continuously differentiable?" (0 = not smooth there).
struct PluggableLoss {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
  std::function<double(const Vector&)> smooth_radius;
};

class LossModel {
 public:
  static LossModel l2_squared();
  static LossModel l2_norm();
  static LossModel pluggable(PluggableLoss impl);

  LossKind kind() const { return kind_; }

  // Residual norms at or below this threshold are treated as the nonsmooth point of
  // the norm loss. ProblemInstance rescales it to 1e-10 * (1 + ||b||).
  double smooth_tol() const { return smooth_tol_; }
  void set_smooth_tol(double t) { smooth_tol_ = t; }

  // Radius of twice continuous differentiability around z (infinity for L2Squared,
  // ||z|| for L2Norm away from the origin, callback for pluggable losses).
  double smooth_radius(const Vector& z) const;

  const PluggableLoss& plug() const { return *plug_; }

 private:
  LossModel() = default;
  LossKind kind_ = LossKind::L2Squared;
  double smooth_tol_ = 1e-10;
  std::shared_ptr<PluggableLoss> plug_;
};

// Value / gradient / Hessian of the loss at z up to the requested order.
LossEval loss_eval(const LossModel& loss, const Vector& z, int order);

// Componentwise interval description of the l1 subdifferential at x (exact zeros,
// no tolerance).
struct SubdiffBox {
  Vector lower;
  Vector upper;
};

SubdiffBox l1_subdiff_box(const Vector& x);

class ProblemInstance {
 public:
  ProblemInstance(Matrix A, Vector b, double lambda, LossModel loss);

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  double lambda() const { return lambda_; }
  const LossModel& loss() const { return loss_; }

  int m() const { return static_cast<int>(A_.rows()); }
  int n() const { return static_cast<int>(A_.cols()); }

  double smooth_tol() const { return loss_.smooth_tol(); }

  Vector residual(const Vector& x) const { return A_ * x - b_; }
  double objective(const Vector& x) const;

  // Copy with perturbed data (same A and loss kind; smooth_tol rescaled to the new b).
  ProblemInstance with_params(Vector b, double lambda) const;

 private:
  Matrix A_;
  Vector b_;
  double lambda_;
  LossModel loss_;
};

// Problem document: {"A": [[...],...], "b": [...], "lambda": x, "loss": "l2_squared"|"l2"}.
// Strict parse; unknown fields are rejected.
ProblemInstance load_problem(const std::string& path);
void save_problem(const ProblemInstance& p, const std::string& path);
std::string problem_to_json_text(const ProblemInstance& p);
ProblemInstance problem_from_json_text(const std::string& text);

}  // namespace lassocert
