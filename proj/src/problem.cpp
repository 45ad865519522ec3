#include "lassocert/problem.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace lassocert {

using nlohmann::json;

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonSmoothPoint: return "NonSmoothPoint";
    case Errc::OrderUnsupported: return "OrderUnsupported";
    case Errc::MaxItersExceeded: return "MaxItersExceeded";
    case Errc::NumericalBreakdown: return "NumericalBreakdown";
    case Errc::InvalidK: return "InvalidK";
    case Errc::NotStationary: return "NotStationary";
    case Errc::WrongLoss: return "WrongLoss";
    case Errc::NonSmoothLoss: return "NonSmoothLoss";
    case Errc::WeakConditionFails: return "WeakConditionFails";
    case Errc::CertificateViolation: return "CertificateViolation";
    case Errc::TooLarge: return "TooLarge";
    case Errc::EmptyFace: return "EmptyFace";
    case Errc::RadiusTooLarge: return "RadiusTooLarge";
    case Errc::HypothesisFails: return "HypothesisFails";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::LpFailure: return "LpFailure";
    case Errc::QpFailure: return "QpFailure";
    case Errc::IoError: return "IoError";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

const char* loss_kind_name(LossKind k) {
  switch (k) {
    case LossKind::L2Squared: return "l2_squared";
    case LossKind::L2Norm: return "l2";
    case LossKind::Pluggable: return "pluggable";
  }
  return "unknown";
}

LossModel LossModel::l2_squared() {
  LossModel m;
  m.kind_ = LossKind::L2Squared;
  return m;
}

LossModel LossModel::l2_norm() {
  LossModel m;
  m.kind_ = LossKind::L2Norm;
  return m;
}

LossModel LossModel::pluggable(PluggableLoss impl) {
  if (!impl.value) fail(Errc::InvalidArgument, "pluggable loss needs a value callback");
  LossModel m;
  m.kind_ = LossKind::Pluggable;
  m.plug_ = std::make_shared<PluggableLoss>(std::move(impl));
  return m;
}

double LossModel::smooth_radius(const Vector& z) const {
  switch (kind_) {
    case LossKind::L2Squared:
      return std::numeric_limits<double>::infinity();
    case LossKind::L2Norm: {
      const double nz = z.norm();
      return nz > smooth_tol_ ? nz : 0.0;
    }
    case LossKind::Pluggable:
      return plug_->smooth_radius ? plug_->smooth_radius(z) : 0.0;
  }
  return 0.0;
}

LossEval loss_eval(const LossModel& loss, const Vector& z, int order) {
  if (order < 0 || order > 2) fail(Errc::InvalidArgument, "order must be 0, 1 or 2");
  LossEval out;
  switch (loss.kind()) {
    case LossKind::L2Squared: {
      out.value = 0.5 * z.squaredNorm();
      if (order >= 1) out.gradient = z;
      if (order >= 2) out.hessian = Matrix::Identity(z.size(), z.size());
      return out;
    }
    case LossKind::L2Norm: {
      const double nz = z.norm();
      out.value = nz;
      if (order >= 1) {
        if (nz <= loss.smooth_tol())
          fail(Errc::NonSmoothPoint, "norm loss is not differentiable at the origin");
        out.gradient = z / nz;
      }
      if (order >= 2) {
        const Vector u = z / nz;
        out.hessian = (Matrix::Identity(z.size(), z.size()) - u * u.transpose()) / nz;
      }
      return out;
    }
    case LossKind::Pluggable: {
      const PluggableLoss& p = loss.plug();
      out.value = p.value(z);
      if (order >= 1) {
        if (!p.gradient) fail(Errc::OrderUnsupported, "pluggable loss has no gradient callback");
        out.gradient = p.gradient(z);
      }
      if (order >= 2) {
        if (!p.hessian) fail(Errc::OrderUnsupported, "pluggable loss has no Hessian callback");
        out.hessian = p.hessian(z);
      }
      return out;
    }
  }
  fail(Errc::InvalidArgument, "unknown loss kind");
}

SubdiffBox l1_subdiff_box(const Vector& x) {
  SubdiffBox box;
  box.lower = Vector(x.size());
  box.upper = Vector(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > 0.0) {
      box.lower(i) = box.upper(i) = 1.0;
    } else if (x(i) < 0.0) {
      box.lower(i) = box.upper(i) = -1.0;
    } else {
      box.lower(i) = -1.0;
      box.upper(i) = 1.0;
    }
  }
  return box;
}

ProblemInstance::ProblemInstance(Matrix A, Vector b, double lambda, LossModel loss)
    : A_(std::move(A)), b_(std::move(b)), lambda_(lambda), loss_(loss) {
  if (A_.rows() < 1 || A_.cols() < 1) fail(Errc::InvalidArgument, "A must be at least 1x1");
  if (b_.size() != A_.rows()) fail(Errc::InvalidArgument, "b length must match rows of A");
  if (!A_.allFinite() || !b_.allFinite()) fail(Errc::InvalidArgument, "A and b must be finite");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) fail(Errc::InvalidArgument, "lambda must be positive");
  loss_.set_smooth_tol(1e-10 * (1.0 + b_.norm()));
}

double ProblemInstance::objective(const Vector& x) const {
  return loss_eval(loss_, residual(x), 0).value + lambda_ * x.lpNorm<1>();
}

ProblemInstance ProblemInstance::with_params(Vector b, double lambda) const {
  return ProblemInstance(A_, std::move(b), lambda, loss_);
}

namespace {

json problem_to_json(const ProblemInstance& p) {
  json rows = json::array();
  for (int i = 0; i < p.m(); ++i) {
    json row = json::array();
    for (int j = 0; j < p.n(); ++j) row.push_back(p.A()(i, j));
    rows.push_back(std::move(row));
  }
  json doc;
  doc["A"] = std::move(rows);
  doc["b"] = std::vector<double>(p.b().data(), p.b().data() + p.m());
  doc["lambda"] = p.lambda();
  doc["loss"] = loss_kind_name(p.loss().kind());
  return doc;
}

ProblemInstance problem_from_json(const json& doc) {
  if (!doc.is_object()) fail(Errc::ParseError, "problem document must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "A" && key != "b" && key != "lambda" && key != "loss")
      fail(Errc::ParseError, "unknown field '" + key + "' in problem document");
  }
  if (!doc.contains("A") || !doc.contains("b") || !doc.contains("lambda") || !doc.contains("loss"))
    fail(Errc::ParseError, "problem document needs fields A, b, lambda, loss");

  const json& ja = doc["A"];
  if (!ja.is_array() || ja.empty()) fail(Errc::ParseError, "A must be a non-empty array of rows");
  const std::size_t m = ja.size();
  if (!ja[0].is_array() || ja[0].empty()) fail(Errc::ParseError, "A rows must be non-empty arrays");
  const std::size_t n = ja[0].size();
  Matrix A(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (!ja[i].is_array() || ja[i].size() != n) fail(Errc::ParseError, "A rows must have equal length");
    for (std::size_t j = 0; j < n; ++j) {
      if (!ja[i][j].is_number()) fail(Errc::ParseError, "A entries must be numbers");
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ja[i][j].get<double>();
    }
  }

  const json& jb = doc["b"];
  if (!jb.is_array() || jb.size() != m) fail(Errc::ParseError, "b must be an array of length rows(A)");
  Vector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!jb[i].is_number()) fail(Errc::ParseError, "b entries must be numbers");
    b(static_cast<Eigen::Index>(i)) = jb[i].get<double>();
  }

  if (!doc["lambda"].is_number()) fail(Errc::ParseError, "lambda must be a number");
  const double lambda = doc["lambda"].get<double>();

  if (!doc["loss"].is_string()) fail(Errc::ParseError, "loss must be a string");
  const std::string loss = doc["loss"].get<std::string>();
  LossModel model = LossModel::l2_squared();
  if (loss == "l2_squared") {
    model = LossModel::l2_squared();
  } else if (loss == "l2") {
    model = LossModel::l2_norm();
  } else {
    fail(Errc::ParseError, "loss must be \"l2_squared\" or \"l2\"");
  }
  try {
    return ProblemInstance(std::move(A), std::move(b), lambda, model);
  } catch (const Error& e) {
    fail(Errc::ParseError, std::string("invalid problem: ") + e.what());
  }
}

}  // namespace

std::string problem_to_json_text(const ProblemInstance& p) { return problem_to_json(p).dump(2) + "\n"; }

ProblemInstance problem_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(doc);
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open problem file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return problem_from_json_text(text);
}

void save_problem(const ProblemInstance& p, const std::string& path) {
  if (p.loss().kind() == LossKind::Pluggable)
    fail(Errc::InvalidArgument, "pluggable losses have no file representation");
  std::ofstream out(path);
  if (!out) fail(Errc::IoError, "cannot write problem file: " + path);
  out << problem_to_json_text(p);
  if (!out) fail(Errc::IoError, "failed writing problem file: " + path);
}

}  // namespace lassocert
