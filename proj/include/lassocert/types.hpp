#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace lassocert {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sorted, 0-based column/coordinate index sets.
using IndexSet = std::vector<int>;

enum class Errc {
  NonSmoothPoint,
  OrderUnsupported,
  MaxItersExceeded,
  NumericalBreakdown,
  InvalidK,
  NotStationary,
  WrongLoss,
  NonSmoothLoss,
  WeakConditionFails,
  CertificateViolation,
  TooLarge,
  EmptyFace,
  RadiusTooLarge,
  HypothesisFails,
  InvalidArgument,
  LpFailure,
  QpFailure,
  IoError,
  ParseError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet complement(const IndexSet& s, int n) {
  IndexSet out;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (k < s.size() && s[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

inline Matrix columns(const Matrix& A, const IndexSet& idx) {
  Matrix out(A.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
  return out;
}

}  // namespace lassocert
