#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lassocert/optimality.hpp"
#include "lassocert/problem.hpp"

namespace lassocert {

struct CertifyTolerances {
  double rank_tol = 1e-8;    // singular values above rank_tol * sigma_max count
  double range_tol = 1e-8;   // b in rge(A_J) iff lstsq residual <= range_tol * ||b||
  double active_tol = 1e-6;  // relative-in-lambda activity threshold
  double supp_tol = 1e-7;    // support rounding for the uniqueness test
  double lp_tol = 1e-9;      // simplex feasibility / strict-inequality margin
};

struct CheckResult {
  bool holds = false;
  nlohmann::json witness;
};

struct SrCheckResult {
  bool c13 = false;
  bool c14 = false;
  nlohmann::json witness;
};

struct ModulusBounds {
  double mu = 0.0;
  double lip_H_bound = 0.0;
  bool locally_constant_image = false;  // J empty: the image map is locally constant
  nlohmann::json witness;
};

// Weak condition: ker of the loss Hessian at the optimal residual meets rge(A_J)
// only at zero; decided as rank(B A_J) == rank(A_J) with B the PSD square root.
CheckResult check_weak(const ProblemInstance& problem, const Vector& x,
                       const IndexPartition& partition, const CertifyTolerances& tols = {});

// Strong condition: weak plus full column rank of A_J.
CheckResult check_strong(const ProblemInstance& problem, const Vector& x,
                         const IndexPartition& partition, const CertifyTolerances& tols = {});

// Norm-loss stability conditions: c13 = (Ax != b and b not in rge(A_J));
// c14 = c13 and ker(A_J) = {0}. The partition is computed internally when absent.
SrCheckResult check_sr(const ProblemInstance& problem, const Vector& x,
                       const std::optional<IndexPartition>& partition = std::nullopt,
                       const CertifyTolerances& tols = {});

// Full column rank of the equicorrelation submatrix for the squared loss.
CheckResult check_tibshirani(const ProblemInstance& problem, const Vector& x,
                             const CertifyTolerances& tols = {});

// Norm-loss uniqueness condition: support submatrix injective, b outside its range,
// and a strict dual certificate found by a linear program.
CheckResult check_un2(const ProblemInstance& problem, const Vector& x,
                      const CertifyTolerances& tols = {});

// mu from the subspace coercivity estimate and the induced image-Lipschitz bound.
ModulusBounds modulus_bounds(const ProblemInstance& problem, const Vector& x,
                             const IndexPartition& partition, const CertifyTolerances& tols = {});

struct StabilityCertificate {
  bool weak_holds = false;
  bool strong_holds = false;
  std::optional<bool> sr_c13_holds;
  std::optional<bool> sr_c14_holds;
  std::optional<bool> tibshirani_holds;
  std::optional<bool> un2_holds;
  std::optional<double> mu;
  std::optional<double> lip_H_bound;
  bool locally_constant_image = false;
  std::optional<IndexPartition> partition;
  nlohmann::json witnesses;

  bool all_applicable_hold() const;
};

// Runs every check applicable to the problem's loss at the point x.
StabilityCertificate certify(const ProblemInstance& problem, const Vector& x,
                             const CertifyTolerances& tols = {});

nlohmann::json certificate_to_json(const StabilityCertificate& cert, const CertifyTolerances& tols);

}  // namespace lassocert
