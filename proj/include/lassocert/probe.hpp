#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "lassocert/geometry.hpp"
#include "lassocert/problem.hpp"
#include "lassocert/solver.hpp"

namespace lassocert {

struct ProbeReport {
  Vector center_b;
  double center_lambda = 0.0;
  double radius = 0.0;
  int samples = 0;
  double max_ratio = 0.0;  // max over sampled pairs of d_H(S, S') / ||(b,l) - (b',l')||
  std::vector<std::pair<double, double>> ratio_by_radius;  // strictly decreasing radii
  bool blowup_flag = false;
  std::uint64_t seed = 0;
  double max_image_ratio = 0.0;  // ||yhat - yhat'|| / ||dparam|| over sampled pairs
  bool used_point_clouds = false;  // norm loss in the Ax = b regime was sampled
};

struct ProbeOptions {
  double tol_kkt = 1e-10;
  int multistart_k = 8;      // starts per solve in the point-cloud regime
  double growth_factor = 5.0;
};

// Samples perturbed parameters uniformly in the joint (b, lambda) ball and measures
// Hausdorff ratios between the sampled solution sets (center included in the pairs).
ProbeReport probe_local(const ProblemInstance& problem, double radius, int samples,
                        std::uint64_t seed, const ProbeOptions& opts = {});

// Runs probe_local at each radius; flags blow-up when the max ratio grows by at
// least growth_factor across every consecutive radius step.
ProbeReport detect_blowup(const ProblemInstance& problem, const std::vector<double>& radii,
                          int samples_per_radius, std::uint64_t seed,
                          const ProbeOptions& opts = {});

struct SmoothnessProbe {
  Matrix jacobian_fd;  // n x (m+1), parameter order (b_1..b_m, lambda)
  double consistency = 0.0;
};

// Central finite differences of the (single-valued) solution map at two step sizes;
// requires the strong condition and strict complementarity at the center.
SmoothnessProbe smoothness_probe(const ProblemInstance& problem, double step);

nlohmann::json probe_report_to_json(const ProbeReport& report);
void write_ratio_csv(const ProbeReport& report, std::ostream& out);

}  // namespace lassocert
