#include "lassocert/probe.hpp"

#include <cmath>
#include <limits>

#include "lassocert/certificates.hpp"
#include "lassocert/rng.hpp"

namespace lassocert {

using geometry::SolutionFace;

namespace {

// Sampled solution-set representation: a polytope face when the dual certificate is
// available, a multi-start point cloud in the norm-loss Ax = b regime.
struct SampledSet {
  bool is_cloud = false;
  SolutionFace face;
  std::vector<Vector> cloud;
  Vector image;
};

SampledSet represent(const ProblemInstance& p, const ProbeOptions& opts, std::uint64_t seed) {
  SampledSet rep;
  SolveOptions sopts;
  sopts.tol_kkt = opts.tol_kkt;
  sopts.seed = seed;
  if (p.loss().kind() == LossKind::L2Squared) {
    const SolutionPoint sol = solve(p, sopts);
    rep.image = p.A() * sol.x;
    rep.face = geometry::face_from_image(p, rep.image);
    return rep;
  }
  const ImageConsistency ic = image_consistency(p, sopts, opts.multistart_k);
  rep.image = ic.y_hat;
  if ((ic.y_hat - p.b()).norm() > p.smooth_tol()) {
    rep.face = geometry::face_from_image(p, ic.y_hat);
    return rep;
  }
  rep.is_cloud = true;
  for (const SolutionPoint& s : ic.solutions) rep.cloud.push_back(s.x);
  return rep;
}

double cloud_to_cloud(const std::vector<Vector>& P, const std::vector<Vector>& Q) {
  double e = 0.0;
  for (const Vector& v : P) {
    double d = std::numeric_limits<double>::infinity();
    for (const Vector& w : Q) d = std::min(d, (v - w).norm());
    e = std::max(e, d);
  }
  return e;
}

double cloud_to_face(const std::vector<Vector>& P, SolutionFace& Q) {
  double e = 0.0;
  for (const Vector& v : P) e = std::max(e, geometry::distance_to_face(v, Q));
  return e;
}

double set_hausdorff(SampledSet& a, SampledSet& b) {
  if (!a.is_cloud && !b.is_cloud) return geometry::hausdorff(a.face, b.face);
  if (a.is_cloud && b.is_cloud)
    return std::max(cloud_to_cloud(a.cloud, b.cloud), cloud_to_cloud(b.cloud, a.cloud));
  SampledSet& cl = a.is_cloud ? a : b;
  SampledSet& fc = a.is_cloud ? b : a;
  const double e1 = cloud_to_face(cl.cloud, fc.face);
  const double e2 = cloud_to_cloud(geometry::vertices(fc.face), cl.cloud);
  return std::max(e1, e2);
}

}  // namespace

ProbeReport probe_local(const ProblemInstance& p, double radius, int samples,
                        std::uint64_t seed, const ProbeOptions& opts) {
  if (samples < 2) fail(Errc::InvalidArgument, "probe needs at least 2 samples");
  if (!(radius > 0.0)) fail(Errc::InvalidArgument, "probe radius must be positive");
  if (p.lambda() - radius <= 0.0)
    fail(Errc::RadiusTooLarge, "radius must keep lambda positive over the whole ball");

  ProbeReport rep;
  rep.center_b = p.b();
  rep.center_lambda = p.lambda();
  rep.radius = radius;
  rep.samples = samples;
  rep.seed = seed;

  Rng rng(derive_seed(seed, "probe_local"));
  const int m = p.m();

  std::vector<Vector> params;  // (b, lambda) stacked, center first
  params.reserve(samples + 1);
  Vector center(m + 1);
  center.head(m) = p.b();
  center(m) = p.lambda();
  params.push_back(center);
  for (int s = 0; s < samples; ++s) params.push_back(center + radius * rng.uniform_ball(m + 1));

  std::vector<SampledSet> sets;
  sets.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Vector& q = params[i];
    const ProblemInstance pi = p.with_params(q.head(m), q(m));
    sets.push_back(represent(pi, opts, derive_seed(seed, "sample:" + std::to_string(i))));
    if (sets.back().is_cloud) rep.used_point_clouds = true;
  }

  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const double dist = (params[i] - params[j]).norm();
      if (dist <= 1e-15) continue;
      const double dh = set_hausdorff(sets[i], sets[j]);
      rep.max_ratio = std::max(rep.max_ratio, dh / dist);
      rep.max_image_ratio =
          std::max(rep.max_image_ratio, (sets[i].image - sets[j].image).norm() / dist);
    }
  }
  rep.ratio_by_radius = {{radius, rep.max_ratio}};
  return rep;
}

ProbeReport detect_blowup(const ProblemInstance& p, const std::vector<double>& radii,
                          int samples_per_radius, std::uint64_t seed, const ProbeOptions& opts) {
  if (radii.size() < 2) fail(Errc::InvalidArgument, "blow-up detection needs at least 2 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      fail(Errc::InvalidArgument, "radii must be strictly decreasing");

  ProbeReport rep;
  rep.center_b = p.b();
  rep.center_lambda = p.lambda();
  rep.radius = radii.front();
  rep.samples = samples_per_radius;
  rep.seed = seed;

  std::vector<double> ratios;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const ProbeReport local = probe_local(p, radii[i], samples_per_radius,
                                          derive_seed(seed, "radius:" + std::to_string(i)), opts);
    rep.ratio_by_radius.emplace_back(radii[i], local.max_ratio);
    ratios.push_back(local.max_ratio);
    rep.max_ratio = std::max(rep.max_ratio, local.max_ratio);
    rep.max_image_ratio = std::max(rep.max_image_ratio, local.max_image_ratio);
    rep.used_point_clouds = rep.used_point_clouds || local.used_point_clouds;
  }
  bool growing = true;
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i) {
    if (ratios[i] <= 0.0 || ratios[i + 1] < opts.growth_factor * ratios[i]) {
      growing = false;
      break;
    }
  }
  rep.blowup_flag = growing;
  return rep;
}

SmoothnessProbe smoothness_probe(const ProblemInstance& p, double step) {
  if (!(step > 0.0)) fail(Errc::InvalidArgument, "step must be positive");
  if (p.lambda() - step <= 0.0) fail(Errc::RadiusTooLarge, "step must keep lambda positive");

  SolveOptions sopts;
  sopts.tol_kkt = 1e-10;
  const SolutionPoint center = solve(p, sopts);
  const CertifyTolerances tols;
  const IndexPartition part = active_partition(p, center.x, tols.active_tol);
  const CheckResult strong = check_strong(p, center.x, part, tols);
  if (!strong.holds)
    fail(Errc::HypothesisFails, "strong condition fails at the center");

  // Strict complementarity: J must equal the (rounded) support.
  const double thr = tols.supp_tol * (1.0 + center.x.lpNorm<Eigen::Infinity>());
  IndexSet supp;
  for (int i = 0; i < p.n(); ++i)
    if (std::abs(center.x(i)) > thr) supp.push_back(i);
  if (supp != part.J())
    fail(Errc::HypothesisFails, "strict complementarity fails: J != supp(x)");

  const int m = p.m();
  auto solve_at = [&](const Vector& db, double dl) {
    const ProblemInstance pp = p.with_params(p.b() + db, p.lambda() + dl);
    return solve(pp, sopts).x;
  };
  auto jacobian_at = [&](double h) {
    Matrix J(p.n(), m + 1);
    for (int d = 0; d < m; ++d) {
      const Vector e = Vector::Unit(m, d);
      J.col(d) = (solve_at(h * e, 0.0) - solve_at(-h * e, 0.0)) / (2.0 * h);
    }
    J.col(m) = (solve_at(Vector::Zero(m), h) - solve_at(Vector::Zero(m), -h)) / (2.0 * h);
    return J;
  };

  const Matrix J1 = jacobian_at(step);
  const Matrix J2 = jacobian_at(step / 2.0);
  double cons = 0.0;
  for (Eigen::Index i = 0; i < J1.rows(); ++i)
    for (Eigen::Index j = 0; j < J1.cols(); ++j) {
      const double denom = std::max({1.0, std::abs(J1(i, j)), std::abs(J2(i, j))});
      cons = std::max(cons, std::abs(J1(i, j) - J2(i, j)) / denom);
    }
  SmoothnessProbe out;
  out.jacobian_fd = J2;
  out.consistency = cons;
  return out;
}

nlohmann::json probe_report_to_json(const ProbeReport& rep) {
  nlohmann::json doc;
  doc["center_b"] = std::vector<double>(rep.center_b.data(), rep.center_b.data() + rep.center_b.size());
  doc["center_lambda"] = rep.center_lambda;
  doc["radius"] = rep.radius;
  doc["samples"] = rep.samples;
  doc["max_ratio"] = rep.max_ratio;
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& [r, ratio] : rep.ratio_by_radius)
    curve.push_back({{"radius", r}, {"max_ratio", ratio}});
  doc["ratio_by_radius"] = std::move(curve);
  doc["blowup_flag"] = rep.blowup_flag;
  doc["seed"] = rep.seed;
  doc["max_image_ratio"] = rep.max_image_ratio;
  doc["used_point_clouds"] = rep.used_point_clouds;
  return doc;
}

void write_ratio_csv(const ProbeReport& rep, std::ostream& out) {
  out << "radius,max_ratio\n";
  out.precision(17);
  for (const auto& [r, ratio] : rep.ratio_by_radius) out << r << "," << ratio << "\n";
}

}  // namespace lassocert
