// Acceptance suite: runs every criterion at its stated tolerance and prints one
// pass/fail line each. Exit code = number of failed criteria.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <vector>

#include "lassocert/certificates.hpp"
#include "lassocert/example_gen.hpp"
#include "lassocert/geometry.hpp"
#include "lassocert/linalg.hpp"
#include "lassocert/probe.hpp"
#include "lassocert/solver.hpp"
#include "test_util.hpp"

using namespace lassocert;
using geometry::SolutionFace;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double face_vs_closed_form(const ProblemInstance& p, SolutionFace closed) {
  SolveOptions opts;
  opts.seed = 1;
  const ImageConsistency ic = image_consistency(p, opts, 8);
  SolutionFace face = geometry::face_from_image(p, ic.y_hat);
  return geometry::hausdorff(face, closed);
}

// --- criterion 1: worked LASSO reproduction ---------------------------------------
void criterion1() {
  double worst = 0.0;
  bool ok = true;
  for (const double lambda : {0.3, 0.5, 0.9}) {
    const GeneratedExample ex = generate_example(0.5, ExampleVariant::Lasso, lambda);
    const double d = face_vs_closed_form(ex.problem, ex.closed_form);
    worst = std::max(worst, d);
    ok = ok && d <= 1e-6;
  }
  const GeneratedExample ex2 = generate_example(0.5, ExampleVariant::Lasso, 2.0);
  SolveOptions opts;
  const SolutionPoint sol = solve(ex2.problem, opts);
  SolutionFace face = geometry::face_from_image(ex2.problem, ex2.problem.A() * sol.x);
  const auto& verts = geometry::vertices(face);
  const bool zero_face = verts.size() == 1 && verts[0].norm() <= 1e-9;
  ok = ok && zero_face;
  report(1, "worked LASSO solution sets", ok,
         "max Hausdorff " + fmt(worst) + " vs 1e-6; lambda=2 face " +
             (zero_face ? "= {0}" : "!= {0}"));
}

// --- criterion 2: worked SR reproduction ------------------------------------------
void criterion2() {
  bool ok = true;
  std::string detail;

  {  // lambda = 1.5: S = {0}
    const GeneratedExample ex = generate_example(0.5, ExampleVariant::Sr, 1.5);
    const double d = face_vs_closed_form(ex.problem, ex.closed_form);
    ok = ok && d <= 1e-6;
    detail += "lam=1.5 dH " + fmt(d);
  }
  {  // lambda = 1.0: the closed-form polytope has the three derived vertices
    const GeneratedExample ex = generate_example(0.5, ExampleVariant::Sr, 1.0);
    SolutionFace face = ex.closed_form;
    face.verts.clear();
    const auto& verts = geometry::vertices(face);
    std::vector<Vector> expect(3, Vector(3));
    expect[0] << 0, 0, 0;
    expect[1] << 0, 0, 1.5;
    expect[2] << 1.125, -0.375, 0;
    double worst = verts.size() == 3 ? 0.0 : std::numeric_limits<double>::infinity();
    for (const Vector& v : verts) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vector& w : expect) best = std::min(best, (v - w).norm());
      worst = std::max(worst, best);
    }
    for (const Vector& v : verts)
      worst = std::max(worst, kkt_residual(ex.problem, v));  // vertices are true solutions
    ok = ok && worst <= 1e-6;
    detail += "; lam=1 vertex dev " + fmt(worst);
  }
  {  // lambda = 0.5: interpolating solutions on the closed-form segment
    const GeneratedExample ex = generate_example(0.5, ExampleVariant::Sr, 0.5);
    SolveOptions opts;
    opts.seed = 2;
    const ImageConsistency ic = image_consistency(ex.problem, opts, 8);
    Vector a(3), c(3);
    a << 0, 0, 1.5;
    c << 1.125, -0.375, 0;
    double worst_feas = 0.0, worst_seg = 0.0;
    for (const SolutionPoint& s : ic.solutions) {
      worst_feas = std::max(worst_feas, (ex.problem.A() * s.x - ex.problem.b()).norm());
      worst_seg = std::max(worst_seg, testutil::dist_to_segment(s.x, a, c));
    }
    ok = ok && worst_feas <= 1e-8 && worst_seg <= 1e-6;
    detail += "; lam=0.5 |Ax-b| " + fmt(worst_feas) + ", seg dev " + fmt(worst_seg);
  }
  report(2, "worked SR-LASSO solution sets", ok, detail);
}

// --- criterion 3: decomposition identity ------------------------------------------
void criterion3() {
  Rng rng(33001);
  double worst_dh = 0.0, worst_kkt = 0.0;
  int done = 0;
  while (done < 50) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 2);
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    const ProblemInstance p = testutil::random_instance(rng, m, n, LossKind::L2Squared);
    SolutionPoint sol;
    try {
      sol = solve(p);
    } catch (const MaxItersExceeded&) {
      continue;
    }
    SolutionFace certified = geometry::face_from_image(p, p.A() * sol.x);
    auto faces = geometry::decompose(p);
    if (faces.empty()) continue;
    double dh = 0.0;
    for (auto& [pat, face] : faces) {
      dh = std::max(dh, geometry::excess(face, certified));
      for (const Vector& v : face.verts)
        worst_kkt = std::max(worst_kkt, kkt_residual(p, v));
    }
    for (const Vector& v : geometry::vertices(certified)) {
      double best = std::numeric_limits<double>::infinity();
      for (auto& [pat, face] : faces) best = std::min(best, geometry::distance_to_face(v, face));
      dh = std::max(dh, best);
    }
    worst_dh = std::max(worst_dh, dh);
    ++done;
  }
  const bool ok = worst_dh <= 1e-7 && worst_kkt <= 1e-7;
  report(3, "pattern decomposition equals the certified face (50 instances)", ok,
         "max Hausdorff " + fmt(worst_dh) + " vs 1e-7; max vertex kkt " + fmt(worst_kkt));
}

// --- criterion 4: grid-oracle equivalence -----------------------------------------
void criterion4() {
  Rng rng(44001);
  const double radius = 2.0, step = 0.01;
  double worst_gap = 0.0, worst_dist = 0.0;
  int done = 0;
  bool ok = true;
  while (done < 20) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 2);
    const int n = 2 + static_cast<int>(rng.next_u64() % 2);
    const ProblemInstance p = testutil::random_instance(rng, m, n, LossKind::L2Squared);
    SolutionPoint sol;
    try {
      sol = solve(p);
    } catch (const MaxItersExceeded&) {
      continue;
    }
    if (sol.x.lpNorm<Eigen::Infinity>() > 1.5) continue;  // keep the solution inside the box
    const auto cloud = geometry::brute_force_solutions(p, radius, step);
    if (cloud.empty()) continue;
    double grid_min = std::numeric_limits<double>::infinity();
    for (const Vector& pt : cloud) grid_min = std::min(grid_min, p.objective(pt));
    // within-cell objective variation around a minimizer
    const double half_diag = 0.5 * step * std::sqrt(n);
    const double lip_loc =
        2.0 * p.lambda() * std::sqrt(n) + linalg::gram_spectral_norm(p.A()) * half_diag;
    const double slack = 1e-8 + lip_loc * half_diag;
    const double gap = std::abs(sol.objective - grid_min);
    ok = ok && gap <= slack && sol.objective <= grid_min + 1e-8;

    SolutionFace face = geometry::face_from_image(p, p.A() * sol.x);
    double dist = 0.0;
    for (const Vector& pt : cloud) dist = std::max(dist, geometry::distance_to_face(pt, face));
    ok = ok && dist <= 2.0 * step;
    worst_gap = std::max(worst_gap, gap / slack);
    worst_dist = std::max(worst_dist, dist);
    ++done;
  }
  report(4, "grid oracle matches the solver and the face (20 instances)", ok,
         "max gap/slack " + fmt(worst_gap) + "; max cloud-face dist " + fmt(worst_dist) + " vs " +
             fmt(2.0 * step));
}

// --- criterion 5: certificate verdicts --------------------------------------------
void criterion5() {
  bool ok = true;
  std::string detail;
  {
    const ProblemInstance p = testutil::example_lasso(0.5);
    const StabilityCertificate c = certify(p, solve(p).x);
    const bool here = c.weak_holds && !c.strong_holds && !*c.tibshirani_holds;
    ok = ok && here;
    detail += std::string("lasso 0.5 ") + (here ? "ok" : "BAD");
  }
  {
    const ProblemInstance p = testutil::example_lasso(2.0);
    const StabilityCertificate c = certify(p, solve(p).x);
    const bool here = c.weak_holds && c.strong_holds && *c.tibshirani_holds;
    ok = ok && here;
    detail += std::string("; lasso 2.0 ") + (here ? "ok" : "BAD");
  }
  {
    const ProblemInstance p = testutil::example_sr(1.0);
    const StabilityCertificate c = certify(p, solve(p).x);
    const bool here = c.sr_c13_holds.has_value() && !*c.sr_c13_holds;
    ok = ok && here;
    detail += std::string("; sr 1.0 c13 ") + (here ? "ok" : "BAD");
  }
  {
    const ProblemInstance p = testutil::example_sr(1.5);
    const StabilityCertificate c = certify(p, solve(p).x);
    const bool here = *c.sr_c13_holds && *c.sr_c14_holds;
    ok = ok && here;
    detail += std::string("; sr 1.5 c13&c14 ") + (here ? "ok" : "BAD");
  }
  // weak <-> c13 equivalence on 100 random norm-loss instances with Ax != b
  Rng rng(55001);
  int done = 0, disagreements = 0;
  while (done < 100) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 2);
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    const ProblemInstance p = testutil::random_instance(rng, m, n, LossKind::L2Norm, 0.3, 1.2);
    SolutionPoint sol;
    try {
      sol = solve(p);
    } catch (const MaxItersExceeded&) {
      continue;
    }
    if ((p.A() * sol.x - p.b()).norm() <= 1e-6 * (1.0 + p.b().norm())) continue;
    const StabilityCertificate c = certify(p, sol.x);
    if (!c.sr_c13_holds.has_value() || c.weak_holds != *c.sr_c13_holds) ++disagreements;
    ++done;
  }
  ok = ok && disagreements == 0;
  detail += "; weak<->c13 disagreements " + std::to_string(disagreements) + "/100";
  report(5, "stability certificates on pinned and random instances", ok, detail);
}

// --- criterion 6: blow-up dichotomy ------------------------------------------------
void criterion6() {
  const std::vector<double> radii{0.1, 0.01, 0.001};
  bool ok = true;
  std::string detail;

  const ProbeReport sr1 = detect_blowup(testutil::example_sr(1.0), radii, 20, 66001);
  ok = ok && sr1.blowup_flag;
  for (std::size_t i = 0; i + 1 < sr1.ratio_by_radius.size(); ++i)
    ok = ok && sr1.ratio_by_radius[i + 1].second >= 5.0 * sr1.ratio_by_radius[i].second;
  detail += "sr 1.0 ratios";
  for (const auto& [r, v] : sr1.ratio_by_radius) detail += " " + fmt(v);

  auto flat = [&](const ProblemInstance& p, const char* name) {
    const ProbeReport rep = detect_blowup(p, radii, 20, 66002);
    bool here = !rep.blowup_flag;
    for (std::size_t i = 0; i + 1 < rep.ratio_by_radius.size(); ++i) {
      const double a = rep.ratio_by_radius[i].second;
      const double b = rep.ratio_by_radius[i + 1].second;
      if (a <= 1e-12 && b <= 1e-12) continue;  // identically zero curve
      const double variation = std::max(a, b) / std::max(std::min(a, b), 1e-12);
      here = here && variation < 2.0;
    }
    detail += std::string("; ") + name + " ratios";
    for (const auto& [r, v] : rep.ratio_by_radius) detail += " " + fmt(v);
    return here;
  };
  ok = ok && flat(testutil::example_lasso(0.5), "lasso 0.5");
  ok = ok && flat(testutil::example_sr(1.5), "sr 1.5");
  report(6, "Lipschitz vs blow-up dichotomy", ok, detail);
}

// --- criterion 7: image-Lipschitz bound sanity -------------------------------------
void criterion7() {
  bool ok = true;
  std::string detail;
  for (const double lambda : {0.5, 2.0}) {
    const ProblemInstance p = testutil::example_lasso(lambda);
    const SolutionPoint sol = solve(p);
    const IndexPartition part = active_partition(p, sol.x);
    const ModulusBounds mb = modulus_bounds(p, sol.x, part);
    const ProbeReport rep = probe_local(p, 1e-3, 20, 77001);
    const bool here = rep.max_image_ratio <= mb.lip_H_bound * 1.1;
    ok = ok && here;
    detail += "lambda " + fmt(lambda) + ": ratio " + fmt(rep.max_image_ratio) + " vs bound " +
              fmt(mb.lip_H_bound) + "; ";
  }
  report(7, "sampled image ratios within the certified bound", ok, detail);
}

// --- criterion 8: smoothness probe --------------------------------------------------
void criterion8() {
  Matrix A(2, 1);
  A << 1, 0;
  Vector b(2);
  b << 1, 0;
  const ProblemInstance p(A, b, 0.5, LossModel::l2_squared());
  const SmoothnessProbe sp = smoothness_probe(p, 1e-3);
  const double e1 = std::abs(sp.jacobian_fd(0, 0) - 1.0);
  const double e2 = std::abs(sp.jacobian_fd(0, 1));
  const double e3 = std::abs(sp.jacobian_fd(0, 2) + 1.0);
  const bool ok = e1 <= 1e-4 && e2 <= 1e-4 && e3 <= 1e-4 && sp.consistency <= 0.05;
  report(8, "finite-difference Jacobian of the scalar soft threshold", ok,
         "errors " + fmt(e1) + "/" + fmt(e2) + "/" + fmt(e3) + ", consistency " +
             fmt(sp.consistency));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
