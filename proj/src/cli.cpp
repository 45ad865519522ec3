#include "lassocert/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lassocert/certificates.hpp"
#include "lassocert/example_gen.hpp"
#include "lassocert/geometry.hpp"
#include "lassocert/probe.hpp"
#include "lassocert/solver.hpp"

namespace lassocert {

using nlohmann::json;

namespace {

json report_header(const RunConfig& cfg, const char* subcommand) {
  json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["subcommand"] = subcommand;
  doc["seed"] = cfg.seed;
  return doc;
}

json tolerances_json(const RunConfig& cfg, const CertifyTolerances& tols, double tol_kkt) {
  json t;
  t["tol_kkt"] = tol_kkt;
  t["active_tol"] = cfg.tol_active.value_or(tols.active_tol);
  t["rank_tol"] = tols.rank_tol;
  t["range_tol"] = tols.range_tol;
  t["supp_tol"] = tols.supp_tol;
  t["lp_tol"] = tols.lp_tol;
  return t;
}

void emit(const RunConfig& cfg, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) fail(Errc::IoError, "cannot write output file: " + cfg.output);
  out << text;
  if (!out) fail(Errc::IoError, "failed writing output file: " + cfg.output);
}

json vector_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

SolveOptions make_solve_options(const RunConfig& cfg) {
  SolveOptions opts;
  if (cfg.tol_kkt) opts.tol_kkt = *cfg.tol_kkt;
  opts.seed = cfg.seed;
  return opts;
}

CertifyTolerances make_tolerances(const RunConfig& cfg) {
  CertifyTolerances tols;
  if (cfg.tol_active) tols.active_tol = *cfg.tol_active;
  return tols;
}

const std::string& single_input(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) fail(Errc::ParseError, "expected exactly one --input");
  return cfg.inputs.front();
}

int cmd_solve(const RunConfig& cfg) {
  const ProblemInstance p = load_problem(single_input(cfg));
  const SolveOptions opts = make_solve_options(cfg);
  const SolutionPoint sol = solve(p, opts);
  json doc = report_header(cfg, "solve");
  doc["tolerances"] = tolerances_json(cfg, {}, opts.tol_kkt);
  doc["solution"] = {{"x", vector_json(sol.x)},
                     {"objective", sol.objective},
                     {"kkt_residual", sol.kkt_residual},
                     {"iterations", sol.iterations}};
  emit(cfg, doc);
  return 0;
}

int cmd_certify(const RunConfig& cfg) {
  const ProblemInstance p = load_problem(single_input(cfg));
  const SolveOptions opts = make_solve_options(cfg);
  const CertifyTolerances tols = make_tolerances(cfg);
  const SolutionPoint sol = solve(p, opts);
  const StabilityCertificate cert = certify(p, sol.x, tols);
  json doc = report_header(cfg, "certify");
  doc["tolerances"] = tolerances_json(cfg, tols, opts.tol_kkt);
  doc["solution"] = {{"x", vector_json(sol.x)},
                     {"objective", sol.objective},
                     {"kkt_residual", sol.kkt_residual},
                     {"iterations", sol.iterations}};
  doc["certificate"] = certificate_to_json(cert, tols);
  emit(cfg, doc);
  return cert.all_applicable_hold() ? 0 : 2;
}

int cmd_decompose(const RunConfig& cfg) {
  const ProblemInstance p = load_problem(single_input(cfg));
  const SolveOptions opts = make_solve_options(cfg);
  const SolutionPoint sol = solve(p, opts);
  geometry::SolutionFace certified = geometry::face_from_image(p, p.A() * sol.x);
  auto faces = geometry::decompose(p);

  json jfaces = json::array();
  double union_excess = 0.0;
  for (auto& [pat, face] : faces) {
    json entry;
    entry["J1"] = json(pat.J1);
    entry["J2"] = json(pat.J2);
    entry["face"] = geometry::face_to_json(face);
    jfaces.push_back(std::move(entry));
    union_excess = std::max(union_excess, geometry::excess(face, certified));
  }
  // Excess of the certified face beyond the union: min distance over the pieces.
  double back_excess = 0.0;
  for (const Vector& v : geometry::vertices(certified)) {
    double dmin = std::numeric_limits<double>::infinity();
    for (auto& [pat, face] : faces) dmin = std::min(dmin, geometry::distance_to_face(v, face));
    back_excess = std::max(back_excess, dmin);
  }

  json doc = report_header(cfg, "decompose");
  doc["tolerances"] = tolerances_json(cfg, {}, opts.tol_kkt);
  doc["faces"] = std::move(jfaces);
  doc["certified_face"] = geometry::face_to_json(certified);
  doc["hausdorff_union_vs_certified"] = std::max(union_excess, back_excess);
  emit(cfg, doc);
  return 0;
}

int cmd_hausdorff(const RunConfig& cfg) {
  if (cfg.inputs.size() != 2) fail(Errc::ParseError, "hausdorff expects two --input faces");
  geometry::SolutionFace P = geometry::load_face(cfg.inputs[0]);
  geometry::SolutionFace Q = geometry::load_face(cfg.inputs[1]);
  const double d = geometry::hausdorff(P, Q);
  json doc = report_header(cfg, "hausdorff");
  doc["tolerances"] = tolerances_json(cfg, {}, SolveOptions{}.tol_kkt);
  doc["distance"] = d;
  emit(cfg, doc);
  return 0;
}

json probe_block(const ProblemInstance& p, const RunConfig& cfg, bool& blowup) {
  const std::vector<double> radii{cfg.radius, cfg.radius / 10.0, cfg.radius / 100.0};
  const ProbeReport rep = detect_blowup(p, radii, cfg.samples, cfg.seed);
  blowup = rep.blowup_flag;
  return probe_report_to_json(rep);
}

int cmd_probe(const RunConfig& cfg) {
  const ProblemInstance p = load_problem(single_input(cfg));
  bool blowup = false;
  const json probe = probe_block(p, cfg, blowup);
  // CSV output carries the ratio curve alone; JSON carries the full report.
  if (!cfg.output.empty() && cfg.output.size() > 4 &&
      cfg.output.substr(cfg.output.size() - 4) == ".csv") {
    std::ofstream out(cfg.output);
    if (!out) fail(Errc::IoError, "cannot write output file: " + cfg.output);
    ProbeReport rep;  // rebuild the curve from the JSON block
    for (const auto& row : probe.at("ratio_by_radius"))
      rep.ratio_by_radius.emplace_back(row.at("radius").get<double>(),
                                       row.at("max_ratio").get<double>());
    write_ratio_csv(rep, out);
  } else {
    json doc = report_header(cfg, "probe");
    doc["tolerances"] = tolerances_json(cfg, {}, 1e-10);
    doc["probe"] = probe;
    emit(cfg, doc);
  }
  return blowup ? 2 : 0;
}

int cmd_example(const RunConfig& cfg) {
  ExampleVariant variant = ExampleVariant::Lasso;
  if (cfg.variant == "lasso") {
    variant = ExampleVariant::Lasso;
  } else if (cfg.variant == "sr") {
    variant = ExampleVariant::Sr;
  } else {
    fail(Errc::ParseError, "--variant must be lasso or sr");
  }
  const GeneratedExample ex = generate_example(cfg.gamma, variant, cfg.lambda);
  if (!cfg.output.empty()) save_problem(ex.problem, cfg.output);

  json doc = report_header(cfg, "example");
  doc["tolerances"] = tolerances_json(cfg, {}, SolveOptions{}.tol_kkt);
  json exj;
  exj["gamma"] = cfg.gamma;
  exj["lambda"] = cfg.lambda;
  exj["variant"] = cfg.variant;
  exj["problem"] = json::parse(problem_to_json_text(ex.problem));
  exj["closed_form"] = geometry::face_to_json(ex.closed_form);
  if (!cfg.output.empty()) exj["problem_file"] = cfg.output;
  doc["example"] = std::move(exj);

  bool blowup = false;
  if (cfg.run_probe) doc["probe"] = probe_block(ex.problem, cfg, blowup);
  // --output names the generated problem document; the report goes to stdout.
  RunConfig to_stdout = cfg;
  to_stdout.output.clear();
  emit(to_stdout, doc);
  return blowup ? 2 : 0;
}

}  // namespace

RunConfig parse_cli(int argc, const char* const* argv) {
  CLI::App app{"LASSO-type solver with Lipschitz-stability certificates"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", cfg.inputs, "input document path");
    if (needs_input) in->required();
    sub->add_option("--output", cfg.output, "report output path (stdout when absent)");
    sub->add_option("--seed", cfg.seed, "top-level seed");
    sub->add_option("--tol-kkt", cfg.tol_kkt, "kkt residual target")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-active", cfg.tol_active, "active-set tolerance (relative in lambda)")
        ->check(CLI::PositiveNumber);
  };

  add_common(app.add_subcommand("solve", "solve a problem instance"), true);
  add_common(app.add_subcommand("certify", "solve and decide the stability conditions"), true);
  add_common(app.add_subcommand("decompose", "pattern decomposition of the solution set"), true);
  add_common(app.add_subcommand("hausdorff", "Hausdorff distance between two face documents"),
             true);
  auto* probe = app.add_subcommand("probe", "empirical Lipschitz probe");
  add_common(probe, true);
  probe->add_option("--radius", cfg.radius, "largest sampling radius")->check(CLI::PositiveNumber);
  probe->add_option("--samples", cfg.samples, "samples per radius")->check(CLI::PositiveNumber);
  auto* example = app.add_subcommand("example", "generate the worked 2x3 instance family");
  add_common(example, false);
  example->add_option("--gamma", cfg.gamma, "noise scale (> -1)");
  example->add_option("--lambda", cfg.lambda, "regularization parameter")
      ->check(CLI::PositiveNumber);
  example->add_option("--variant", cfg.variant, "lasso | sr");
  example->add_flag("--probe", cfg.run_probe, "run the blow-up probe on the generated instance");
  example->add_option("--radius", cfg.radius, "largest probe radius")->check(CLI::PositiveNumber);
  example->add_option("--samples", cfg.samples, "probe samples per radius")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    fail(Errc::ParseError, e.what());
  }

  if (app.got_subcommand("solve")) cfg.subcommand = Subcommand::Solve;
  if (app.got_subcommand("certify")) cfg.subcommand = Subcommand::Certify;
  if (app.got_subcommand("decompose")) cfg.subcommand = Subcommand::Decompose;
  if (app.got_subcommand("hausdorff")) cfg.subcommand = Subcommand::Hausdorff;
  if (app.got_subcommand("probe")) cfg.subcommand = Subcommand::Probe;
  if (app.got_subcommand("example")) cfg.subcommand = Subcommand::Example;
  return cfg;
}

int run_cli(const RunConfig& cfg) {
  try {
    switch (cfg.subcommand) {
      case Subcommand::Solve: return cmd_solve(cfg);
      case Subcommand::Certify: return cmd_certify(cfg);
      case Subcommand::Decompose: return cmd_decompose(cfg);
      case Subcommand::Hausdorff: return cmd_hausdorff(cfg);
      case Subcommand::Probe: return cmd_probe(cfg);
      case Subcommand::Example: return cmd_example(cfg);
    }
    std::cerr << "error: unknown subcommand\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lassocert
