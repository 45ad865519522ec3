#include <doctest.h>

#include "lassocert/geometry.hpp"
#include "lassocert/linalg.hpp"
#include "lassocert/solver.hpp"
#include "test_util.hpp"

using namespace lassocert;

namespace {

Vector soft(const Vector& v, double t) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = v(i) > t ? v(i) - t : (v(i) < -t ? v(i) + t : 0.0);
  return out;
}

}  // namespace

TEST_CASE("worked LASSO instance: segment membership and optimal value") {
  const ProblemInstance p = testutil::example_lasso(0.5);
  const SolutionPoint sol = solve(p);
  CHECK(sol.kkt_residual <= 1e-9);
  // common optimal value h + lambda*1 = 0.125 + 0.5
  CHECK(sol.objective == doctest::Approx(0.625).epsilon(1e-12));
  const Vector a = testutil::lasso_segment_point(0.0, 0.5);
  const Vector c = testutil::lasso_segment_point(-0.25, 0.5);
  CHECK(testutil::dist_to_segment(sol.x, a, c) <= 1e-7);
}

TEST_CASE("worked LASSO instance with large lambda returns zero") {
  const ProblemInstance p = testutil::example_lasso(2.0);
  const SolutionPoint sol = solve(p);
  CHECK(sol.x.norm() <= 1e-10);
  CHECK(sol.objective == doctest::Approx(p.objective(Vector::Zero(3))));
}

TEST_CASE("zero data solves to zero") {
  Matrix A(2, 2);
  A << 1, 0, 0, 1;
  const ProblemInstance p(A, Vector::Zero(2), 0.7, LossModel::l2_squared());
  const SolutionPoint sol = solve(p);
  CHECK(sol.x.norm() == 0.0);
  CHECK(sol.objective == 0.0);
}

TEST_CASE("kkt residual on hand-checked points") {
  const ProblemInstance p05 = testutil::example_lasso(0.5);
  Vector x(3);
  x << 0, 0, 1;
  CHECK(kkt_residual(p05, x) <= 1e-14);  // A^T(b-Ax) = (0.5,-0.5,0.5), all at the bound

  const ProblemInstance p2 = testutil::example_lasso(2.0);
  CHECK(kkt_residual(p2, Vector::Zero(3)) == 0.0);  // ||A^T b||_inf = 1.5 < 2

  Vector bad(3);
  bad << 1, 1, 1;
  CHECK(kkt_residual(p05, bad) > 1e-2);
}

TEST_CASE("solver agrees with the grid oracle on small random instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 2);
    const int n = 2 + static_cast<int>(rng.next_u64() % 2);
    const ProblemInstance p = testutil::random_instance(rng, m, n, LossKind::L2Squared);
    const SolutionPoint sol = solve(p);
    const auto cloud = geometry::brute_force_solutions(p, 2.0, 0.05);
    REQUIRE(!cloud.empty());
    double grid_min = std::numeric_limits<double>::infinity();
    for (const Vector& pt : cloud) grid_min = std::min(grid_min, p.objective(pt));
    CHECK(sol.objective <= grid_min + 1e-8);
  }
}

TEST_CASE("soft-threshold fixed point at the returned solution") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ProblemInstance p = testutil::random_instance(rng, 3, 4, LossKind::L2Squared);
    const SolutionPoint sol = solve(p);
    const double L = linalg::gram_spectral_norm(p.A());
    const Vector step = sol.x - (p.A().transpose() * (p.A() * sol.x - p.b())) / L;
    const Vector fixed = soft(step, p.lambda() / L);
    CHECK((fixed - sol.x).lpNorm<Eigen::Infinity>() <= 1e-9);
  }
}

TEST_CASE("polish never worsens the objective") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const ProblemInstance p = testutil::random_instance(rng, 3, 4, LossKind::L2Squared);
    SolveOptions raw;
    raw.polish = false;
    SolveOptions pol;
    pol.polish = true;
    const double obj_raw = solve(p, raw).objective;
    const double obj_pol = solve(p, pol).objective;
    CHECK(obj_pol <= obj_raw + 1e-12);
  }
}

TEST_CASE("image consistency on the worked instances") {
  SolveOptions opts;
  opts.seed = 99;
  SUBCASE("squared loss, lambda 0.5: every solution maps to (0, 1)") {
    const ProblemInstance p = testutil::example_lasso(0.5);
    const ImageConsistency ic = image_consistency(p, opts, 8);
    Vector expect(2);
    expect << 0.0, 1.0;
    CHECK((ic.y_hat - expect).norm() <= 1e-7);
    CHECK(ic.max_spread <= 1e-7);
  }
  SUBCASE("norm loss, lambda 0.5: every solution maps to b") {
    const ProblemInstance p = testutil::example_sr(0.5);
    const ImageConsistency ic = image_consistency(p, opts, 8);
    CHECK((ic.y_hat - p.b()).norm() <= 1e-7);
    CHECK(ic.max_spread <= 1e-7);
  }
  SUBCASE("k = 1 is rejected") {
    const ProblemInstance p = testutil::example_lasso(0.5);
    try {
      image_consistency(p, opts, 1);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvalidK);
    }
  }
}

TEST_CASE("norm-loss solver handles both regimes") {
  SUBCASE("lambda 1.5: zero solution, nonzero residual") {
    const ProblemInstance p = testutil::example_sr(1.5);
    const SolutionPoint sol = solve(p);
    CHECK(sol.x.norm() <= 1e-10);
    CHECK(sol.kkt_residual <= 1e-9);
    CHECK(sol.objective == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("lambda 0.5: interpolating solution on the closed-form segment") {
    const ProblemInstance p = testutil::example_sr(0.5);
    const SolutionPoint sol = solve(p);
    CHECK((p.A() * sol.x - p.b()).norm() <= 1e-8);
    Vector a(3), c(3);
    a << 0, 0, 1.5;
    c << 1.125, -0.375, 0;
    CHECK(testutil::dist_to_segment(sol.x, a, c) <= 1e-6);
    CHECK(sol.objective == doctest::Approx(0.75).epsilon(1e-10));
  }
}

TEST_CASE("max iteration exhaustion carries the best iterate") {
  const ProblemInstance p = testutil::example_lasso(0.5);
  SolveOptions opts;
  opts.max_iters = 3;
  opts.polish = false;
  opts.tol_kkt = 1e-14;
  try {
    solve(p, opts);
    CHECK(false);
  } catch (const MaxItersExceeded& e) {
    CHECK(e.best().x.size() == 3);
    CHECK(e.best().kkt_residual >= 0.0);
  }
}

TEST_CASE("pluggable losses are rejected by solve") {
  PluggableLoss plug;
  plug.value = [](const Vector& z) { return z.squaredNorm(); };
  Matrix A(1, 1);
  A << 1.0;
  Vector b(1);
  b << 1.0;
  const ProblemInstance p(A, b, 0.5, LossModel::pluggable(plug));
  try {
    solve(p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WrongLoss);
  }
}
