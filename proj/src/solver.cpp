#include "lassocert/solver.hpp"

#include <cmath>

#include "lassocert/linalg.hpp"
#include "lassocert/qp.hpp"
#include "lassocert/rng.hpp"
#include "lassocert/simplex.hpp"

namespace lassocert {

namespace {

Vector soft_threshold(const Vector& v, double t) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > t)
      out(i) = v(i) - t;
    else if (v(i) < -t)
      out(i) = v(i) + t;
    else
      out(i) = 0.0;
  }
  return out;
}

IndexSet detect_support(const Vector& x, double rel_tol) {
  const double thr = rel_tol * (1.0 + x.lpNorm<Eigen::Infinity>());
  IndexSet I;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > thr) I.push_back(static_cast<int>(i));
  return I;
}

Vector assemble(const IndexSet& I, const Vector& xi, int n) {
  Vector x = Vector::Zero(n);
  for (std::size_t k = 0; k < I.size(); ++k) x(I[k]) = xi(static_cast<Eigen::Index>(k));
  return x;
}

// Componentwise clamping distance from 0 to g + lambda * [lower, upper].
double box_residual(const Vector& g, double lambda, const SubdiffBox& box) {
  double ss = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double lo = g(i) + lambda * box.lower(i);
    const double hi = g(i) + lambda * box.upper(i);
    double d = 0.0;
    if (lo > 0.0)
      d = lo;
    else if (hi < 0.0)
      d = -hi;
    ss += d * d;
  }
  return std::sqrt(ss);
}

// Distance from 0 to A^T B + lambda * box, B the unit ball. Exact zero detection:
// feasibility of {w : A^T w in -lambda*box} plus min-norm projection; a positive
// distance is estimated by accelerated projected gradient (diagnostic only).
double nonsmooth_ball_residual(const ProblemInstance& p, const Vector& x) {
  const Matrix& A = p.A();
  const int m = p.m();
  const int n = p.n();
  const double lambda = p.lambda();
  const SubdiffBox box = l1_subdiff_box(x);

  lp::GeneralLp sys;
  sys.A_eq = Matrix(0, m);
  sys.b_eq = Vector(0);
  sys.A_in = Matrix(2 * n, m);
  sys.b_in = Vector(2 * n);
  sys.A_in.topRows(n) = A.transpose();
  sys.A_in.bottomRows(n) = -A.transpose();
  for (int i = 0; i < n; ++i) {
    sys.b_in(i) = -lambda * box.lower(i);
    sys.b_in(n + i) = lambda * box.upper(i);
  }
  sys.c = Vector::Zero(m);

  lp::GeneralResult feas = lp::solve_general(sys, 1e-9);
  if (feas.status == lp::Status::Optimal) {
    qp::Polyhedron poly{sys.A_eq, sys.b_eq, sys.A_in, sys.b_in};
    const qp::Projection proj = qp::project(poly, Vector::Zero(m), feas.v);
    if (proj.distance <= 1.0 + 1e-9) return 0.0;
  }

  // Positive distance: APG on f(w,u) = 0.5 ||A^T w + lambda u||^2 over ball x box.
  const double L = linalg::gram_spectral_norm(A) + lambda * lambda;
  if (L == 0.0) return 0.0;
  const double step = 1.0 / L;
  Vector w = Vector::Zero(m), u = Vector::Zero(n);
  for (int i = 0; i < n; ++i) u(i) = std::clamp(0.0, box.lower(i), box.upper(i));
  Vector wv = w, uv = u;
  double t = 1.0, best = (A.transpose() * w + lambda * u).norm();
  for (int it = 0; it < 2000; ++it) {
    const Vector r = A.transpose() * wv + lambda * uv;
    Vector wn = wv - step * (A * r);
    Vector un = uv - step * (lambda * r);
    const double nw = wn.norm();
    if (nw > 1.0) wn /= nw;
    for (int i = 0; i < n; ++i) un(i) = std::clamp(un(i), box.lower(i), box.upper(i));
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    wv = wn + ((t - 1.0) / tn) * (wn - w);
    uv = un + ((t - 1.0) / tn) * (un - u);
    w = wn;
    u = un;
    t = tn;
    best = std::min(best, (A.transpose() * w + lambda * u).norm());
  }
  return best;
}

}  // namespace

double kkt_residual(const ProblemInstance& p, const Vector& x) {
  if (x.size() != p.n()) fail(Errc::InvalidArgument, "kkt_residual: x has wrong length");
  const Vector z = p.residual(x);
  if (p.loss().kind() == LossKind::L2Norm && z.norm() <= p.smooth_tol())
    return nonsmooth_ball_residual(p, x);
  const LossEval ev = loss_eval(p.loss(), z, 1);
  const Vector g = p.A().transpose() * (*ev.gradient);
  return box_residual(g, p.lambda(), l1_subdiff_box(x));
}

namespace {

struct PolishOutcome {
  bool ok = false;
  Vector x;
};

// Reduced stationarity solve for the squared loss with sign repair: indices whose
// sign flips against the assumed pattern are dropped and the system re-solved.
PolishOutcome polish_l2sq(const ProblemInstance& p, const Vector& x_raw) {
  PolishOutcome out;
  IndexSet I = detect_support(x_raw, 1e-12);
  std::vector<double> sign_of(p.n(), 0.0);
  for (const int i : I) sign_of[i] = x_raw(i) > 0.0 ? 1.0 : -1.0;

  for (int round = 0; round <= p.n(); ++round) {
    if (I.empty()) {
      out.ok = true;
      out.x = Vector::Zero(p.n());
      return out;
    }
    const Matrix AI = columns(p.A(), I);
    Vector s(static_cast<Eigen::Index>(I.size()));
    for (std::size_t k = 0; k < I.size(); ++k) s(static_cast<Eigen::Index>(k)) = sign_of[I[k]];
    const Matrix G = AI.transpose() * AI;
    const Vector rhs = AI.transpose() * p.b() - p.lambda() * s;
    const Vector xi = linalg::least_norm_solve(G, rhs);
    if ((G * xi - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) return out;  // inconsistent support
    IndexSet kept;
    for (std::size_t k = 0; k < I.size(); ++k)
      if (xi(static_cast<Eigen::Index>(k)) * s(static_cast<Eigen::Index>(k)) >= 0.0)
        kept.push_back(I[k]);
    if (kept.size() == I.size()) {
      out.ok = true;
      out.x = assemble(I, xi, p.n());
      return out;
    }
    I = std::move(kept);
  }
  return out;
}

// Smooth-regime polish for the norm loss. With x supported on I and signs s, the
// stationarity equalities A_I^T r = -lambda ||r|| s with r = A_I x_I - b reduce to a
// scalar equation for t = ||r||: x_I(t) = u - t v and t^2 = ||A_I u - b||^2 + t^2 ||A_I v||^2
// (the cross term vanishes since A_I u - b is orthogonal to the range of A_I).
PolishOutcome polish_sr_smooth_on(const ProblemInstance& p, IndexSet I,
                                  std::vector<double> sign_of) {
  PolishOutcome out;
  for (int round = 0; round <= p.n(); ++round) {
    if (I.empty()) {
      out.ok = true;
      out.x = Vector::Zero(p.n());
      return out;
    }
    const Matrix AI = columns(p.A(), I);
    Vector s(static_cast<Eigen::Index>(I.size()));
    for (std::size_t k = 0; k < I.size(); ++k) s(static_cast<Eigen::Index>(k)) = sign_of[I[k]];
    const Matrix G = AI.transpose() * AI;
    const Vector u = linalg::least_norm_solve(G, AI.transpose() * p.b());
    const Vector v = p.lambda() * linalg::least_norm_solve(G, s);
    if ((G * v - p.lambda() * s).norm() > 1e-9 * (1.0 + s.norm())) return out;
    const double r0 = (AI * u - p.b()).norm();
    const double a = 1.0 - (AI * v).squaredNorm();
    if (a <= 1e-12) return out;  // support wants the Ax = b regime
    const double t = r0 / std::sqrt(a);
    if (t <= p.smooth_tol()) return out;
    const Vector xi = u - t * v;
    IndexSet kept;
    for (std::size_t k = 0; k < I.size(); ++k)
      if (xi(static_cast<Eigen::Index>(k)) * s(static_cast<Eigen::Index>(k)) >= 0.0)
        kept.push_back(I[k]);
    if (kept.size() == I.size()) {
      out.ok = true;
      out.x = assemble(I, xi, p.n());
      return out;
    }
    I = std::move(kept);
  }
  return out;
}

PolishOutcome polish_sr_smooth(const ProblemInstance& p, const Vector& x_raw) {
  IndexSet I = detect_support(x_raw, 1e-9);
  std::vector<double> sign_of(p.n(), 0.0);
  for (const int i : I) sign_of[i] = x_raw(i) > 0.0 ? 1.0 : -1.0;
  return polish_sr_smooth_on(p, std::move(I), std::move(sign_of));
}

// Candidate active set read off the dual direction w ~ dh(Ax-b): near-degenerate
// instances stall the iterate's support, but the dual still pins the equalities.
// The true support can be any subset of the dual-active set, so all subsets are
// offered as candidates (n <= 8 at desk scale; every candidate is kkt-verified).
std::pair<IndexSet, std::vector<double>> dual_active_set(const ProblemInstance& p,
                                                         const Vector& w) {
  const Vector g = p.A().transpose() * w;
  IndexSet I;
  std::vector<double> sign_of(p.n(), 0.0);
  for (int i = 0; i < p.n(); ++i) {
    if (std::abs(g(i)) >= p.lambda() * (1.0 - 1e-3)) {
      I.push_back(i);
      sign_of[i] = g(i) > 0.0 ? -1.0 : 1.0;
    }
  }
  return {I, sign_of};
}

// Nonsmooth-regime polish for the norm loss: least-norm correction of the supported
// entries onto A_I x_I = b (exact interpolation), optimality left to the kkt check.
PolishOutcome polish_sr_interp_on(const ProblemInstance& p, const Vector& x_raw,
                                  const IndexSet& I) {
  PolishOutcome out;
  if (I.empty()) {
    if (p.b().norm() > 1e-12 * (1.0 + p.b().norm())) return out;
    out.ok = true;
    out.x = Vector::Zero(p.n());
    return out;
  }
  const Matrix AI = columns(p.A(), I);
  Vector xi(static_cast<Eigen::Index>(I.size()));
  for (std::size_t k = 0; k < I.size(); ++k) xi(static_cast<Eigen::Index>(k)) = x_raw(I[k]);
  const Vector corr = linalg::least_norm_solve(AI, AI * xi - p.b());
  xi -= corr;
  if ((AI * xi - p.b()).norm() > 1e-12 * (1.0 + p.b().norm())) return out;
  out.ok = true;
  out.x = assemble(I, xi, p.n());
  return out;
}

PolishOutcome polish_sr_interp(const ProblemInstance& p, const Vector& x_raw) {
  return polish_sr_interp_on(p, x_raw, detect_support(x_raw, 1e-7));
}

// Accept a polished candidate only if it does not worsen the objective and meets the
// kkt tolerance.
bool accept_polish(const ProblemInstance& p, const Vector& x_raw, const PolishOutcome& cand,
                   double tol_kkt, SolutionPoint& sink, int iters) {
  if (!cand.ok) return false;
  const double obj_raw = p.objective(x_raw);
  const double obj_new = p.objective(cand.x);
  if (obj_new > obj_raw + 1e-12 * (1.0 + std::abs(obj_raw))) return false;
  const double r = kkt_residual(p, cand.x);
  if (r > tol_kkt) return false;
  sink.x = cand.x;
  sink.objective = obj_new;
  sink.kkt_residual = r;
  sink.iterations = iters;
  return true;
}

SolutionPoint solve_l2_squared(const ProblemInstance& p, const SolveOptions& opts, const Vector& x0) {
  const Matrix& A = p.A();
  const double L = linalg::gram_spectral_norm(A, 1e-10);
  SolutionPoint sol;
  if (L == 0.0) {  // zero operator: the l1 term decides, x = 0
    sol.x = Vector::Zero(p.n());
    sol.objective = p.objective(sol.x);
    sol.kkt_residual = kkt_residual(p, sol.x);
    sol.iterations = 0;
    return sol;
  }
  const double step = 1.0 / L;

  Vector x = x0, y = x0;
  double t = 1.0;
  SolutionPoint best;
  best.x = x;
  best.kkt_residual = kkt_residual(p, x);
  best.objective = p.objective(x);

  const int check_every = 20;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const Vector grad = A.transpose() * (A * y - p.b());
    const Vector xn = soft_threshold(y - step * grad, p.lambda() * step);
    if (!xn.allFinite()) fail(Errc::NumericalBreakdown, "non-finite iterate in proximal gradient");
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = xn + ((t - 1.0) / tn) * (xn - x);
    x = xn;
    t = tn;

    if (it % check_every == 0 || it == opts.max_iters) {
      const double r = kkt_residual(p, x);
      if (r < best.kkt_residual) {
        best.x = x;
        best.kkt_residual = r;
        best.objective = p.objective(x);
        best.iterations = it;
      }
      if (opts.polish && r <= 1e-4 * (1.0 + p.lambda())) {
        if (accept_polish(p, x, polish_l2sq(p, x), opts.tol_kkt, sol, it)) return sol;
      }
      if (r <= opts.tol_kkt) {
        sol.x = x;
        sol.objective = p.objective(x);
        sol.kkt_residual = r;
        sol.iterations = it;
        if (opts.polish) {
          SolutionPoint polished;
          if (accept_polish(p, x, polish_l2sq(p, x), opts.tol_kkt, polished, it) &&
              polished.kkt_residual <= r)
            return polished;
        }
        return sol;
      }
    }
  }
  throw MaxItersExceeded(best);
}

SolutionPoint solve_l2_norm(const ProblemInstance& p, const SolveOptions& opts, const Vector& x0) {
  const Matrix& A = p.A();
  const double nA2 = linalg::gram_spectral_norm(A, 1e-10);
  SolutionPoint sol;
  if (nA2 == 0.0) {
    sol.x = Vector::Zero(p.n());
    sol.objective = p.objective(sol.x);
    sol.kkt_residual = kkt_residual(p, sol.x);
    sol.iterations = 0;
    return sol;
  }
  const double nA = std::sqrt(nA2);
  const double tau = 0.95 / nA;
  const double sigma = 0.95 / nA;

  Vector x = x0, xbar = x0, w = Vector::Zero(p.m());
  SolutionPoint best;
  best.x = x;
  best.kkt_residual = kkt_residual(p, x);
  best.objective = p.objective(x);

  bool tried_lp_interp = false;
  PolishOutcome lp_candidate;
  const int check_every = 25;
  for (int it = 1; it <= opts.max_iters; ++it) {
    Vector wn = w + sigma * (A * xbar - p.b());
    const double nw = wn.norm();
    if (nw > 1.0) wn /= nw;  // prox of the conjugate of ||.-b||
    const Vector xn = soft_threshold(x - tau * (A.transpose() * wn), tau * p.lambda());
    if (!xn.allFinite() || !wn.allFinite())
      fail(Errc::NumericalBreakdown, "non-finite iterate in primal-dual splitting");
    xbar = 2.0 * xn - x;
    x = xn;
    w = wn;

    if (it % check_every == 0 || it == opts.max_iters) {
      const double rnorm = (A * x - p.b()).norm();
      if (opts.polish) {
        // Candidate regime Ax = b: interpolate the support, certify via the ball test.
        if (rnorm <= 1e-5 * (1.0 + p.b().norm())) {
          if (accept_polish(p, x, polish_sr_interp(p, x), opts.tol_kkt, sol, it)) return sol;
          if (!tried_lp_interp) {
            tried_lp_interp = true;  // the program does not depend on the iterate
            const lp::L1MinFace l1 = lp::l1_min_face(A, p.b());
            if (l1.feasible) {
              lp_candidate.ok = true;
              lp_candidate.x = l1.x;
            }
          }
          if (accept_polish(p, x, lp_candidate, opts.tol_kkt, sol, it)) return sol;
        }
        if (rnorm > p.smooth_tol()) {
          if (accept_polish(p, x, polish_sr_smooth(p, x), opts.tol_kkt, sol, it)) return sol;
        }
      }
      // Near-degenerate stalls: the dual direction pins the active set even when the
      // primal support has not settled; subsets of it are tried as exact candidates.
      if (opts.polish && it >= 500 && it % 500 == 0 && rnorm > p.smooth_tol()) {
        const auto [J, sign_of] = dual_active_set(p, w);
        if (J.size() <= 12) {
          bool found = false;
          for (std::uint32_t mask = 0; mask < (1u << J.size()) && !found; ++mask) {
            IndexSet sub;
            for (std::size_t k = 0; k < J.size(); ++k)
              if (mask & (1u << k)) sub.push_back(J[k]);
            found = accept_polish(p, x, polish_sr_smooth_on(p, std::move(sub), sign_of),
                                  opts.tol_kkt, sol, it);
          }
          if (found) return sol;
        }
      }
      const double r = kkt_residual(p, x);
      if (r < best.kkt_residual) {
        best.x = x;
        best.kkt_residual = r;
        best.objective = p.objective(x);
        best.iterations = it;
      }
      if (r <= opts.tol_kkt) {
        sol.x = x;
        sol.objective = p.objective(x);
        sol.kkt_residual = r;
        sol.iterations = it;
        return sol;
      }
    }
  }
  throw MaxItersExceeded(best);
}

}  // namespace

SolutionPoint solve(const ProblemInstance& p, const SolveOptions& opts) {
  if (opts.max_iters < 1) fail(Errc::InvalidArgument, "max_iters must be >= 1");
  if (!(opts.tol_kkt > 0.0)) fail(Errc::InvalidArgument, "tol_kkt must be positive");
  Vector x0 = Vector::Zero(p.n());
  if (!opts.starts.empty()) {
    x0 = opts.starts.front();
    if (x0.size() != p.n()) fail(Errc::InvalidArgument, "start vector has wrong length");
  }
  switch (p.loss().kind()) {
    case LossKind::L2Squared:
      return solve_l2_squared(p, opts, x0);
    case LossKind::L2Norm:
      return solve_l2_norm(p, opts, x0);
    case LossKind::Pluggable:
      fail(Errc::WrongLoss, "solve supports the built-in losses only");
  }
  fail(Errc::WrongLoss, "unknown loss");
}

ImageConsistency image_consistency(const ProblemInstance& p, const SolveOptions& opts, int k) {
  if (k < 2) fail(Errc::InvalidK, "image consistency needs k >= 2 starts");
  if (p.loss().kind() == LossKind::Pluggable)
    fail(Errc::WrongLoss, "image consistency supports the built-in losses only");

  Rng rng(derive_seed(opts.seed, "multi-start"));
  const double scale = 1.0 + p.b().norm();
  ImageConsistency out;
  out.solutions.reserve(k);
  std::vector<Vector> images;
  images.reserve(k);
  for (int s = 0; s < k; ++s) {
    SolveOptions run = opts;
    run.starts = {s == 0 ? Vector(Vector::Zero(p.n())) : Vector(scale * rng.normal_vector(p.n()))};
    out.solutions.push_back(solve(p, run));
    images.push_back(p.A() * out.solutions.back().x);
  }
  Vector mean = Vector::Zero(p.m());
  for (const Vector& y : images) mean += y;
  mean /= static_cast<double>(k);
  double spread = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      spread = std::max(spread, (images[i] - images[j]).norm());
  out.y_hat = mean;
  out.max_spread = spread;
  return out;
}

}  // namespace lassocert
