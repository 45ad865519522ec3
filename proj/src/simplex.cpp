#include "lassocert/simplex.hpp"

#include <cmath>

namespace lassocert::lp {

const char* status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Tableau layout: rows 0..m-1 constraints, row m = objective (reduced costs, negated
// objective value in the rhs column). Columns 0..total-1 variables, column total = rhs.
struct Tableau {
  Matrix t;
  std::vector<int> basis;  // basis[i] = column basic in row i
  int m, total;

  double& at(int i, int j) { return t(i, j); }

  void pivot(int prow, int pcol) {
    const double piv = t(prow, pcol);
    t.row(prow) /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == prow) continue;
      const double f = t(i, pcol);
      if (f != 0.0) t.row(i) -= f * t.row(prow);
    }
    basis[prow] = pcol;
  }
};

// Bland's rule: entering = lowest-index column with reduced cost < -tol;
// leaving = among min-ratio rows, the one whose basic variable index is lowest.
// Returns Optimal or Unbounded or IterLimit.
Status run_simplex(Tableau& tb, const std::vector<bool>& allowed, double tol, int max_iters) {
  for (int it = 0; it < max_iters; ++it) {
    int enter = -1;
    for (int j = 0; j < tb.total; ++j) {
      if (!allowed[j]) continue;
      if (tb.at(tb.m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return Status::Optimal;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < tb.m; ++i) {
      const double a = tb.at(i, enter);
      if (a > tol) {
        const double ratio = tb.at(i, tb.total) / a;
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && tb.basis[i] < tb.basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return Status::Unbounded;
    tb.pivot(leave, enter);
  }
  return Status::IterLimit;
}

}  // namespace

Result solve_standard(const Matrix& A_in, const Vector& b_in, const Vector& c,
                      double tol, int max_iters) {
  const int m = static_cast<int>(A_in.rows());
  const int n = static_cast<int>(A_in.cols());
  Result res;
  if (b_in.size() != m || c.size() != n) fail(Errc::InvalidArgument, "simplex: inconsistent sizes");

  // Flip rows so the rhs is nonnegative; remember flips for the duals.
  Matrix A = A_in;
  Vector b = b_in;
  std::vector<double> flip(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      A.row(i) *= -1.0;
      b(i) *= -1.0;
      flip[i] = -1.0;
    }
  }

  const int total = n + m;  // original variables + artificials
  Tableau tb;
  tb.m = m;
  tb.total = total;
  tb.t = Matrix::Zero(m + 1, total + 1);
  tb.t.block(0, 0, m, n) = A;
  for (int i = 0; i < m; ++i) tb.t(i, n + i) = 1.0;
  tb.t.block(0, total, m, 1) = b;
  tb.basis.resize(m);
  for (int i = 0; i < m; ++i) tb.basis[i] = n + i;

  // Phase 1: minimize the sum of artificials. Objective row = -(sum of constraint rows)
  // on the original columns.
  for (int j = 0; j <= total; ++j) {
    if (j >= n && j < total) continue;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += tb.t(i, j);
    tb.t(m, j) = -s;
  }
  std::vector<bool> allowed(total, true);
  Status st = run_simplex(tb, allowed, tol, max_iters);
  if (st == Status::IterLimit) {
    res.status = st;
    return res;
  }
  const double phase1 = -tb.t(m, total);
  if (phase1 > tol * (1.0 + b.lpNorm<1>())) {
    res.status = Status::Infeasible;
    return res;
  }

  // Drive leftover artificials out of the basis; a row with no original-column pivot
  // is redundant and can be neutralized.
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] < n) continue;
    int pcol = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tb.t(i, j)) > 1e3 * tol) {
        pcol = j;
        break;
      }
    }
    if (pcol >= 0) tb.pivot(i, pcol);
  }

  // Phase 2: original costs; artificials barred from entering.
  for (int j = 0; j < total; ++j) tb.t(m, j) = j < n ? c(j) : 0.0;
  tb.t(m, total) = 0.0;
  for (int i = 0; i < m; ++i) {
    const int bj = tb.basis[i];
    const double cb = bj < n ? c(bj) : 0.0;
    if (cb != 0.0) tb.t.row(m) -= cb * tb.t.row(i);
  }
  for (int j = n; j < total; ++j) allowed[j] = false;
  st = run_simplex(tb, allowed, tol, max_iters);
  if (st != Status::Optimal) {
    res.status = st;
    return res;
  }

  res.status = Status::Optimal;
  res.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] < n) res.x(tb.basis[i]) = tb.t(i, total);
  res.objective = c.dot(res.x);

  // Duals: solve B^T y = c_B on the flipped system, then unflip.
  Matrix B(m, m);
  Vector cb(m);
  for (int i = 0; i < m; ++i) {
    const int bj = tb.basis[i];
    if (bj < n) {
      B.col(i) = A.col(bj);
      cb(i) = c(bj);
    } else {
      B.col(i) = Vector::Unit(m, bj - n);
      cb(i) = 0.0;
    }
  }
  Vector y = B.transpose().completeOrthogonalDecomposition().solve(cb);
  for (int i = 0; i < m; ++i) y(i) *= flip[i];
  res.duals = y;
  return res;
}

namespace {

// Standard-form embedding of a general LP: v = p - q with p,q >= 0, slacks on <= rows.
struct Embedding {
  Matrix A;
  Vector b;
  Vector c;
  int nv;  // original variable count
};

Embedding embed(const GeneralLp& lp) {
  const int nv = static_cast<int>(lp.c.size());
  const int me = static_cast<int>(lp.A_eq.rows());
  const int mi = static_cast<int>(lp.A_in.rows());
  if ((me > 0 && lp.A_eq.cols() != nv) || (mi > 0 && lp.A_in.cols() != nv))
    fail(Errc::InvalidArgument, "general LP: inconsistent sizes");
  Embedding em;
  em.nv = nv;
  const int cols = 2 * nv + mi;
  em.A = Matrix::Zero(me + mi, cols);
  em.b = Vector::Zero(me + mi);
  if (me > 0) {
    em.A.block(0, 0, me, nv) = lp.A_eq;
    em.A.block(0, nv, me, nv) = -lp.A_eq;
    em.b.head(me) = lp.b_eq;
  }
  if (mi > 0) {
    em.A.block(me, 0, mi, nv) = lp.A_in;
    em.A.block(me, nv, mi, nv) = -lp.A_in;
    em.A.block(me, 2 * nv, mi, mi) = Matrix::Identity(mi, mi);
    em.b.tail(mi) = lp.b_in;
  }
  em.c = Vector::Zero(cols);
  em.c.head(nv) = lp.c;
  em.c.segment(nv, nv) = -lp.c;
  return em;
}

}  // namespace

GeneralResult solve_general(const GeneralLp& lp, double tol, int max_iters) {
  const Embedding em = embed(lp);
  const Result r = solve_standard(em.A, em.b, em.c, tol, max_iters);
  GeneralResult out;
  out.status = r.status;
  if (r.status == Status::Optimal) {
    out.v = r.x.head(em.nv) - r.x.segment(em.nv, em.nv);
    out.objective = r.objective;
  }
  return out;
}

bool feasible(const GeneralLp& lp, double tol) {
  GeneralLp zero = lp;
  zero.c = Vector::Zero(lp.c.size());
  const GeneralResult r = solve_general(zero, tol);
  if (r.status == Status::IterLimit) fail(Errc::LpFailure, "simplex iteration limit in feasibility");
  return r.status == Status::Optimal;
}

L1MinFace l1_min_face(const Matrix& A, const Vector& b, double tol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Matrix F(m, 2 * n);
  F.leftCols(n) = A;
  F.rightCols(n) = -A;
  const Result r = solve_standard(F, b, Vector::Ones(2 * n), tol);
  L1MinFace face;
  if (r.status != Status::Optimal) return face;
  face.feasible = true;
  face.value = r.objective;
  face.x = r.x.head(n) - r.x.tail(n);
  Vector c = A.transpose() * r.duals;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = std::clamp(c(i), -1.0, 1.0);
  face.certificate = c;
  return face;
}

}  // namespace lassocert::lp
