#include "lassocert/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <limits>

#include "lassocert/linalg.hpp"
#include "lassocert/qp.hpp"
#include "lassocert/simplex.hpp"

namespace lassocert::geometry {

using nlohmann::json;

namespace {

constexpr double kVertexFeasTol = 1e-9;
constexpr double kVertexDedupeTol = 1e-9;

}  // namespace

std::pair<Matrix, Vector> SolutionFace::equalities() const {
  const Eigen::Index rows = eq_A.rows() + static_cast<Eigen::Index>(zero.size());
  Matrix A = Matrix::Zero(rows, n);
  Vector rhs = Vector::Zero(rows);
  if (eq_A.rows() > 0) {
    A.topRows(eq_A.rows()) = eq_A;
    rhs.head(eq_A.rows()) = eq_rhs;
  }
  for (std::size_t k = 0; k < zero.size(); ++k)
    A(eq_A.rows() + static_cast<Eigen::Index>(k), zero[k]) = 1.0;
  return {A, rhs};
}

std::pair<Matrix, Vector> SolutionFace::inequalities() const {
  const Eigen::Index rows =
      static_cast<Eigen::Index>(nonneg.size() + nonpos.size()) + ineq_A.rows();
  Matrix G = Matrix::Zero(rows, n);
  Vector h = Vector::Zero(rows);
  Eigen::Index r = 0;
  for (const int i : nonneg) G(r++, i) = -1.0;  // -x_i <= 0
  for (const int i : nonpos) G(r++, i) = 1.0;   //  x_i <= 0
  if (ineq_A.rows() > 0) {
    G.bottomRows(ineq_A.rows()) = ineq_A;
    h.tail(ineq_A.rows()) = ineq_rhs;
  }
  return {G, h};
}

bool SolutionFace::contains(const Vector& x, double tol) const {
  const auto [A, rhs] = equalities();
  if (A.rows() > 0 && (A * x - rhs).lpNorm<Eigen::Infinity>() > tol) return false;
  const auto [G, h] = inequalities();
  if (G.rows() > 0 && ((G * x - h).array() > tol).any()) return false;
  return true;
}

namespace {

void dedupe_vertices(std::vector<Vector>& verts) {
  std::vector<Vector> out;
  for (const Vector& v : verts) {
    bool seen = false;
    for (const Vector& w : out) {
      if ((v - w).lpNorm<Eigen::Infinity>() <= kVertexDedupeTol) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(v);
  }
  verts = std::move(out);
}

// Vertices = feasible solutions of rank-n active-constraint subsets.
std::vector<Vector> enumerate_vertices(const SolutionFace& face) {
  const auto [Aeq, beq] = face.equalities();
  const auto [G, h] = face.inequalities();
  const int n = face.n;
  const int mi = static_cast<int>(G.rows());

  const int rank_eq = linalg::rank_svd(Aeq, 1e-12).rank;
  const int d = n - rank_eq;
  std::vector<Vector> verts;

  const double scale = 1.0 + (beq.size() ? beq.cwiseAbs().maxCoeff() : 0.0) +
                       (h.size() ? h.cwiseAbs().maxCoeff() : 0.0);
  auto try_candidate = [&](const Matrix& C, const Vector& rhs) {
    if (linalg::rank_svd(C, 1e-12).rank < n) return;
    Vector x = linalg::least_norm_solve(C, rhs);
    if (!x.allFinite()) return;
    // Snap solver noise on (numerically) zero coordinates; exact zeros matter to
    // sign-based consumers of the vertex list.
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (std::abs(x(i)) <= kVertexFeasTol * scale) x(i) = 0.0;
    if ((C * x - rhs).lpNorm<Eigen::Infinity>() > kVertexFeasTol * scale) return;
    if (Aeq.rows() > 0 && (Aeq * x - beq).lpNorm<Eigen::Infinity>() > kVertexFeasTol * scale) return;
    if (G.rows() > 0 && ((G * x - h).array() > kVertexFeasTol * scale).any()) return;
    verts.push_back(x);
  };

  if (d <= 0) {
    try_candidate(Aeq, beq);
  } else {
    std::vector<int> pick(d);
    for (int i = 0; i < d; ++i) pick[i] = i;
    if (mi >= d) {
      while (true) {
        Matrix C(Aeq.rows() + d, n);
        Vector rhs(Aeq.rows() + d);
        if (Aeq.rows() > 0) {
          C.topRows(Aeq.rows()) = Aeq;
          rhs.head(Aeq.rows()) = beq;
        }
        for (int i = 0; i < d; ++i) {
          C.row(Aeq.rows() + i) = G.row(pick[i]);
          rhs(Aeq.rows() + i) = h(pick[i]);
        }
        try_candidate(C, rhs);
        // next combination
        int k = d - 1;
        while (k >= 0 && pick[k] == mi - d + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int j = k + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
  }
  dedupe_vertices(verts);
  return verts;
}

}  // namespace

const std::vector<Vector>& vertices(SolutionFace& face) {
  if (face.is_empty) fail(Errc::EmptyFace, "cannot enumerate vertices of an empty face");
  if (face.verts.empty()) {
    face.verts = enumerate_vertices(face);
    if (face.verts.empty()) face.is_empty = true;
  }
  if (face.is_empty) fail(Errc::EmptyFace, "face has no vertices");
  return face.verts;
}

double distance_to_face(const Vector& point, SolutionFace& face) {
  const std::vector<Vector>& verts = vertices(face);
  if (verts.size() == 1) return (verts.front() - point).norm();
  // Feasible start: the nearest cached vertex.
  std::size_t best = 0;
  double bestd = (verts[0] - point).norm();
  for (std::size_t i = 1; i < verts.size(); ++i) {
    const double d = (verts[i] - point).norm();
    if (d < bestd) {
      bestd = d;
      best = i;
    }
  }
  const auto [Aeq, beq] = face.equalities();
  const auto [G, h] = face.inequalities();
  const qp::Projection proj = qp::project({Aeq, beq, G, h}, point, verts[best]);
  return proj.distance;
}

SolutionFace face_from_image(const ProblemInstance& p, const Vector& y_hat, double active_tol) {
  if (y_hat.size() != p.m()) fail(Errc::InvalidArgument, "face_from_image: y_hat has wrong length");
  const Matrix& A = p.A();
  SolutionFace face;
  face.n = p.n();

  Vector cert;
  Vector rhs = y_hat;
  if (p.loss().kind() == LossKind::L2Squared) {
    cert = A.transpose() * (p.b() - y_hat) / p.lambda();
  } else if (p.loss().kind() == LossKind::L2Norm) {
    const double nr = (y_hat - p.b()).norm();
    if (nr > p.smooth_tol()) {
      cert = A.transpose() * (p.b() - y_hat) / (p.lambda() * nr);
    } else {
      // Ax = b regime: the solution set is the optimal face of min ||x||_1 over Ax = b.
      const lp::L1MinFace l1 = lp::l1_min_face(A, p.b());
      if (!l1.feasible) fail(Errc::CertificateViolation, "l1-minimization over Ax = b infeasible");
      cert = l1.certificate;
      rhs = p.b();
    }
  } else {
    fail(Errc::WrongLoss, "face_from_image supports the built-in losses only");
  }

  if (cert.lpNorm<Eigen::Infinity>() > 1.0 + active_tol)
    fail(Errc::CertificateViolation, "y_hat is not an optimal image: dual certificate exceeds 1");

  for (int i = 0; i < p.n(); ++i) {
    if (cert(i) >= 1.0 - active_tol)
      face.nonneg.push_back(i);
    else if (cert(i) <= -1.0 + active_tol)
      face.nonpos.push_back(i);
    else
      face.zero.push_back(i);
  }
  face.eq_A = A;
  face.eq_rhs = rhs;
  face.is_empty = false;
  face.verts = enumerate_vertices(face);
  face.is_empty = face.verts.empty();
  return face;
}

SolutionFace s_pattern(const ProblemInstance& p, const SignPattern& pattern, double lp_tol) {
  if (p.loss().kind() != LossKind::L2Squared)
    fail(Errc::WrongLoss, "s_pattern needs the squared loss (use face_from_image otherwise)");
  const Matrix& A = p.A();
  const double lam = p.lambda();
  SolutionFace face;
  face.n = p.n();

  IndexSet onpat = set_union(pattern.J1, pattern.J2);
  face.nonneg = pattern.J1;
  face.nonpos = pattern.J2;
  face.zero = complement(onpat, p.n());

  // Stationarity rows: A_i^T A x = A_i^T b - lam (i in J1), + lam (i in J2);
  // off-pattern rows bounded in [-lam, +lam].
  const Matrix G = A.transpose() * A;   // row i = A_i^T A
  const Vector atb = A.transpose() * p.b();
  const Eigen::Index ne = static_cast<Eigen::Index>(onpat.size());
  face.eq_A = Matrix::Zero(ne, p.n());
  face.eq_rhs = Vector::Zero(ne);
  Eigen::Index r = 0;
  for (const int i : pattern.J1) {
    face.eq_A.row(r) = G.row(i);
    face.eq_rhs(r++) = atb(i) - lam;
  }
  for (const int i : pattern.J2) {
    face.eq_A.row(r) = G.row(i);
    face.eq_rhs(r++) = atb(i) + lam;
  }
  const IndexSet off = face.zero;
  face.ineq_A = Matrix::Zero(2 * static_cast<Eigen::Index>(off.size()), p.n());
  face.ineq_rhs = Vector::Zero(2 * static_cast<Eigen::Index>(off.size()));
  r = 0;
  for (const int k : off) {
    face.ineq_A.row(r) = G.row(k);
    face.ineq_rhs(r++) = atb(k) + lam;
    face.ineq_A.row(r) = -G.row(k);
    face.ineq_rhs(r++) = -atb(k) + lam;
  }

  // Emptiness decided by LP feasibility on the assembled description.
  const auto [Aeq, beq] = face.equalities();
  const auto [Gin, hin] = face.inequalities();
  lp::GeneralLp sys{Aeq, beq, Gin, hin, Vector::Zero(p.n())};
  if (!lp::feasible(sys, lp_tol)) {
    face.is_empty = true;
    return face;
  }
  face.is_empty = false;
  face.verts = enumerate_vertices(face);
  face.is_empty = face.verts.empty();
  return face;
}

std::map<SignPattern, SolutionFace> decompose(const ProblemInstance& p) {
  if (p.loss().kind() != LossKind::L2Squared)
    fail(Errc::WrongLoss, "decompose needs the squared loss");
  if (p.n() > 8) fail(Errc::TooLarge, "pattern enumeration is limited to n <= 8");

  std::map<SignPattern, SolutionFace> faces;
  const int n = p.n();
  std::vector<int> assign(n, 0);  // 0 = off, 1 = J1, 2 = J2
  while (true) {
    SignPattern pat;
    for (int i = 0; i < n; ++i) {
      if (assign[i] == 1) pat.J1.push_back(i);
      if (assign[i] == 2) pat.J2.push_back(i);
    }
    SolutionFace face = s_pattern(p, pat);
    if (!face.is_empty) faces.emplace(std::move(pat), std::move(face));
    int k = n - 1;
    while (k >= 0 && assign[k] == 2) assign[k--] = 0;
    if (k < 0) break;
    ++assign[k];
  }
  return faces;
}

double excess(SolutionFace& P, SolutionFace& Q) {
  double e = 0.0;
  for (const Vector& v : vertices(P)) e = std::max(e, distance_to_face(v, Q));
  return e;
}

double hausdorff(SolutionFace& P, SolutionFace& Q) {
  return std::max(excess(P, Q), excess(Q, P));
}

std::vector<Vector> brute_force_solutions(const ProblemInstance& p, double box_radius,
                                          double grid_step) {
  if (p.n() > 3) fail(Errc::TooLarge, "grid oracle is limited to n <= 3");
  if (!(grid_step > 0.0) || box_radius < grid_step)
    fail(Errc::InvalidArgument, "empty grid: need box_radius >= grid_step > 0");

  const int n = p.n();
  const int steps = static_cast<int>(std::floor(2.0 * box_radius / grid_step)) + 1;
  std::vector<int> idx(n, 0);
  Vector x(n);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Vector>> near;

  while (true) {
    for (int i = 0; i < n; ++i) x(i) = -box_radius + grid_step * idx[i];
    const double val = p.objective(x);
    if (val <= best + 1e-6) {
      if (val < best) best = val;
      near.emplace_back(val, x);
      if (near.size() > 65536) {
        std::erase_if(near, [&](const auto& pr) { return pr.first > best + 1e-6; });
      }
    }
    int k = n - 1;
    while (k >= 0 && idx[k] == steps - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  std::vector<Vector> cloud;
  for (const auto& [val, pt] : near)
    if (val <= best + 1e-6) cloud.push_back(pt);
  return cloud;
}

json face_to_json(const SolutionFace& face) {
  json doc;
  doc["n"] = face.n;
  auto mat = [](const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  auto vec = [](const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); };
  doc["equalities"] = {{"A", mat(face.eq_A)}, {"rhs", vec(face.eq_rhs)}};
  doc["inequalities"] = {{"A", mat(face.ineq_A)}, {"rhs", vec(face.ineq_rhs)}};
  doc["nonneg"] = json(face.nonneg);
  doc["nonpos"] = json(face.nonpos);
  doc["zero"] = json(face.zero);
  json verts = json::array();
  for (const Vector& v : face.verts) verts.push_back(vec(v));
  doc["vertices"] = std::move(verts);
  doc["empty"] = face.is_empty;
  return doc;
}

SolutionFace face_from_json(const json& doc) {
  SolutionFace face;
  try {
    face.n = doc.at("n").get<int>();
    auto mat = [&](const json& rows, Eigen::Index cols) {
      Matrix M(static_cast<Eigen::Index>(rows.size()), cols);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (Eigen::Index j = 0; j < cols; ++j) M(static_cast<Eigen::Index>(i), j) = rows[i][j].get<double>();
      return M;
    };
    auto vec = [](const json& arr) {
      Vector v(static_cast<Eigen::Index>(arr.size()));
      for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
      return v;
    };
    face.eq_A = mat(doc.at("equalities").at("A"), face.n);
    face.eq_rhs = vec(doc.at("equalities").at("rhs"));
    face.ineq_A = mat(doc.at("inequalities").at("A"), face.n);
    face.ineq_rhs = vec(doc.at("inequalities").at("rhs"));
    face.nonneg = doc.at("nonneg").get<IndexSet>();
    face.nonpos = doc.at("nonpos").get<IndexSet>();
    face.zero = doc.at("zero").get<IndexSet>();
    for (const json& jv : doc.at("vertices")) face.verts.push_back(vec(jv));
    face.is_empty = doc.at("empty").get<bool>();
  } catch (const json::exception& e) {
    fail(Errc::ParseError, std::string("invalid face document: ") + e.what());
  }
  return face;
}

SolutionFace load_face(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open face file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return face_from_json(doc);
}

void save_face(const SolutionFace& face, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::IoError, "cannot write face file: " + path);
  out << face_to_json(face).dump(2) << "\n";
}

}  // namespace lassocert::geometry
