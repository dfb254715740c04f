#include "trilat/membership.hpp"

#include <boost/rational.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace trilat {

std::int64_t integer_determinant(const Eigen::MatrixXi& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> a(static_cast<size_t>(n), std::vector<__int128>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = m(i, j);
  int sign = 1;
  __int128 prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      Eigen::Index p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return static_cast<std::int64_t>(sign * a[n - 1][n - 1]);
}

namespace {

using Rational = boost::rational<std::int64_t>;

Eigen::MatrixXd exact_inverse(const Eigen::MatrixXi& m) {
  const Eigen::Index n = m.rows();
  std::vector<std::vector<Rational>> a(static_cast<size_t>(n), std::vector<Rational>(2 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = m(i, j);
    a[i][n + i] = 1;
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && a[p][c].numerator() == 0) ++p;
    if (p == n) throw InvalidArgument("measurement matrix is singular");
    std::swap(a[c], a[p]);
    const Rational pivot = a[c][c];
    for (auto& x : a[c]) x /= pivot;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || a[r][c].numerator() == 0) continue;
      const Rational f = a[r][c];
      for (Eigen::Index j = 0; j < 2 * n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  Eigen::MatrixXd inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      inv(i, j) = boost::rational_cast<double>(a[i][n + j]);
  return inv;
}

}  // namespace

const Eigen::MatrixXd& rational_inverse(const Eigen::MatrixXi& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("inverse of a non-square matrix");
  static std::mutex mutex;
  static std::map<std::vector<int>, std::unique_ptr<Eigen::MatrixXd>> cache;
  std::vector<int> key;
  key.reserve(static_cast<size_t>(m.size()) + 1);
  key.push_back(static_cast<int>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) key.push_back(m(i, j));
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(std::move(key), std::make_unique<Eigen::MatrixXd>(exact_inverse(m))).first;
  return *it->second;
}

namespace {

MembershipVerdict verdict_for_lengths(LengthVector u, int d, double tol) {
  MembershipVerdict v;
  v.solved = std::move(u);
  const double scale = v.solved.cwiseAbs().mean();
  const SquaredDistanceVector sq = v.solved.cwiseProduct(v.solved);
  v.cm_residual = cayley_menger_normalized(sq, d);
  if (scale == 0.0 || !std::isfinite(scale)) return v;
  if ((v.solved.array() <= tol * scale).any()) return v;
  if (!(v.cm_residual < tol)) return v;
  if (!is_euclidean_realizable(sq, d, tol)) return v;
  v.member = true;
  v.recovered_lengths = v.solved;
  return v;
}

void check_tuple(std::span<const double> w, int d) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (static_cast<int>(w.size()) != edge_count(d + 2))
    throw InvalidArgument("membership needs exactly D = " + std::to_string(edge_count(d + 2)) +
                          " values");
  for (double x : w)
    if (!std::isfinite(x)) throw InvalidArgument("non-finite measurement value");
}

}  // namespace

MembershipVerdict membership_L(std::span<const double> w, const Eigen::MatrixXi& matrix, int d,
                               double tol) {
  check_tuple(w, d);
  if (matrix.rows() != static_cast<Eigen::Index>(w.size()) || matrix.cols() != matrix.rows())
    throw InvalidArgument("measurement matrix does not match the tuple size");
  const Eigen::MatrixXd& inv = rational_inverse(matrix);
  const Eigen::Index n = inv.rows();
  LengthVector u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    long double s = 0.0L;
    for (Eigen::Index j = 0; j < n; ++j) s += static_cast<long double>(inv(i, j)) * w[j];
    u(i) = static_cast<double>(s);
  }
  return verdict_for_lengths(std::move(u), d, tol);
}

MembershipVerdict membership_L(std::span<const double> w, const CanonicalMatrix& matrix,
                               double tol) {
  return membership_L(w, matrix.entries, matrix.dim, tol);
}

MembershipVerdict membership_L(std::span<const double> w, int d, double tol) {
  check_tuple(w, d);
  return verdict_for_lengths(Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()), d, tol);
}

std::string Stratum::describe() const {
  std::ostringstream os;
  switch (type) {
    case SingularType::kTypeI:
      os << "TypeI signs(s02,s12,s03,s13,s23)=(";
      for (size_t i = 0; i < signs.size(); ++i) os << (i ? "," : "") << signs[i];
      os << ")";
      break;
    case SingularType::kTypeII:
      os << "TypeII collapse " << collapsed.i << collapsed.j << " signs=(" << collapse_signs[0]
         << "," << collapse_signs[1] << ")";
      break;
    case SingularType::kTypeIII:
      os << "TypeIII triangle " << triangle[0] << triangle[1] << triangle[2];
      break;
  }
  return os.str();
}

namespace {

std::vector<Stratum> build_strata() {
  std::vector<Stratum> out;
  const int e01 = edge_index(0, 1), e02 = edge_index(0, 2), e12 = edge_index(1, 2);
  const int e03 = edge_index(0, 3), e13 = edge_index(1, 3), e23 = edge_index(2, 3);

  // Type I: collinear configurations. Sign patterns in lexicographic order, -1 before +1.
  for (int mask = 0; mask < 32; ++mask) {
    Stratum s;
    s.type = SingularType::kTypeI;
    for (int b = 0; b < 5; ++b) s.signs[b] = ((mask >> (4 - b)) & 1) ? 1 : -1;
    const auto [s02, s12, s03, s13, s23] = s.signs;
    s.equations = {};
    s.equations[0][e01] = 1;
    s.equations[0][e02] = -s02;
    s.equations[0][e12] = s12;
    s.equations[1][e01] = 1;
    s.equations[1][e03] = -s03;
    s.equations[1][e13] = s13;
    s.equations[2][e02] = s02;
    s.equations[2][e03] = -s03;
    s.equations[2][e23] = s23;
    out.push_back(s);
  }

  // Type II: a pair of vertices collapsed.
  for (int e = 0; e < 6; ++e) {
    const Edge ab = edge_at(e);
    std::array<int, 2> others{};
    int t = 0;
    for (int v = 0; v < 4; ++v)
      if (v != ab.i && v != ab.j) others[t++] = v;
    for (int mask = 0; mask < 4; ++mask) {
      Stratum s;
      s.type = SingularType::kTypeII;
      s.collapsed = ab;
      s.collapse_signs = {(mask & 2) ? 1 : -1, (mask & 1) ? 1 : -1};
      s.equations = {};
      s.equations[0][e] = 1;
      for (int r = 0; r < 2; ++r) {
        s.equations[r + 1][edge_index(ab.i, others[r])] = 1;
        s.equations[r + 1][edge_index(ab.j, others[r])] = -s.collapse_signs[r];
      }
      out.push_back(s);
    }
  }

  // Type III: a whole triangle collapsed.
  const std::array<std::array<int, 3>, 4> triangles{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  for (const auto& tri : triangles) {
    Stratum s;
    s.type = SingularType::kTypeIII;
    s.triangle = tri;
    s.equations = {};
    s.equations[0][edge_index(tri[0], tri[1])] = 1;
    s.equations[1][edge_index(tri[0], tri[2])] = 1;
    s.equations[2][edge_index(tri[1], tri[2])] = 1;
    out.push_back(s);
  }
  for (size_t i = 0; i < out.size(); ++i) out[i].ordinal = static_cast<int>(i);
  return out;
}

}  // namespace

const std::vector<Stratum>& singular_strata_L24() {
  static const std::vector<Stratum> strata = build_strata();
  return strata;
}

SingularityVerdict is_singular_L24(std::span<const double> l, double tol) {
  if (l.size() != 6) throw InvalidArgument("L_{2,4} singularity test needs 6 lengths");
  double scale = 0.0;
  for (double x : l) scale = std::max(scale, std::abs(x));
  SingularityVerdict v;
  const double thr = tol * scale;
  for (const auto& s : singular_strata_L24()) {
    bool all_vanish = true;
    for (const auto& eq : s.equations) {
      double val = 0.0;
      for (int c = 0; c < 6; ++c) val += eq[c] * l[c];
      if (std::abs(val) > thr) {
        all_vanish = false;
        break;
      }
    }
    if (all_vanish) {
      v.singular = true;
      v.stratum = s;
      return v;
    }
  }
  return v;
}

bool rank6_shortcut(std::span<const double> w, const Eigen::MatrixXi& matrix, int b, double tol,
                    double relation_tol) {
  if (w.size() != 6 || matrix.rows() != 6)
    throw InvalidArgument("the rank-6 shortcut only applies to d = 2");
  const MembershipVerdict m = membership_L(w, matrix, 2, tol);
  if (!m.member) return false;
  const LengthVector& u = *m.recovered_lengths;
  if (is_singular_L24(std::span<const double>(u.data(), 6), tol).singular) return false;
  return rational_rank_at_least(w.subspan(0, 3), 3, b, RankStrategy::kBrute, relation_tol).holds;
}

}  // namespace trilat
