#include "trilat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace trilat {

Configuration::Configuration(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() > 0 && rows_.cols() < 1) throw InvalidArgument("configuration needs dim >= 1");
}

Configuration::Configuration(int dim, const std::vector<std::vector<double>>& points) {
  if (dim < 1) throw InvalidArgument("configuration needs dim >= 1");
  rows_.resize(static_cast<Eigen::Index>(points.size()), dim);
  for (size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != dim)
      throw InvalidArgument("point " + std::to_string(i) + " has " +
                            std::to_string(points[i].size()) + " coordinates, expected " +
                            std::to_string(dim));
    for (int k = 0; k < dim; ++k) rows_(static_cast<Eigen::Index>(i), k) = points[i][k];
  }
}

std::vector<std::vector<double>> Configuration::to_vectors() const {
  std::vector<std::vector<double>> out(static_cast<size_t>(size()));
  for (int i = 0; i < size(); ++i) {
    out[i].resize(static_cast<size_t>(dim()));
    for (int k = 0; k < dim(); ++k) out[i][k] = rows_(i, k);
  }
  return out;
}

Configuration Configuration::subset(std::span<const int> indices) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), rows_.cols());
  for (size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] < 0 || indices[r] >= size()) throw InvalidArgument("subset index out of range");
    out.row(static_cast<Eigen::Index>(r)) = rows_.row(indices[r]);
  }
  return Configuration(std::move(out));
}

Configuration Configuration::scaled(double s) const { return Configuration(rows_ * s); }

void Configuration::append(const Eigen::VectorXd& p) {
  if (!empty() && p.size() != rows_.cols()) throw InvalidArgument("appended point has wrong dim");
  if (empty()) rows_.resize(0, p.size());
  rows_.conservativeResize(rows_.rows() + 1, Eigen::NoChange);
  rows_.row(rows_.rows() - 1) = p.transpose();
}

int edge_index(int i, int j) {
  if (i == j || i < 0 || j < 0) throw InvalidArgument("edge needs two distinct vertices");
  if (i > j) std::swap(i, j);
  return j * (j - 1) / 2 + i;
}

Edge edge_at(int index) {
  if (index < 0) throw InvalidArgument("negative edge index");
  int j = 1;
  while ((j + 1) * j / 2 <= index) ++j;
  return {index - j * (j - 1) / 2, j};
}

double squared_distance(const Configuration& cfg, int i, int j) {
  if (i < 0 || j < 0 || i >= cfg.size() || j >= cfg.size())
    throw InvalidArgument("vertex index out of range");
  return (cfg.rows().row(i) - cfg.rows().row(j)).squaredNorm();
}

SquaredDistanceVector measure_all_squared(const Configuration& cfg) {
  const int n = cfg.size();
  SquaredDistanceVector out(edge_count(n));
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) out(edge_index(i, j)) = squared_distance(cfg, i, j);
  return out;
}

LengthVector measure_all_lengths(const Configuration& cfg) {
  return measure_all_squared(cfg).cwiseSqrt();
}

namespace {

int checked_vertex_count(const SquaredDistanceVector& sq, int d) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  const int n = d + 2;
  if (sq.size() != edge_count(n))
    throw InvalidArgument("expected " + std::to_string(edge_count(n)) +
                          " squared lengths for d = " + std::to_string(d) + ", got " +
                          std::to_string(sq.size()));
  return n;
}

// Gram matrix of points 1..d+1 relative to point 0 (= G / 2).
Eigen::MatrixXd gram_from_squared(const SquaredDistanceVector& sq, int d) {
  const int k = d + 1;
  Eigen::MatrixXd g(k, k);
  for (int a = 1; a <= k; ++a) {
    g(a - 1, a - 1) = sq(edge_index(0, a));
    for (int b = a + 1; b <= k; ++b) {
      const double v = 0.5 * (sq(edge_index(0, a)) + sq(edge_index(0, b)) - sq(edge_index(a, b)));
      g(a - 1, b - 1) = v;
      g(b - 1, a - 1) = v;
    }
  }
  return g;
}

double mean_magnitude(const SquaredDistanceVector& sq) { return sq.cwiseAbs().mean(); }

}  // namespace

double cayley_menger_det(const SquaredDistanceVector& sq, int d) {
  checked_vertex_count(sq, d);
  const Eigen::MatrixXd g = 2.0 * gram_from_squared(sq, d);
  return g.fullPivLu().determinant();
}

double cayley_menger_normalized(const SquaredDistanceVector& sq, int d) {
  const double det = cayley_menger_det(sq, d);
  const double scale = mean_magnitude(sq);
  if (scale == 0.0) return 0.0;
  return std::abs(det) / std::pow(scale, d + 1);
}

bool cayley_menger_vanishes(const SquaredDistanceVector& sq, int d, double tol) {
  return cayley_menger_normalized(sq, d) < tol;
}

namespace {

enum class GramVerdict { kOk, kNotPsd, kTooManyDims, kDegenerate, kZero };

GramVerdict classify_gram(const Eigen::MatrixXd& gram, int d, double thr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  if (ev(0) < -thr) return GramVerdict::kNotPsd;
  if (ev(0) > thr) return GramVerdict::kTooManyDims;
  if (ev(1) < thr) return ev(ev.size() - 1) < thr ? GramVerdict::kZero : GramVerdict::kDegenerate;
  (void)d;
  return GramVerdict::kOk;
}

}  // namespace

bool is_euclidean_realizable(const SquaredDistanceVector& sq, int d, double tol) {
  checked_vertex_count(sq, d);
  if ((sq.array() < 0.0).any()) return false;
  const double scale = mean_magnitude(sq);
  if (scale == 0.0) return true;
  const auto v = classify_gram(gram_from_squared(sq, d), d, tol * scale);
  return v != GramVerdict::kNotPsd && v != GramVerdict::kTooManyDims;
}

Configuration embed_simplex(const SquaredDistanceVector& sq, int d, double tol) {
  const int n = checked_vertex_count(sq, d);
  if ((sq.array() < 0.0).any()) throw NotRealizable("negative squared length");
  const double scale = mean_magnitude(sq);
  if (scale == 0.0) throw Degenerate("all points coincide");
  const double thr = tol * scale;
  const Eigen::MatrixXd gram = gram_from_squared(sq, d);

  switch (classify_gram(gram, d, thr)) {
    case GramVerdict::kNotPsd:
      throw NotRealizable("Gram matrix is not positive semidefinite");
    case GramVerdict::kTooManyDims:
      throw NotRealizable("squared lengths need more than " + std::to_string(d) + " dimensions");
    case GramVerdict::kDegenerate:
    case GramVerdict::kZero:
      throw Degenerate("affine span has dimension < " + std::to_string(d));
    case GramVerdict::kOk:
      break;
  }

  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n, d);
  // Incremental Cholesky over points 1..d gives the lower-triangular frame.
  bool frame_ok = true;
  for (int a = 0; a < d && frame_ok; ++a) {
    for (int c = 0; c < a; ++c) {
      double s = gram(a, c);
      for (int k = 0; k < c; ++k) s -= pts(a + 1, k) * pts(c + 1, k);
      pts(a + 1, c) = s / pts(c + 1, c);
    }
    double pivot = gram(a, a);
    for (int k = 0; k < a; ++k) pivot -= pts(a + 1, k) * pts(a + 1, k);
    if (pivot <= thr) {
      frame_ok = false;
    } else {
      pts(a + 1, a) = std::sqrt(pivot);
    }
  }

  if (frame_ok) {
    // Last point: solve the d linear equations against points 1..d.
    for (int c = 0; c < d; ++c) {
      double s = gram(d, c);
      for (int k = 0; k < c; ++k) s -= pts(d + 1, k) * pts(c + 1, k);
      pts(d + 1, c) = s / pts(c + 1, c);
    }
    return Configuration(std::move(pts));
  }

  // Points 0..d are affinely dependent but the whole set spans R^d:
  // fall back to the top-d eigenvectors of the Gram matrix.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  for (int k = 0; k < d; ++k) {
    const int col = d - k;  // eigenvalues ascending; take the largest d
    const double lam = std::max(es.eigenvalues()(col), 0.0);
    Eigen::VectorXd v = es.eigenvectors().col(col);
    // deterministic sign: largest-magnitude entry positive
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    for (int a = 0; a <= d; ++a) pts(a + 1, k) = v(a) * std::sqrt(lam);
  }
  return Configuration(std::move(pts));
}

namespace {

void check_same_shape(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size() || a.dim() != b.dim())
    throw InvalidArgument("configurations differ in point count or dimension");
}

}  // namespace

bool are_congruent(const Configuration& a, const Configuration& b, double tol) {
  check_same_shape(a, b);
  const LengthVector la = measure_all_lengths(a);
  const LengthVector lb = measure_all_lengths(b);
  if (la.size() == 0) return true;
  const double scale = std::max(la.maxCoeff(), lb.maxCoeff());
  if (scale == 0.0) return true;
  return (la - lb).cwiseAbs().maxCoeff() <= tol * scale;
}

std::optional<double> are_similar_ordered(const Configuration& a, const Configuration& b,
                                          double tol) {
  check_same_shape(a, b);
  if (a.size() < 2) throw InvalidArgument("similarity needs at least two points");
  const LengthVector la = measure_all_lengths(a);
  const LengthVector lb = measure_all_lengths(b);
  const double norm_a = la.squaredNorm();
  if (norm_a == 0.0 || lb.squaredNorm() == 0.0) return std::nullopt;
  const double s = la.dot(lb) / norm_a;
  if (s <= 0.0) return std::nullopt;
  if ((lb - s * la).cwiseAbs().maxCoeff() > tol * s * la.maxCoeff()) return std::nullopt;
  return s;
}

Eigen::VectorXd align_onto(const Configuration& anchor_src, const Configuration& anchor_dst,
                           const Eigen::VectorXd& extra, double tol) {
  check_same_shape(anchor_src, anchor_dst);
  const int d = anchor_src.dim();
  if (anchor_src.size() != d + 1) throw InvalidArgument("align_onto needs d+1 anchors");
  if (extra.size() != d) throw InvalidArgument("extra point has wrong dimension");

  Eigen::MatrixXd src(d, d), dst(d, d);
  for (int k = 0; k < d; ++k) {
    src.col(k) = anchor_src.point(k + 1) - anchor_src.point(0);
    dst.col(k) = anchor_dst.point(k + 1) - anchor_dst.point(0);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_src(src);
  const auto& sv = svd_src.singularValues();
  if (sv(0) == 0.0 || sv(d - 1) <= tol * sv(0)) throw AnchorsDegenerate("anchors do not span R^d");

  // Orthogonal Procrustes between the two anchor frames (reflections allowed).
  const Eigen::MatrixXd cross = dst * src.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
  return anchor_dst.point(0) + rot * (extra - anchor_src.point(0));
}

double diameter(const Configuration& cfg) {
  double best = 0.0;
  for (int j = 1; j < cfg.size(); ++j)
    for (int i = 0; i < j; ++i) best = std::max(best, squared_distance(cfg, i, j));
  return std::sqrt(best);
}

double min_pairwise_distance(const Configuration& cfg) {
  if (cfg.size() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j < cfg.size(); ++j)
    for (int i = 0; i < j; ++i) best = std::min(best, squared_distance(cfg, i, j));
  return std::sqrt(best);
}

}  // namespace trilat
