#include "trilat/reconstruct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace trilat {

RankStrategy effective_strategy(const ReconstructOptions& options, int d) {
  if (options.strategy) return *options.strategy;
  return d == 2 ? RankStrategy::kBrute : RankStrategy::kReduced;
}

int PartialReconstruction::explained_count() const {
  return static_cast<int>(std::count_if(consumed.begin(), consumed.end(), [](int c) { return c > 0; }));
}

namespace {

int effective_bound(const DataSet& data, const ReconstructOptions& o) {
  return std::max(1, o.bound_override > 0 ? o.bound_override : data.bound);
}

void check_data(const DataSet& data) {
  if (data.dim < 2) throw InvalidArgument("reconstruction needs d >= 2 (d = 1 is ambiguous)");
  for (double v : data.values)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("data values must be positive");
}

// Data values sorted ascending, for range queries.
class ValueTable {
 public:
  explicit ValueTable(const std::vector<double>& values) {
    order_.resize(values.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    sorted_.reserve(values.size());
    for (int i : order_) sorted_.push_back(values[i]);
  }

  template <class F>
  void for_range(double lo, double hi, F&& f) const {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), lo);
    for (; it != sorted_.end() && *it <= hi; ++it) {
      const size_t pos = static_cast<size_t>(it - sorted_.begin());
      if (!f(order_[pos], *it)) return;
    }
  }

 private:
  std::vector<int> order_;
  std::vector<double> sorted_;
};

bool certify_rank(std::span<const double> w, const Eigen::MatrixXi& matrix, int d, int b,
                  const ReconstructOptions& o) {
  const RankStrategy s = effective_strategy(o, d);
  if (d == 2 && s == RankStrategy::kBrute)
    return rank6_shortcut(w, matrix, b, o.tol, o.relation_tol);
  return rational_rank_at_least(w, static_cast<int>(w.size()), b, s, o.relation_tol,
                                o.restricted_ensemble)
      .holds;
}

const Eigen::MatrixXi& identity_matrix(int size) {
  static thread_local std::vector<Eigen::MatrixXi> cache;
  for (const auto& m : cache)
    if (m.rows() == size) return m;
  cache.push_back(Eigen::MatrixXi::Identity(size, size));
  return cache.back();
}

double explanation_gap(const std::vector<Explanation>& labeling, size_t from,
                       const Configuration& cfg, const DataSet& data) {
  double worst = 0.0;
  for (size_t k = from; k < labeling.size(); ++k) {
    const Explanation& e = labeling[k];
    const double v = data.values.at(static_cast<size_t>(e.value_index));
    const double re = apply_functional(functional_from_path(e.path, cfg.size()), cfg);
    worst = std::max(worst, std::abs(re - v) / v);
  }
  return worst;
}

bool well_separated(const Configuration& cfg, double tol) {
  const double diam = diameter(cfg);
  return diam > 0.0 && min_pairwise_distance(cfg) > tol * diam;
}

// Depth-first search over ordered D-tuples describing a K_{d+2}.
//
// Vertices are placed one at a time in a lower-triangular frame: vertex q has
// coordinates along axes 0..q-1 only. Slot (m, q) holds the value that fixes
// the distance between vertex m and an earlier vertex q (an edge in path mode;
// a ping for q = 0 or a triangle through vertex 0 in loop mode). Each slot is
// restricted to the values compatible with the points placed so far, and the
// final slot is predicted and looked up.
class BaseSearch {
 public:
  static constexpr int kMaxDim = 6;

  BaseSearch(const DataSet& data, const ReconstructOptions& o)
      : data_(data), o_(o), d_(data.dim), table_(data.values),
        used_(data.values.size(), 0), bound_(effective_bound(data, o)) {
    if (d_ > kMaxDim) throw InvalidArgument("base search supports d <= 6");
    const int n = d_ + 2;
    for (auto& row : idx_) row.fill(-1);
    if (data.mode == Mode::kLoop) {
      matrix_ = canonical_matrix(CanonicalKind::kBase, d_);
      for (int m = 1; m <= d_ + 1; ++m) {
        row_slots_.push_back({m, 0});
        for (int j = 1; j < m; ++j) row_slots_.push_back({m, j});
      }
    } else {
      for (int e = 0; e < edge_count(n); ++e) {
        const Edge edge = edge_at(e);
        row_slots_.push_back({edge.j, edge.i});
      }
    }
  }

  std::vector<CandidateBase> run() {
    if (static_cast<int>(data_.values.size()) >= edge_count(d_ + 2)) place(1, 0);
    return std::move(found_);
  }

 private:
  using Row = std::array<double, kMaxDim + 2>;

  bool loop() const { return data_.mode == Mode::kLoop; }

  double value_of(int m, int q, double r) const {
    if (!loop()) return r;
    if (q == 0) return 2.0 * r;
    return r + dist_[q][0] + dist_[m][0];
  }
  double distance_of(int m, int q, double v) const {
    if (!loop()) return v;
    if (q == 0) return 0.5 * v;
    return v - dist_[q][0] - dist_[m][0];
  }

  // Minimum value index allowed in slot (m, q) by the labeling symmetry.
  // Loop mode: pings increase with the vertex. Path mode: edge 01 carries the
  // smallest index, edges at vertex 0 increase, and edge 02 is below every
  // other edge at vertex 1.
  int min_index(int m, int q) const {
    if (loop()) return (q == 0 && m >= 2) ? idx_[m - 1][0] + 1 : 0;
    if (m == 1) return 0;
    int lo = idx_[1][0] + 1;
    if (q == 0 && m >= 3) lo = std::max(lo, idx_[m - 1][0] + 1);
    if (q == 1) lo = std::max(lo, idx_[2][0] + 1);
    return lo;
  }

  // Sets coordinate q-1 of vertex m from its distance to vertex q >= 1 and
  // updates the squared norm left for the later axes.
  void advance(int m, int q) {
    const Row& p = pts_[q];
    const double r0 = dist_[m][0], r = dist_[m][q];
    double rhs = 0.5 * (r0 * r0 + norm2_[q] - r * r);
    for (int k = 0; k < q - 1; ++k) rhs -= coord_[m][k] * p[k];
    const double x = rhs / p[q - 1];
    coord_[m][q - 1] = x;
    rem_[m][q] = rem_[m][q - 1] - x * x;
  }

  double slack(double v) const { return o_.lookup_window * std::max(1.0, std::abs(v)); }

  void place(int m, int q) {
    const bool last_vertex = m == d_ + 1;
    if (last_vertex && q == d_) {
      predict_last();
      return;
    }
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    if (q > 0) {
      const double rho2 = rem_[m][q - 1];
      if (rho2 < -o_.tol * rem_[m][0]) return;
      const double rho = std::sqrt(std::max(rho2, 0.0));
      const Row& p = pts_[q];
      double a = 0.0;
      for (int k = 0; k < q - 1; ++k) a += (coord_[m][k] - p[k]) * (coord_[m][k] - p[k]);
      const double h = p[q - 1];
      lo = value_of(m, q, std::sqrt(a + (rho - h) * (rho - h)));
      hi = value_of(m, q, std::sqrt(a + (rho + h) * (rho + h)));
      lo -= slack(lo);
      hi += slack(hi);
    }
    const int min_idx = min_index(m, q);
    table_.for_range(lo, hi, [&](int vi, double v) {
      if (used_[vi] || vi < min_idx) return true;
      const double r = distance_of(m, q, v);
      if (!(r > 0.0)) return true;
      used_[vi] = 1;
      idx_[m][q] = vi;
      dist_[m][q] = dist_[q][m] = r;
      if (q == 0) {
        rem_[m][0] = r * r;
      } else {
        advance(m, q);
      }
      if (q + 1 < m && !(last_vertex && q + 1 > d_)) {
        place(m, q + 1);
      } else if (!last_vertex) {
        complete_vertex(m);
      }
      used_[vi] = 0;
      idx_[m][q] = -1;
      return true;
    });
  }

  void complete_vertex(int m) {
    const double height2 = rem_[m][m - 1];
    double scale = 0.0;
    for (int q = 0; q < m; ++q) scale = std::max(scale, dist_[m][q]);
    if (height2 <= o_.tol * scale * scale) return;
    pts_[m] = Row{};
    for (int k = 0; k < m - 1; ++k) pts_[m][k] = coord_[m][k];
    pts_[m][m - 1] = std::sqrt(height2);
    norm2_[m] = rem_[m][0];
    place(m + 1, 0);
  }

  void predict_last() {
    const int m = d_ + 1;
    const double rho2 = rem_[m][d_ - 1];
    if (rho2 < -o_.tol * rem_[m][0]) return;
    const double rho = std::sqrt(std::max(rho2, 0.0));
    const Row& p = pts_[d_];
    double a = 0.0;
    for (int k = 0; k < d_ - 1; ++k) a += (coord_[m][k] - p[k]) * (coord_[m][k] - p[k]);
    const double h = p[d_ - 1];
    const int min_idx = min_index(m, d_);
    int first = -1;
    for (int c = 0; c < (rho > 0.0 ? 2 : 1); ++c) {
      const double t = c == 0 ? rho - h : -rho - h;
      const double v = value_of(m, d_, std::sqrt(a + t * t));
      table_.for_range(v - slack(v), v + slack(v), [&](int vi, double) {
        if (used_[vi] || vi < min_idx || vi == first) return true;
        if (c == 0) first = vi;
        idx_[m][d_] = vi;
        validate();
        idx_[m][d_] = -1;
        return true;
      });
    }
  }

  void validate() {
    const int D = edge_count(d_ + 2);
    std::vector<int> indices(D);
    std::vector<double> w(D);
    for (int r = 0; r < D; ++r) {
      indices[r] = idx_[row_slots_[r].first][row_slots_[r].second];
      w[r] = data_.values[indices[r]];
    }
    std::vector<int> key = indices;
    std::sort(key.begin(), key.end());
    if (seen_.count(key)) return;

    const Eigen::MatrixXi& matrix = loop() ? matrix_.entries : identity_matrix(D);
    const MembershipVerdict mv = loop() ? membership_L(w, matrix_, o_.tol)
                                        : membership_L(w, d_, o_.tol);
    if (!mv.member) return;
    if (!certify_rank(w, matrix, d_, bound_, o_)) return;
    Configuration embedded;
    try {
      const LengthVector& u = *mv.recovered_lengths;
      embedded = embed_simplex(u.cwiseProduct(u), d_, o_.tol);
    } catch (const Degenerate&) {
      return;
    } catch (const NotRealizable&) {
      return;
    }
    if (!well_separated(embedded, o_.min_separation)) return;

    CandidateBase base;
    base.value_indices = indices;
    base.embedded = std::move(embedded);
    base.mode = data_.mode;
    base.matrix = CanonicalKind::kBase;
    for (int r = 0; r < D; ++r) {
      Path p = loop() ? matrix_.rows[r]
                      : Path{{row_slots_[r].second, row_slots_[r].first}};
      base.labeling.push_back({indices[r], std::move(p)});
    }
    if (explanation_gap(base.labeling, 0, base.embedded, data_) > o_.explain_tol) return;
    seen_.insert(key);
    found_.push_back(std::move(base));
  }

  const DataSet& data_;
  const ReconstructOptions& o_;
  int d_;
  ValueTable table_;
  std::vector<char> used_;
  int bound_;
  CanonicalMatrix matrix_;
  std::vector<std::pair<int, int>> row_slots_;  // (vertex, earlier vertex) per matrix row
  std::array<std::array<int, kMaxDim + 2>, kMaxDim + 2> idx_{};
  std::array<Row, kMaxDim + 2> dist_{};
  std::array<Row, kMaxDim + 2> pts_{};    // placed vertices
  std::array<double, kMaxDim + 2> norm2_{};
  std::array<Row, kMaxDim + 2> coord_{};  // coordinates of vertices being placed
  std::array<Row, kMaxDim + 2> rem_{};    // rem_[m][t]: squared norm beyond axis t-1
  std::set<std::vector<int>> seen_;
  std::vector<CandidateBase> found_;
};

// Points at the given distances from d centers in R^d (0, 1 or 2 of them).
std::vector<Eigen::VectorXd> sphere_intersections(const std::vector<Eigen::VectorXd>& centers,
                                                  const std::vector<double>& radii, double tol) {
  const int d = static_cast<int>(centers[0].size());
  const Eigen::VectorXd& c0 = centers[0];
  Eigen::MatrixXd a(d - 1, d);
  Eigen::VectorXd rhs(d - 1);
  for (int k = 1; k < d; ++k) {
    const Eigen::VectorXd diff = centers[k] - c0;
    a.row(k - 1) = 2.0 * diff.transpose();
    rhs(k - 1) = radii[0] * radii[0] - radii[k] * radii[k] + diff.squaredNorm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() > 0 && sv(sv.size() - 1) <= tol * sv(0)) return {};
  const Eigen::VectorXd y = svd.solve(rhs);
  const Eigen::VectorXd normal = svd.matrixV().col(d - 1);
  const double t2 = radii[0] * radii[0] - y.squaredNorm();
  const double scale = radii[0] * radii[0];
  if (t2 < -1e-6 * scale) return {};
  const double t = std::sqrt(std::max(t2, 0.0));
  if (t <= 1e-12 * radii[0]) return {c0 + y};
  return {c0 + y + t * normal, c0 + y - t * normal};
}

// Search for one trilateration step; see trilaterate_step.
class StepSearch {
 public:
  StepSearch(const PartialReconstruction& partial, const DataSet& data,
             const ReconstructOptions& o)
      : partial_(partial), data_(data), o_(o), d_(data.dim), table_(data.values),
        bound_(effective_bound(data, o)), m_(partial.points.size()) {
    used_.resize(data.values.size());
    for (size_t i = 0; i < used_.size(); ++i) used_[i] = partial.consumed[i] > 0;
    dist_ = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        if (i != j) dist_(i, j) = std::sqrt(squared_distance(partial.points, i, j));
    diam_ = dist_.size() ? dist_.maxCoeff() : 0.0;
    if (data.mode == Mode::kLoop) matrix_ = canonical_matrix(CanonicalKind::kTrilat, d_);
  }

  std::optional<PartialReconstruction> run() {
    if (m_ < d_ + 1) return std::nullopt;
    if (data_.mode == Mode::kLoop) {
      for (int hub = 0; hub < m_ && !result_; ++hub) {
        for (int vi = 0; vi < static_cast<int>(data_.values.size()) && !result_; ++vi) {
          if (used_[vi]) continue;
          used_[vi] = 1;
          hub_ = hub;
          ping_ = vi;
          hub_r_ = 0.5 * data_.values[vi];
          choose_loop_partner(0);
          used_[vi] = 0;
        }
      }
    } else {
      choose_edge(0);
    }
    return std::move(result_);
  }

 private:
  double slack(double v) const { return o_.lookup_window * std::max(1.0, std::abs(v)); }

  // Loop mode: partners[k] with triangle value through the hub.
  void choose_loop_partner(int k) {
    if (result_) return;
    if (k == d_ - 1) {
      finish_loop();
      return;
    }
    const int start = k == 0 ? 0 : partners_[k - 1] + 1;
    for (int j = start; j < m_ && !result_; ++j) {
      if (j == hub_) continue;
      const double l_hub = dist_(hub_, j);
      const double lo_r = std::abs(hub_r_ - l_hub), hi_r = hub_r_ + l_hub;
      const double lo = hub_r_ + l_hub + lo_r, hi = hub_r_ + l_hub + hi_r;
      partners_.resize(k + 1);
      values_.resize(k + 1);
      radii_.resize(k + 1);
      partners_[k] = j;
      table_.for_range(lo - slack(lo), hi + slack(hi), [&](int vi, double v) {
        if (used_[vi]) return true;
        const double r = v - hub_r_ - l_hub;
        if (!(r > 0.0)) return true;
        used_[vi] = 1;
        values_[k] = vi;
        radii_[k] = r;
        choose_loop_partner(k + 1);
        used_[vi] = 0;
        return !result_;
      });
    }
  }

  void finish_loop() {
    std::vector<Eigen::VectorXd> centers{partial_.points.point(hub_)};
    std::vector<double> radii{hub_r_};
    for (int k = 0; k < d_ - 1; ++k) {
      centers.push_back(partial_.points.point(partners_[k]));
      radii.push_back(radii_[k]);
    }
    for (const auto& x : sphere_intersections(centers, radii, o_.tol)) {
      for (int j = 0; j < m_ && !result_; ++j) {
        if (j == hub_ || std::find(partners_.begin(), partners_.end(), j) != partners_.end())
          continue;
        const double v = hub_r_ + dist_(hub_, j) + (x - partial_.points.point(j)).norm();
        table_.for_range(v - slack(v), v + slack(v), [&](int vi, double) {
          if (used_[vi]) return true;
          std::vector<int> anchors{hub_};
          anchors.insert(anchors.end(), partners_.begin(), partners_.end());
          anchors.push_back(j);
          std::vector<int> vals{ping_};
          vals.insert(vals.end(), values_.begin(), values_.end());
          vals.push_back(vi);
          try_step(anchors, vals);
          return !result_;
        });
      }
      if (result_) return;
    }
  }

  // Path mode: partners[k] joined to the new point by one edge value.
  void choose_edge(int k) {
    if (result_) return;
    if (k == d_) {
      finish_path();
      return;
    }
    const int start = k == 0 ? 0 : partners_[k - 1] + 1;
    for (int j = start; j < m_ && !result_; ++j) {
      double lo = 0.0, hi = std::numeric_limits<double>::infinity();
      if (k > 0) {
        lo = std::abs(radii_[0] - dist_(partners_[0], j));
        hi = radii_[0] + dist_(partners_[0], j);
      }
      partners_.resize(k + 1);
      values_.resize(k + 1);
      radii_.resize(k + 1);
      partners_[k] = j;
      table_.for_range(lo - slack(lo), hi + slack(hi), [&](int vi, double v) {
        if (used_[vi]) return true;
        for (int q = 1; q < k; ++q) {
          const double l = dist_(partners_[q], j);
          if (v < std::abs(radii_[q] - l) - slack(v) || v > radii_[q] + l + slack(v)) return true;
        }
        used_[vi] = 1;
        values_[k] = vi;
        radii_[k] = v;
        choose_edge(k + 1);
        used_[vi] = 0;
        return !result_;
      });
    }
  }

  void finish_path() {
    std::vector<Eigen::VectorXd> centers;
    std::vector<double> radii;
    for (int k = 0; k < d_; ++k) {
      centers.push_back(partial_.points.point(partners_[k]));
      radii.push_back(radii_[k]);
    }
    for (const auto& x : sphere_intersections(centers, radii, o_.tol)) {
      for (int j = 0; j < m_ && !result_; ++j) {
        if (std::find(partners_.begin(), partners_.end(), j) != partners_.end()) continue;
        const double v = (x - partial_.points.point(j)).norm();
        table_.for_range(v - slack(v), v + slack(v), [&](int vi, double) {
          if (used_[vi]) return true;
          std::vector<int> anchors = partners_;
          anchors.push_back(j);
          std::vector<int> vals = values_;
          vals.push_back(vi);
          try_step(anchors, vals);
          return !result_;
        });
      }
      if (result_) return;
    }
  }

  void try_step(const std::vector<int>& anchors, const std::vector<int>& vals) {
    const int D = edge_count(d_ + 2);
    const int C = edge_count(d_ + 1);
    std::vector<double> w(D);
    for (int e = 0; e < C; ++e) {
      const Edge edge = edge_at(e);
      w[e] = dist_(anchors[edge.i], anchors[edge.j]);
    }
    for (int k = 0; k <= d_; ++k) w[C + k] = data_.values[vals[k]];

    const bool loop = data_.mode == Mode::kLoop;
    const Eigen::MatrixXi& matrix = loop ? matrix_.entries : identity_matrix(D);
    const MembershipVerdict mv =
        loop ? membership_L(w, matrix_, o_.tol) : membership_L(w, d_, o_.tol);
    if (!mv.member) return;
    if (!certify_rank(w, matrix, d_, bound_, o_)) return;

    Eigen::VectorXd y;
    try {
      const LengthVector& u = *mv.recovered_lengths;
      const Configuration simplex = embed_simplex(u.cwiseProduct(u), d_, o_.tol);
      std::vector<int> head(static_cast<size_t>(d_ + 1));
      std::iota(head.begin(), head.end(), 0);
      y = align_onto(simplex.subset(head), partial_.points.subset(anchors),
                     simplex.point(d_ + 1), o_.tol);
    } catch (const Degenerate&) {
      return;
    } catch (const NotRealizable&) {
      return;
    } catch (const AnchorsDegenerate&) {
      return;
    }
    // an already located point found again is skipped
    for (int i = 0; i < m_; ++i)
      if ((y - partial_.points.point(i)).norm() <= o_.min_separation * diam_) return;

    PartialReconstruction next = partial_;
    next.points.append(y);
    const int nv = m_;
    TrilaterationStep step{anchors, nv, vals};
    for (int k = 0; k <= d_; ++k) {
      next.consumed[vals[k]] += 1;
      Path p;
      if (loop) {
        p = k == 0 ? ping(anchors[0], nv) : triangle(anchors[0], anchors[k], nv);
      } else {
        p = Path{{anchors[k], nv}};
      }
      next.labeling.push_back({vals[k], std::move(p)});
    }
    if (explanation_gap(next.labeling, next.labeling.size() - (d_ + 1), next.points, data_) >
        o_.explain_tol)
      return;
    next.history.push_back(std::move(step));
    result_ = std::move(next);
  }

  const PartialReconstruction& partial_;
  const DataSet& data_;
  const ReconstructOptions& o_;
  int d_;
  ValueTable table_;
  int bound_;
  int m_;
  std::vector<char> used_;
  Eigen::MatrixXd dist_;
  double diam_ = 0.0;
  CanonicalMatrix matrix_;

  int hub_ = 0;
  int ping_ = -1;
  double hub_r_ = 0.0;
  std::vector<int> partners_;
  std::vector<int> values_;
  std::vector<double> radii_;
  std::optional<PartialReconstruction> result_;
};

double total_edge_length(const Configuration& cfg) { return measure_all_lengths(cfg).sum(); }

}  // namespace

std::vector<CandidateBase> find_candidate_bases(const DataSet& data,
                                                const ReconstructOptions& options) {
  check_data(data);
  return BaseSearch(data, options).run();
}

PartialReconstruction start_from_base(const CandidateBase& base, const DataSet& data) {
  PartialReconstruction p;
  p.points = base.embedded;
  p.consumed.assign(data.values.size(), 0);
  for (int vi : base.value_indices) p.consumed.at(static_cast<size_t>(vi)) += 1;
  p.labeling = base.labeling;
  return p;
}

std::optional<PartialReconstruction> trilaterate_step(const PartialReconstruction& partial,
                                                      const DataSet& data,
                                                      const ReconstructOptions& options) {
  check_data(data);
  if (partial.consumed.size() != data.values.size())
    throw InvalidArgument("partial reconstruction does not match the data set");
  return StepSearch(partial, data, options).run();
}

ReconstructionResult grow(const CandidateBase& base, const DataSet& data,
                          const ReconstructOptions& options) {
  PartialReconstruction partial = start_from_base(base, data);
  while (auto next = trilaterate_step(partial, data, options)) partial = std::move(*next);
  ReconstructionResult r;
  r.configuration = partial.points;
  r.explained_count = partial.explained_count();
  r.relative_scale_rank = total_edge_length(partial.points);
  r.labeling = std::move(partial.labeling);
  return r;
}

ReconstructionResult reconstruct(const DataSet& data, const ReconstructOptions& options) {
  check_data(data);
  const auto bases = find_candidate_bases(data, options);
  if (bases.empty()) throw NoBaseFound("no candidate base found in the data set");
  std::optional<ReconstructionResult> best;
  for (size_t i = 0; i < bases.size(); ++i) {
    ReconstructionResult r = grow(bases[i], data, options);
    r.base_ordinal = static_cast<int>(i);
    const bool better =
        !best || r.configuration.size() > best->configuration.size() ||
        (r.configuration.size() == best->configuration.size() &&
         r.relative_scale_rank < best->relative_scale_rank * (1.0 - 1e-9));
    if (better) best = std::move(r);
  }
  best->candidate_bases = static_cast<int>(bases.size());
  return std::move(*best);
}

double certificate_residual(const ReconstructionResult& result, const DataSet& data) {
  return explanation_gap(result.labeling, 0, result.configuration, data);
}

namespace {

class MatchSearch {
 public:
  MatchSearch(const Configuration& truth, const Configuration& rec, double s, double tol)
      : truth_(truth), rec_(rec), s_(s), tol_(tol), taken_(truth.size(), 0) {
    dt_ = Eigen::MatrixXd::Zero(truth.size(), truth.size());
    for (int i = 0; i < truth.size(); ++i)
      for (int j = 0; j < truth.size(); ++j)
        if (i != j) dt_(i, j) = s * std::sqrt(squared_distance(truth, i, j));
    dr_ = Eigen::MatrixXd::Zero(rec.size(), rec.size());
    for (int i = 0; i < rec.size(); ++i)
      for (int j = 0; j < rec.size(); ++j)
        if (i != j) dr_(i, j) = std::sqrt(squared_distance(rec, i, j));
    // candidate truth vertices ordered by similarity of sorted distance profiles
    for (int k = 0; k < rec.size(); ++k) {
      std::vector<std::pair<double, int>> scored;
      for (int t = 0; t < truth.size(); ++t) scored.push_back({profile_gap(k, t), t});
      std::sort(scored.begin(), scored.end());
      std::vector<int> c;
      for (auto& [g, t] : scored) c.push_back(t);
      candidates_.push_back(std::move(c));
    }
  }

  std::optional<std::vector<int>> run() {
    map_.assign(rec_.size(), -1);
    if (assign(0)) return map_;
    return std::nullopt;
  }

 private:
  double profile_gap(int k, int t) const {
    std::vector<double> a, b;
    for (int j = 0; j < rec_.size(); ++j)
      if (j != k) a.push_back(dr_(k, j));
    for (int j = 0; j < truth_.size(); ++j)
      if (j != t) b.push_back(dt_(t, j));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // every recovered distance should appear among the truth distances
    double gap = 0.0;
    for (double x : a) {
      auto it = std::lower_bound(b.begin(), b.end(), x);
      double g = std::numeric_limits<double>::infinity();
      if (it != b.end()) g = std::min(g, std::abs(*it - x));
      if (it != b.begin()) g = std::min(g, std::abs(*std::prev(it) - x));
      gap = std::max(gap, g);
    }
    return gap;
  }

  bool assign(int k) {
    if (k == rec_.size()) return true;
    for (int t : candidates_[k]) {
      if (taken_[t]) continue;
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        const double a = dt_(map_[i], t), b = dr_(i, k);
        ok = std::abs(a - b) <= tol_ * std::max(a, b);
      }
      if (!ok) continue;
      taken_[t] = 1;
      map_[k] = t;
      if (assign(k + 1)) return true;
      taken_[t] = 0;
      map_[k] = -1;
    }
    return false;
  }

  const Configuration& truth_;
  const Configuration& rec_;
  double s_;
  double tol_;
  std::vector<char> taken_;
  Eigen::MatrixXd dt_, dr_;
  std::vector<std::vector<int>> candidates_;
  std::vector<int> map_;
};

}  // namespace

VerifyVerdict verify(const Configuration& truth, const Configuration& recovered, int max_scale,
                     double tol) {
  VerifyVerdict v;
  if (recovered.empty() || truth.dim() != recovered.dim() || recovered.size() > truth.size())
    return v;
  for (int s = 1; s <= std::max(1, max_scale); ++s) {
    auto map = MatchSearch(truth, recovered, s, tol).run();
    if (!map) continue;
    v.matched = true;
    v.scale = s;
    v.relabeling = *map;
    const Configuration sub = truth.subset(v.relabeling).scaled(s);
    const LengthVector a = measure_all_lengths(sub), b = measure_all_lengths(recovered);
    for (Eigen::Index e = 0; e < a.size(); ++e)
      v.max_residual = std::max(v.max_residual, std::abs(a(e) - b(e)) / std::max(a(e), 1e-300));
    return v;
  }
  return v;
}

}  // namespace trilat
