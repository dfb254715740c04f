#include "trilat/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace trilat {

std::string_view to_string(Mode mode) { return mode == Mode::kPath ? "path" : "loop"; }

Mode mode_from_string(std::string_view text) {
  if (text == "path") return Mode::kPath;
  if (text == "loop") return Mode::kLoop;
  throw InvalidArgument("unknown mode '" + std::string(text) + "' (expected path or loop)");
}

bool Path::is_loop() const { return vertices.size() >= 3 && vertices.front() == vertices.back(); }

Path ping(int i, int j) { return Path{{i, j, i}}; }
Path triangle(int i, int j, int k) { return Path{{i, j, k, i}}; }

LengthFunctional::LengthFunctional(int n, std::vector<int> multiplicities)
    : n_(n), mult_(std::move(multiplicities)) {
  if (n < 2) throw InvalidArgument("functional needs n >= 2");
  if (static_cast<int>(mult_.size()) != edge_count(n))
    throw InvalidArgument("functional has wrong number of edge multiplicities");
  for (int m : mult_)
    if (m < 0) throw InvalidArgument("negative edge multiplicity");
}

int LengthFunctional::max_multiplicity() const {
  return mult_.empty() ? 0 : *std::max_element(mult_.begin(), mult_.end());
}

bool LengthFunctional::is_zero() const {
  return std::all_of(mult_.begin(), mult_.end(), [](int m) { return m == 0; });
}

LengthFunctional LengthFunctional::scaled(int s) const {
  if (s < 1) throw InvalidArgument("functional scale must be a positive integer");
  auto m = mult_;
  for (int& x : m) x *= s;
  return LengthFunctional(n_, std::move(m));
}

LengthFunctional functional_from_path(const Path& path, int n) {
  const auto& v = path.vertices;
  if (v.size() < 2) throw InvalidArgument("a path needs at least two vertices");
  std::vector<int> mult(static_cast<size_t>(edge_count(n)), 0);
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0 || v[k] >= n) throw InvalidArgument("path vertex out of range");
    if (k > 0) {
      if (v[k] == v[k - 1]) throw InvalidArgument("path repeats a vertex immediately");
      ++mult[edge_index(v[k - 1], v[k])];
    }
  }
  return LengthFunctional(n, std::move(mult));
}

double apply_functional(const LengthFunctional& f, const Configuration& cfg) {
  if (f.vertex_count() != cfg.size())
    throw InvalidArgument("functional and configuration differ in vertex count");
  double total = 0.0;
  const auto& m = f.multiplicities();
  for (int e = 0; e < static_cast<int>(m.size()); ++e) {
    if (m[e] == 0) continue;
    const Edge edge = edge_at(e);
    total += m[e] * std::sqrt(squared_distance(cfg, edge.i, edge.j));
  }
  return total;
}

int MeasurementEnsemble::bound() const {
  int b = 0;
  for (const auto& f : functionals) b = std::max(b, f.max_multiplicity());
  return b;
}

MeasurementEnsemble MeasurementEnsemble::scaled(int s) const {
  MeasurementEnsemble out = *this;
  for (auto& f : out.functionals) f = f.scaled(s);
  for (auto& p : out.provenance) {
    // s-fold traversal of the same route
    if (p.is_loop()) {
      std::vector<int> v{p.vertices.front()};
      for (int r = 0; r < s; ++r) v.insert(v.end(), p.vertices.begin() + 1, p.vertices.end());
      p.vertices = std::move(v);
    } else {
      std::vector<int> v = p.vertices;
      for (int r = 1; r < s; ++r) {
        if (r % 2 == 1)
          v.insert(v.end(), p.vertices.rbegin() + 1, p.vertices.rend());
        else
          v.insert(v.end(), p.vertices.begin() + 1, p.vertices.end());
      }
      p.vertices = std::move(v);
    }
  }
  return out;
}

CanonicalMatrix canonical_matrix(CanonicalKind kind, int d) {
  if (d < 2) throw InvalidArgument("canonical matrices need d >= 2");
  const int n = d + 2;
  CanonicalMatrix out;
  out.kind = kind;
  out.dim = d;
  if (kind == CanonicalKind::kBase) {
    for (int m = 1; m <= d + 1; ++m) {
      out.rows.push_back(ping(0, m));
      for (int j = 1; j < m; ++j) out.rows.push_back(triangle(0, j, m));
    }
  } else {
    for (int e = 0; e < edge_count(d + 1); ++e) {
      const Edge edge = edge_at(e);
      out.rows.push_back(Path{{edge.i, edge.j}});
    }
    out.rows.push_back(ping(0, d + 1));
    for (int j = 1; j <= d; ++j) out.rows.push_back(triangle(0, j, d + 1));
  }
  const int D = edge_count(n);
  out.entries = Eigen::MatrixXi::Zero(D, D);
  for (int r = 0; r < D; ++r) {
    const auto f = functional_from_path(out.rows[r], n);
    for (int c = 0; c < D; ++c) out.entries(r, c) = f.multiplicities()[c];
  }
  return out;
}

namespace {

Path random_distractor(std::mt19937_64& rng, const EnsembleOptions& o) {
  std::uniform_int_distribution<int> any_vertex(0, o.n - 1);
  const auto step_from = [&](int cur, bool avoid_hub) {
    for (;;) {
      const int v = any_vertex(rng);
      if (v != cur && !(avoid_hub && v == 0)) return v;
    }
  };
  Path p;
  if (o.mode == Mode::kPath) {
    const int hops = std::uniform_int_distribution<int>(1, o.max_hops)(rng);
    p.vertices.push_back(any_vertex(rng));
    for (int h = 0; h < hops; ++h) p.vertices.push_back(step_from(p.vertices.back(), false));
  } else {
    const int hops = std::uniform_int_distribution<int>(2, o.max_hops)(rng);
    p.vertices.push_back(0);
    for (int h = 1; h < hops; ++h)
      p.vertices.push_back(step_from(p.vertices.back(), h == hops - 1));
    p.vertices.push_back(0);
  }
  return p;
}

}  // namespace

MeasurementEnsemble build_trilateration_ensemble(const EnsembleOptions& o) {
  const int d = o.dim;
  if (d < 2) throw InvalidArgument("dimension must be >= 2");
  if (o.n < d + 2) throw InvalidArgument("need n >= d + 2 points");
  if (o.extra < 0) throw InvalidArgument("distractor count must be >= 0");
  if (o.max_hops < (o.mode == Mode::kLoop ? 2 : 1))
    throw InvalidArgument("max_hops too small for the measurement mode");

  std::mt19937_64 rng(o.seed);
  std::vector<Path> paths;

  if (o.mode == Mode::kPath) {
    for (int e = 0; e < edge_count(d + 2); ++e) {
      const Edge edge = edge_at(e);
      paths.push_back(Path{{edge.i, edge.j}});
    }
  } else {
    paths = canonical_matrix(CanonicalKind::kBase, d).rows;
  }

  for (int j = d + 2; j < o.n; ++j) {
    std::vector<int> earlier(static_cast<size_t>(j));
    std::iota(earlier.begin(), earlier.end(), 0);
    if (o.mode == Mode::kPath) {
      std::shuffle(earlier.begin(), earlier.end(), rng);
      for (int k = 0; k <= d; ++k) paths.push_back(Path{{earlier[k], j}});
    } else {
      // the hub is vertex 0; d further partners among 1..j-1
      std::shuffle(earlier.begin() + 1, earlier.end(), rng);
      paths.push_back(ping(0, j));
      for (int k = 1; k <= d; ++k) paths.push_back(triangle(0, earlier[k], j));
    }
  }

  MeasurementEnsemble ens;
  ens.mode = o.mode;
  ens.vertex_count = o.n;
  std::set<std::vector<int>> seen;
  for (const auto& p : paths) {
    ens.functionals.push_back(functional_from_path(p, o.n));
    seen.insert(ens.functionals.back().multiplicities());
  }
  ens.provenance = paths;

  int attempts = 0;
  for (int added = 0; added < o.extra;) {
    if (++attempts > 100000)
      throw InvalidArgument("could not draw enough distinct distractors; lower --extra");
    Path p = random_distractor(rng, o);
    LengthFunctional f = functional_from_path(p, o.n);
    if (o.max_multiplicity > 0 && f.max_multiplicity() > o.max_multiplicity) continue;
    if (!seen.insert(f.multiplicities()).second) continue;
    ens.functionals.push_back(std::move(f));
    ens.provenance.push_back(std::move(p));
    ++added;
  }

  std::vector<size_t> order(ens.functionals.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  MeasurementEnsemble shuffled;
  shuffled.mode = ens.mode;
  shuffled.vertex_count = ens.vertex_count;
  for (size_t k : order) {
    shuffled.functionals.push_back(ens.functionals[k]);
    shuffled.provenance.push_back(ens.provenance[k]);
  }
  return shuffled;
}

Measurement measure(const MeasurementEnsemble& ensemble, const Configuration& cfg,
                    std::uint64_t shuffle_seed) {
  if (ensemble.vertex_count != cfg.size())
    throw InvalidArgument("ensemble and configuration differ in vertex count");
  if (cfg.size() >= 2 && min_pairwise_distance(cfg) <= 0.0)
    throw InvalidArgument("configuration has coincident points");

  const size_t k = ensemble.functionals.size();
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(shuffle_seed);
  std::shuffle(order.begin(), order.end(), rng);

  Measurement out;
  out.data.dim = cfg.dim();
  out.data.mode = ensemble.mode;
  out.data.bound = std::max(1, ensemble.bound());
  out.data.values.reserve(k);
  out.labels = order;
  for (int idx : order) out.data.values.push_back(apply_functional(ensemble.functionals[idx], cfg));
  return out;
}

Configuration random_configuration(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidArgument("random configuration needs n, d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd rows(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) rows(i, k) = unit(rng);
  return Configuration(std::move(rows));
}

}  // namespace trilat
