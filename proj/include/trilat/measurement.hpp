#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trilat/geometry.hpp"

namespace trilat {

enum class Mode { kPath, kLoop };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view text);

/// A vertex walk on K_n with no vertex immediately repeated. A loop also
/// has at least three entries and ends where it starts.
struct Path {
  std::vector<int> vertices;

  bool is_loop() const;
  friend bool operator==(const Path&, const Path&) = default;
};

Path ping(int i, int j);
Path triangle(int i, int j, int k);

/// Edge multiplicities of one path or loop measurement, in edge_index order.
class LengthFunctional {
 public:
  LengthFunctional() = default;
  LengthFunctional(int n, std::vector<int> multiplicities);

  int vertex_count() const { return n_; }
  const std::vector<int>& multiplicities() const { return mult_; }
  int max_multiplicity() const;
  bool is_zero() const;
  LengthFunctional scaled(int s) const;

  friend bool operator==(const LengthFunctional&, const LengthFunctional&) = default;

 private:
  int n_ = 0;
  std::vector<int> mult_;
};

LengthFunctional functional_from_path(const Path& path, int n);
double apply_functional(const LengthFunctional& f, const Configuration& cfg);

struct MeasurementEnsemble {
  Mode mode = Mode::kPath;
  int vertex_count = 0;
  std::vector<LengthFunctional> functionals;
  std::vector<Path> provenance;  // empty, or one path per functional

  int bound() const;
  MeasurementEnsemble scaled(int s) const;
};

/// Unlabeled measurement values plus the metadata reconstruction needs.
struct DataSet {
  int dim = 2;
  int bound = 1;
  Mode mode = Mode::kPath;
  std::vector<double> values;
};

/// values[k] was produced by ensemble.functionals[labels[k]]; for tests only.
struct Measurement {
  DataSet data;
  std::vector<int> labels;
};

enum class CanonicalKind { kBase, kTrilat };

/// D x D integer matrix; rows are loops (or edges) over K_{d+2} with vertex 0 as the hub.
struct CanonicalMatrix {
  CanonicalKind kind = CanonicalKind::kBase;
  int dim = 2;
  Eigen::MatrixXi entries;
  std::vector<Path> rows;  // the path each row measures
};

CanonicalMatrix canonical_matrix(CanonicalKind kind, int d);

struct EnsembleOptions {
  int n = 4;
  int dim = 2;
  Mode mode = Mode::kLoop;
  int extra = 0;         // distractor paths or loops
  int max_hops = 4;      // edges per distractor
  int max_multiplicity = 0;  // 0 = no cap on distractor edge reuse
  std::uint64_t seed = 0;
};

/// Base K_{d+2} on vertices 0..d+1, one trilateration sequence for every
/// later vertex, then `extra` random distractors; functional order shuffled.
MeasurementEnsemble build_trilateration_ensemble(const EnsembleOptions& options);

/// Forward model: evaluate every functional on cfg, then shuffle the values.
Measurement measure(const MeasurementEnsemble& ensemble, const Configuration& cfg,
                    std::uint64_t shuffle_seed);

/// Coordinates drawn uniformly from [0,1]^d.
Configuration random_configuration(int n, int d, std::uint64_t seed);

}  // namespace trilat
