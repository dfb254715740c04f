#pragma once

#include <optional>
#include <vector>

#include "trilat/geometry.hpp"
#include "trilat/measurement.hpp"
#include "trilat/membership.hpp"
#include "trilat/relation.hpp"

namespace trilat {

struct ReconstructOptions {
  double tol = kDefaultTol;
  double relation_tol = kDefaultRelationTol;
  /// Empty selects the default: brute (with the rank-6 shortcut) for d = 2,
  /// reduced for d >= 3.
  std::optional<RankStrategy> strategy;
  /// Caller asserts the data come from hub-centred pings and triangles only;
  /// required for RankStrategy::kDistinctValues.
  bool restricted_ensemble = false;
  /// Relative window used to shortlist predicted values before the exact
  /// membership test decides.
  double lookup_window = 1e-7;
  /// Max relative gap between a consumed value and its explanation
  /// re-measured on the located points; bases and steps beyond it are dropped.
  double explain_tol = 1e-7;
  /// Points closer than this fraction of the diameter count as coincident.
  double min_separation = 1e-5;
  /// Overrides DataSet::bound when > 0.
  int bound_override = 0;
};

RankStrategy effective_strategy(const ReconstructOptions& options, int d);

/// One recovered measurement: data value `value_index` explained as `path`.
struct Explanation {
  int value_index = -1;
  Path path;
};

struct CandidateBase {
  std::vector<int> value_indices;  // D indices, in the row order of the validating matrix
  Configuration embedded;          // d+2 points in the embedding frame
  CanonicalKind matrix = CanonicalKind::kBase;  // loop mode; path mode uses the identity
  Mode mode = Mode::kPath;
  std::vector<Explanation> labeling;
};

struct TrilaterationStep {
  std::vector<int> anchors;        // d+1 located vertices; in loop mode anchors[0] is the hub
  int new_vertex = -1;
  std::vector<int> value_indices;  // d+1 consumed values
};

struct PartialReconstruction {
  Configuration points;
  std::vector<int> consumed;              // multiplicity used, per data value
  std::vector<Explanation> labeling;
  std::vector<TrilaterationStep> history;

  int explained_count() const;
};

struct ReconstructionResult {
  Configuration configuration;
  int explained_count = 0;
  double relative_scale_rank = 0.0;  // total edge length; smaller means smaller scale
  std::vector<Explanation> labeling;
  int base_ordinal = -1;             // which candidate base produced it
  int candidate_bases = 0;
};

/// All ordered D-tuples of data values that describe a K_{d+2}, each
/// validated by membership, rank certification and a non-degenerate embedding.
std::vector<CandidateBase> find_candidate_bases(const DataSet& data,
                                                const ReconstructOptions& options = {});

PartialReconstruction start_from_base(const CandidateBase& base, const DataSet& data);

/// Adds one new point through d+1 unused values, or returns nullopt.
std::optional<PartialReconstruction> trilaterate_step(const PartialReconstruction& partial,
                                                      const DataSet& data,
                                                      const ReconstructOptions& options = {});

ReconstructionResult grow(const CandidateBase& base, const DataSet& data,
                          const ReconstructOptions& options = {});

/// Grows every candidate base; keeps the largest configurations and among
/// them the one with the smallest total edge length. Throws NoBaseFound.
ReconstructionResult reconstruct(const DataSet& data, const ReconstructOptions& options = {});

/// Max relative gap between each consumed value and its explanation
/// re-measured on the recovered configuration.
double certificate_residual(const ReconstructionResult& result, const DataSet& data);

struct VerifyVerdict {
  bool matched = false;
  std::vector<int> relabeling;  // recovered vertex k corresponds to truth vertex relabeling[k]
  int scale = 0;
  double max_residual = 0.0;    // max relative length residual under the witness
};

/// Searches integer scales s = 1..max_scale and injective vertex matchings
/// with s * truth[relabeling] congruent to recovered.
VerifyVerdict verify(const Configuration& truth, const Configuration& recovered, int max_scale,
                     double tol = 1e-7);

}  // namespace trilat
