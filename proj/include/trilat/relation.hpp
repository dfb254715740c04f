#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trilat/error.hpp"

namespace trilat {

/// Relation tolerance for double-precision simulated data. A candidate
/// relation c is accepted when |sum c_i w_i| < tol * size(c) * max|w_i|.
inline constexpr double kDefaultRelationTol = 1e-13;

enum class RelationKind { kIndependent, kRelation };

struct RelationCertificate {
  RelationKind kind = RelationKind::kIndependent;
  std::vector<std::int64_t> coefficients;  // present for kRelation; first nonzero entry positive
  double bound_used = 0.0;
  double residual = 0.0;                   // |sum c_i w_i| for kRelation

  bool is_relation() const { return kind == RelationKind::kRelation; }
};

/// Exhaustive search over integer vectors with entries in [-coeff_bound, coeff_bound].
///
/// The box is scanned by meet-in-the-middle (two sorted half-sums), growing
/// the box geometrically so that small relations return early. Among all hits
/// in the first box that contains one, the smallest by (max|c|, entries) wins.
/// Throws SearchBudgetExceeded when a half-enumeration would be too large.
RelationCertificate find_integer_relation_brute(std::span<const double> w,
                                                std::int64_t coeff_bound,
                                                double tol = kDefaultRelationTol);

/// LLL-based relation search on the lattice spanned by (e_i, W w_i).
///
/// Returns a relation whose Euclidean norm is at most
/// min(2^{k/2} norm_bound, reduced_norm_cap(k, tol)); the cap is the largest
/// norm at which double-precision data can still separate real relations
/// from accidental near-misses. Throws ReductionFailure on numerical blow-up.
RelationCertificate find_integer_relation_reduced(std::span<const double> w, double norm_bound,
                                                  double tol = kDefaultRelationTol);

double reduced_norm_cap(int k, double tol);

enum class RankStrategy { kBrute, kReduced, kDistinctValues };

std::string_view to_string(RankStrategy s);
RankStrategy rank_strategy_from_string(std::string_view text);

struct RankVerdict {
  bool holds = false;
  std::vector<int> independent_subset;           // witness when holds
  std::optional<RelationCertificate> relation;   // last relation seen when !holds
};

/// Does w contain `target` values with no integer relation within the
/// b-bounded coefficient range (b^{target-1})?
///
/// kDistinctValues only checks that all values differ, which is sound only
/// for ensembles made of pings and triangles through one hub; the caller must
/// assert that with `restricted_ensemble`.
RankVerdict rational_rank_at_least(std::span<const double> w, int target, int b,
                                   RankStrategy strategy, double tol = kDefaultRelationTol,
                                   bool restricted_ensemble = false);

/// b^e saturated at int64 range.
std::int64_t saturating_pow(std::int64_t b, int e);

}  // namespace trilat
