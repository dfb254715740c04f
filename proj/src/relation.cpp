#include "trilat/relation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace trilat {

std::int64_t saturating_pow(std::int64_t b, int e) {
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max() / 4;
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (b != 0 && r > kMax / b) return kMax;
    r *= b;
  }
  return r;
}

std::string_view to_string(RankStrategy s) {
  switch (s) {
    case RankStrategy::kBrute: return "brute";
    case RankStrategy::kReduced: return "reduced";
    case RankStrategy::kDistinctValues: return "distinct";
  }
  return "brute";
}

RankStrategy rank_strategy_from_string(std::string_view text) {
  if (text == "brute") return RankStrategy::kBrute;
  if (text == "reduced") return RankStrategy::kReduced;
  if (text == "distinct" || text == "distinct-values") return RankStrategy::kDistinctValues;
  throw InvalidArgument("unknown rank strategy '" + std::string(text) + "'");
}

namespace {

double max_abs(std::span<const double> w) {
  double m = 0.0;
  for (double x : w) m = std::max(m, std::abs(x));
  return m;
}

void normalize_sign(std::vector<std::int64_t>& c) {
  for (auto x : c) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : c) y = -y;
    return;
  }
}

std::int64_t max_abs_coeff(const std::vector<std::int64_t>& c) {
  std::int64_t m = 0;
  for (auto x : c) m = std::max(m, x < 0 ? -x : x);
  return m;
}

bool brute_order_less(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  const auto ma = max_abs_coeff(a), mb = max_abs_coeff(b);
  if (ma != mb) return ma < mb;
  return a < b;
}

long double residual_of(std::span<const double> w, const std::vector<std::int64_t>& c) {
  long double s = 0.0L;
  for (size_t i = 0; i < w.size(); ++i) s += static_cast<long double>(c[i]) * w[i];
  return std::abs(s);
}

// All sums over one half of the coordinates, with the coefficient vector
// recoverable from the entry's position in mixed radix (2H+1).
struct HalfSums {
  std::vector<long double> sums;
  std::vector<std::uint32_t> order;  // indices sorted by sum
};

HalfSums enumerate_half(std::span<const double> w, std::int64_t h) {
  const std::int64_t radix = 2 * h + 1;
  std::size_t count = 1;
  for (size_t i = 0; i < w.size(); ++i) count *= static_cast<size_t>(radix);
  HalfSums out;
  out.sums.assign(count, 0.0L);
  // sums[idx] = sum_i (digit_i - h) * w_i, digit_0 least significant
  std::size_t stride = 1;
  for (size_t i = 0; i < w.size(); ++i) {
    for (std::size_t idx = 0; idx < count; ++idx) {
      const std::int64_t digit = static_cast<std::int64_t>((idx / stride) % radix);
      out.sums[idx] += static_cast<long double>(digit - h) * w[i];
    }
    stride *= static_cast<size_t>(radix);
  }
  out.order.resize(count);
  std::iota(out.order.begin(), out.order.end(), 0u);
  std::sort(out.order.begin(), out.order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return out.sums[a] < out.sums[b]; });
  return out;
}

void decode(std::size_t idx, std::int64_t h, size_t len, std::vector<std::int64_t>& dst,
            size_t offset) {
  const std::int64_t radix = 2 * h + 1;
  for (size_t i = 0; i < len; ++i) {
    dst[offset + i] = static_cast<std::int64_t>(idx % static_cast<size_t>(radix)) - h;
    idx /= static_cast<size_t>(radix);
  }
}

constexpr double kHalfBudget = 2.0e7;

}  // namespace

RelationCertificate find_integer_relation_brute(std::span<const double> w,
                                                std::int64_t coeff_bound, double tol) {
  const size_t k = w.size();
  if (k < 2) throw InvalidArgument("relation search needs at least two values");
  if (coeff_bound < 1) throw InvalidArgument("coefficient bound must be >= 1");

  const double wmax = max_abs(w);
  RelationCertificate cert;
  cert.bound_used = static_cast<double>(coeff_bound);
  if (wmax == 0.0) {
    cert.kind = RelationKind::kRelation;
    cert.coefficients.assign(k, 0);
    cert.coefficients[0] = 1;
    return cert;
  }
  const long double thr = static_cast<long double>(tol) * coeff_bound * wmax;

  const size_t kl = k / 2;
  const size_t kr = k - kl;
  const auto left_w = w.subspan(0, kl);
  const auto right_w = w.subspan(kl);

  std::int64_t h = 1;
  for (;;) {
    h = std::min(h, coeff_bound);
    const double half_size = std::pow(2.0 * static_cast<double>(h) + 1.0, static_cast<double>(kr));
    if (half_size > kHalfBudget)
      throw SearchBudgetExceeded("brute-force relation search over " + std::to_string(k) +
                                 " values exceeds budget at coefficient bound " +
                                 std::to_string(h) + "; use the reduced strategy");

    const HalfSums left = enumerate_half(left_w, h);
    const HalfSums right = enumerate_half(right_w, h);

    std::optional<std::vector<std::int64_t>> best;
    std::vector<std::int64_t> c(k);
    auto lo = right.order.begin();
    // left sums ascending => targets (-s) descending; scan with binary search per entry
    for (std::uint32_t li : left.order) {
      const long double target = -left.sums[li];
      lo = std::lower_bound(right.order.begin(), right.order.end(), target - thr,
                            [&](std::uint32_t r, long double v) { return right.sums[r] < v; });
      for (auto it = lo; it != right.order.end() && right.sums[*it] <= target + thr; ++it) {
        decode(li, h, kl, c, 0);
        decode(*it, h, kr, c, kl);
        if (std::all_of(c.begin(), c.end(), [](auto x) { return x == 0; })) continue;
        auto cand = c;
        normalize_sign(cand);
        if (!best || brute_order_less(cand, *best)) best = std::move(cand);
      }
    }
    if (best) {
      cert.kind = RelationKind::kRelation;
      cert.coefficients = std::move(*best);
      cert.residual = static_cast<double>(residual_of(w, cert.coefficients));
      return cert;
    }
    if (h == coeff_bound) break;
    h *= 2;
  }
  cert.kind = RelationKind::kIndependent;
  return cert;
}

double reduced_norm_cap(int k, double tol) {
  if (k < 1 || tol <= 0.0) return 0.0;
  return std::floor(0.5 * std::pow(1.0 / tol, 1.0 / k));
}

namespace {

// Textbook LLL on rows (U_i, W * <U_i, w>) with exact integer U.
class RelationLattice {
 public:
  RelationLattice(std::span<const double> w, long double weight)
      : k_(w.size()), w_(w.begin(), w.end()), weight_(weight),
        u_(k_, std::vector<std::int64_t>(k_, 0)) {
    for (size_t i = 0; i < k_; ++i) u_[i][i] = 1;
  }

  // Raises the weight in stages, reducing from the previous basis each time,
  // so residual coordinates stay small enough for long double Gram-Schmidt.
  void reduce(long double delta = 0.99L) {
    const long double target = weight_;
    long double w = 1e4L;
    for (;;) {
      weight_ = std::min(w, target);
      reduce_at_weight(delta);
      if (weight_ == target) return;
      w *= 1e4L;
    }
  }

  const std::vector<std::vector<std::int64_t>>& basis() const { return u_; }

 private:
  void reduce_at_weight(long double delta) {
    size_t kk = 1;
    size_t iterations = 0;
    gram_schmidt();
    while (kk < k_) {
      if (++iterations > 200000) throw ReductionFailure("lattice reduction did not converge");
      for (size_t j = kk; j-- > 0;) {
        const long double q = std::round(mu_[kk][j]);
        if (q != 0.0L) {
          if (std::abs(q) > 1e15L) throw ReductionFailure("lattice reduction overflow");
          const auto qi = static_cast<std::int64_t>(q);
          for (size_t c = 0; c < k_; ++c) {
            u_[kk][c] -= qi * u_[j][c];
            if (std::abs(u_[kk][c]) > (std::int64_t{1} << 52))
              throw ReductionFailure("lattice reduction coefficient overflow");
          }
          gram_schmidt();
        }
      }
      const long double lhs = bnorm_[kk];
      const long double rhs = (delta - mu_[kk][kk - 1] * mu_[kk][kk - 1]) * bnorm_[kk - 1];
      if (lhs >= rhs) {
        ++kk;
      } else {
        std::swap(u_[kk], u_[kk - 1]);
        gram_schmidt();
        kk = std::max<size_t>(kk - 1, 1);
      }
    }
  }

  std::vector<long double> row(size_t i) const {
    std::vector<long double> r(k_ + 1);
    long double s = 0.0L;
    for (size_t c = 0; c < k_; ++c) {
      r[c] = static_cast<long double>(u_[i][c]);
      s += r[c] * w_[c];
    }
    r[k_] = weight_ * s;
    return r;
  }

  void gram_schmidt() {
    std::vector<std::vector<long double>> b(k_), bstar(k_);
    for (size_t i = 0; i < k_; ++i) b[i] = row(i);
    mu_.assign(k_, std::vector<long double>(k_, 0.0L));
    bnorm_.assign(k_, 0.0L);
    for (size_t i = 0; i < k_; ++i) {
      bstar[i] = b[i];
      for (size_t j = 0; j < i; ++j) {
        long double dot = 0.0L;
        for (size_t c = 0; c <= k_; ++c) dot += b[i][c] * bstar[j][c];
        mu_[i][j] = bnorm_[j] > 0.0L ? dot / bnorm_[j] : 0.0L;
        for (size_t c = 0; c <= k_; ++c) bstar[i][c] -= mu_[i][j] * bstar[j][c];
      }
      long double nn = 0.0L;
      for (size_t c = 0; c <= k_; ++c) nn += bstar[i][c] * bstar[i][c];
      bnorm_[i] = nn;
      if (!std::isfinite(static_cast<double>(nn)))
        throw ReductionFailure("non-finite Gram-Schmidt norm");
    }
  }

  size_t k_;
  std::vector<long double> w_;
  long double weight_;
  std::vector<std::vector<std::int64_t>> u_;
  std::vector<std::vector<long double>> mu_;
  std::vector<long double> bnorm_;
};

}  // namespace

RelationCertificate find_integer_relation_reduced(std::span<const double> w, double norm_bound,
                                                  double tol) {
  const size_t k = w.size();
  if (k < 2) throw InvalidArgument("relation search needs at least two values");
  if (!(norm_bound > 0.0)) throw InvalidArgument("norm bound must be positive");
  for (double x : w)
    if (!std::isfinite(x)) throw ReductionFailure("non-finite input value");

  const double wmax = max_abs(w);
  const double radius = std::min(std::pow(2.0, 0.5 * static_cast<double>(k)) * norm_bound,
                                 std::max(1.0, reduced_norm_cap(static_cast<int>(k), tol)));
  RelationCertificate cert;
  cert.bound_used = radius;
  if (wmax == 0.0) {
    cert.kind = RelationKind::kRelation;
    cert.coefficients.assign(k, 0);
    cert.coefficients[0] = 1;
    return cert;
  }

  std::vector<double> scaled(k);
  for (size_t i = 0; i < k; ++i) scaled[i] = w[i] / wmax;
  RelationLattice lattice(scaled, 1.0L / static_cast<long double>(tol));
  lattice.reduce();

  std::optional<std::vector<std::int64_t>> best;
  long double best_norm = 0.0L;
  for (const auto& c : lattice.basis()) {
    long double nn = 0.0L;
    for (auto x : c) nn += static_cast<long double>(x) * x;
    const long double norm = std::sqrt(nn);
    if (norm == 0.0L || norm > radius + 1e-9L) continue;
    if (residual_of(w, c) >= static_cast<long double>(tol) * norm * wmax) continue;
    if (!best || norm < best_norm) {
      best = c;
      best_norm = norm;
    }
  }
  if (best) {
    normalize_sign(*best);
    cert.kind = RelationKind::kRelation;
    cert.coefficients = std::move(*best);
    cert.residual = static_cast<double>(residual_of(w, cert.coefficients));
  }
  return cert;
}

namespace {

bool next_combination(std::vector<int>& idx, int n) {
  const int r = static_cast<int>(idx.size());
  int i = r - 1;
  while (i >= 0 && idx[i] == n - r + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

RankVerdict rational_rank_at_least(std::span<const double> w, int target, int b,
                                   RankStrategy strategy, double tol, bool restricted_ensemble) {
  const int k = static_cast<int>(w.size());
  if (target > k) throw InvalidArgument("target rank exceeds the number of values");
  if (b < 1) throw InvalidArgument("bound b must be >= 1");
  RankVerdict verdict;

  if (strategy == RankStrategy::kDistinctValues) {
    if (!restricted_ensemble)
      throw InvalidArgument(
          "distinct-values rank test is only valid for hub-centred ping/triangle ensembles");
    std::vector<double> sorted(w.begin(), w.end());
    std::sort(sorted.begin(), sorted.end());
    const double scale = max_abs(w);
    for (int i = 1; i < k; ++i)
      if (sorted[i] - sorted[i - 1] <= tol * scale) return verdict;
    verdict.holds = true;
    verdict.independent_subset.resize(static_cast<size_t>(k));
    std::iota(verdict.independent_subset.begin(), verdict.independent_subset.end(), 0);
    return verdict;
  }

  if (target <= 0) {
    verdict.holds = true;
    return verdict;
  }
  if (target == 1) {
    for (int i = 0; i < k; ++i)
      if (w[i] != 0.0) {
        verdict.holds = true;
        verdict.independent_subset = {i};
        return verdict;
      }
    return verdict;
  }

  const std::int64_t coeff_bound = saturating_pow(b, target - 1);
  std::vector<int> idx(static_cast<size_t>(target));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> sub(static_cast<size_t>(target));
  do {
    for (int i = 0; i < target; ++i) sub[i] = w[idx[i]];
    const RelationCertificate cert =
        strategy == RankStrategy::kBrute
            ? find_integer_relation_brute(sub, coeff_bound, tol)
            : find_integer_relation_reduced(sub, static_cast<double>(coeff_bound), tol);
    if (!cert.is_relation()) {
      verdict.holds = true;
      verdict.independent_subset = idx;
      verdict.relation.reset();
      return verdict;
    }
    verdict.relation = cert;
  } while (next_combination(idx, k));
  return verdict;
}

}  // namespace trilat
