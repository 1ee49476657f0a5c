#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace covfield {

enum class PValueMethod { Exact, NormalApprox };

std::string_view to_string(PValueMethod m);

struct RankTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_effective = 0;
  PValueMethod method = PValueMethod::NormalApprox;
};

inline constexpr std::size_t kMinRankPairs = 5;
inline constexpr std::size_t kExactSignedRankMax = 25;

/// Midranks (1-based) of `values`; ties share the average of their positions.
std::vector<double> midranks(std::span<const double> values);

/// Wilcoxon signed-rank test: zeros dropped, T = sum of ranks of |z| over z > 0,
/// two-sided p-value (exact for n <= 25, otherwise tie-corrected normal with continuity).
RankTestResult signed_rank(std::span<const double> z);

/// Wilcoxon-Mann-Whitney rank-sum: W = sum of pooled midranks of x, two-sided normal
/// approximation with tie correction and continuity correction.
RankTestResult rank_sum(std::span<const double> x, std::span<const double> y);

/// Exact null distribution of the signed-rank statistic for the given (mid)ranks.
/// Index t holds P(T = t / 2); ranks are doubled so midranks stay integral.
std::vector<double> signed_rank_null_pmf(std::span<const double> ranks);

}  // namespace covfield
