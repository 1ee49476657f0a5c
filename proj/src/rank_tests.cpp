#include "covfield/rank_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "covfield/error.hpp"

namespace covfield {

namespace {

double normal_two_sided(double deviation, double variance) {
  if (!(variance > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(deviation) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

// Sum over tie groups of (t^3 - t).
double tie_term(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = double(j - i);
    acc += t * t * t - t;
    i = j;
  }
  return acc;
}

}  // namespace

std::string_view to_string(PValueMethod m) {
  return m == PValueMethod::Exact ? "exact" : "normal_approx";
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double r = 0.5 * double(i + 1 + j);  // mean of positions i+1 .. j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

std::vector<double> signed_rank_null_pmf(std::span<const double> ranks) {
  std::vector<int> doubled;
  doubled.reserve(ranks.size());
  int total = 0;
  for (double r : ranks) {
    doubled.push_back(int(std::lround(2.0 * r)));
    total += doubled.back();
  }
  std::vector<double> dist(std::size_t(total) + 1, 0.0);
  dist[0] = 1.0;
  int reach = 0;
  for (int r : doubled) {
    for (int t = reach; t >= 0; --t) {
      if (dist[std::size_t(t)] != 0.0) dist[std::size_t(t + r)] += dist[std::size_t(t)];
    }
    reach += r;
  }
  const double scale = std::ldexp(1.0, -int(doubled.size()));
  for (double& d : dist) d *= scale;
  return dist;
}

RankTestResult signed_rank(std::span<const double> z) {
  std::vector<double> nonzero;
  nonzero.reserve(z.size());
  for (double v : z) {
    if (v != 0.0) nonzero.push_back(v);
  }
  const std::size_t n = nonzero.size();
  if (n < kMinRankPairs) {
    throw Error(ErrorKind::TooFewPairs, std::to_string(n) + " nonzero differences, need " +
                                            std::to_string(kMinRankPairs));
  }
  std::vector<double> abs_z(n);
  std::transform(nonzero.begin(), nonzero.end(), abs_z.begin(),
                 [](double v) { return std::abs(v); });
  const std::vector<double> ranks = midranks(abs_z);
  double t_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (nonzero[i] > 0.0) t_plus += ranks[i];
  }

  RankTestResult out;
  out.statistic = t_plus;
  out.n_effective = n;
  const double nn = double(n);
  if (n <= kExactSignedRankMax) {
    out.method = PValueMethod::Exact;
    const std::vector<double> pmf = signed_rank_null_pmf(ranks);
    const long t2 = std::lround(2.0 * t_plus);
    double lower = 0.0;
    double upper = 0.0;
    for (std::size_t t = 0; t < pmf.size(); ++t) {
      if (long(t) <= t2) lower += pmf[t];
      if (long(t) >= t2) upper += pmf[t];
    }
    out.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
  } else {
    out.method = PValueMethod::NormalApprox;
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term(abs_z) / 48.0;
    out.p_value = normal_two_sided(t_plus - mean, var);
  }
  return out;
}

RankTestResult rank_sum(std::span<const double> x, std::span<const double> y) {
  if (x.size() < kMinRankPairs || y.size() < kMinRankPairs) {
    throw Error(ErrorKind::TooFewPairs, "rank-sum test needs at least 5 values per sample");
  }
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const std::vector<double> ranks = midranks(pooled);
  const double w = std::accumulate(ranks.begin(), ranks.begin() + std::ptrdiff_t(x.size()), 0.0);

  const double m = double(x.size());
  const double n = double(y.size());
  const double big_n = m + n;
  const double mean = m * (big_n + 1.0) / 2.0;
  const double var =
      m * n / 12.0 * ((big_n + 1.0) - tie_term(pooled) / (big_n * (big_n - 1.0)));

  RankTestResult out;
  out.statistic = w;
  out.n_effective = pooled.size();
  out.method = PValueMethod::NormalApprox;
  out.p_value = normal_two_sided(w - mean, var);
  return out;
}

}  // namespace covfield
