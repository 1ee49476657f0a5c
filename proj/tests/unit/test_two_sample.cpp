#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covfield/error.hpp"
#include "covfield/sampler.hpp"
#include "covfield/two_sample.hpp"
#include "helpers.hpp"

using namespace covfield;
using std::numbers::pi;

namespace {

struct Pair {
  std::vector<UnitPoint> s1, s2;
};

Pair ring_pair(std::uint64_t seed, double a1, double a2, const UnitPoint& mu, std::size_t m = 50) {
  Rng r1(derive_seed(seed, 0)), r2(derive_seed(seed, 1));
  return {rejection_sample({a1, mu}, m, r1), rejection_sample({a2, mu}, m, r2)};
}

}  // namespace

TEST_CASE("projection identities on random configurations") {
  Rng rng(61);
  double worst_sum = 0.0, worst_mean = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto q = uniform_point(rng);
    const auto s1 = testutil::cap_sample(rng, q, 1.4, 20);
    const auto s2 = testutil::cap_sample(rng, uniform_point(rng), 1.0, 20);
    bool ok = true;
    for (const auto& p : s2) ok &= q.dot(p) > -1.0 + 1e-6;
    if (!ok) continue;
    const Projections pr = projections_at(q, s1, s2, true);
    for (int l = 0; l < 2; ++l) {
      for (Eigen::Index i = 0; i < pr.xi[l].rows(); ++i) {
        worst_sum = std::max(worst_sum, std::abs(pr.xi[l](i, 0) + pr.xi[l](i, 1) - pr.d[l](i)));
        const auto& pts = l == 0 ? s1 : s2;
        worst_sum = std::max(worst_sum, std::abs(pr.d[l](i) - std::pow(geodesic_distance(q, pts[std::size_t(i)]), 2)));
      }
    }
    for (int s = 0; s < 2; ++s) {
      const double mean = (pr.xi[0].col(s) - pr.xi[1].col(s)).mean();
      worst_mean = std::max(worst_mean, std::abs(mean - pr.lambda(s)));
    }
    CHECK(pr.lambda(0) >= pr.lambda(1));
  }
  CHECK(worst_sum <= 1e-10);
  CHECK(worst_mean <= 1e-10);
}

TEST_CASE("eigenvector sign convention") {
  Rng rng(62);
  for (int t = 0; t < 50; ++t) {
    const auto q = uniform_point(rng);
    const auto s1 = testutil::cap_sample(rng, q, 1.0, 10);
    const auto s2 = testutil::cap_sample(rng, q, 0.5, 10);
    const Projections pr = projections_at(q, s1, s2, false);
    for (const auto& v : pr.directions) {
      const double lead = v.u.x() != 0.0 ? v.u.x() : v.u.y();
      CHECK(lead > 0.0);
      CHECK(v.u.norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("identical samples") {
  const UnitPoint mu(0, 0, 1);
  const auto p = ring_pair(1, 0.2, 0.2, mu);
  const Projections pr = projections_at(mu, p.s1, p.s1, true);
  CHECK(pr.lambda.cwiseAbs().maxCoeff() == 0.0);
  try {
    test_procedure_1(p.s1, p.s1, mu, 0.05);
    FAIL("expected TooFewPairs");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooFewPairs);
  }
  for (double alpha : {0.01, 0.05, 0.5}) {
    const auto out = test_procedure_2(p.s1, p.s1, mu, alpha);
    CHECK_FALSE(out.reject);
    CHECK_FALSE(out.reject_distance);
  }
}

TEST_CASE("procedure argument checks") {
  const UnitPoint mu(0, 0, 1);
  const auto p = ring_pair(2, 0.2, 0.3, mu);
  std::vector<UnitPoint> shorter(p.s2.begin(), p.s2.begin() + 40);
  try {
    test_procedure_1(p.s1, shorter, mu, 0.05);
    FAIL("expected SampleSizeMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SampleSizeMismatch);
  }
  CHECK_NOTHROW(test_procedure_2(p.s1, shorter, mu, 0.05));
  CHECK_THROWS_AS(test_procedure_2(p.s1, p.s2, mu, 1.0), Error);
}

TEST_CASE("decision rule is Bonferroni on the minimum component p-value") {
  const UnitPoint mu(0, 0, 1);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = ring_pair(seed, 0.2, 0.3, mu);
    const auto o = test_procedure_1(p.s1, p.s2, mu, 0.05);
    const double pmin = std::min(o.xi_components[0].p_value, o.xi_components[1].p_value);
    CHECK(o.xi_p_value == pmin);
    CHECK(o.reject == (pmin < 0.025));
    CHECK(o.reject_distance == (o.distance.p_value < 0.05));
    CHECK(o.xi_statistic == std::max(o.xi_components[0].statistic, o.xi_components[1].statistic));
  }
}

TEST_CASE("distance statistics are unchanged by a joint rotation about q") {
  const UnitPoint mu(0, 0, 1);
  const UnitPoint q(0.2, 0.1, 0.97);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = ring_pair(seed, 0.2, 0.3, mu);
    const auto r1 = rotate_sample(p.s1, q, 0.8);
    const auto r2 = rotate_sample(p.s2, q, 0.8);
    const auto a = test_procedure_1(p.s1, p.s2, q, 0.05);
    const auto b = test_procedure_1(r1, r2, q, 0.05);
    CHECK(a.distance.statistic == b.distance.statistic);
    CHECK(a.distance.p_value == doctest::Approx(b.distance.p_value).epsilon(1e-14));
    const auto c = test_procedure_2(p.s1, p.s2, q, 0.05);
    const auto d = test_procedure_2(r1, r2, q, 0.05);
    CHECK(c.distance.statistic == d.distance.statistic);
  }
}

TEST_CASE("scan: identical samples keep input order with zero tr2") {
  const UnitPoint mu(0, 0, 1);
  const auto p = ring_pair(3, 0.2, 0.3, mu);
  Rng rng(63);
  const auto cand = uniform_sample(rng, 50);
  const auto scan = observation_scan(p.s1, p.s1, cand, ScanCriterion::TrSq);
  REQUIRE(scan.size() == 50);
  for (std::size_t c = 0; c < scan.size(); ++c) {
    CHECK(scan[c].tr2 == 0.0);
    CHECK(scan[c].candidate_index == c);
    CHECK_FALSE(scan[c].procedure_error.empty());
  }
}

TEST_CASE("scan sorting and thread independence") {
  const UnitPoint mu(0, 0, 1);
  const auto p = ring_pair(4, 0.2, 0.3, mu);
  Rng rng(64);
  const auto cand = uniform_sample(rng, 50);
  const auto a = observation_scan(p.s1, p.s2, cand, ScanCriterion::TrSq, 0.05, 1);
  const auto b = observation_scan(p.s1, p.s2, cand, ScanCriterion::TrSq, 0.05, 4);
  for (std::size_t c = 0; c + 1 < a.size(); ++c) CHECK(a[c].tr2 >= a[c + 1].tr2);
  for (std::size_t c = 0; c < a.size(); ++c) {
    CHECK(a[c].candidate_index == b[c].candidate_index);
    CHECK(a[c].procedure1->xi_p_value == b[c].procedure1->xi_p_value);
  }
  const auto d = observation_scan(p.s1, p.s2, cand, ScanCriterion::Det);
  for (std::size_t c = 0; c + 1 < d.size(); ++c) CHECK(d[c].det >= d[c + 1].det);
  const auto u = observation_scan(p.s1, p.s2, cand, ScanCriterion::Uniform);
  for (std::size_t c = 0; c < u.size(); ++c) CHECK(u[c].candidate_index == c);
  CHECK(parse_scan_criterion("det") == ScanCriterion::Det);
  CHECK_THROWS_AS(parse_scan_criterion("nope"), Error);
}

TEST_CASE("sign areas sum to one") {
  const UnitPoint mu(0, 0, 1);
  const auto p = ring_pair(5, 0.2, 0.3, mu);
  Rng rng(65);
  const auto grid = uniform_sample(rng, 1000);
  const SignAreas s = det_sign_areas(p.s1, p.s2, grid);
  CHECK(std::abs(s.positive + s.negative + s.zero - 1.0) <= 1e-12);
}

TEST_CASE("det-sorted scan: distance test wins where both eigenvalues are positive, xi test where det < 0") {
  // majority trend over seeds for a concentrated-vs-ring pair at 50 random observation points
  const UnitPoint mu(0, 0, 1);
  int d_wins = 0, d_total = 0, xi_wins = 0, xi_total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = ring_pair(100 + seed, 0.2, 0.3, mu);
    Rng rng(derive_seed(seed, 7));
    const auto cand = uniform_sample(rng, 50);
    for (const auto& e : observation_scan(p.s1, p.s2, cand, ScanCriterion::Det)) {
      if (!e.procedure1) continue;
      const double p_xi = e.procedure1->xi_p_value;
      const double p_d = e.procedure1->distance.p_value;
      if (e.lambda(1) > 0.0) {
        ++d_total;
        d_wins += p_d < p_xi;
      } else if (e.det < 0.0) {
        ++xi_total;
        xi_wins += p_xi < p_d;
      }
    }
  }
  MESSAGE("positive-eigenvalue points: " << d_wins << "/" << d_total
                                         << ", det<0 points: " << xi_wins << "/" << xi_total);
  REQUIRE(d_total > 0);
  REQUIRE(xi_total > 0);
  CHECK(2 * d_wins > d_total);
  CHECK(2 * xi_wins > xi_total);
}

TEST_CASE("S+ < S- for a concentrated-vs-spread pair") {
  const UnitPoint mu(0, 0, 1);
  Rng rng(66);
  const auto grid = uniform_sample(rng, 1000);
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = ring_pair(200 + seed, 0.0, 0.3, mu);
    const SignAreas s = det_sign_areas(p.s1, p.s2, grid);
    wins += s.positive < s.negative;
  }
  CHECK(wins >= 8);
}

TEST_CASE("sample profile") {
  const UnitPoint q(0, 0, 1);
  const UnitPoint p(0.6, 0.0, 0.8);  // log direction along e1, theta = 0
  const auto single = sample_profile(q, std::vector{p}, 40);
  const double d2 = std::pow(geodesic_distance(q, p), 2);
  for (std::size_t t = 0; t < 40; ++t) {
    CHECK(std::abs(single.values[t][0] - std::pow(std::cos(single.theta[t]), 2) * d2) <= 1e-12);
  }
  CHECK_THROWS_AS(sample_profile(q, std::vector{p}, 2), Error);

  const auto pair = ring_pair(6, 0.2, 0.3, UnitPoint(0.1, 0.0, 1.0));
  const auto p1 = sample_profile(q, pair.s1, 50);
  const auto p2 = sample_profile(q, pair.s2, 50);
  const Projections pr = projections_at(q, pair.s1, pair.s2, true);
  double worst = 0.0;
  for (std::size_t t = 0; t < 50; ++t) {
    double m1 = 0.0, m2 = 0.0;
    for (double v : p1.values[t]) m1 += v / double(pair.s1.size());
    for (double v : p2.values[t]) m2 += v / double(pair.s2.size());
    const Eigen::Vector2d v(std::cos(p1.theta[t]), std::sin(p1.theta[t]));
    worst = std::max(worst, std::abs((m1 - m2) - pr.diff.quad(v)));
    for (std::size_t i = 0; i < pair.s1.size(); ++i) {
      CHECK(std::abs(p1.values[t][i] - p1.values[(t + 25) % 50][i]) <= 1e-12);
      CHECK(p1.values[t][i] >= 0.0);
    }
  }
  CHECK(worst <= 1e-10);
}
