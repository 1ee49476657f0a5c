#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covfield/covariance.hpp"
#include "covfield/error.hpp"
#include "covfield/sphere.hpp"
#include "helpers.hpp"

using namespace covfield;
using std::numbers::pi;

TEST_CASE("unit point renormalizes and rejects zero") {
  const UnitPoint p(3.0, 0.0, 4.0);
  CHECK(p.vec().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.x() == doctest::Approx(0.6));
  CHECK_THROWS_AS(UnitPoint(0.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(UnitPoint(NAN, 0.0, 1.0), Error);
}

TEST_CASE("log map closed-form examples") {
  const UnitPoint north(0, 0, 1);
  const TangentVec zero = log_map(north, north);
  CHECK(zero.u.norm() == 0.0);

  const TangentVec v = log_map(north, UnitPoint(1, 0, 0));
  CHECK(v.frame.e1.isApprox(Eigen::Vector3d(1, 0, 0)));
  CHECK(v.u.x() == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(std::abs(v.u.y()) < 1e-15);

  try {
    log_map(north, UnitPoint(0, 0, -1));
    FAIL("expected AntipodalPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AntipodalPoint);
  }
}

TEST_CASE("near-coincident points map to the exact zero vector") {
  const UnitPoint q(0, 0, 1);
  const UnitPoint p(1e-7, 0, 1);  // <p,q> = 1 - 5e-15
  CHECK(log_map(q, p).u.norm() == 0.0);
}

TEST_CASE("exp map examples") {
  const UnitPoint north(0, 0, 1);
  const TangentFrame f = tangent_frame(north);
  CHECK(exp_map(north, TangentVec{f, {0, 0}}) == north);
  const UnitPoint east = exp_map(north, TangentVec{f, {pi / 2, 0}});
  CHECK((east.vec() - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(exp_map(UnitPoint(1, 0, 0), TangentVec{f, {0.1, 0}}), Error);
  CHECK_THROWS_AS(exp_map(north, TangentVec{f, {pi, 0}}), Error);
}

TEST_CASE("round trip, norm identity and symmetry on random pairs") {
  Rng rng(11);
  double worst_trip = 0.0;
  double worst_norm = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const UnitPoint q = uniform_point(rng);
    const UnitPoint p = uniform_point(rng);
    if (q.dot(p) <= -1.0 + 1e-6) continue;
    const TangentVec v = log_map(q, p);
    worst_trip = std::max(worst_trip, (exp_map(q, v).vec() - p.vec()).norm());
    // independent oracle: arccos of the clamped inner product, fine away from coincidence
    const double oracle = std::acos(std::clamp(q.dot(p), -1.0, 1.0));
    worst_norm = std::max(worst_norm, std::abs(v.norm() - oracle));
    CHECK(geodesic_distance(q, p) == geodesic_distance(p, q));
  }
  CHECK(worst_trip <= 1e-10);
  CHECK(worst_norm <= 1e-12);
}

TEST_CASE("geodesic distance examples and triangle inequality") {
  const UnitPoint n(0, 0, 1);
  CHECK(geodesic_distance(n, n) == 0.0);
  CHECK(geodesic_distance(n, UnitPoint(0, 0, -1)) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(geodesic_distance(n, UnitPoint(1, 0, 0)) == doctest::Approx(pi / 2).epsilon(1e-15));
  Rng rng(12);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = uniform_point(rng);
    const auto b = uniform_point(rng);
    const auto c = uniform_point(rng);
    worst = std::min(worst, geodesic_distance(a, b) + geodesic_distance(b, c) - geodesic_distance(a, c));
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("tangent frame construction") {
  const TangentFrame f = tangent_frame(UnitPoint(0, 0, 1));
  CHECK(f.e1 == Eigen::Vector3d(1, 0, 0));
  CHECK(f.e2 == Eigen::Vector3d(0, 1, 0));

  const UnitPoint x(1, 0, 0);
  const TangentFrame fx = tangent_frame(x);
  CHECK(fx.e2 == x.vec().cross(fx.e1));

  Rng rng(13);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto q = uniform_point(rng);
    const auto fr = tangent_frame(q);
    Eigen::Matrix3d m;
    m << fr.e1, fr.e2, q.vec();
    worst = std::max(worst, (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(m.determinant() - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("uniform sample moments and determinism") {
  Rng rng(14);
  const auto pts = uniform_sample(rng, 100000);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d sq = Eigen::Vector3d::Zero();
  for (const auto& p : pts) {
    mean += p.vec();
    sq += p.vec().cwiseProduct(p.vec());
  }
  mean /= double(pts.size());
  sq /= double(pts.size());
  CHECK(mean.norm() < 0.02);
  for (int c = 0; c < 3; ++c) CHECK(std::abs(sq(c) - mean(c) * mean(c) - 1.0 / 3.0) < 0.01);

  Rng r1(5), r2(5);
  const auto a = uniform_sample(r1, 50);
  const auto b = uniform_sample(r2, 50);
  CHECK(a == b);
}

TEST_CASE("geographic metric values") {
  CHECK(geographic_metric(0.0).isApprox(Eigen::Matrix2d::Identity()));
  const Eigen::Matrix2d g = geographic_metric(pi / 3);
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g(0, 1) == 0.0);
  for (double th : {-1.2, -0.3, 0.4, 1.5}) {
    CHECK(geographic_metric(th).determinant() == doctest::Approx(std::cos(th) * std::cos(th)));
  }
  CHECK_THROWS_AS(geographic_metric(pi / 2), Error);
}

namespace {

// Coordinate basis (d/dtheta, d/dphi) of the latitude/longitude chart at (theta, phi).
Eigen::Matrix<double, 3, 2> geo_jacobian(double th, double ph) {
  Eigen::Matrix<double, 3, 2> j;
  j.col(0) << -std::sin(th) * std::cos(ph), -std::sin(th) * std::sin(ph), std::cos(th);
  j.col(1) << -std::cos(th) * std::sin(ph), std::cos(th) * std::cos(ph), 0.0;
  return j;
}

}  // namespace

TEST_CASE("quadratic form agrees with the geographic-coordinate representation") {
  Rng rng(15);
  std::uniform_real_distribution<double> lat(-1.3, 1.3), lon(-pi, pi);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double th = lat(rng);
    const double ph = lon(rng);
    const UnitPoint q(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), std::sin(th));
    const auto j = geo_jacobian(th, ph);
    const Eigen::Matrix2d g = geographic_metric(th);
    CHECK((j.transpose() * j - g).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::Matrix<double, 2, 3> to_coords = g.inverse() * j.transpose();

    const auto sample = testutil::cap_sample(rng, q, 1.0, 20);
    const Sym2 op = sample_cov_operator(q, sample, WeightFn::Unit);
    Eigen::Matrix2d sigma_x = Eigen::Matrix2d::Zero();
    for (const auto& p : sample) {
      const Eigen::Vector2d u = to_coords * log_map_ambient(q, p);
      sigma_x += u * u.transpose() / double(sample.size());
    }
    const TangentFrame fr = tangent_frame(q);
    std::normal_distribution<double> n01;
    const Eigen::Vector2d vf(n01(rng), n01(rng));
    const Eigen::Vector2d vx = to_coords * fr.to_ambient(vf);
    const double geo = vx.transpose() * g * sigma_x * g * vx;
    const double frame = quadratic_form(TangentVec{fr, vf}, op, fr);
    worst = std::max(worst, std::abs(geo - frame));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("quadratic form is invariant under frame rotation at q") {
  Rng rng(16);
  std::uniform_real_distribution<double> ang(0.0, 2 * pi);
  for (int t = 0; t < 100; ++t) {
    const auto q = uniform_point(rng);
    const auto sample = testutil::cap_sample(rng, q, 1.2, 10);
    const TangentFrame f = tangent_frame(q);
    const double a = ang(rng);
    TangentFrame r = f;
    r.e1 = std::cos(a) * f.e1 + std::sin(a) * f.e2;
    r.e2 = -std::sin(a) * f.e1 + std::cos(a) * f.e2;
    Sym2 op_f, op_r;
    for (const auto& p : sample) {
      op_f += point_operator(f, p, WeightFn::Unit);
      op_r += point_operator(r, p, WeightFn::Unit);
    }
    const Eigen::Vector3d v = f.to_ambient({0.3, -0.8});
    CHECK(std::abs(op_f.quad(f.to_coords(v)) - op_r.quad(r.to_coords(v))) <= 1e-10);
  }
}

TEST_CASE("rotation preserves distances") {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const auto axis = uniform_point(rng);
    const auto p = uniform_point(rng);
    const auto p2 = uniform_point(rng);
    const auto rp = rotate(p, axis, 0.9);
    const auto rp2 = rotate(p2, axis, 0.9);
    CHECK(std::abs(geodesic_distance(axis, rp) - geodesic_distance(axis, p)) <= 1e-12);
    CHECK(std::abs(geodesic_distance(rp, rp2) - geodesic_distance(p, p2)) <= 1e-12);
  }
}

TEST_CASE("n-sphere maps reduce to the S2 maps") {
  Rng rng(18);
  for (int t = 0; t < 100; ++t) {
    const auto q = uniform_point(rng);
    const auto p = uniform_point(rng);
    const Eigen::VectorXd qv = q.vec();
    const Eigen::VectorXd pv = p.vec();
    CHECK((nsphere::log_map(qv, pv) - log_map_ambient(q, p)).norm() < 1e-12);
    CHECK((nsphere::exp_map(qv, nsphere::log_map(qv, pv)) - pv).norm() < 1e-10);
    CHECK(std::abs(nsphere::distance(qv, pv) - geodesic_distance(q, p)) < 1e-14);
  }
}
