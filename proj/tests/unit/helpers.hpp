#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "covfield/covariance.hpp"
#include "covfield/random.hpp"
#include "covfield/spd.hpp"
#include "covfield/sphere.hpp"

namespace testutil {

inline covfield::Sym2 random_spd(covfield::Rng& rng, double floor = 0.05) {
  std::normal_distribution<double> n01;
  Eigen::Matrix2d b;
  b << n01(rng), n01(rng), n01(rng), n01(rng);
  return covfield::Sym2::from_matrix(b * b.transpose() + floor * Eigen::Matrix2d::Identity());
}

inline Eigen::Matrix2d random_gl2(covfield::Rng& rng, double min_abs_det = 0.1) {
  std::normal_distribution<double> n01;
  for (;;) {
    Eigen::Matrix2d a;
    a << n01(rng), n01(rng), n01(rng), n01(rng);
    if (std::abs(a.determinant()) > min_abs_det) return a;
  }
}

inline covfield::Sym2 congruence(const Eigen::Matrix2d& a, const covfield::Sym2& x) {
  return covfield::Sym2::from_matrix(a * x.matrix() * a.transpose());
}

// Points within `radius` radians of `center`.
inline std::vector<covfield::UnitPoint> cap_sample(covfield::Rng& rng, const covfield::UnitPoint& center,
                                                   double radius, std::size_t n) {
  std::vector<covfield::UnitPoint> out;
  while (out.size() < n) {
    const auto p = covfield::uniform_point(rng);
    if (covfield::geodesic_distance(center, p) < radius) out.push_back(p);
  }
  return out;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testutil
