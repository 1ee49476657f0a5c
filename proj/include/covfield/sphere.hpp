#pragma once

#include <Eigen/Core>

#include <numbers>
#include <vector>

#include "covfield/random.hpp"

namespace covfield {

inline constexpr double kAntipodalEps = 1e-9;
inline constexpr double kCoincidentCos = 1.0 - 1e-12;

/// A point on the unit 2-sphere. Renormalized on construction.
class UnitPoint {
 public:
  UnitPoint() : v_(0.0, 0.0, 1.0) {}
  UnitPoint(double x, double y, double z);
  explicit UnitPoint(const Eigen::Vector3d& v);

  const Eigen::Vector3d& vec() const noexcept { return v_; }
  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }

  double dot(const UnitPoint& other) const noexcept { return v_.dot(other.v_); }

  friend bool operator==(const UnitPoint& a, const UnitPoint& b) { return a.v_ == b.v_; }

 private:
  Eigen::Vector3d v_;
};

/// Right-handed orthonormal triple {e1, e2, base}. The metric is the identity in this frame.
struct TangentFrame {
  UnitPoint base;
  Eigen::Vector3d e1;
  Eigen::Vector3d e2;

  Eigen::Vector3d to_ambient(const Eigen::Vector2d& u) const { return u.x() * e1 + u.y() * e2; }
  Eigen::Vector2d to_coords(const Eigen::Vector3d& v) const { return {v.dot(e1), v.dot(e2)}; }

  bool same_as(const TangentFrame& other) const;
};

/// Tangent vector at frame.base, stored as frame coordinates (radians).
struct TangentVec {
  TangentFrame frame;
  Eigen::Vector2d u = Eigen::Vector2d::Zero();

  double norm() const { return u.norm(); }
  Eigen::Vector3d ambient() const { return frame.to_ambient(u); }
};

/// Deterministic frame at q: the ambient axis least aligned with q, Gram-Schmidt, e2 = q x e1.
TangentFrame tangent_frame(const UnitPoint& q);

TangentVec log_map(const UnitPoint& q, const UnitPoint& p);
TangentVec log_map(const TangentFrame& frame, const UnitPoint& p);

UnitPoint exp_map(const UnitPoint& q, const TangentVec& v);

/// Geodesic (great-circle) distance in [0, pi].
double geodesic_distance(const UnitPoint& q, const UnitPoint& p);

/// Ambient log map without frame: the tangent vector at q as a 3-vector. Throws on antipodes.
Eigen::Vector3d log_map_ambient(const UnitPoint& q, const UnitPoint& p);

std::vector<UnitPoint> uniform_sample(Rng& rng, std::size_t n);
UnitPoint uniform_point(Rng& rng);

/// Metric of S^2 in geographical coordinates (theta = latitude, phi = longitude).
Eigen::Matrix2d geographic_metric(double theta);

/// Rodrigues rotation of p about `axis` by `angle` radians.
UnitPoint rotate(const UnitPoint& p, const UnitPoint& axis, double angle);

/// Log/exp on the unit sphere S^{n-1} in R^n, same closed forms as on S^2.
namespace nsphere {

Eigen::VectorXd log_map(const Eigen::VectorXd& q, const Eigen::VectorXd& p);
Eigen::VectorXd exp_map(const Eigen::VectorXd& q, const Eigen::VectorXd& v);
double distance(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

}  // namespace nsphere

}  // namespace covfield
