#include "covfield/sphere.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <limits>
#include <string>

#include "covfield/error.hpp"

namespace covfield {

UnitPoint::UnitPoint(double x, double y, double z) : UnitPoint(Eigen::Vector3d(x, y, z)) {}

UnitPoint::UnitPoint(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  // already-unit input is kept bit for bit so text round trips are exact
  v_ = std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? v : Eigen::Vector3d(v / n);
}

bool TangentFrame::same_as(const TangentFrame& other) const {
  constexpr double tol = 1e-12;
  return (base.vec() - other.base.vec()).norm() < tol && (e1 - other.e1).norm() < tol &&
         (e2 - other.e2).norm() < tol;
}

TangentFrame tangent_frame(const UnitPoint& q) {
  const Eigen::Vector3d& b = q.vec();
  int axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(b[i]) < std::abs(b[axis])) axis = i;
  }
  Eigen::Vector3d a = Eigen::Vector3d::Unit(axis);
  Eigen::Vector3d e1 = (a - a.dot(b) * b).normalized();
  Eigen::Vector3d e2 = b.cross(e1);
  return TangentFrame{q, e1, e2};
}

Eigen::Vector3d log_map_ambient(const UnitPoint& q, const UnitPoint& p) {
  const double c = q.dot(p);
  if (c <= -1.0 + kAntipodalEps) {
    throw Error(ErrorKind::AntipodalPoint, "log map undefined at the antipode (<p,q> = " +
                                               std::to_string(c) + ")");
  }
  if (c > kCoincidentCos) return Eigen::Vector3d::Zero();
  const Eigen::Vector3d w = p.vec() - c * q.vec();
  const double sin_t = q.vec().cross(p.vec()).norm();
  const double t = std::atan2(sin_t, c);
  return (t / w.norm()) * w;
}

TangentVec log_map(const TangentFrame& frame, const UnitPoint& p) {
  return TangentVec{frame, frame.to_coords(log_map_ambient(frame.base, p))};
}

TangentVec log_map(const UnitPoint& q, const UnitPoint& p) { return log_map(tangent_frame(q), p); }

UnitPoint exp_map(const UnitPoint& q, const TangentVec& v) {
  if (!v.frame.base.vec().isApprox(q.vec(), 1e-12)) {
    throw Error(ErrorKind::FrameMismatch, "tangent vector is not based at q");
  }
  const double t = v.norm();
  if (!(t < std::numbers::pi)) {
    throw Error(ErrorKind::InvalidArgument, "exp map requires |v| < pi");
  }
  if (t == 0.0) return q;
  const Eigen::Vector3d dir = v.ambient() / t;
  return UnitPoint(std::cos(t) * q.vec() + std::sin(t) * dir);
}

double geodesic_distance(const UnitPoint& q, const UnitPoint& p) {
  return std::atan2(q.vec().cross(p.vec()).norm(), q.dot(p));
}

UnitPoint uniform_point(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Eigen::Vector3d g(normal(rng), normal(rng), normal(rng));
    if (g.squaredNorm() > 1e-300) return UnitPoint(g);
  }
}

std::vector<UnitPoint> uniform_sample(Rng& rng, std::size_t n) {
  std::vector<UnitPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(uniform_point(rng));
  return out;
}

Eigen::Matrix2d geographic_metric(double theta) {
  if (!(std::abs(theta) < std::numbers::pi / 2)) {
    throw Error(ErrorKind::InvalidArgument, "geographic metric requires |theta| < pi/2");
  }
  const double c = std::cos(theta);
  Eigen::Matrix2d g;
  g << 1.0, 0.0, 0.0, c * c;
  return g;
}

UnitPoint rotate(const UnitPoint& p, const UnitPoint& axis, double angle) {
  return UnitPoint(Eigen::AngleAxisd(angle, axis.vec()) * p.vec());
}

namespace nsphere {

Eigen::VectorXd log_map(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  const double c = q.dot(p);
  if (c <= -1.0 + kAntipodalEps) {
    throw Error(ErrorKind::AntipodalPoint, "log map undefined at the antipode");
  }
  if (c > kCoincidentCos) return Eigen::VectorXd::Zero(q.size());
  const Eigen::VectorXd w = p - c * q;
  const double t = std::atan2(w.norm(), c);
  return (t / w.norm()) * w;
}

Eigen::VectorXd exp_map(const Eigen::VectorXd& q, const Eigen::VectorXd& v) {
  const double t = v.norm();
  if (t == 0.0) return q;
  Eigen::VectorXd out = std::cos(t) * q + (std::sin(t) / t) * v;
  return out / out.norm();
}

double distance(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  const double c = q.dot(p);
  return std::atan2((p - c * q).norm(), c);
}

}  // namespace nsphere

}  // namespace covfield
