#include "covfield/covariance.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "covfield/error.hpp"

namespace covfield {

double weight_value(WeightFn r, double t) {
  if (r == WeightFn::Unit) return 1.0;
  const double s = 1.0 - std::numbers::pi / (2.0 * t);
  return s * s;
}

std::string_view to_string(WeightFn r) { return r == WeightFn::Unit ? "unit" : "pihalf"; }

WeightFn parse_weight(std::string_view name) {
  if (name == "unit") return WeightFn::Unit;
  if (name == "pihalf") return WeightFn::PiHalf;
  throw Error(ErrorKind::InvalidArgument, "unknown weight function '" + std::string(name) + "'");
}

Pmf::Pmf(std::vector<double> weights) : w_(std::move(weights)) {
  double sum = 0.0;
  for (double w : w_) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "pmf weights must be >= 0");
    sum += w;
  }
  if (w_.empty() || std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "pmf weights must sum to 1 (got " +
                                                std::to_string(sum) + ")");
  }
}

Pmf Pmf::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double& w : weights) {
    w = std::max(w, 0.0);
    sum += w;
  }
  if (!(sum > 0.0)) throw Error(ErrorKind::InvalidArgument, "pmf has no positive mass");
  for (double& w : weights) w /= sum;
  return Pmf(std::move(weights));
}

Pmf Pmf::uniform(std::size_t k) { return Pmf(std::vector<double>(k, 1.0 / double(k))); }

Pmf Pmf::point_mass(std::size_t k, std::size_t index) {
  std::vector<double> w(k, 0.0);
  w.at(index) = 1.0;
  return Pmf(std::move(w));
}

Sym2 point_operator(const TangentFrame& frame, const UnitPoint& p, WeightFn r) {
  const Eigen::Vector2d u = log_map(frame, p).u;
  if (r == WeightFn::Unit) return Sym2::outer(u);
  const double t = geodesic_distance(frame.base, p);
  if (t < kCoincidentDistance) {
    throw Error(ErrorKind::CoincidentPoint,
                "pi/2-weighted operator is undefined when p coincides with q");
  }
  return Sym2::outer(u, weight_value(r, t));
}

Sym2 point_operator(const UnitPoint& q, const UnitPoint& p, WeightFn r) {
  return point_operator(tangent_frame(q), p, r);
}

Sym2 sample_cov_operator(const UnitPoint& q, std::span<const UnitPoint> sample, WeightFn r) {
  if (sample.empty()) throw Error(ErrorKind::InvalidArgument, "empty sample");
  const TangentFrame frame = tangent_frame(q);
  Sym2 acc;
  for (const auto& p : sample) acc += point_operator(frame, p, r);
  return acc * (1.0 / double(sample.size()));
}

CovField pmf_cov_field(const Pmf& f, std::span<const UnitPoint> domain,
                       std::span<const UnitPoint> obs, WeightFn r) {
  if (f.size() != domain.size()) {
    throw Error(ErrorKind::DimensionMismatch, "pmf has " + std::to_string(f.size()) +
                                                  " weights for " + std::to_string(domain.size()) +
                                                  " domain points");
  }
  CovField field;
  field.obs.assign(obs.begin(), obs.end());
  field.ops.reserve(obs.size());
  for (const auto& q : obs) {
    const TangentFrame frame = tangent_frame(q);
    Sym2 acc;
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (f[i] == 0.0) continue;
      acc += point_operator(frame, domain[i], r) * f[i];
    }
    field.ops.push_back(acc);
  }
  return field;
}

double quadratic_form(const TangentVec& v, const Sym2& op, const TangentFrame& op_frame) {
  if (!v.frame.same_as(op_frame)) {
    throw Error(ErrorKind::FrameMismatch, "vector and operator live in different frames");
  }
  return op.quad(v.u);
}

double field_distance(const CovField& f1, const CovField& f2, const Invariant& h) {
  if (f1.obs.size() != f2.obs.size() || f1.ops.size() != f1.obs.size() ||
      f2.ops.size() != f2.obs.size()) {
    throw Error(ErrorKind::ObservationMismatch, "fields have different observation counts");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < f1.obs.size(); ++j) {
    if ((f1.obs[j].vec() - f2.obs[j].vec()).norm() > 1e-12) {
      throw Error(ErrorKind::ObservationMismatch,
                  "observation point " + std::to_string(j) + " differs between fields");
    }
    total += h(f1.ops[j], f2.ops[j]);
  }
  return total;
}

std::optional<UnitPoint> open_hemisphere_center(std::span<const UnitPoint> sample) {
  if (sample.empty()) return std::nullopt;
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  for (const auto& p : sample) w += p.vec();
  // perceptron on the normalized points, started from the extrinsic mean
  for (int iter = 0; iter < 10000; ++iter) {
    bool ok = w.norm() > 0.0;
    for (const auto& p : sample) {
      if (!ok) break;
      if (p.vec().dot(w) <= 1e-14 * w.norm()) {
        w += p.vec();
        ok = false;
      }
    }
    if (ok) return UnitPoint(w);
    if (w.norm() == 0.0) w = sample.front().vec();
  }
  return std::nullopt;
}

UnitPoint intrinsic_mean(std::span<const UnitPoint> sample, double tol, int max_iter) {
  if (!open_hemisphere_center(sample)) {
    throw Error(ErrorKind::NotHemispheric, "sample is not contained in an open hemisphere");
  }
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  for (const auto& p : sample) m += p.vec();
  UnitPoint q(m);
  const double inv_n = 1.0 / double(sample.size());
  for (int iter = 0; iter < max_iter; ++iter) {
    const TangentFrame frame = tangent_frame(q);
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    for (const auto& p : sample) step += log_map(frame, p).u;
    step *= inv_n;
    if (step.norm() < tol) return q;
    q = exp_map(q, TangentVec{frame, step});
  }
  throw Error(ErrorKind::IterationLimit,
              "intrinsic mean did not converge in " + std::to_string(max_iter) + " iterations");
}

}  // namespace covfield
