#include "covfield/sampler.hpp"

#include <cmath>
#include <string>

#include "covfield/error.hpp"

namespace covfield {

std::string_view to_string(RingDensity::Variant v) {
  return v == RingDensity::Variant::Quartic ? "quartic" : "quadratic";
}

RingDensity::Variant parse_density_variant(std::string_view name) {
  if (name == "quartic" || name == "d4") return RingDensity::Variant::Quartic;
  if (name == "quadratic" || name == "d2") return RingDensity::Variant::Quadratic;
  throw Error(ErrorKind::InvalidArgument, "unknown density variant '" + std::string(name) + "'");
}

double ring_density_unnormalized(const UnitPoint& p, const RingDensity& params) {
  if (params.mu.dot(p) <= -1.0 + kAntipodalEps) {
    throw Error(ErrorKind::AntipodalPoint, "density undefined at the antipode of mu");
  }
  const double d = geodesic_distance(params.mu, p);
  const double d2 = d * d;
  const double s = (params.variant == RingDensity::Variant::Quartic ? d2 * d2 : d2) - params.a;
  return std::exp(-s * s);
}

std::vector<UnitPoint> rejection_sample(const RingDensity& params, std::size_t n, Rng& rng,
                                        RejectionStats* stats) {
  if (params.a < 0.0) throw Error(ErrorKind::InvalidArgument, "ring parameter a must be >= 0");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<UnitPoint> out;
  out.reserve(n);
  RejectionStats local;
  while (out.size() < n) {
    const UnitPoint p = uniform_point(rng);
    ++local.proposals;
    if (params.mu.dot(p) <= -1.0 + kAntipodalEps) continue;
    if (unif(rng) < ring_density_unnormalized(p, params)) {
      out.push_back(p);
      ++local.accepted;
    }
  }
  if (stats) *stats = local;
  return out;
}

std::vector<UnitPoint> rotate_sample(std::span<const UnitPoint> points, const UnitPoint& axis,
                                     double angle) {
  std::vector<UnitPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(rotate(p, axis, angle));
  return out;
}

}  // namespace covfield
