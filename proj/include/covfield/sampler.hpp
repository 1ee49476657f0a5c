#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "covfield/random.hpp"
#include "covfield/sphere.hpp"

namespace covfield {

/// Ring-shaped density f(p; a, mu) ~ exp(-(d^4(mu, p) - a)^2).
///
/// The exponent reads tr((mu p)(mu p)')^2 = d^4. The Quadratic variant uses d^2 in
/// place of d^4 and exists only for sensitivity checks.
struct RingDensity {
  enum class Variant { Quartic, Quadratic };

  double a = 0.0;
  UnitPoint mu;
  Variant variant = Variant::Quartic;
};

std::string_view to_string(RingDensity::Variant v);
RingDensity::Variant parse_density_variant(std::string_view name);

/// exp(-(d^4 - a)^2), in (0, 1].
double ring_density_unnormalized(const UnitPoint& p, const RingDensity& params);

struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;

  double acceptance_rate() const { return proposals ? double(accepted) / double(proposals) : 0.0; }
};

/// Uniform proposals accepted with probability equal to the unnormalized density.
std::vector<UnitPoint> rejection_sample(const RingDensity& params, std::size_t n, Rng& rng,
                                        RejectionStats* stats = nullptr);

std::vector<UnitPoint> rotate_sample(std::span<const UnitPoint> points, const UnitPoint& axis,
                                     double angle);

}  // namespace covfield
