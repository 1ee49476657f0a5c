#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "covfield/sphere.hpp"
#include "covfield/spd.hpp"

namespace covfield {

inline constexpr double kCoincidentDistance = 1e-8;

/// Radial weight r(t) of the covariance field: Unit is r = 1, PiHalf is (1 - pi/(2t))^2.
enum class WeightFn { Unit, PiHalf };

double weight_value(WeightFn r, double t);
std::string_view to_string(WeightFn r);
WeightFn parse_weight(std::string_view name);

/// Probability mass function on a fixed list of domain points.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(std::vector<double> weights);

  /// Clamps negatives to zero and rescales to unit sum.
  static Pmf normalized(std::vector<double> weights);
  static Pmf uniform(std::size_t k);
  static Pmf point_mass(std::size_t k, std::size_t index);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> weights() const { return w_; }
  const std::vector<double>& vec() const { return w_; }

 private:
  std::vector<double> w_;
};

/// Operators at a list of observation points, each in tangent_frame(obs[j]).
struct CovField {
  std::vector<UnitPoint> obs;
  std::vector<Sym2> ops;
};

/// (qp)(qp)' r(|qp|) in the frame at q.
Sym2 point_operator(const TangentFrame& frame, const UnitPoint& p, WeightFn r);
Sym2 point_operator(const UnitPoint& q, const UnitPoint& p, WeightFn r);

Sym2 sample_cov_operator(const UnitPoint& q, std::span<const UnitPoint> sample, WeightFn r);

CovField pmf_cov_field(const Pmf& f, std::span<const UnitPoint> domain,
                       std::span<const UnitPoint> obs, WeightFn r);

/// v' op v with both expressed in `op_frame`; G is the identity in orthonormal frames.
double quadratic_form(const TangentVec& v, const Sym2& op, const TangentFrame& op_frame);

/// Sum over observation points of h(F1_j, F2_j).
double field_distance(const CovField& f1, const CovField& f2, const Invariant& h);

/// Karcher mean by the fixed point q <- exp_q(mean log_q p_i).
UnitPoint intrinsic_mean(std::span<const UnitPoint> sample, double tol = 1e-10,
                         int max_iter = 1000);

/// A direction q with <p_i, q> > 0 for every p_i, if one is found.
std::optional<UnitPoint> open_hemisphere_center(std::span<const UnitPoint> sample);

}  // namespace covfield
