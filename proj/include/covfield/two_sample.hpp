#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covfield/rank_tests.hpp"
#include "covfield/spd.hpp"
#include "covfield/sphere.hpp"

namespace covfield {

/// Everything the two test procedures need at one observation point q.
struct Projections {
  TangentFrame frame;
  Sym2 cov1;  // L1(q)
  Sym2 cov2;  // L2(q)
  Sym2 diff;  // L(q) = L1(q) - L2(q)

  Eigen::Vector2d lambda;                // descending eigenvalues of diff
  std::array<TangentVec, 2> directions;  // matching eigenvectors

  // xi[l](i, s) = <v_s, eta_i^l v_s>; d[l](i) = d^2(q, p_{i,l}) = tr(eta_i^l)
  std::array<Eigen::MatrixX2d, 2> xi;
  std::array<Eigen::VectorXd, 2> d;
};

/// Unit-weight sample operators at q, eigensystem of their difference and the projections.
/// Eigenvectors get a deterministic sign: the first nonzero frame coordinate is positive.
Projections projections_at(const UnitPoint& q, std::span<const UnitPoint> sample1,
                           std::span<const UnitPoint> sample2, bool paired);

struct ProcedureOutcome {
  double xi_statistic = 0.0;  // T_xi or W_xi: max over the two eigenvector statistics
  std::array<RankTestResult, 2> xi_components;
  double xi_p_value = 1.0;    // min component p-value, compared against alpha / 2
  RankTestResult distance;    // T_d or W_d
  Eigen::Vector2d lambda = Eigen::Vector2d::Zero();
  std::array<TangentVec, 2> directions;
  double alpha = 0.05;
  bool reject = false;           // xi decision (Bonferroni)
  bool reject_distance = false;  // distance test at level alpha
};

/// Signed-rank procedure on paired samples.
ProcedureOutcome test_procedure_1(std::span<const UnitPoint> sample1,
                                  std::span<const UnitPoint> sample2, const UnitPoint& q,
                                  double alpha);

/// Rank-sum procedure; samples need not be paired.
ProcedureOutcome test_procedure_2(std::span<const UnitPoint> sample1,
                                  std::span<const UnitPoint> sample2, const UnitPoint& q,
                                  double alpha);

enum class ScanCriterion { TrSq, Det, Uniform };

std::string_view to_string(ScanCriterion c);
ScanCriterion parse_scan_criterion(std::string_view name);

struct ScanEntry {
  UnitPoint q;
  std::size_t candidate_index = 0;
  double tr2 = 0.0;  // tr^2(L(q))
  double det = 0.0;  // det(L(q))
  Eigen::Vector2d lambda = Eigen::Vector2d::Zero();
  std::optional<ProcedureOutcome> procedure1;
  std::optional<ProcedureOutcome> procedure2;
  std::string procedure_error;  // set when a procedure was undefined at q (e.g. no nonzero pairs)
};

/// Evaluates L at each candidate and sorts (stable, descending) by the criterion.
std::vector<ScanEntry> observation_scan(std::span<const UnitPoint> sample1,
                                        std::span<const UnitPoint> sample2,
                                        std::span<const UnitPoint> candidates,
                                        ScanCriterion criterion, double alpha = 0.05,
                                        unsigned threads = 1);

struct SignAreas {
  double positive = 0.0;  // fraction of the grid with det(L) > 0
  double negative = 0.0;
  double zero = 0.0;
};

SignAreas det_sign_areas(std::span<const UnitPoint> sample1, std::span<const UnitPoint> sample2,
                         std::span<const UnitPoint> grid);

struct SampleProfile {
  UnitPoint base;
  TangentFrame frame;
  std::vector<double> theta;               // theta_t = 2 pi t / n_dirs
  std::vector<std::vector<double>> values; // values[t][i] = <v(theta_t), eta_i v(theta_t)>
};

inline constexpr std::size_t kDefaultProfileDirections = 50;

SampleProfile sample_profile(const UnitPoint& q, std::span<const UnitPoint> sample,
                             std::size_t n_dirs = kDefaultProfileDirections);

}  // namespace covfield
