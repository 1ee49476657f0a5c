#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "covfield/covariance.hpp"
#include "covfield/random.hpp"
#include "covfield/spd.hpp"
#include "covfield/sphere.hpp"

namespace covfield {

/// Interpolate m endpoint pmfs on k domain points with weights alpha by minimizing
/// H(f; alpha) = sum_s alpha_s sum_j h(Sigma[f]_j, C_j^s) over the simplex.
struct InterpProblem {
  std::vector<UnitPoint> domain;  // p_i, size k
  std::vector<UnitPoint> obs;     // q_j
  std::vector<Pmf> endpoints;     // f^s, size m
  std::vector<double> alpha;      // size m, on the simplex
  Invariant::Kind invariant = Invariant::Kind::TrLn2;
  WeightFn weight = WeightFn::PiHalf;

  std::size_t k() const { return domain.size(); }
  std::size_t m() const { return endpoints.size(); }
};

/// Default weight per functional: PiHalf for TrLn2 and Lik, Unit for TrDif.
WeightFn default_weight(Invariant::Kind kind);

/// Throws on shape errors, alpha off the simplex, antipodal (q_j, p_i) pairs, or
/// PiHalf problems whose observation points come within 1e-8 of a domain point.
void validate(const InterpProblem& problem);

/// Problem-constant quantities shared by every evaluation of H.
struct Kernels {
  Eigen::MatrixXd dist2;     // a_ij = d^2(q_j, p_i)
  Eigen::MatrixXd shifted2;  // b_ij = (d(q_j, p_i) - pi/2)^2
  Eigen::MatrixXd trace;     // tr of the weighted point operator; equals dist2 or shifted2
  std::vector<std::vector<Sym2>> point_ops;    // [i][j] weighted (q_j p_i)(q_j p_i)'
  std::vector<std::vector<Sym2>> endpoint_ops; // C_j^s as [s][j]
  Eigen::MatrixXd endpoint_trace;              // c_j^s as (s, j)
  // Z_ij^s in the symmetric congruent form L^{-1} P_ij L^{-T} with C_j^s = L L', as [s][j][i].
  // Filled only for TrLn2 and Lik.
  std::vector<std::vector<std::vector<Sym2>>> whitened;
};

Kernels precompute_kernels(const InterpProblem& problem, unsigned threads = 1);

/// H and its derivatives for one problem at fixed alpha. Accepts any f in R^k for which
/// every Sigma[f]_j stays positive definite (needed by finite-difference checks).
class Objective {
 public:
  Objective(const InterpProblem& problem, const Kernels& kernels);
  Objective(const InterpProblem& problem, const Kernels& kernels, std::vector<double> alpha);

  double value(std::span<const double> f) const;
  Eigen::VectorXd gradient(std::span<const double> f) const;
  Eigen::MatrixXd hessian(std::span<const double> f) const;

  /// The multiplicative update direction f_i * sum_s alpha_s sum_j tr(D(Y_j^s) Z_ij^s) / tr(Z_ij^s),
  /// with D(Y) = ln Y for TrLn2 and Y - I for Lik. Not a gradient; TrDif falls back to the gradient.
  Eigen::VectorXd multiplicative_direction(std::span<const double> f) const;

  /// Sigma[f]_j by the operator route.
  Sym2 field_at(std::span<const double> f, std::size_t j) const;

  Invariant::Kind kind() const { return kind_; }
  const std::vector<double>& alpha() const { return alpha_; }
  std::size_t k() const { return k_; }

 private:
  const Kernels* kernels_;
  Invariant::Kind kind_;
  std::vector<double> alpha_;
  std::size_t k_;
  std::size_t n_obs_;
};

double eval_H(const Pmf& f, const InterpProblem& problem, const Kernels& kernels);
Eigen::VectorXd grad_H(const Pmf& f, const InterpProblem& problem, const Kernels& kernels);

enum class SearchDirection { Gradient, Multiplicative };

struct SolverConfig {
  int max_iter = 5000;
  double tol = 1e-9;
  int restarts = 0;  // 0 selects the default: 8 for TrLn2, 1 otherwise
  std::uint64_t seed = 0;
  SearchDirection direction = SearchDirection::Gradient;
  std::optional<std::vector<double>> initial;  // single warm start, overrides restarts
  unsigned threads = 1;
};

inline constexpr int kDefaultTrLn2Restarts = 8;
inline constexpr double kArmijoC = 1e-4;
inline constexpr int kMaxHalvings = 50;

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double step = 0.0;
  double grad_norm = 0.0;  // infinity norm of f - P(f - grad)
};

struct InterpResult {
  Pmf f_hat;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
  std::vector<double> restart_objectives;  // +inf for starts outside the functional's domain
  std::vector<TraceRow> trace;             // iterate log of the winning start
};

/// Projected gradient descent on the simplex with Armijo backtracking and
/// Barzilai-Borwein trial steps; multi-start for TrLn2.
InterpResult solve(const InterpProblem& problem, const Kernels& kernels, const SolverConfig& config);
InterpResult solve(const Objective& objective, const InterpProblem& problem,
                   const SolverConfig& config);

Pmf linear_interp(std::span<const double> alpha, std::span<const Pmf> endpoints);

/// Weighted Karcher mean of sqrt(f^s) on the unit sphere of R^k, squared back to a pmf.
Pmf sqroot_interp(std::span<const double> alpha, std::span<const Pmf> endpoints, double tol = 1e-13,
                  int max_iter = 1000);

double mse(const Pmf& f_hat, std::span<const Pmf> endpoints, std::span<const double> alpha);

/// FA of the ambient 3x3 second moment sum_i f_i p_i p_i'.
double fractional_anisotropy(const Pmf& f, std::span<const UnitPoint> domain);

struct RankReport {
  std::size_t rank_dist2 = 0;    // rank of A
  std::size_t rank_shifted2 = 0; // rank of B
  std::size_t k = 0;
  bool admissible = false;       // full rank k of the trace kernel matching the weight
};

std::size_t numerical_rank(const Eigen::MatrixXd& m);
RankReport rank_check(const InterpProblem& problem, const Kernels& kernels);

struct SweepResult {
  std::vector<std::vector<double>> alpha_path;
  std::vector<InterpResult> results;
  std::vector<double> f_jumps;          // ||f(t+1) - f(t)||_inf
  std::vector<double> objective_jumps;  // |H(t+1) - H(t)|

  double max_f_jump() const;
  double max_objective_jump() const;
};

/// Solves along the path, warm-starting each point from the previous solution.
SweepResult consistency_sweep(const InterpProblem& problem, const Kernels& kernels,
                              const std::vector<std::vector<double>>& alpha_path,
                              const SolverConfig& config);

/// alpha_t = (t/T, 1 - t/T) for t = 0..T.
std::vector<std::vector<double>> two_point_path(int steps);

struct ConvexityReport {
  double min_hessian_eig = 0.0;
  bool convex_certificate = false;
  std::size_t points_evaluated = 0;
};

/// Smallest Hessian eigenvalue over random interior simplex points (Dirichlet(1)).
ConvexityReport convexity_probe(const Objective& objective, std::size_t n_points, Rng& rng);

std::vector<double> dirichlet_draw(std::size_t k, Rng& rng);

}  // namespace covfield
