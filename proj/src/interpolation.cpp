#include "covfield/interpolation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "covfield/error.hpp"
#include "covfield/parallel.hpp"
#include "covfield/simplex.hpp"

namespace covfield {

namespace {

constexpr double kSimplexTol = 1e-12;

// Scalar function g applied to the relative eigenvalues of (Sigma[f]_j, C_j^s):
// TrLn2 uses ln^2 x, Lik uses x - ln x - 1.
struct Spectral {
  double (*g)(double);
  double (*dg)(double);
  double (*ddg)(double);

  // first divided difference of dg
  double dd(double a, double b) const {
    if (std::abs(a - b) > 1e-6 * std::max(std::abs(a), std::abs(b))) {
      return (dg(a) - dg(b)) / (a - b);
    }
    return ddg(0.5 * (a + b));
  }
};

const Spectral kLn2{
    [](double x) { return std::log(x) * std::log(x); },
    [](double x) { return 2.0 * std::log(x) / x; },
    [](double x) { return 2.0 * (1.0 - std::log(x)) / (x * x); },
};

const Spectral kLik{
    [](double x) { return x - std::log(x) - 1.0; },
    [](double x) { return 1.0 - 1.0 / x; },
    [](double x) { return 1.0 / (x * x); },
};

const Spectral& spectral_for(Invariant::Kind kind) {
  return kind == Invariant::Kind::TrLn2 ? kLn2 : kLik;
}

void check_functional(Invariant::Kind kind) {
  if (kind == Invariant::Kind::LnPr) {
    throw Error(ErrorKind::InvalidArgument, "no interpolation functional is defined for lnpr");
  }
}

void check_alpha(std::span<const double> alpha, std::size_t m) {
  if (alpha.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "alpha has " + std::to_string(alpha.size()) +
                                                  " entries for " + std::to_string(m) + " endpoints");
  }
  double sum = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha entries must be >= 0");
    sum += a;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw Error(ErrorKind::InvalidArgument, "alpha must sum to 1");
  }
}

struct Eig2 {
  Eigen::Vector2d values;
  Eigen::Matrix2d vectors;
};

Eig2 eig_sym(const Sym2& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

WeightFn default_weight(Invariant::Kind kind) {
  return kind == Invariant::Kind::TrDif ? WeightFn::Unit : WeightFn::PiHalf;
}

void validate(const InterpProblem& problem) {
  check_functional(problem.invariant);
  const std::size_t k = problem.k();
  if (k == 0 || problem.obs.empty() || problem.endpoints.empty()) {
    throw Error(ErrorKind::InvalidArgument, "problem needs domain, observation and endpoint data");
  }
  for (std::size_t s = 0; s < problem.m(); ++s) {
    if (problem.endpoints[s].size() != k) {
      throw Error(ErrorKind::DimensionMismatch,
                  "endpoint " + std::to_string(s) + " does not match the domain size");
    }
  }
  check_alpha(problem.alpha, problem.m());
  for (std::size_t j = 0; j < problem.obs.size(); ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      const double c = problem.obs[j].dot(problem.domain[i]);
      if (c <= -1.0 + kAntipodalEps) {
        throw Error(ErrorKind::AntipodalPoint, "observation " + std::to_string(j) +
                                                   " is antipodal to domain point " +
                                                   std::to_string(i));
      }
      if (problem.weight == WeightFn::PiHalf &&
          geodesic_distance(problem.obs[j], problem.domain[i]) < kCoincidentDistance) {
        throw Error(ErrorKind::CoincidentPoint, "observation " + std::to_string(j) +
                                                    " coincides with domain point " +
                                                    std::to_string(i));
      }
    }
  }
}

Kernels precompute_kernels(const InterpProblem& problem, unsigned threads) {
  validate(problem);
  const std::size_t k = problem.k();
  const std::size_t n_obs = problem.obs.size();
  const std::size_t m = problem.m();
  Kernels K;
  K.dist2.resize(Eigen::Index(k), Eigen::Index(n_obs));
  K.shifted2.resize(Eigen::Index(k), Eigen::Index(n_obs));
  K.trace.resize(Eigen::Index(k), Eigen::Index(n_obs));
  K.point_ops.assign(k, std::vector<Sym2>(n_obs));

  parallel_for(n_obs, threads, [&](std::size_t j) {
    const TangentFrame frame = tangent_frame(problem.obs[j]);
    for (std::size_t i = 0; i < k; ++i) {
      const double d = geodesic_distance(problem.obs[j], problem.domain[i]);
      const auto ii = Eigen::Index(i);
      const auto jj = Eigen::Index(j);
      K.dist2(ii, jj) = d * d;
      K.shifted2(ii, jj) = (d - std::numbers::pi / 2) * (d - std::numbers::pi / 2);
      K.point_ops[i][j] = point_operator(frame, problem.domain[i], problem.weight);
      K.trace(ii, jj) = K.point_ops[i][j].trace();
    }
  });

  K.endpoint_ops.assign(m, std::vector<Sym2>(n_obs));
  K.endpoint_trace.resize(Eigen::Index(m), Eigen::Index(n_obs));
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t j = 0; j < n_obs; ++j) {
      Sym2 c;
      for (std::size_t i = 0; i < k; ++i) c += K.point_ops[i][j] * problem.endpoints[s][i];
      K.endpoint_ops[s][j] = c;
      K.endpoint_trace(Eigen::Index(s), Eigen::Index(j)) = c.trace();
    }
  }

  if (problem.invariant != Invariant::Kind::TrDif) {
    K.whitened.assign(m, std::vector<std::vector<Sym2>>(n_obs, std::vector<Sym2>(k)));
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t j = 0; j < n_obs; ++j) {
        const Sym2& c = K.endpoint_ops[s][j];
        require_pd(c, "endpoint " + std::to_string(s) + " covariance at observation " +
                          std::to_string(j));
        const Eigen::Matrix2d l = c.matrix().llt().matrixL();
        const Eigen::Matrix2d l_inv = l.inverse();
        for (std::size_t i = 0; i < k; ++i) {
          K.whitened[s][j][i] =
              Sym2::from_matrix(l_inv * K.point_ops[i][j].matrix() * l_inv.transpose());
        }
      }
    }
  }
  return K;
}

Objective::Objective(const InterpProblem& problem, const Kernels& kernels)
    : Objective(problem, kernels, problem.alpha) {}

Objective::Objective(const InterpProblem& problem, const Kernels& kernels, std::vector<double> alpha)
    : kernels_(&kernels),
      kind_(problem.invariant),
      alpha_(std::move(alpha)),
      k_(problem.k()),
      n_obs_(problem.obs.size()) {
  check_functional(kind_);
  check_alpha(alpha_, problem.m());
  if (kind_ != Invariant::Kind::TrDif && kernels.whitened.size() != problem.m()) {
    throw Error(ErrorKind::InvalidArgument, "kernels were built for a different functional");
  }
}

Sym2 Objective::field_at(std::span<const double> f, std::size_t j) const {
  Sym2 acc;
  for (std::size_t i = 0; i < k_; ++i) acc += kernels_->point_ops[i][j] * f[i];
  return acc;
}

double Objective::value(std::span<const double> f) const {
  if (f.size() != k_) throw Error(ErrorKind::DimensionMismatch, "f has the wrong length");
  const Kernels& K = *kernels_;
  double total = 0.0;
  if (kind_ == Invariant::Kind::TrDif) {
    const Eigen::Map<const Eigen::VectorXd> fv(f.data(), Eigen::Index(k_));
    const Eigen::VectorXd t = K.trace.transpose() * fv;
    for (std::size_t s = 0; s < alpha_.size(); ++s) {
      if (alpha_[s] == 0.0) continue;
      total += alpha_[s] * (t - K.endpoint_trace.row(Eigen::Index(s)).transpose()).squaredNorm();
    }
    return total;
  }
  const Spectral& sp = spectral_for(kind_);
  for (std::size_t j = 0; j < n_obs_; ++j) {
    require_pd(field_at(f, j), "Sigma[f] at observation " + std::to_string(j));
    for (std::size_t s = 0; s < alpha_.size(); ++s) {
      if (alpha_[s] == 0.0) continue;
      Sym2 mj;
      for (std::size_t i = 0; i < k_; ++i) mj += K.whitened[s][j][i] * f[i];
      const Eig2 e = eig_sym(mj);
      total += alpha_[s] * (sp.g(e.values(0)) + sp.g(e.values(1)));
    }
  }
  return total;
}

Eigen::VectorXd Objective::gradient(std::span<const double> f) const {
  if (f.size() != k_) throw Error(ErrorKind::DimensionMismatch, "f has the wrong length");
  const Kernels& K = *kernels_;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(Eigen::Index(k_));
  if (kind_ == Invariant::Kind::TrDif) {
    const Eigen::Map<const Eigen::VectorXd> fv(f.data(), Eigen::Index(k_));
    const Eigen::VectorXd t = K.trace.transpose() * fv;
    for (std::size_t s = 0; s < alpha_.size(); ++s) {
      if (alpha_[s] == 0.0) continue;
      grad += 2.0 * alpha_[s] * K.trace * (t - K.endpoint_trace.row(Eigen::Index(s)).transpose());
    }
    return grad;
  }
  const Spectral& sp = spectral_for(kind_);
  for (std::size_t j = 0; j < n_obs_; ++j) {
    require_pd(field_at(f, j), "Sigma[f] at observation " + std::to_string(j));
    for (std::size_t s = 0; s < alpha_.size(); ++s) {
      if (alpha_[s] == 0.0) continue;
      Sym2 mj;
      for (std::size_t i = 0; i < k_; ++i) mj += K.whitened[s][j][i] * f[i];
      const Eig2 e = eig_sym(mj);
      // tr(g'(M) Z_i) in the eigenbasis of M
      const Eigen::Matrix2d gm = e.vectors *
                                 Eigen::Vector2d(sp.dg(e.values(0)), sp.dg(e.values(1))).asDiagonal() *
                                 e.vectors.transpose();
      for (std::size_t i = 0; i < k_; ++i) {
        grad(Eigen::Index(i)) += alpha_[s] * (gm.cwiseProduct(K.whitened[s][j][i].matrix())).sum();
      }
    }
  }
  return grad;
}

Eigen::MatrixXd Objective::hessian(std::span<const double> f) const {
  if (f.size() != k_) throw Error(ErrorKind::DimensionMismatch, "f has the wrong length");
  const Kernels& K = *kernels_;
  const auto kk = Eigen::Index(k_);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(kk, kk);
  if (kind_ == Invariant::Kind::TrDif) {
    double asum = 0.0;
    for (double a : alpha_) asum += a;
    return 2.0 * asum * K.trace * K.trace.transpose();
  }
  const Spectral& sp = spectral_for(kind_);
  std::vector<Eigen::Matrix2d> rotated(k_);
  for (std::size_t j = 0; j < n_obs_; ++j) {
    require_pd(field_at(f, j), "Sigma[f] at observation " + std::to_string(j));
    for (std::size_t s = 0; s < alpha_.size(); ++s) {
      if (alpha_[s] == 0.0) continue;
      Sym2 mj;
      for (std::size_t i = 0; i < k_; ++i) mj += K.whitened[s][j][i] * f[i];
      const Eig2 e = eig_sym(mj);
      Eigen::Matrix2d dd;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) dd(a, b) = sp.dd(e.values(a), e.values(b));
      }
      for (std::size_t i = 0; i < k_; ++i) {
        rotated[i] = e.vectors.transpose() * K.whitened[s][j][i].matrix() * e.vectors;
      }
      for (std::size_t i = 0; i < k_; ++i) {
        const Eigen::Matrix2d wi = dd.cwiseProduct(rotated[i]);
        for (std::size_t l = i; l < k_; ++l) {
          const double v = alpha_[s] * wi.cwiseProduct(rotated[l]).sum();
          hess(Eigen::Index(i), Eigen::Index(l)) += v;
          if (l != i) hess(Eigen::Index(l), Eigen::Index(i)) += v;
        }
      }
    }
  }
  return hess;
}

Eigen::VectorXd Objective::multiplicative_direction(std::span<const double> f) const {
  if (kind_ == Invariant::Kind::TrDif) return gradient(f);
  const Kernels& K = *kernels_;
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(Eigen::Index(k_));
  for (std::size_t j = 0; j < n_obs_; ++j) {
    require_pd(field_at(f, j), "Sigma[f] at observation " + std::to_string(j));
    for (std::size_t s = 0; s < alpha_.size(); ++s) {
      if (alpha_[s] == 0.0) continue;
      Sym2 mj;
      for (std::size_t i = 0; i < k_; ++i) mj += K.whitened[s][j][i] * f[i];
      Eigen::Matrix2d dm;
      if (kind_ == Invariant::Kind::TrLn2) {
        const Eig2 e = eig_sym(mj);
        dm = e.vectors * e.values.array().log().matrix().asDiagonal() * e.vectors.transpose();
      } else {
        dm = mj.matrix() - Eigen::Matrix2d::Identity();
      }
      for (std::size_t i = 0; i < k_; ++i) {
        const Sym2& z = K.whitened[s][j][i];
        if (!(z.trace() > 0.0)) continue;
        dir(Eigen::Index(i)) += alpha_[s] * dm.cwiseProduct(z.matrix()).sum() / z.trace();
      }
    }
  }
  for (std::size_t i = 0; i < k_; ++i) dir(Eigen::Index(i)) *= f[i];
  return dir;
}

double eval_H(const Pmf& f, const InterpProblem& problem, const Kernels& kernels) {
  return Objective(problem, kernels).value(f.weights());
}

Eigen::VectorXd grad_H(const Pmf& f, const InterpProblem& problem, const Kernels& kernels) {
  return Objective(problem, kernels).gradient(f.weights());
}

// ---- solver ---------------------------------------------------------------

namespace {

struct RunOutcome {
  std::vector<double> f;
  double objective = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

double projected_gradient_norm(std::span<const double> f, const Eigen::VectorXd& g) {
  std::vector<double> y(f.begin(), f.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= g(Eigen::Index(i));
  const std::vector<double> p = project_simplex(y);
  double n = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) n = std::max(n, std::abs(p[i] - f[i]));
  return n;
}

std::optional<double> try_value(const Objective& obj, std::span<const double> f) {
  try {
    return obj.value(f);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotPositiveDefinite) return std::nullopt;
    throw;
  }
}

std::vector<double> step_to(std::span<const double> f, const Eigen::VectorXd& dir, double eta) {
  std::vector<double> y(f.begin(), f.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= eta * dir(Eigen::Index(i));
  return project_simplex(y);
}

double initial_step(const Objective& obj, std::span<const double> f, const Eigen::VectorXd& g) {
  const double gn = inf_norm(g);
  if (!(gn > 0.0)) return 1.0;
  const std::vector<double> f2 = step_to(f, g, 1e-4 / gn);
  double dist = 0.0;
  for (std::size_t i = 0; i < f2.size(); ++i) dist += (f2[i] - f[i]) * (f2[i] - f[i]);
  if (!(dist > 0.0)) return 1.0 / gn;
  if (!try_value(obj, f2)) return 1e-4 / gn;
  const Eigen::VectorXd g2 = obj.gradient(f2);
  const double lip = (g2 - g).norm() / std::sqrt(dist);
  return lip > 0.0 ? 1.0 / lip : 1.0 / gn;
}

RunOutcome run_pgd(const Objective& obj, std::vector<double> f, const SolverConfig& cfg) {
  RunOutcome out;
  double h = obj.value(f);
  Eigen::VectorXd g = obj.gradient(f);
  double eta = initial_step(obj, f, g);
  out.trace.push_back({0, h, 0.0, projected_gradient_norm(f, g)});

  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const double pg = projected_gradient_norm(f, g);
    if (pg < cfg.tol) {
      out.converged = true;
      break;
    }
    const Eigen::VectorXd dir =
        cfg.direction == SearchDirection::Gradient ? g : obj.multiplicative_direction(f);

    bool accepted = false;
    std::vector<double> f_new;
    double h_new = h;
    double eta_try = eta;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, eta_try *= 0.5) {
      f_new = step_to(f, dir, eta_try);
      const auto val = try_value(obj, f_new);
      if (!val) continue;
      double decrease = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) decrease += g(Eigen::Index(i)) * (f_new[i] - f[i]);
      if (*val <= h + kArmijoC * decrease) {
        h_new = *val;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // no representable decrease left along the projection arc
      out.converged = pg < std::sqrt(cfg.tol);
      break;
    }

    const Eigen::VectorXd g_new = obj.gradient(f_new);
    Eigen::VectorXd s(Eigen::Index(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) s(Eigen::Index(i)) = f_new[i] - f[i];
    const Eigen::VectorXd y = g_new - g;
    const double step_inf = inf_norm(s);

    f = std::move(f_new);
    h = h_new;
    g = g_new;
    out.trace.push_back({iter + 1, h, eta_try, projected_gradient_norm(f, g)});

    if (step_inf < cfg.tol) {
      out.converged = true;
      ++iter;
      break;
    }
    const double sy = s.dot(y);
    eta = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * eta_try;
    eta = std::clamp(eta, 1e-14, 1e14);
  }
  out.iterations = iter;
  out.f = std::move(f);
  out.objective = h;
  return out;
}

std::vector<std::vector<double>> start_points(const InterpProblem& problem, const Objective& obj,
                                              const SolverConfig& cfg) {
  if (cfg.initial) return {*cfg.initial};
  int count = cfg.restarts > 0 ? cfg.restarts
                               : (obj.kind() == Invariant::Kind::TrLn2 ? kDefaultTrLn2Restarts : 1);
  std::vector<std::vector<double>> starts;
  starts.push_back(linear_interp(obj.alpha(), problem.endpoints).vec());
  if (count >= 2) starts.push_back(sqroot_interp(obj.alpha(), problem.endpoints).vec());
  if (count >= 3) starts.push_back(Pmf::uniform(problem.k()).vec());
  for (int r = 3; r < count; ++r) {
    Rng rng(derive_seed(cfg.seed, std::uint64_t(r)));
    starts.push_back(dirichlet_draw(problem.k(), rng));
  }
  return starts;
}

}  // namespace

InterpResult solve(const InterpProblem& problem, const Kernels& kernels, const SolverConfig& config) {
  return solve(Objective(problem, kernels), problem, config);
}

InterpResult solve(const Objective& objective, const InterpProblem& problem,
                   const SolverConfig& config) {
  const std::vector<std::vector<double>> starts = start_points(problem, objective, config);
  std::vector<RunOutcome> runs(starts.size());
  parallel_for(starts.size(), config.threads, [&](std::size_t r) {
    if (!try_value(objective, starts[r])) return;  // start outside the functional's domain
    runs[r] = run_pgd(objective, starts[r], config);
  });

  InterpResult result;
  std::size_t best = runs.size();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    result.restart_objectives.push_back(runs[r].objective);
    if (!runs[r].f.empty() && (best == runs.size() || runs[r].objective < runs[best].objective)) {
      best = r;
    }
  }
  if (best == runs.size()) {
    throw Error(ErrorKind::NotPositiveDefinite, "no start point lies in the functional's domain");
  }
  result.restarts_used = int(runs.size());
  result.f_hat = Pmf::normalized(runs[best].f);
  result.objective = objective.value(result.f_hat.weights());
  result.iterations = runs[best].iterations;
  result.converged = runs[best].converged;
  result.trace = std::move(runs[best].trace);
  return result;
}

// ---- baselines and metrics --------------------------------------------------

Pmf linear_interp(std::span<const double> alpha, std::span<const Pmf> endpoints) {
  check_alpha(alpha, endpoints.size());
  const std::size_t k = endpoints.front().size();
  std::vector<double> f(k, 0.0);
  for (std::size_t s = 0; s < endpoints.size(); ++s) {
    if (endpoints[s].size() != k) throw Error(ErrorKind::DimensionMismatch, "endpoint sizes differ");
    for (std::size_t i = 0; i < k; ++i) f[i] += alpha[s] * endpoints[s][i];
  }
  return Pmf::normalized(std::move(f));
}

Pmf sqroot_interp(std::span<const double> alpha, std::span<const Pmf> endpoints, double tol,
                  int max_iter) {
  check_alpha(alpha, endpoints.size());
  const auto k = Eigen::Index(endpoints.front().size());
  std::vector<Eigen::VectorXd> roots;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(k);
  for (std::size_t s = 0; s < endpoints.size(); ++s) {
    if (Eigen::Index(endpoints[s].size()) != k) {
      throw Error(ErrorKind::DimensionMismatch, "endpoint sizes differ");
    }
    Eigen::VectorXd r(k);
    for (Eigen::Index i = 0; i < k; ++i) r(i) = std::sqrt(endpoints[s][std::size_t(i)]);
    r /= r.norm();
    p += alpha[s] * r;
    roots.push_back(std::move(r));
  }
  p /= p.norm();
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(k);
    for (std::size_t s = 0; s < roots.size(); ++s) {
      if (alpha[s] != 0.0) v += alpha[s] * nsphere::log_map(p, roots[s]);
    }
    if (v.norm() < tol) {
      return Pmf::normalized(to_std(p.array().square().matrix()));
    }
    p = nsphere::exp_map(p, v);
  }
  throw Error(ErrorKind::IterationLimit, "square-root mean did not converge");
}

double mse(const Pmf& f_hat, std::span<const Pmf> endpoints, std::span<const double> alpha) {
  if (alpha.size() != endpoints.size()) {
    throw Error(ErrorKind::DimensionMismatch, "alpha and endpoint counts differ");
  }
  double total = 0.0;
  for (std::size_t s = 0; s < endpoints.size(); ++s) {
    if (endpoints[s].size() != f_hat.size()) {
      throw Error(ErrorKind::DimensionMismatch, "endpoint and f_hat sizes differ");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < f_hat.size(); ++i) {
      const double d = f_hat[i] - endpoints[s][i];
      acc += d * d;
    }
    total += alpha[s] * acc;
  }
  return total;
}

double fractional_anisotropy(const Pmf& f, std::span<const UnitPoint> domain) {
  if (f.size() != domain.size()) throw Error(ErrorKind::DimensionMismatch, "pmf/domain sizes differ");
  Eigen::Matrix3d moment = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < domain.size(); ++i) {
    moment += f[i] * domain[i].vec() * domain[i].vec().transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(moment, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d lam = es.eigenvalues();
  const double n = 3.0;
  const double spread = (lam.array() - lam.mean()).square().sum();
  const double fa = std::sqrt(n / (n - 1.0) * spread / lam.squaredNorm());
  return std::clamp(fa, 0.0, 1.0);
}

std::size_t numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  if (!(smax > 0.0)) return 0;
  const double thresh = double(std::max(m.rows(), m.cols())) * smax * 1e-12;
  return std::size_t((sv.array() > thresh).count());
}

RankReport rank_check(const InterpProblem& problem, const Kernels& kernels) {
  RankReport r;
  r.k = problem.k();
  r.rank_dist2 = numerical_rank(kernels.dist2);
  r.rank_shifted2 = numerical_rank(kernels.shifted2);
  const std::size_t relevant = problem.weight == WeightFn::Unit ? r.rank_dist2 : r.rank_shifted2;
  r.admissible = relevant == r.k;
  return r;
}

double SweepResult::max_f_jump() const {
  return f_jumps.empty() ? 0.0 : *std::max_element(f_jumps.begin(), f_jumps.end());
}

double SweepResult::max_objective_jump() const {
  return objective_jumps.empty() ? 0.0
                                 : *std::max_element(objective_jumps.begin(), objective_jumps.end());
}

SweepResult consistency_sweep(const InterpProblem& problem, const Kernels& kernels,
                              const std::vector<std::vector<double>>& alpha_path,
                              const SolverConfig& config) {
  SweepResult sweep;
  sweep.alpha_path = alpha_path;
  for (std::size_t t = 0; t < alpha_path.size(); ++t) {
    const Objective obj(problem, kernels, alpha_path[t]);
    SolverConfig cfg = config;
    if (t > 0) cfg.initial = sweep.results.back().f_hat.vec();
    InterpResult res = solve(obj, problem, cfg);
    if (t > 0) {
      const InterpResult& prev = sweep.results.back();
      double jump = 0.0;
      for (std::size_t i = 0; i < res.f_hat.size(); ++i) {
        jump = std::max(jump, std::abs(res.f_hat[i] - prev.f_hat[i]));
      }
      sweep.f_jumps.push_back(jump);
      sweep.objective_jumps.push_back(std::abs(res.objective - prev.objective));
    }
    sweep.results.push_back(std::move(res));
  }
  return sweep;
}

std::vector<std::vector<double>> two_point_path(int steps) {
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "path needs at least one step");
  std::vector<std::vector<double>> path;
  for (int t = 0; t <= steps; ++t) {
    const double a = double(t) / double(steps);
    path.push_back({a, 1.0 - a});
  }
  return path;
}

std::vector<double> dirichlet_draw(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(k);
  double sum = 0.0;
  for (double& v : w) {
    v = expo(rng);
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

ConvexityReport convexity_probe(const Objective& objective, std::size_t n_points, Rng& rng) {
  ConvexityReport rep;
  rep.min_hessian_eig = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n_points; ++t) {
    const std::vector<double> f = dirichlet_draw(objective.k(), rng);
    Eigen::MatrixXd h;
    try {
      h = objective.hessian(f);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    rep.min_hessian_eig = std::min(rep.min_hessian_eig, es.eigenvalues()(0));
    ++rep.points_evaluated;
  }
  rep.convex_certificate = rep.points_evaluated > 0 && rep.min_hessian_eig >= -1e-8;
  return rep;
}

}  // namespace covfield
