// Command-line workbench: sampling, two-sample tests, observation scans, sample profiles,
// pmf interpolation sweeps and self-checks. Every stochastic command takes an explicit
// --seed and records it, with the flags, in run.json so the run can be repeated.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "covfield/covariance.hpp"
#include "covfield/error.hpp"
#include "covfield/interpolation.hpp"
#include "covfield/io.hpp"
#include "covfield/parallel.hpp"
#include "covfield/sampler.hpp"
#include "covfield/simplex.hpp"
#include "covfield/two_sample.hpp"

#ifndef COVFIELD_VERSION
#define COVFIELD_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace covfield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind) {
  if (is_numerical(kind)) return kExitNumerical;
  if (kind == ErrorKind::InvalidArgument) return kExitUsage;
  return kExitData;
}

UnitPoint parse_point(const std::string& text) {
  std::stringstream ss(text);
  std::vector<double> v;
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("'" + text + "' is not a point x,y,z");
    }
  }
  if (v.size() != 3) throw UsageError("'" + text + "' is not a point x,y,z");
  try {
    return UnitPoint(v[0], v[1], v[2]);
  } catch (const Error&) {
    throw UsageError("'" + text + "' cannot be normalized to a unit vector");
  }
}

// ---- shared options --------------------------------------------------------

struct Global {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out = ".";
  std::string format = "csv";
  std::vector<std::string> flags;  // argv without the program name and --out
  std::vector<std::string> outputs;
  json extra = json::object();

  std::uint64_t require_seed(const char* command) const {
    if (!seed) throw UsageError(std::string(command) + " is stochastic and needs --seed");
    return *seed;
  }

  fs::path path(const std::string& stem, const char* ext) {
    const std::string name = stem + ext;
    outputs.push_back(name);
    return fs::path(out) / name;
  }

  // Tables follow --format; json emits {"columns": [...], "rows": [[...], ...]}.
  void table(const std::string& stem, const io::Table& t) {
    if (format == "json") {
      json rows = json::array();
      for (const auto& r : t.rows) {
        json row = json::array();
        for (double v : r) row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
        rows.push_back(std::move(row));
      }
      io::write_text(path(stem, ".json"), json{{"columns", t.header}, {"rows", rows}}.dump(1) + "\n");
    } else {
      io::write_table(path(stem, ".csv"), t);
    }
  }

  void document(const std::string& stem, const json& doc) {
    io::write_text(path(stem, ".json"), doc.dump(2) + "\n");
  }
};

// Two samples, either read from files or drawn from ring densities.
struct SampleSpec {
  std::string file1, file2;
  double a1 = 0.2, a2 = 0.3;
  std::string mu1 = "0,0,1", mu2;
  std::string variant = "quartic";
  std::size_t m = 50;
  std::optional<double> rotate;  // arm 2 is an arm-1 draw rotated about q

  void add(CLI::App* app) {
    app->add_option("--sample1", file1, "first sample CSV (x,y,z)");
    app->add_option("--sample2", file2, "second sample CSV (x,y,z)");
    app->add_option("--a1", a1, "ring parameter of the first generator")->capture_default_str();
    app->add_option("--a2", a2, "ring parameter of the second generator")->capture_default_str();
    app->add_option("--mu1", mu1, "center of the first generator")->capture_default_str();
    app->add_option("--mu2", mu2, "center of the second generator (default mu1)");
    app->add_option("--variant", variant, "density variant")
        ->check(CLI::IsMember({"quartic", "quadratic", "d4", "d2"}))
        ->capture_default_str();
    app->add_option("--m", m, "generated sample size")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--rotate", rotate,
                    "draw arm 2 from the first generator and rotate it about q by this angle (radians)");
  }

  bool from_files() const { return !file1.empty() || !file2.empty(); }

  void validate() const {
    if (file1.empty() != file2.empty()) throw UsageError("--sample1 and --sample2 go together");
    if (from_files() && rotate) throw UsageError("--rotate applies to generated samples only");
  }

  std::pair<std::vector<UnitPoint>, std::vector<UnitPoint>> draw(std::uint64_t seed,
                                                                   const UnitPoint& q) const {
    if (from_files()) return {io::read_points(file1), io::read_points(file2)};
    const auto var = parse_density_variant(variant);
    const UnitPoint c1 = parse_point(mu1);
    const UnitPoint c2 = mu2.empty() ? c1 : parse_point(mu2);
    Rng r1(derive_seed(seed, 0)), r2(derive_seed(seed, 1));
    auto s1 = rejection_sample({a1, c1, var}, m, r1);
    if (rotate) return {s1, rotate_sample(rejection_sample({a1, c1, var}, m, r2), q, *rotate)};
    return {std::move(s1), rejection_sample({a2, c2, var}, m, r2)};
  }

  json describe() const {
    if (from_files()) return {{"sample1", file1}, {"sample2", file2}};
    json d{{"a1", a1}, {"a2", a2}, {"mu1", mu1}, {"mu2", mu2.empty() ? mu1 : mu2},
           {"variant", variant}, {"m", m}};
    if (rotate) d["rotate"] = *rotate;
    return d;
  }
};

double nan_if(bool undefined, double v) { return undefined ? std::nan("") : v; }

// ---- sample ------------------------------------------------------------------

struct SampleCmd {
  double a = 0.0;
  std::string mu = "0,0,1";
  std::size_t n = 0;
  std::string variant = "quartic";

  void add(CLI::App* app) {
    app->add_option("--a", a, "ring parameter a >= 0")->required()->check(CLI::NonNegativeNumber);
    app->add_option("--mu", mu, "ring center x,y,z")->capture_default_str();
    app->add_option("--n", n, "sample size")->required();
    app->add_option("--variant", variant)->check(CLI::IsMember({"quartic", "quadratic", "d4", "d2"}))
        ->capture_default_str();
  }

  void run(Global& g) {
    if (n == 0) throw UsageError("--n must be at least 1");
    const std::uint64_t seed = g.require_seed("sample");
    Rng rng(seed);
    RejectionStats stats;
    const auto pts = rejection_sample({a, parse_point(mu), parse_density_variant(variant)}, n, rng, &stats);
    io::Table t{{"x", "y", "z"}, {}};
    for (const auto& p : pts) t.rows.push_back({p.x(), p.y(), p.z()});
    g.table("sample", t);
    g.extra = {{"acceptance_rate", stats.acceptance_rate()}, {"proposals", stats.proposals}};
  }
};

// ---- test --------------------------------------------------------------------

struct TestCmd {
  SampleSpec samples;
  std::string q_mode = "fixed";
  std::string q;
  std::size_t runs = 1;
  double alpha = 0.05;
  std::size_t candidates = 50;

  void add(CLI::App* app) {
    samples.add(app);
    app->add_option("--q-mode", q_mode, "observation point choice")
        ->check(CLI::IsMember({"fixed", "uniform", "scan-best"}))
        ->capture_default_str();
    app->add_option("--q", q, "observation point for --q-mode fixed (default: mu1)");
    app->add_option("--runs", runs, "Monte-Carlo repetitions")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--alpha", alpha, "significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--candidates", candidates, "grid size for --q-mode scan-best")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  struct Row {
    UnitPoint q;
    Eigen::Vector2d lambda = Eigen::Vector2d::Zero();
    std::optional<ProcedureOutcome> p1, p2;
  };

  void run(Global& g) {
    samples.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    const std::uint64_t seed = g.require_seed("test");
    const UnitPoint fixed_q = q.empty() ? parse_point(samples.mu1) : parse_point(q);

    std::vector<Row> rows(runs);
    auto one_run = [&](std::size_t r) {
      const std::uint64_t run_seed = derive_seed(seed, r);
      Rng qrng(derive_seed(run_seed, 2));
      UnitPoint qr = fixed_q;
      if (q_mode == "uniform") qr = uniform_point(qrng);
      // scan-best needs the samples first; the rotated arm is only defined relative to q, so
      // scan-best uses the fixed point as the rotation axis
      auto [s1, s2] = samples.draw(run_seed, qr);
      if (q_mode == "scan-best") {
        const auto grid = uniform_sample(qrng, candidates);
        qr = observation_scan(s1, s2, grid, ScanCriterion::TrSq, alpha).front().q;
      }
      Row& row = rows[r];
      row.q = qr;
      try {
        row.p1 = test_procedure_1(s1, s2, qr, alpha);
        row.lambda = row.p1->lambda;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::TooFewPairs && e.kind() != ErrorKind::SampleSizeMismatch) throw;
      }
      try {
        row.p2 = test_procedure_2(s1, s2, qr, alpha);
        row.lambda = row.p2->lambda;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::TooFewPairs) throw;
      }
    };
    parallel_for(runs, g.threads, [&](std::size_t r) {
      try {
        one_run(r);
      } catch (const Error& e) {
        std::string msg = e.what();
        const std::string prefix = std::string(to_string(e.kind())) + ": ";
        if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
        throw Error(e.kind(), "run " + std::to_string(r) + ": " + msg);
      }
    });

    io::Table t{{"run", "qx", "qy", "qz", "lambda1", "lambda2", "T_xi", "p_xi", "T_d", "p_d", "W_xi",
                 "pW_xi", "W_d", "pW_d", "reject_T_xi", "reject_T_d", "reject_W_xi", "reject_W_d"},
                {}};
    std::array<std::size_t, 4> rejects{}, defined{};
    for (std::size_t r = 0; r < runs; ++r) {
      const Row& row = rows[r];
      const bool u1 = !row.p1, u2 = !row.p2;
      const ProcedureOutcome o1 = row.p1.value_or(ProcedureOutcome{});
      const ProcedureOutcome o2 = row.p2.value_or(ProcedureOutcome{});
      const std::array<bool, 4> rej{!u1 && o1.reject, !u1 && o1.reject_distance, !u2 && o2.reject,
                                    !u2 && o2.reject_distance};
      for (int c = 0; c < 4; ++c) {
        rejects[std::size_t(c)] += rej[std::size_t(c)];
        defined[std::size_t(c)] += c < 2 ? !u1 : !u2;
      }
      t.rows.push_back({double(r), row.q.x(), row.q.y(), row.q.z(), row.lambda(0), row.lambda(1),
                        nan_if(u1, o1.xi_statistic), nan_if(u1, o1.xi_p_value),
                        nan_if(u1, o1.distance.statistic), nan_if(u1, o1.distance.p_value),
                        nan_if(u2, o2.xi_statistic), nan_if(u2, o2.xi_p_value),
                        nan_if(u2, o2.distance.statistic), nan_if(u2, o2.distance.p_value),
                        double(rej[0]), double(rej[1]), double(rej[2]), double(rej[3])});
    }
    g.table("runs", t);

    const char* names[] = {"T_xi", "T_d", "W_xi", "W_d"};
    json rates, counts;
    for (int c = 0; c < 4; ++c) {
      rates[names[c]] = double(rejects[std::size_t(c)]) / double(runs);
      counts[names[c]] = {{"rejections", rejects[std::size_t(c)]}, {"defined_runs", defined[std::size_t(c)]}};
    }
    g.document("summary", {{"runs", runs},
                           {"alpha", alpha},
                           {"q_mode", q_mode},
                           {"samples", samples.describe()},
                           {"rejection_rate", rates},
                           {"counts", counts}});
  }
};

// ---- scan ----------------------------------------------------------------------

struct ScanCmd {
  SampleSpec samples;
  std::string criterion = "tr2";
  std::size_t candidates = 50;
  std::string candidates_file;
  std::size_t grid = 1000;
  double alpha = 0.05;

  void add(CLI::App* app) {
    samples.add(app);
    app->add_option("--criterion", criterion)->check(CLI::IsMember({"tr2", "det", "uniform"}))->capture_default_str();
    app->add_option("--candidates", candidates, "number of uniform random candidate points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--candidates-file", candidates_file, "candidate points CSV instead of a random grid");
    app->add_option("--grid", grid, "uniform grid size for the det-sign areas")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  }

  void run(Global& g) {
    samples.validate();
    if (samples.rotate) throw UsageError("--rotate is not available for scan");
    const std::uint64_t seed = g.require_seed("scan");
    auto [s1, s2] = samples.draw(derive_seed(seed, 0), parse_point(samples.mu1));
    Rng grng(derive_seed(seed, 1));
    const auto cand = candidates_file.empty() ? uniform_sample(grng, candidates) : io::read_points(candidates_file);
    const auto entries = observation_scan(s1, s2, cand, parse_scan_criterion(criterion), alpha, g.threads);

    io::Table t{{"qx", "qy", "qz", "tr2", "det", "lambda1", "lambda2", "T_xi", "p_xi", "T_d", "p_d", "W_xi",
                 "pW_xi", "W_d", "pW_d"},
                {}};
    for (const auto& e : entries) {
      const bool u1 = !e.procedure1, u2 = !e.procedure2;
      const ProcedureOutcome o1 = e.procedure1.value_or(ProcedureOutcome{});
      const ProcedureOutcome o2 = e.procedure2.value_or(ProcedureOutcome{});
      t.rows.push_back({e.q.x(), e.q.y(), e.q.z(), e.tr2, e.det, e.lambda(0), e.lambda(1),
                        nan_if(u1, o1.xi_statistic), nan_if(u1, o1.xi_p_value),
                        nan_if(u1, o1.distance.statistic), nan_if(u1, o1.distance.p_value),
                        nan_if(u2, o2.xi_statistic), nan_if(u2, o2.xi_p_value),
                        nan_if(u2, o2.distance.statistic), nan_if(u2, o2.distance.p_value)});
    }
    g.table("scan", t);

    Rng arng(derive_seed(seed, 2));
    const SignAreas areas = det_sign_areas(s1, s2, uniform_sample(arng, grid));
    g.document("areas", {{"S_plus", areas.positive},
                         {"S_minus", areas.negative},
                         {"S_zero", areas.zero},
                         {"grid", grid},
                         {"samples", samples.describe()}});
  }
};

// ---- profile -------------------------------------------------------------------

struct ProfileCmd {
  SampleSpec samples;
  std::string q;
  std::string q_extreme;
  std::size_t dirs = kDefaultProfileDirections;
  std::size_t grid = 50;

  void add(CLI::App* app) {
    samples.add(app);
    app->add_option("--q", q, "explicit observation point");
    app->add_option("--q-extreme", q_extreme, "pick q minimizing/maximizing tr^2 over a random grid")
        ->check(CLI::IsMember({"min", "max", "both"}));
    app->add_option("--dirs", dirs, "directions on the tangent circle")->capture_default_str();
    app->add_option("--grid", grid, "candidate grid size for --q-extreme")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  void emit(Global& g, const std::string& tag, const UnitPoint& qp, const std::vector<UnitPoint>& s1,
            const std::vector<UnitPoint>& s2) {
    const SampleProfile p1 = sample_profile(qp, s1, dirs);
    const SampleProfile p2 = sample_profile(qp, s2, dirs);
    io::Table t{{"theta", "sample_id", "point_id", "xi"}, {}};
    io::Table d{{"theta", "mean1", "mean2", "diff"}, {}};
    for (std::size_t k = 0; k < dirs; ++k) {
      double m1 = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < s1.size(); ++i) {
        t.rows.push_back({p1.theta[k], 1.0, double(i), p1.values[k][i]});
        m1 += p1.values[k][i] / double(s1.size());
      }
      for (std::size_t i = 0; i < s2.size(); ++i) {
        t.rows.push_back({p2.theta[k], 2.0, double(i), p2.values[k][i]});
        m2 += p2.values[k][i] / double(s2.size());
      }
      d.rows.push_back({p1.theta[k], m1, m2, m1 - m2});
    }
    g.table("profile_" + tag, t);
    g.table("profile_" + tag + "_diff", d);
    g.extra["points"][tag] = {qp.x(), qp.y(), qp.z()};
  }

  void run(Global& g) {
    samples.validate();
    if (samples.rotate) throw UsageError("--rotate is not available for profile");
    if (q.empty() == q_extreme.empty()) throw UsageError("give exactly one of --q and --q-extreme");
    if (dirs < 3) throw UsageError("--dirs must be at least 3");
    const std::uint64_t seed = g.require_seed("profile");
    auto [s1, s2] = samples.draw(derive_seed(seed, 0), parse_point(samples.mu1));
    if (!q.empty()) {
      emit(g, "q", parse_point(q), s1, s2);
      return;
    }
    Rng grng(derive_seed(seed, 1));
    const auto cand = uniform_sample(grng, grid);
    const auto scan = observation_scan(s1, s2, cand, ScanCriterion::TrSq, 0.05, g.threads);
    if (q_extreme == "min" || q_extreme == "both") emit(g, "min", scan.back().q, s1, s2);
    if (q_extreme == "max" || q_extreme == "both") emit(g, "max", scan.front().q, s1, s2);
  }
};

// ---- interp --------------------------------------------------------------------

struct InterpCmd {
  std::string problem_file;
  std::size_t alpha_steps = 0;
  std::string direction = "gradient";
  std::optional<int> restarts;

  void add(CLI::App* app) {
    app->add_option("--problem", problem_file, "problem JSON")->required();
    app->add_option("--alpha-steps", alpha_steps, "number of alpha values on the two-endpoint path");
    app->add_option("--direction", direction, "search direction")
        ->check(CLI::IsMember({"gradient", "multiplicative"}))
        ->capture_default_str();
    app->add_option("--restarts", restarts, "override the solver restart count");
  }

  void run(Global& g) {
    io::ProblemFile pf = io::read_problem(problem_file);
    InterpProblem& p = pf.problem;
    SolverConfig cfg = pf.solver;
    if (g.seed) cfg.seed = *g.seed;
    if (restarts) cfg.restarts = *restarts;
    cfg.threads = g.threads;
    cfg.direction = direction == "gradient" ? SearchDirection::Gradient : SearchDirection::Multiplicative;
    if (alpha_steps == 1) throw UsageError("--alpha-steps needs at least 2 values");
    if (alpha_steps >= 2 && p.m() != 2) throw UsageError("--alpha-steps needs exactly two endpoints");

    const Kernels K = precompute_kernels(p, g.threads);
    const RankReport rank = rank_check(p, K);
    g.extra["rank"] = {{"rank_A", rank.rank_dist2}, {"rank_B", rank.rank_shifted2}, {"k", rank.k},
                       {"admissible", rank.admissible}};
    if (!rank.admissible) {
      throw Error(ErrorKind::DimensionMismatch,
                  "rank check failed: rank(A) = " + std::to_string(rank.rank_dist2) + ", rank(B) = " +
                      std::to_string(rank.rank_shifted2) + ", k = " + std::to_string(rank.k));
    }

    const InterpResult own = solve(p, K, cfg);
    g.document("result", [&] {
      json doc{{"f_hat", own.f_hat.vec()},      {"objective", own.objective},
               {"iterations", own.iterations},  {"converged", own.converged},
               {"restarts_used", own.restarts_used}, {"restart_objectives", json::array()}};
      for (double v : own.restart_objectives) {
        doc["restart_objectives"].push_back(std::isfinite(v) ? json(v) : json(nullptr));
      }
      return doc;
    }());
    io::Table trace{{"iter", "objective", "step", "grad_norm"}, {}};
    for (const auto& r : own.trace) trace.rows.push_back({double(r.iter), r.objective, r.step, r.grad_norm});
    g.table("trace", trace);

    std::vector<std::vector<double>> path{p.alpha};
    if (alpha_steps >= 2) path = two_point_path(int(alpha_steps) - 1);

    io::Table t;
    t.header = {"t"};
    for (std::size_t s = 0; s < p.m(); ++s) t.header.push_back("alpha" + std::to_string(s + 1));
    for (const char* c : {"method", "H", "mse", "fa", "converged", "iterations"}) t.header.push_back(c);
    for (std::size_t i = 0; i < p.k(); ++i) t.header.push_back("f" + std::to_string(i + 1));

    for (std::size_t ti = 0; ti < path.size(); ++ti) {
      const Objective obj(p, K, path[ti]);
      const InterpResult r = solve(obj, p, cfg);
      const std::array<Pmf, 3> fs{r.f_hat, linear_interp(path[ti], p.endpoints),
                                  sqroot_interp(path[ti], p.endpoints)};
      for (std::size_t method = 0; method < 3; ++method) {
        double h = std::nan("");
        try {
          h = obj.value(fs[method].weights());
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
        }
        std::vector<double> row{double(ti)};
        row.insert(row.end(), path[ti].begin(), path[ti].end());
        row.push_back(double(method));
        row.push_back(h);
        row.push_back(mse(fs[method], p.endpoints, path[ti]));
        row.push_back(fractional_anisotropy(fs[method], p.domain));
        row.push_back(method == 0 ? double(r.converged) : 1.0);
        row.push_back(method == 0 ? double(r.iterations) : 0.0);
        row.insert(row.end(), fs[method].vec().begin(), fs[method].vec().end());
        t.rows.push_back(std::move(row));
      }
    }
    g.table("interp", t);
    g.extra["methods"] = {std::string(to_string(p.invariant)), "linear", "sqroot"};
    g.extra["invariant"] = std::string(to_string(p.invariant));
    g.extra["weight"] = std::string(to_string(p.weight));
    g.extra["solver_seed"] = cfg.seed;
  }
};

// ---- check -----------------------------------------------------------------------

struct CheckCmd {
  std::string problem_file;

  void add(CLI::App* app) { app->add_option("--problem", problem_file, "problem JSON to rank-check"); }

  void run(Global& g) {
    const std::uint64_t seed = g.require_seed("check");
    Rng rng(seed);
    json checks = json::object();
    bool all_ok = true;
    auto record = [&](const char* name, double worst, double tol) {
      const bool ok = worst <= tol;
      all_ok &= ok;
      checks[name] = {{"worst", worst}, {"tolerance", tol}, {"pass", ok}};
    };

    double trip = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const auto a = uniform_point(rng);
      const auto b = uniform_point(rng);
      if (a.dot(b) < -1.0 + 1e-6) continue;
      trip = std::max(trip, (exp_map(a, log_map(a, b)).vec() - b.vec()).norm());
    }
    record("exp_log_round_trip", trip, 1e-10);

    double sim = 0.0;
    std::normal_distribution<double> n01;
    for (int t = 0; t < 1000; ++t) {
      auto spd = [&] {
        Eigen::Matrix2d b;
        b << n01(rng), n01(rng), n01(rng), n01(rng);
        return Sym2::from_matrix(b * b.transpose() + 0.05 * Eigen::Matrix2d::Identity());
      };
      const Sym2 x = spd(), y = spd();
      Eigen::Matrix2d a;
      do {
        a << n01(rng), n01(rng), n01(rng), n01(rng);
      } while (std::abs(a.determinant()) < 0.1);
      const Sym2 ax = Sym2::from_matrix(a * x.matrix() * a.transpose());
      const Sym2 ay = Sym2::from_matrix(a * y.matrix() * a.transpose());
      for (double (*h)(const Sym2&, const Sym2&) : {&h_trln2, &h_lik}) {
        const double u = h(x, y), v = h(ax, ay);
        sim = std::max(sim, std::abs(u - v) / std::max(1.0, std::abs(u)));
      }
    }
    record("similarity_invariance", sim, 1e-8);

    double feas = 0.0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> y(6);
      for (auto& v : y) v = 2.0 * n01(rng);
      const auto x = project_simplex(y);
      double s = 0.0;
      for (double v : x) {
        s += v;
        if (v < 0.0) feas = std::max(feas, -v);
      }
      feas = std::max(feas, std::abs(s - 1.0));
    }
    record("simplex_projection_feasibility", feas, 1e-12);

    double ident = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = 1e-8 + (std::numbers::pi - 2e-8) * i / 1000.0;
      ident = std::max(ident, std::abs(t * t * weight_value(WeightFn::PiHalf, t) -
                                       (t - std::numbers::pi / 2) * (t - std::numbers::pi / 2)));
    }
    record("pihalf_trace_identity", ident, 1e-12);

    json report{{"self_tests", checks}, {"all_pass", all_ok}};
    bool admissible = true;
    if (!problem_file.empty()) {
      const io::ProblemFile pf = io::read_problem(problem_file);
      const Kernels K = precompute_kernels(pf.problem, g.threads);
      const RankReport r = rank_check(pf.problem, K);
      admissible = r.admissible;
      report["rank"] = {{"rank_A", r.rank_dist2}, {"rank_B", r.rank_shifted2}, {"k", r.k},
                        {"admissible", r.admissible}};
    }
    g.document("check", report);
    if (!admissible) throw Error(ErrorKind::DimensionMismatch, "rank check failed for " + problem_file);
    if (!all_ok) throw Error(ErrorKind::NotPositiveDefinite, "a numerical self-test failed");
  }
};

void write_manifest(const Global& g, const std::string& command, double wall) {
  json m;
  m["command"] = command;
  m["argv"] = g.flags;
  m["seed"] = g.seed ? json(*g.seed) : json(nullptr);
  m["threads"] = g.threads;
  m["format"] = g.format;
  m["versions"] = {{"covfield", COVFIELD_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  m["outputs"] = g.outputs;
  m["details"] = g.extra;
  m["wall_time_s"] = wall;
  io::write_text(fs::path(g.out) / "run.json", m.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariance-field workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "master seed (mandatory for stochastic commands)");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--format", g.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  SampleCmd sample;
  TestCmd test;
  ScanCmd scan;
  ProfileCmd profile;
  InterpCmd interp;
  CheckCmd check;
  auto* c_sample = app.add_subcommand("sample", "draw from the ring density");
  auto* c_test = app.add_subcommand("test", "run the two-sample procedures over repetitions");
  auto* c_scan = app.add_subcommand("scan", "rank observation points by tr^2 or det of L");
  auto* c_profile = app.add_subcommand("profile", "sample profiles at a chosen observation point");
  auto* c_interp = app.add_subcommand("interp", "interpolate pmfs along an alpha path");
  auto* c_check = app.add_subcommand("check", "rank check and numerical self-tests");
  sample.add(c_sample);
  test.add(c_test);
  scan.add(c_scan);
  profile.add(c_profile);
  interp.add(c_interp);
  check.add(c_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0) continue;
    g.flags.push_back(a);
  }

  const auto start = std::chrono::steady_clock::now();
  std::string command;
  try {
    fs::create_directories(g.out);
    if (c_sample->parsed()) {
      command = "sample";
      sample.run(g);
    } else if (c_test->parsed()) {
      command = "test";
      test.run(g);
    } else if (c_scan->parsed()) {
      command = "scan";
      scan.run(g);
    } else if (c_profile->parsed()) {
      command = "profile";
      profile.run(g);
    } else if (c_interp->parsed()) {
      command = "interp";
      interp.run(g);
    } else if (c_check->parsed()) {
      command = "check";
      check.run(g);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(g, command, wall);
  std::cout << command << ": wrote " << g.outputs.size() << " file(s) to " << g.out << "\n";
  return kExitOk;
}
