#include "covfield/two_sample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "covfield/covariance.hpp"
#include "covfield/error.hpp"
#include "covfield/parallel.hpp"

namespace covfield {

namespace {

Eigen::MatrixX2d log_coords(const TangentFrame& frame, std::span<const UnitPoint> sample) {
  Eigen::MatrixX2d u(Eigen::Index(sample.size()), 2);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    u.row(Eigen::Index(i)) = log_map(frame, sample[i]).u.transpose();
  }
  return u;
}

Sym2 mean_outer(const Eigen::MatrixX2d& u) {
  const Eigen::Matrix2d m = u.transpose() * u / double(u.rows());
  return Sym2::from_matrix(m);
}

Eigen::Vector2d fix_sign(Eigen::Vector2d v) {
  const double lead = v.x() != 0.0 ? v.x() : v.y();
  return lead < 0.0 ? Eigen::Vector2d(-v) : v;
}

std::vector<double> column(const Eigen::MatrixX2d& m, int c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

std::vector<double> difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  std::vector<double> out(std::size_t(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) out[std::size_t(i)] = a(i) - b(i);
  return out;
}

ProcedureOutcome finish(const Projections& pr, std::array<RankTestResult, 2> comps,
                        RankTestResult dist, double alpha) {
  ProcedureOutcome out;
  out.xi_components = comps;
  out.xi_statistic = std::max(comps[0].statistic, comps[1].statistic);
  out.xi_p_value = std::min(comps[0].p_value, comps[1].p_value);
  out.distance = dist;
  out.lambda = pr.lambda;
  out.directions = pr.directions;
  out.alpha = alpha;
  out.reject = out.xi_p_value < alpha / 2.0;
  out.reject_distance = dist.p_value < alpha;
  return out;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "significance level must lie in (0, 1)");
  }
}

}  // namespace

Projections projections_at(const UnitPoint& q, std::span<const UnitPoint> sample1,
                           std::span<const UnitPoint> sample2, bool paired) {
  if (sample1.empty() || sample2.empty()) {
    throw Error(ErrorKind::InvalidArgument, "both samples must be nonempty");
  }
  if (paired && sample1.size() != sample2.size()) {
    throw Error(ErrorKind::SampleSizeMismatch, "paired procedure needs equal sample sizes");
  }
  Projections pr;
  pr.frame = tangent_frame(q);
  const Eigen::MatrixX2d u1 = log_coords(pr.frame, sample1);
  const Eigen::MatrixX2d u2 = log_coords(pr.frame, sample2);
  pr.cov1 = mean_outer(u1);
  pr.cov2 = mean_outer(u2);
  pr.diff = pr.cov1 - pr.cov2;

  const SymEigen2 es = eigen_desc(pr.diff);
  pr.lambda = es.values;
  Eigen::Matrix2d v;
  for (int s = 0; s < 2; ++s) {
    v.col(s) = fix_sign(es.vectors.col(s));
    pr.directions[std::size_t(s)] = TangentVec{pr.frame, v.col(s)};
  }
  pr.xi[0] = (u1 * v).array().square();
  pr.xi[1] = (u2 * v).array().square();
  pr.d[0] = u1.rowwise().squaredNorm();
  pr.d[1] = u2.rowwise().squaredNorm();
  return pr;
}

ProcedureOutcome test_procedure_1(std::span<const UnitPoint> sample1,
                                  std::span<const UnitPoint> sample2, const UnitPoint& q,
                                  double alpha) {
  check_alpha(alpha);
  const Projections pr = projections_at(q, sample1, sample2, true);
  std::array<RankTestResult, 2> comps;
  for (int s = 0; s < 2; ++s) {
    comps[std::size_t(s)] = signed_rank(difference(pr.xi[0].col(s), pr.xi[1].col(s)));
  }
  return finish(pr, comps, signed_rank(difference(pr.d[0], pr.d[1])), alpha);
}

ProcedureOutcome test_procedure_2(std::span<const UnitPoint> sample1,
                                  std::span<const UnitPoint> sample2, const UnitPoint& q,
                                  double alpha) {
  check_alpha(alpha);
  const Projections pr = projections_at(q, sample1, sample2, false);
  std::array<RankTestResult, 2> comps;
  for (int s = 0; s < 2; ++s) {
    comps[std::size_t(s)] = rank_sum(column(pr.xi[0], s), column(pr.xi[1], s));
  }
  const std::vector<double> d1(pr.d[0].data(), pr.d[0].data() + pr.d[0].size());
  const std::vector<double> d2(pr.d[1].data(), pr.d[1].data() + pr.d[1].size());
  return finish(pr, comps, rank_sum(d1, d2), alpha);
}

std::string_view to_string(ScanCriterion c) {
  switch (c) {
    case ScanCriterion::TrSq: return "tr2";
    case ScanCriterion::Det: return "det";
    case ScanCriterion::Uniform: return "uniform";
  }
  return "?";
}

ScanCriterion parse_scan_criterion(std::string_view name) {
  if (name == "tr2") return ScanCriterion::TrSq;
  if (name == "det") return ScanCriterion::Det;
  if (name == "uniform") return ScanCriterion::Uniform;
  throw Error(ErrorKind::InvalidArgument, "unknown scan criterion '" + std::string(name) + "'");
}

std::vector<ScanEntry> observation_scan(std::span<const UnitPoint> sample1,
                                        std::span<const UnitPoint> sample2,
                                        std::span<const UnitPoint> candidates,
                                        ScanCriterion criterion, double alpha, unsigned threads) {
  if (candidates.empty()) throw Error(ErrorKind::InvalidArgument, "no candidate points");
  std::vector<ScanEntry> entries(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t c) {
    ScanEntry& e = entries[c];
    e.q = candidates[c];
    e.candidate_index = c;
    const Projections pr = projections_at(e.q, sample1, sample2, false);
    e.tr2 = pr.diff.trace() * pr.diff.trace();
    e.det = pr.diff.det();
    e.lambda = pr.lambda;
    try {
      if (sample1.size() == sample2.size()) e.procedure1 = test_procedure_1(sample1, sample2, e.q, alpha);
      e.procedure2 = test_procedure_2(sample1, sample2, e.q, alpha);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::TooFewPairs) throw;
      e.procedure_error = err.what();
    }
  });
  auto key = [criterion](const ScanEntry& e) {
    return criterion == ScanCriterion::TrSq ? e.tr2 : e.det;
  };
  if (criterion != ScanCriterion::Uniform) {
    std::stable_sort(entries.begin(), entries.end(),
                     [&](const ScanEntry& a, const ScanEntry& b) { return key(a) > key(b); });
  }
  return entries;
}

SignAreas det_sign_areas(std::span<const UnitPoint> sample1, std::span<const UnitPoint> sample2,
                         std::span<const UnitPoint> grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty grid");
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (const auto& q : grid) {
    const double det =
        (sample_cov_operator(q, sample1, WeightFn::Unit) - sample_cov_operator(q, sample2, WeightFn::Unit))
            .det();
    if (det > 0.0) ++pos;
    else if (det < 0.0) ++neg;
  }
  const double n = double(grid.size());
  SignAreas a;
  a.positive = double(pos) / n;
  a.negative = double(neg) / n;
  a.zero = double(grid.size() - pos - neg) / n;
  return a;
}

SampleProfile sample_profile(const UnitPoint& q, std::span<const UnitPoint> sample,
                             std::size_t n_dirs) {
  if (n_dirs < 3) throw Error(ErrorKind::InvalidArgument, "a profile needs at least 3 directions");
  SampleProfile prof;
  prof.base = q;
  prof.frame = tangent_frame(q);
  const Eigen::MatrixX2d u = log_coords(prof.frame, sample);
  prof.theta.resize(n_dirs);
  prof.values.resize(n_dirs);
  for (std::size_t t = 0; t < n_dirs; ++t) {
    const double th = 2.0 * std::numbers::pi * double(t) / double(n_dirs);
    prof.theta[t] = th;
    const Eigen::Vector2d v(std::cos(th), std::sin(th));
    const Eigen::VectorXd proj = (u * v).array().square();
    prof.values[t].assign(proj.data(), proj.data() + proj.size());
  }
  return prof;
}

}  // namespace covfield
