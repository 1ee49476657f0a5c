// Thin numpy-facing wrapper over covfield_core. Points are rows of an (n, 3) array, SPD
// operators are 2x2 arrays, and library errors surface as covfield.CovfieldError.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "covfield/error.hpp"
#include "covfield/interpolation.hpp"
#include "covfield/rank_tests.hpp"
#include "covfield/sampler.hpp"
#include "covfield/simplex.hpp"
#include "covfield/spd.hpp"
#include "covfield/sphere.hpp"
#include "covfield/two_sample.hpp"

namespace py = pybind11;
using namespace covfield;
using Points = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

namespace {

UnitPoint to_point(const Eigen::Vector3d& v) { return UnitPoint(v.x(), v.y(), v.z()); }

std::vector<UnitPoint> to_points(const Points& m) {
  std::vector<UnitPoint> out;
  out.reserve(std::size_t(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(UnitPoint(m(i, 0), m(i, 1), m(i, 2)));
  return out;
}

Points from_points(const std::vector<UnitPoint>& pts) {
  Points m(Eigen::Index(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(Eigen::Index(i)) = pts[i].vec();
  return m;
}

Sym2 to_sym(const Eigen::Matrix2d& m) { return Sym2::from_matrix(m); }

py::dict rank_result(const RankTestResult& r) {
  py::dict d;
  d["statistic"] = r.statistic;
  d["p_value"] = r.p_value;
  d["n_effective"] = r.n_effective;
  d["method"] = std::string(to_string(r.method));
  return d;
}

py::dict outcome(const ProcedureOutcome& o) {
  py::dict d;
  d["xi_statistic"] = o.xi_statistic;
  d["xi_p_value"] = o.xi_p_value;
  d["xi_components"] = py::make_tuple(rank_result(o.xi_components[0]), rank_result(o.xi_components[1]));
  d["distance"] = rank_result(o.distance);
  d["lambda"] = o.lambda;
  d["reject"] = o.reject;
  d["reject_distance"] = o.reject_distance;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "covariance fields on the sphere: geometry, invariants, two-sample tests, pmf interpolation";
  m.attr("__version__") = COVFIELD_VERSION;

  py::register_exception<Error>(m, "CovfieldError", PyExc_ValueError);

  m.def("geodesic_distance", [](const Eigen::Vector3d& q, const Eigen::Vector3d& p) {
    return geodesic_distance(to_point(q), to_point(p));
  });
  m.def("log_map", [](const Eigen::Vector3d& q, const Eigen::Vector3d& p) {
    return Eigen::Vector3d(log_map_ambient(to_point(q), to_point(p)));
  }, "Tangent vector at q pointing to p, in ambient coordinates.");
  m.def("exp_map", [](const Eigen::Vector3d& q, const Eigen::Vector3d& v) {
    const UnitPoint qp = to_point(q);
    const TangentFrame f = tangent_frame(qp);
    return Eigen::Vector3d(exp_map(qp, TangentVec{f, f.to_coords(v)}).vec());
  });

  m.def("relative_eigenvalues", [](const Eigen::Matrix2d& x, const Eigen::Matrix2d& y) {
    return Eigen::Vector2d(relative_eigenvalues(to_sym(x), to_sym(y)));
  });
  m.def("h_trdif", [](const Eigen::Matrix2d& x, const Eigen::Matrix2d& y) { return h_trdif(to_sym(x), to_sym(y)); });
  m.def("h_trln2", [](const Eigen::Matrix2d& x, const Eigen::Matrix2d& y) { return h_trln2(to_sym(x), to_sym(y)); });
  m.def("h_lik", [](const Eigen::Matrix2d& x, const Eigen::Matrix2d& y) { return h_lik(to_sym(x), to_sym(y)); });
  m.def("h_lnpr", [](const Eigen::Matrix2d& x, const Eigen::Matrix2d& y) { return h_lnpr(to_sym(x), to_sym(y)); });

  m.def("ring_sample", [](double a, const Eigen::Vector3d& mu, std::size_t n, std::uint64_t seed,
                          const std::string& variant) {
    Rng rng(seed);
    return from_points(rejection_sample({a, to_point(mu), parse_density_variant(variant)}, n, rng));
  }, py::arg("a"), py::arg("mu"), py::arg("n"), py::arg("seed"), py::arg("variant") = "quartic");

  m.def("signed_rank", [](const std::vector<double>& z) { return rank_result(signed_rank(z)); });
  m.def("rank_sum", [](const std::vector<double>& x, const std::vector<double>& y) {
    return rank_result(rank_sum(x, y));
  });
  m.def("test_procedure_1", [](const Points& s1, const Points& s2, const Eigen::Vector3d& q, double alpha) {
    return outcome(test_procedure_1(to_points(s1), to_points(s2), to_point(q), alpha));
  }, py::arg("sample1"), py::arg("sample2"), py::arg("q"), py::arg("alpha") = 0.05);
  m.def("test_procedure_2", [](const Points& s1, const Points& s2, const Eigen::Vector3d& q, double alpha) {
    return outcome(test_procedure_2(to_points(s1), to_points(s2), to_point(q), alpha));
  }, py::arg("sample1"), py::arg("sample2"), py::arg("q"), py::arg("alpha") = 0.05);

  m.def("project_simplex", [](const std::vector<double>& y) { return project_simplex(y); });
  m.def("fractional_anisotropy", [](const std::vector<double>& f, const Points& domain) {
    return fractional_anisotropy(Pmf(f), to_points(domain));
  });

  m.def("interpolate", [](const Points& domain, const Points& obs, const std::vector<std::vector<double>>& endpoints,
                          const std::vector<double>& alpha, const std::string& invariant,
                          std::optional<std::string> weight, std::uint64_t seed, int restarts) {
    InterpProblem p;
    p.domain = to_points(domain);
    p.obs = to_points(obs);
    for (const auto& e : endpoints) p.endpoints.emplace_back(e);
    p.alpha = alpha;
    p.invariant = parse_invariant_kind(invariant);
    p.weight = weight ? parse_weight(*weight) : default_weight(p.invariant);
    const Kernels K = precompute_kernels(p);
    const RankReport rank = rank_check(p, K);
    if (!rank.admissible) throw Error(ErrorKind::DimensionMismatch, "problem fails the rank check");
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    const InterpResult r = solve(p, K, cfg);
    py::dict d;
    d["f_hat"] = r.f_hat.vec();
    d["objective"] = r.objective;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["restart_objectives"] = r.restart_objectives;
    return d;
  }, py::arg("domain"), py::arg("obs"), py::arg("endpoints"), py::arg("alpha"), py::arg("invariant") = "trln2",
     py::arg("weight") = py::none(), py::arg("seed") = 0, py::arg("restarts") = 0);
  m.def("linear_interp", [](const std::vector<double>& alpha, const std::vector<std::vector<double>>& endpoints) {
    std::vector<Pmf> e(endpoints.begin(), endpoints.end());
    return linear_interp(alpha, e).vec();
  });
}
