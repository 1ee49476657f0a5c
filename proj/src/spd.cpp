#include "covfield/spd.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "covfield/error.hpp"

namespace covfield {

Sym2 Sym2::from_matrix(const Eigen::Matrix2d& m) {
  return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
}

Sym2 Sym2::outer(const Eigen::Vector2d& u, double weight) {
  return {weight * u.x() * u.x(), weight * u.x() * u.y(), weight * u.y() * u.y()};
}

SymEigen2 eigen_desc(const Sym2& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(x.matrix());
  SymEigen2 out;
  out.values << es.eigenvalues()(1), es.eigenvalues()(0);
  out.vectors.col(0) = es.eigenvectors().col(1);
  out.vectors.col(1) = es.eigenvectors().col(0);
  return out;
}

double min_eigenvalue(const Sym2& x) {
  const double half_tr = 0.5 * x.trace();
  const double half_diff = 0.5 * (x.a11 - x.a22);
  return half_tr - std::hypot(half_diff, x.a12);
}

void require_pd(const Sym2& x, std::string_view what) {
  const double lmin = min_eigenvalue(x);
  if (!(lmin > kPdFloor)) {
    throw Error(ErrorKind::NotPositiveDefinite,
                std::string(what) + " has lambda_min = " + std::to_string(lmin));
  }
}

Eigen::MatrixXd sym_log(const Eigen::MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (!(lam.minCoeff() > kPdFloor)) {
    throw Error(ErrorKind::NotPositiveDefinite, "matrix logarithm needs lambda_min > 1e-12");
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  return v * lam.array().log().matrix().asDiagonal() * v.transpose();
}

Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  const Eigen::MatrixXd& v = es.eigenvectors();
  return v * es.eigenvalues().array().exp().matrix().asDiagonal() * v.transpose();
}

Eigen::Matrix2d spd_log(const Sym2& x) {
  require_pd(x, "spd_log argument");
  Eigen::MatrixXd l = sym_log(x.matrix());
  return l;
}

Sym2 spd_exp(const Eigen::Matrix2d& symmetric) {
  Eigen::MatrixXd e = sym_exp(symmetric);
  return Sym2::from_matrix(e);
}

Eigen::VectorXd relative_eigenvalues(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  Eigen::LLT<Eigen::MatrixXd> llt(y);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "reference matrix has no Cholesky factor");
  }
  const auto l = llt.matrixL();
  Eigen::MatrixXd m = l.solve(x);
  m = l.solve(m.transpose()).transpose();
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::Vector2d relative_eigenvalues(const Sym2& x, const Sym2& y) {
  require_pd(x, "first argument");
  require_pd(y, "second argument");
  // the congruence route leaves ulp noise on identical inputs; keep h(X, X) exactly zero
  if (x == y) return Eigen::Vector2d::Ones();
  Eigen::VectorXd s = relative_eigenvalues(Eigen::MatrixXd(x.matrix()), Eigen::MatrixXd(y.matrix()));
  if (!(s.minCoeff() > 0.0)) {
    throw Error(ErrorKind::NotPositiveDefinite, "relative eigenvalue is not positive");
  }
  return s;
}

double h_trdif(const Sym2& x, const Sym2& y, const Sym2& z) {
  require_pd(z, "h_trdif reference Z");
  const Eigen::Matrix2d d = (x - y).matrix();
  return std::abs(z.matrix().ldlt().solve(d).trace());
}

double h_trln2(const Sym2& x, const Sym2& y) {
  const Eigen::Vector2d s = relative_eigenvalues(x, y);
  return std::sqrt(s.array().log().square().sum());
}

double h_lik(const Sym2& x, const Sym2& y) {
  const Eigen::Vector2d s = relative_eigenvalues(x, y);
  // sum of (s - ln s - 1) equals tr(XY^-1) - ln|XY^-1| - n, with each term >= 0
  return (s.array() - s.array().log() - 1.0).sum();
}

double h_lnpr(const Sym2& x, const Sym2& y) {
  const Eigen::Vector2d s = relative_eigenvalues(x, y);
  const double prod = s.sum() * s.cwiseInverse().sum() / 4.0;
  return std::sqrt(std::max(0.0, std::log(prod)));
}

double Invariant::operator()(const Sym2& x, const Sym2& y) const {
  switch (kind) {
    case Kind::TrDif: return h_trdif(x, y, reference);
    case Kind::TrLn2: return h_trln2(x, y);
    case Kind::Lik: return h_lik(x, y);
    case Kind::LnPr: return h_lnpr(x, y);
  }
  return 0.0;
}

std::string_view to_string(Invariant::Kind kind) {
  switch (kind) {
    case Invariant::Kind::TrDif: return "trdif";
    case Invariant::Kind::TrLn2: return "trln2";
    case Invariant::Kind::Lik: return "lik";
    case Invariant::Kind::LnPr: return "lnpr";
  }
  return "?";
}

Invariant::Kind parse_invariant_kind(std::string_view name) {
  if (name == "trdif") return Invariant::Kind::TrDif;
  if (name == "trln2") return Invariant::Kind::TrLn2;
  if (name == "lik") return Invariant::Kind::Lik;
  if (name == "lnpr") return Invariant::Kind::LnPr;
  throw Error(ErrorKind::InvalidArgument, "unknown invariant '" + std::string(name) + "'");
}

}  // namespace covfield
