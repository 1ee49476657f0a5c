#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>

namespace covfield {

inline constexpr double kPdFloor = 1e-12;

/// Symmetric 2x2 matrix stored as its upper triangle. Covariance operators are the
/// positive (semi)definite members; sample-operator differences are general symmetric.
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  static Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static Sym2 from_matrix(const Eigen::Matrix2d& m);
  static Sym2 outer(const Eigen::Vector2d& u, double weight = 1.0);

  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d m;
    m << a11, a12, a12, a22;
    return m;
  }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a12; }
  double quad(const Eigen::Vector2d& v) const {
    return a11 * v.x() * v.x() + 2.0 * a12 * v.x() * v.y() + a22 * v.y() * v.y();
  }

  Sym2& operator+=(const Sym2& o) {
    a11 += o.a11;
    a12 += o.a12;
    a22 += o.a22;
    return *this;
  }
  Sym2& operator-=(const Sym2& o) {
    a11 -= o.a11;
    a12 -= o.a12;
    a22 -= o.a22;
    return *this;
  }
  Sym2& operator*=(double s) {
    a11 *= s;
    a12 *= s;
    a22 *= s;
    return *this;
  }
  friend bool operator==(const Sym2&, const Sym2&) = default;
  friend Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
  friend Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
  friend Sym2 operator*(Sym2 a, double s) { return a *= s; }
  friend Sym2 operator*(double s, Sym2 a) { return a *= s; }
};

/// Eigen-decomposition with eigenvalues in descending order.
struct SymEigen2 {
  Eigen::Vector2d values;
  Eigen::Matrix2d vectors;  // columns
};

SymEigen2 eigen_desc(const Sym2& x);
double min_eigenvalue(const Sym2& x);

/// Throws NotPositiveDefinite unless lambda_min(x) > kPdFloor.
void require_pd(const Sym2& x, std::string_view what);

// General symmetric kernel (any size).
Eigen::MatrixXd sym_log(const Eigen::MatrixXd& x);
Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& x);

Eigen::Matrix2d spd_log(const Sym2& x);
Sym2 spd_exp(const Eigen::Matrix2d& symmetric);

/// Eigenvalues of X Y^{-1}, computed from the symmetric congruent matrix L^{-1} X L^{-T}
/// with Y = L L'. Both arguments must be positive definite.
Eigen::VectorXd relative_eigenvalues(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
Eigen::Vector2d relative_eigenvalues(const Sym2& x, const Sym2& y);

double h_trdif(const Sym2& x, const Sym2& y, const Sym2& z = Sym2::identity());
double h_trln2(const Sym2& x, const Sym2& y);
double h_lik(const Sym2& x, const Sym2& y);
double h_lnpr(const Sym2& x, const Sym2& y);

/// Which similarity-invariant function to apply. TrDif carries its reference matrix Z.
struct Invariant {
  enum class Kind { TrDif, TrLn2, Lik, LnPr };

  Kind kind = Kind::TrLn2;
  Sym2 reference = Sym2::identity();

  double operator()(const Sym2& x, const Sym2& y) const;
  bool needs_pd() const { return kind != Kind::TrDif; }
};

std::string_view to_string(Invariant::Kind kind);
Invariant::Kind parse_invariant_kind(std::string_view name);

}  // namespace covfield
