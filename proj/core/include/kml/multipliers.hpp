#pragma once

#include <string>

#include "kml/rkhs.hpp"

namespace kml {

/// A function X -> C given by its values on the point set. Candidate multiplier.
class PointFunction {
 public:
  PointFunction(PointSet points, Vector values);

  static PointFunction constant(PointSet points, Scalar c);

  const PointSet& points() const noexcept { return points_; }
  const Vector& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return points_.size(); }
  Scalar operator[](std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }
  /// max_i |f(x_i)|
  double sup_norm() const;

  friend PointFunction operator+(const PointFunction& f, const PointFunction& g);
  friend PointFunction operator*(Scalar a, const PointFunction& f);
  /// Pointwise product f g.
  friend PointFunction operator*(const PointFunction& f, const PointFunction& g);

 private:
  PointSet points_;
  Vector values_;
};

enum class NormMethod { psd_bisection, generalized_eig };
std::string to_string(NormMethod m);

/// Certified operator norm of M_f on the finite model.
struct MultiplierCertificate {
  double bound = 0.0;
  NormMethod method = NormMethod::generalized_eig;
  /// psd_floor(bound^2 G - F G F^H) at the certified bound.
  double margin = 0.0;
  /// PSD tolerance the margin is judged against.
  double tolerance = 0.0;
  /// False when f does not multiply H1 into H2 (bound is then +inf).
  bool feasible = true;
};

/// Relative tolerance multiplier for PSD tests on c^2 G - F G F^H: the test
/// admits eigenvalues down to -kPsdSlack * m * scale, scale = max(|c^2 G|, |F G F^H|).
inline constexpr double kPsdSlack = 16.0 * 2.220446049250313e-16;

/// psd_floor(c^2 G - F G F^H).
double multiplier_psd_floor(const PointFunction& f, const GramMatrix& g, double c);
double multiplier_psd_tolerance(const PointFunction& f, const GramMatrix& g, double c);

/// Does f H(G) stay inside H(G)? Relative residual of F range(G) off range(G).
struct Membership {
  bool member = true;
  double residual = 0.0;
};
Membership multiplier_membership(const PointFunction& f, const GramMatrix& g, double tol = 1e-9);

/// M_f h: the span function whose values are f(x_i) h(x_i).
SpanFunction apply_multiplier(const PointFunction& f, const SpanFunction& h, double tol = 1e-9);

/// ||M_f|| as sqrt of the top generalized eigenvalue of (F G F^H, G) on range(G).
MultiplierCertificate multiplier_norm_eig(const PointFunction& f, const GramMatrix& g);

/// Smallest c (to bracket width tol) with c^2 G - F G F^H PSD, by bisection
/// from the always-feasible bracket [0, max|f| sqrt(cond(G))].
MultiplierCertificate multiplier_norm_bisect(const PointFunction& f, const GramMatrix& g,
                                             double tol = 1e-10);

/// ||M_f : H(G1) -> H(G2)||. Infeasible (bound = +inf) when F range(G1) leaves range(G2).
MultiplierCertificate multiplier_norm_two(const PointFunction& f, const GramMatrix& g1,
                                          const GramMatrix& g2, double membership_tol = 1e-9);

/// max_y ||A* e_y - conj(f(y)) e_y||_G, with A = G^{-1} F G the coefficient
/// matrix of M_f and A* = G^{-1} A^H G its G-adjoint. Requires
/// min eig(G) >= 1e-10 * max diag(G).
double adjoint_identity_check(const PointFunction& f, const GramMatrix& g);

/// Residuals of the module-action axioms of (f, h) -> f h, relative to the
/// size of the compared value vectors.
struct HilbertRepresentationReport {
  double linearity_in_h = 0.0;   // pi(f1, a h1 + b h2) vs a pi(f1,h1) + b pi(f1,h2)
  double linearity_in_f = 0.0;   // pi(a f1 + b f2, h1) vs a pi(f1,h1) + b pi(f2,h1)
  double multiplicativity = 0.0; // pi(f1 f2, h1) vs pi(f1, pi(f2, h1))
  double boundedness = 0.0;      // relative excess of ||pi(f1,h1)|| over ||M_f1|| ||h1|| (1+1e-9)
  double max() const;
};

HilbertRepresentationReport representation_check_hilbert(const PointFunction& f1,
                                                         const PointFunction& f2,
                                                         const SpanFunction& h1,
                                                         const SpanFunction& h2, Scalar alpha,
                                                         Scalar beta);

}  // namespace kml
