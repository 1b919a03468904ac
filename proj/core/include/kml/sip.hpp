#pragma once

#include <cstdint>

#include "kml/linalg.hpp"

namespace kml {

/// Finite-dimensional l^p, 1 < p < inf, with its Giles semi-inner product.
class SipSpace {
 public:
  SipSpace(std::size_t dim, double p);

  std::size_t dim() const noexcept { return dim_; }
  double p() const noexcept { return p_; }
  /// Conjugate exponent p / (p - 1).
  double q() const noexcept { return q_; }
  /// The space on the same coordinates with exponent q.
  SipSpace dual() const { return SipSpace(dim_, q_); }

 private:
  std::size_t dim_;
  double p_;
  double q_;
};

/// Conjugate exponent of p.
double conjugate_exponent(double p);

/// ||v||_p, computed with max-abs scaling.
double lp_norm(const Vector& v, double p);

/// Element of l^p.
class SipVector {
 public:
  explicit SipVector(Vector entries);
  const Vector& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.size()); }

 private:
  Vector entries_;
};

/// Continuous functional on l^p, acting by the bilinear pairing g(f) = sum_j g_j f_j.
class DualFunctional {
 public:
  explicit DualFunctional(Vector entries);
  const Vector& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.size()); }
  Scalar operator()(const SipVector& f) const;

 private:
  Vector entries_;
};

/// Normalized duality map J(y)_j = conj(y_j) |y_j|^{p-2} / ||y||_p^{p-2}; J(0) = 0.
DualFunctional duality_map(const SipSpace& space, const SipVector& y);

/// J^{-1}(g)_j = conj(g_j) |g_j|^{q-2} / ||g||_q^{q-2}; the Riesz representer of g.
SipVector inverse_duality_map(const SipSpace& space, const DualFunctional& g);

/// [x, y] = J(y)(x) = ||y||^{2-p} sum_j x_j conj(y_j) |y_j|^{p-2}; [x, 0] = 0.
Scalar sip_eval(const SipSpace& space, const SipVector& x, const SipVector& y);

struct RieszReport {
  std::size_t trials = 0;
  /// max |g(f) - [f, h]| / ((1 + ||g||_q)(1 + ||f||_p))
  double max_pairing_residual = 0.0;
  /// | ||g||_q - ||h||_p |
  double norm_residual = 0.0;
  Vector representer;
  double max() const { return std::max(max_pairing_residual, norm_residual); }
};

/// Verifies g = h^* for h = J^{-1}(g) on `trials` random f.
RieszReport riesz_check(const SipSpace& space, const DualFunctional& g, std::size_t trials,
                        std::uint64_t seed);

/// Per-axiom maximum relative residuals of the semi-inner product over random triples.
struct SipAxiomsReport {
  std::size_t trials = 0;
  double first_slot_linearity = 0.0;
  double conjugate_homogeneity = 0.0;
  double positivity = 0.0;       // |[y,y] - ||y||^2| / ||y||^2, +inf if [y,y] <= 0 for y != 0
  double cauchy_schwarz = 0.0;   // relative excess of |[x,y]| over ||x|| ||y|| (1 + 1e-9)
  double max() const;
};

SipAxiomsReport sip_axioms_check(const SipSpace& space, std::size_t trials, std::uint64_t seed);

/// Riesz-Thorin upper bound ||T||_{p->p} <= ||T||_{1->1}^{1/p} ||T||_{inf->inf}^{1-1/p}.
double lp_operator_norm_bound(const Matrix& t, double p);

/// T^* g = g o T; for T : C^{n1} -> C^{n2} the entries are T^T g.
DualFunctional adjoint_apply(const Matrix& t, const DualFunctional& g);

}  // namespace kml
