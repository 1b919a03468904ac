#pragma once

#include <memory>

#include "kml/kernels.hpp"

namespace kml {

/// The finite-model RKHS H(X): the range of a Gram matrix, spanned by the
/// kernel sections k_{x_i} = K(., x_i). Shared by every SpanFunction over it.
class RkhsBase {
 public:
  static std::shared_ptr<const RkhsBase> create(const KernelSpec& spec, const PointSet& xs);
  /// A base without a kernel; such functions can only be evaluated on X.
  static std::shared_ptr<const RkhsBase> create(GramMatrix g);

  const GramMatrix& gram() const noexcept { return gram_; }
  const PointSet& points() const noexcept { return gram_.points(); }
  const std::optional<KernelSpec>& kernel() const noexcept { return gram_.kernel(); }
  std::size_t size() const noexcept { return gram_.size(); }

  /// Same point set and same Gram entries.
  bool same_as(const RkhsBase& other) const;

 private:
  explicit RkhsBase(GramMatrix g) : gram_(std::move(g)) {}
  GramMatrix gram_;
};

using RkhsBasePtr = std::shared_ptr<const RkhsBase>;

/// f = sum_i c_i k_{x_i}.
class SpanFunction {
 public:
  SpanFunction(RkhsBasePtr base, Vector coeffs);

  static SpanFunction zero(RkhsBasePtr base);
  /// The kernel section k_{x_i}.
  static SpanFunction section(RkhsBasePtr base, std::size_t i);

  const RkhsBasePtr& base() const noexcept { return base_; }
  const Vector& coeffs() const noexcept { return coeffs_; }

  /// Value vector (f(x_1), ..., f(x_m)) = G c.
  Vector values() const;

  friend SpanFunction operator+(const SpanFunction& f, const SpanFunction& g);
  friend SpanFunction operator-(const SpanFunction& f, const SpanFunction& g);
  friend SpanFunction operator*(Scalar a, const SpanFunction& f);

 private:
  RkhsBasePtr base_;
  Vector coeffs_;
};

/// f(y) = sum_i c_i K(y, x_i). Needs a kernel unless y is a member of X.
Scalar evaluate(const SpanFunction& f, const Point& y);

/// <f, g> = sum_{i,j} c_i conj(d_j) K(x_j, x_i) = d^H G c.
Scalar inner(const SpanFunction& f, const SpanFunction& g);

struct NormDetails {
  double value = 0.0;    // sqrt(max(raw, 0))
  double raw = 0.0;      // Re <f, f> as computed
  bool clamped = false;  // raw was negative
};
NormDetails norm_details(const SpanFunction& f);
double norm(const SpanFunction& f);

/// ||E_y|| = ||k_y|| = sqrt(K(y, y)).
double eval_functional_norm(const KernelSpec& spec, const Point& y);

/// Rank-revealing least-squares fit of a value vector by G c.
struct LeastSquaresFit {
  Vector coeffs;
  double residual = 0.0;  // ||G c - values||_2
  double relative_residual() const;
  double values_norm = 0.0;
};
LeastSquaresFit fit_values(const RkhsBase& base, const Vector& values);

/// Coefficients c with G c = values. Throws NotInSpace when the relative
/// residual exceeds tol.
Vector values_to_coeffs(const RkhsBase& base, const Vector& values, double tol = 1e-9);
SpanFunction from_values(RkhsBasePtr base, const Vector& values, double tol = 1e-9);

/// |<f, k_y> - f(y)| for a member y of X.
double reproducing_residual(const SpanFunction& f, const Point& y);

}  // namespace kml
