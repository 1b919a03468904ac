#include "kml/rkhs.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kml/errors.hpp"

namespace kml {

std::shared_ptr<const RkhsBase> RkhsBase::create(const KernelSpec& spec, const PointSet& xs) {
  return std::shared_ptr<const RkhsBase>(new RkhsBase(kml::gram(spec, xs)));
}

std::shared_ptr<const RkhsBase> RkhsBase::create(GramMatrix g) {
  return std::shared_ptr<const RkhsBase>(new RkhsBase(std::move(g)));
}

bool RkhsBase::same_as(const RkhsBase& other) const {
  if (this == &other) return true;
  return points() == other.points() && gram_.matrix() == other.gram_.matrix();
}

namespace {

void require_same_base(const SpanFunction& f, const SpanFunction& g, const char* op) {
  if (!f.base()->same_as(*g.base())) {
    throw DimensionError(std::string(op) + ": functions live over different bases");
  }
}

}  // namespace

SpanFunction::SpanFunction(RkhsBasePtr base, Vector coeffs)
    : base_(std::move(base)), coeffs_(std::move(coeffs)) {
  if (!base_) throw DomainError("SpanFunction: null base");
  if (static_cast<std::size_t>(coeffs_.size()) != base_->size())
    throw DimensionError("SpanFunction: coefficient count must equal |X|");
  if (!coeffs_.allFinite()) throw DomainError("SpanFunction: coefficients must be finite");
}

SpanFunction SpanFunction::zero(RkhsBasePtr base) {
  const auto m = static_cast<Eigen::Index>(base->size());
  return SpanFunction(std::move(base), Vector::Zero(m));
}

SpanFunction SpanFunction::section(RkhsBasePtr base, std::size_t i) {
  const auto m = static_cast<Eigen::Index>(base->size());
  if (i >= base->size()) throw DimensionError("SpanFunction::section: index out of range");
  return SpanFunction(std::move(base), Vector::Unit(m, static_cast<Eigen::Index>(i)));
}

Vector SpanFunction::values() const { return base_->gram().matrix() * coeffs_; }

SpanFunction operator+(const SpanFunction& f, const SpanFunction& g) {
  require_same_base(f, g, "operator+");
  return SpanFunction(f.base(), f.coeffs() + g.coeffs());
}

SpanFunction operator-(const SpanFunction& f, const SpanFunction& g) {
  require_same_base(f, g, "operator-");
  return SpanFunction(f.base(), f.coeffs() - g.coeffs());
}

SpanFunction operator*(Scalar a, const SpanFunction& f) {
  return SpanFunction(f.base(), a * f.coeffs());
}

Scalar evaluate(const SpanFunction& f, const Point& y) {
  const auto& base = *f.base();
  if (y.dim() != base.points().dim()) throw DimensionError("evaluate: dimension mismatch");
  const auto& c = f.coeffs();
  Scalar sum{0.0, 0.0};
  if (base.kernel()) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      sum += c(static_cast<Eigen::Index>(i)) * eval_kernel(*base.kernel(), y, base.points()[i]);
    }
    return sum;
  }
  const auto row = base.points().index_of(y);
  if (!row) throw DomainError("evaluate: base has no kernel and y is not a member of X");
  for (std::size_t i = 0; i < base.size(); ++i) {
    sum += c(static_cast<Eigen::Index>(i)) * base.gram()(*row, i);
  }
  return sum;
}

Scalar inner(const SpanFunction& f, const SpanFunction& g) {
  require_same_base(f, g, "inner");
  return g.coeffs().dot(f.base()->gram().matrix() * f.coeffs());
}

NormDetails norm_details(const SpanFunction& f) {
  NormDetails d;
  d.raw = inner(f, f).real();
  d.clamped = d.raw < 0.0;
  d.value = std::sqrt(std::max(d.raw, 0.0));
  return d;
}

double norm(const SpanFunction& f) { return norm_details(f).value; }

double eval_functional_norm(const KernelSpec& spec, const Point& y) {
  const Scalar k = eval_kernel(spec, y, y);
  if (k.real() < 0.0) throw DomainError("eval_functional_norm: K(y,y) is negative");
  return std::sqrt(k.real());
}

double LeastSquaresFit::relative_residual() const {
  if (values_norm == 0.0) return residual == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return residual / values_norm;
}

LeastSquaresFit fit_values(const RkhsBase& base, const Vector& values) {
  if (static_cast<std::size_t>(values.size()) != base.size())
    throw DimensionError("values_to_coeffs: value vector length must equal |X|");
  LeastSquaresFit fit;
  const Matrix& g = base.gram().matrix();
  fit.coeffs = linalg::least_squares(g, values);
  fit.residual = (g * fit.coeffs - values).norm();
  fit.values_norm = values.norm();
  return fit;
}

Vector values_to_coeffs(const RkhsBase& base, const Vector& values, double tol) {
  auto fit = fit_values(base, values);
  if (fit.residual > tol * fit.values_norm) {
    std::ostringstream msg;
    msg << "values_to_coeffs: value vector is not in range(G); relative residual "
        << fit.relative_residual() << " exceeds " << tol;
    throw NotInSpace(msg.str(), fit.residual);
  }
  return std::move(fit.coeffs);
}

SpanFunction from_values(RkhsBasePtr base, const Vector& values, double tol) {
  Vector c = values_to_coeffs(*base, values, tol);
  return SpanFunction(std::move(base), std::move(c));
}

double reproducing_residual(const SpanFunction& f, const Point& y) {
  const auto idx = f.base()->points().index_of(y);
  if (!idx) throw DomainError("reproducing_residual: y is not a member of the base point set");
  const auto section = SpanFunction::section(f.base(), *idx);
  return std::abs(inner(f, section) - evaluate(f, y));
}

}  // namespace kml
