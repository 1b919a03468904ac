#include "kml/sip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kml/errors.hpp"
#include "kml/random.hpp"

namespace kml {

double conjugate_exponent(double p) { return p / (p - 1.0); }

SipSpace::SipSpace(std::size_t dim, double p) : dim_(dim), p_(p), q_(conjugate_exponent(p)) {
  if (dim == 0) throw DomainError("SipSpace: dimension must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("SipSpace: exponent must lie in (1, inf)");
}

double lp_norm(const Vector& v, double p) {
  const double scale = linalg::max_abs(v);
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) sum += std::pow(std::abs(v(j)) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

SipVector::SipVector(Vector entries) : entries_(std::move(entries)) {
  if (!entries_.allFinite()) throw DomainError("SipVector: entries must be finite");
}

DualFunctional::DualFunctional(Vector entries) : entries_(std::move(entries)) {
  if (!entries_.allFinite()) throw DomainError("DualFunctional: entries must be finite");
}

Scalar DualFunctional::operator()(const SipVector& f) const {
  if (f.size() != size()) throw DimensionError("DualFunctional: dimension mismatch");
  return (entries_.array() * f.entries().array()).sum();
}

namespace {

// conj(v_j) |v_j|^{r-2} / ||v||_r^{r-2}, with zero entries mapped to zero.
Vector normalized_conjugate_power(const Vector& v, double r) {
  Vector out = Vector::Zero(v.size());
  const double nrm = lp_norm(v, r);
  if (nrm == 0.0) return out;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double a = std::abs(v(j));
    if (a == 0.0) continue;
    // (|v_j| / ||v||)^{r-2} avoids overflow for large r
    out(j) = std::conj(v(j)) * std::pow(a / nrm, r - 2.0);
  }
  return out;
}

void require_dim(const SipSpace& space, std::size_t n, const char* op) {
  if (n != space.dim()) throw DimensionError(std::string(op) + ": dimension mismatch");
}

}  // namespace

DualFunctional duality_map(const SipSpace& space, const SipVector& y) {
  require_dim(space, y.size(), "duality_map");
  return DualFunctional(normalized_conjugate_power(y.entries(), space.p()));
}

SipVector inverse_duality_map(const SipSpace& space, const DualFunctional& g) {
  require_dim(space, g.size(), "inverse_duality_map");
  return SipVector(normalized_conjugate_power(g.entries(), space.q()));
}

Scalar sip_eval(const SipSpace& space, const SipVector& x, const SipVector& y) {
  require_dim(space, x.size(), "sip_eval");
  return duality_map(space, y)(x);
}

RieszReport riesz_check(const SipSpace& space, const DualFunctional& g, std::size_t trials,
                        std::uint64_t seed) {
  if (trials == 0) throw DomainError("riesz_check: trials must be >= 1");
  require_dim(space, g.size(), "riesz_check");
  RieszReport rep;
  rep.trials = trials;
  const SipVector h = inverse_duality_map(space, g);
  rep.representer = h.entries();
  const double g_norm = lp_norm(g.entries(), space.q());
  rep.norm_residual = std::abs(g_norm - lp_norm(h.entries(), space.p()));

  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(space.dim());
  for (std::size_t t = 0; t < trials; ++t) {
    const SipVector f(rng.complex_vector(n));
    const double scale = (1.0 + g_norm) * (1.0 + lp_norm(f.entries(), space.p()));
    const double r = std::abs(g(f) - sip_eval(space, f, h)) / scale;
    rep.max_pairing_residual = std::max(rep.max_pairing_residual, r);
  }
  return rep;
}

double SipAxiomsReport::max() const {
  return std::max({first_slot_linearity, conjugate_homogeneity, positivity, cauchy_schwarz});
}

SipAxiomsReport sip_axioms_check(const SipSpace& space, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw DomainError("sip_axioms_check: trials must be >= 1");
  SipAxiomsReport rep;
  rep.trials = trials;
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(space.dim());
  const double p = space.p();
  for (std::size_t t = 0; t < trials; ++t) {
    const SipVector x(rng.complex_vector(n));
    const SipVector y(rng.complex_vector(n));
    const SipVector z(rng.complex_vector(n));
    const Scalar alpha = rng.complex_normal();
    const Scalar beta = rng.complex_normal();
    const Scalar lambda = rng.complex_normal();
    const double nx = lp_norm(x.entries(), p);
    const double ny = lp_norm(y.entries(), p);
    const double nz = lp_norm(z.entries(), p);

    const Scalar xy = sip_eval(space, x, y);
    const Scalar zy = sip_eval(space, z, y);
    const SipVector combo(alpha * x.entries() + beta * z.entries());
    const double lin_scale = (std::abs(alpha) * nx + std::abs(beta) * nz) * ny;
    rep.first_slot_linearity = std::max(
        rep.first_slot_linearity,
        std::abs(sip_eval(space, combo, y) - (alpha * xy + beta * zy)) / lin_scale);

    const SipVector scaled(lambda * y.entries());
    rep.conjugate_homogeneity =
        std::max(rep.conjugate_homogeneity, std::abs(sip_eval(space, x, scaled) - std::conj(lambda) * xy) /
                                                (std::abs(lambda) * nx * ny));

    const Scalar yy = sip_eval(space, y, y);
    const double pos = yy.real() > 0.0 ? std::abs(yy - Scalar(ny * ny)) / (ny * ny)
                                       : std::numeric_limits<double>::infinity();
    rep.positivity = std::max(rep.positivity, pos);

    const double bound = nx * ny;
    const double excess = std::max(0.0, std::abs(xy) - bound * (1.0 + 1e-9));
    rep.cauchy_schwarz = std::max(rep.cauchy_schwarz, excess / bound);
  }
  return rep;
}

double lp_operator_norm_bound(const Matrix& t, double p) {
  if (t.size() == 0) return 0.0;
  const double col_sum = t.cwiseAbs().colwise().sum().maxCoeff();
  const double row_sum = t.cwiseAbs().rowwise().sum().maxCoeff();
  return std::pow(col_sum, 1.0 / p) * std::pow(row_sum, 1.0 - 1.0 / p);
}

DualFunctional adjoint_apply(const Matrix& t, const DualFunctional& g) {
  if (static_cast<std::size_t>(t.rows()) != g.size())
    throw DimensionError("adjoint_apply: functional must act on the codomain of T");
  return DualFunctional(t.transpose() * g.entries());
}

}  // namespace kml
