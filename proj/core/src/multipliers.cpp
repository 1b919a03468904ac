#include "kml/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kml/errors.hpp"

namespace kml {

namespace {

void require_same_points(const PointSet& a, const PointSet& b, const char* op) {
  if (!(a == b)) throw DimensionError(std::string(op) + ": operands live over different point sets");
}

Matrix diag(const Vector& v) { return v.asDiagonal(); }

// ||a - b|| / scale, with 0/0 read as 0.
double relative_gap(const Vector& a, const Vector& b, double scale) {
  const double gap = (a - b).norm();
  if (gap == 0.0) return 0.0;
  return scale > 0.0 ? gap / scale : std::numeric_limits<double>::infinity();
}

void require_psd(const GramMatrix& g, const char* op) {
  const double floor = linalg::min_eigenvalue(g.matrix());
  if (floor < -g.psd_tolerance()) {
    std::ostringstream msg;
    msg << op << ": Gram matrix is numerically indefinite (min eigenvalue " << floor << ")";
    throw NotPositiveSemidefinite(msg.str(), floor);
  }
}

// Whitened matrix of f between two finite models:
//   B = S2^{-1/2} U2^H F U1 S1^{1/2}
// where G_k = U_k S_k U_k^H on its numerical range. ||B||_2 is the operator
// norm of M_f : H(G1) -> H(G2) when F range(G1) lies in range(G2).
Matrix whitened_multiplier(const Vector& f, const linalg::PsdRange& r1,
                           const linalg::PsdRange& r2) {
  const RealVector s1 = r1.values.cwiseSqrt();
  const RealVector s2_inv = r2.values.cwiseSqrt().cwiseInverse();
  const Matrix core = r2.basis.adjoint() * f.asDiagonal() * r1.basis;
  return s2_inv.asDiagonal() * core * s1.asDiagonal();
}

}  // namespace

PointFunction::PointFunction(PointSet points, Vector values)
    : points_(std::move(points)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != points_.size())
    throw DimensionError("PointFunction: value count must equal |X|");
  if (!values_.allFinite()) throw DomainError("PointFunction: values must be finite");
}

PointFunction PointFunction::constant(PointSet points, Scalar c) {
  const auto m = static_cast<Eigen::Index>(points.size());
  return PointFunction(std::move(points), Vector::Constant(m, c));
}

double PointFunction::sup_norm() const { return linalg::max_abs(values_); }

PointFunction operator+(const PointFunction& f, const PointFunction& g) {
  require_same_points(f.points(), g.points(), "PointFunction +");
  return PointFunction(f.points(), f.values() + g.values());
}

PointFunction operator*(Scalar a, const PointFunction& f) {
  return PointFunction(f.points(), a * f.values());
}

PointFunction operator*(const PointFunction& f, const PointFunction& g) {
  require_same_points(f.points(), g.points(), "PointFunction *");
  return PointFunction(f.points(), f.values().cwiseProduct(g.values()));
}

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::psd_bisection:
      return "psd-bisection";
    case NormMethod::generalized_eig:
      return "generalized-eig";
  }
  return "unknown";
}

namespace {

Matrix conjugated_gram(const PointFunction& f, const GramMatrix& g) {
  const Matrix fm = diag(f.values());
  return fm * g.matrix() * fm.adjoint();
}

}  // namespace

double multiplier_psd_floor(const PointFunction& f, const GramMatrix& g, double c) {
  require_same_points(f.points(), g.points(), "multiplier_psd_floor");
  // Hermitian by construction; near the norm the difference is mostly rounding noise.
  return linalg::min_eigenvalue(linalg::hermitian_part(Matrix(c * c * g.matrix() - conjugated_gram(f, g))));
}

double multiplier_psd_tolerance(const PointFunction& f, const GramMatrix& g, double c) {
  const double scale =
      std::max(c * c * linalg::max_abs(g.matrix()), linalg::max_abs(conjugated_gram(f, g)));
  return kPsdSlack * static_cast<double>(g.size()) * scale;
}

Membership multiplier_membership(const PointFunction& f, const GramMatrix& g, double tol) {
  require_same_points(f.points(), g.points(), "multiplier_membership");
  const auto range = linalg::psd_range(g.matrix());
  Membership out;
  const double sup = f.sup_norm();
  if (sup == 0.0) return out;
  for (Eigen::Index k = 0; k < range.basis.cols(); ++k) {
    const Vector image = f.values().cwiseProduct(range.basis.col(k));
    out.residual = std::max(out.residual, linalg::distance_to_range(range.basis, image) / sup);
  }
  out.member = out.residual <= tol;
  return out;
}

SpanFunction apply_multiplier(const PointFunction& f, const SpanFunction& h, double tol) {
  require_same_points(f.points(), h.base()->points(), "apply_multiplier");
  const Vector product = f.values().cwiseProduct(h.values());
  return from_values(h.base(), product, tol);
}

MultiplierCertificate multiplier_norm_eig(const PointFunction& f, const GramMatrix& g) {
  require_same_points(f.points(), g.points(), "multiplier_norm_eig");
  require_psd(g, "multiplier_norm_eig");
  const auto range = linalg::psd_range(g.matrix());
  MultiplierCertificate cert;
  cert.method = NormMethod::generalized_eig;
  if (range.rank() == 0) return cert;
  // In whitened coordinates of range(G), the pencil (F G F^H, G) becomes the
  // Hermitian matrix B B^H.
  const Matrix b = whitened_multiplier(f.values(), range, range);
  const double lambda = linalg::max_eigenvalue(Matrix(b * b.adjoint()));
  cert.bound = std::sqrt(std::max(lambda, 0.0));
  cert.margin = multiplier_psd_floor(f, g, cert.bound);
  cert.tolerance = multiplier_psd_tolerance(f, g, cert.bound);
  return cert;
}

MultiplierCertificate multiplier_norm_bisect(const PointFunction& f, const GramMatrix& g,
                                             double tol) {
  require_same_points(f.points(), g.points(), "multiplier_norm_bisect");
  if (!(tol > 0.0)) throw DomainError("multiplier_norm_bisect: tol must be > 0");
  require_psd(g, "multiplier_norm_bisect");

  MultiplierCertificate cert;
  cert.method = NormMethod::psd_bisection;
  const double sup = f.sup_norm();
  if (sup == 0.0) {
    cert.margin = multiplier_psd_floor(f, g, 0.0);
    cert.tolerance = multiplier_psd_tolerance(f, g, 0.0);
    return cert;
  }

  // Accept at half the stated tolerance so the certified c keeps a margin
  // against eigenvalue noise when it is re-evaluated.
  const auto feasible = [&](double c) {
    return multiplier_psd_floor(f, g, c) >= -0.5 * multiplier_psd_tolerance(f, g, c);
  };

  const auto range = linalg::psd_range(g.matrix());
  const double cond = range.values(0) / range.values(range.rank() - 1);
  double lo = 0.0;
  double hi = sup * std::sqrt(cond);
  if (!feasible(hi)) {
    std::ostringstream msg;
    msg << "multiplier_norm_bisect: bracket failure, upper bound " << hi << " is not feasible";
    throw NumericalError(msg.str());
  }
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(mid) ? hi : lo) = mid;
  }
  cert.bound = hi;
  cert.margin = multiplier_psd_floor(f, g, hi);
  cert.tolerance = multiplier_psd_tolerance(f, g, hi);
  return cert;
}

MultiplierCertificate multiplier_norm_two(const PointFunction& f, const GramMatrix& g1,
                                          const GramMatrix& g2, double membership_tol) {
  require_same_points(f.points(), g1.points(), "multiplier_norm_two");
  require_same_points(g1.points(), g2.points(), "multiplier_norm_two");
  require_psd(g1, "multiplier_norm_two");
  require_psd(g2, "multiplier_norm_two");

  MultiplierCertificate cert;
  cert.method = NormMethod::generalized_eig;
  const auto r1 = linalg::psd_range(g1.matrix());
  const auto r2 = linalg::psd_range(g2.matrix());
  if (r1.rank() == 0) return cert;

  const double sup = f.sup_norm();
  if (sup > 0.0) {
    double leak = 0.0;
    for (Eigen::Index k = 0; k < r1.basis.cols(); ++k) {
      const Vector image = f.values().cwiseProduct(r1.basis.col(k));
      leak = std::max(leak, linalg::distance_to_range(r2.basis, image) / sup);
    }
    if (leak > membership_tol) {
      cert.feasible = false;
      cert.bound = std::numeric_limits<double>::infinity();
      cert.margin = -std::numeric_limits<double>::infinity();
      cert.tolerance = leak;
      return cert;
    }
  }
  if (r2.rank() == 0) return cert;

  const Matrix b = whitened_multiplier(f.values(), r1, r2);
  const double lambda = linalg::max_eigenvalue(Matrix(b.adjoint() * b));
  cert.bound = std::sqrt(std::max(lambda, 0.0));

  // margin of c^2 G1 - G1 F^H G2^+ F G1
  const Matrix pinv2 = r2.basis * r2.values.cwiseInverse().asDiagonal() * r2.basis.adjoint();
  const Matrix fm = diag(f.values());
  const Matrix pulled = g1.matrix() * fm.adjoint() * pinv2 * fm * g1.matrix();
  const Matrix slack = cert.bound * cert.bound * g1.matrix() - linalg::hermitian_part(pulled);
  cert.margin = linalg::min_eigenvalue(linalg::hermitian_part(slack));
  cert.tolerance = kPsdSlack * static_cast<double>(g1.size()) *
                   std::max(cert.bound * cert.bound * linalg::max_abs(g1.matrix()),
                            linalg::max_abs(pulled));
  return cert;
}

double adjoint_identity_check(const PointFunction& f, const GramMatrix& g) {
  require_same_points(f.points(), g.points(), "adjoint_identity_check");
  const double floor = linalg::min_eigenvalue(g.matrix());
  if (floor < 1e-10 * g.max_diagonal()) {
    std::ostringstream msg;
    msg << "adjoint_identity_check: Gram matrix is near-singular (min eigenvalue " << floor << ")";
    throw NumericalError(msg.str());
  }
  const Matrix& gm = g.matrix();
  const Eigen::LLT<Matrix> llt(gm);
  const Matrix a = llt.solve(diag(f.values()) * gm);
  const Matrix a_star = llt.solve(a.adjoint() * gm);

  double worst = 0.0;
  for (Eigen::Index y = 0; y < gm.rows(); ++y) {
    Vector r = a_star.col(y);
    r(y) -= std::conj(f.values()(y));
    const double g_norm_sq = r.dot(gm * r).real();
    worst = std::max(worst, std::sqrt(std::max(g_norm_sq, 0.0)));
  }
  return worst;
}

double HilbertRepresentationReport::max() const {
  return std::max({linearity_in_h, linearity_in_f, multiplicativity, boundedness});
}

HilbertRepresentationReport representation_check_hilbert(const PointFunction& f1,
                                                         const PointFunction& f2,
                                                         const SpanFunction& h1,
                                                         const SpanFunction& h2, Scalar alpha,
                                                         Scalar beta) {
  const auto pi = [](const PointFunction& f, const SpanFunction& h) {
    return apply_multiplier(f, h, 1e-8).values();
  };
  HilbertRepresentationReport rep;

  {
    const Vector p1 = pi(f1, h1);
    const Vector p2 = pi(f1, h2);
    const Vector lhs = pi(f1, alpha * h1 + beta * h2);
    const Vector rhs = alpha * p1 + beta * p2;
    rep.linearity_in_h = relative_gap(lhs, rhs, std::abs(alpha) * p1.norm() + std::abs(beta) * p2.norm());
  }
  {
    const Vector p1 = pi(f1, h1);
    const Vector p2 = pi(f2, h1);
    const Vector lhs = pi(alpha * f1 + beta * f2, h1);
    const Vector rhs = alpha * p1 + beta * p2;
    rep.linearity_in_f = relative_gap(lhs, rhs, std::abs(alpha) * p1.norm() + std::abs(beta) * p2.norm());
  }
  {
    const Vector lhs = pi(f1 * f2, h1);
    const Vector rhs = apply_multiplier(f1, apply_multiplier(f2, h1, 1e-8), 1e-8).values();
    rep.multiplicativity = relative_gap(lhs, rhs, std::max(lhs.norm(), rhs.norm()));
  }
  {
    const double image_norm = norm(apply_multiplier(f1, h1, 1e-8));
    const double bound =
        multiplier_norm_eig(f1, h1.base()->gram()).bound * norm(h1) * (1.0 + 1e-9);
    const double excess = std::max(0.0, image_norm - bound);
    rep.boundedness = excess == 0.0 ? 0.0 : excess / std::max(bound, image_norm);
  }
  return rep;
}

}  // namespace kml
