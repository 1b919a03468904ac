#include "kml/rkbs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "kml/errors.hpp"
#include "kml/random.hpp"

namespace kml {

namespace {

void require_index(const RkbsModel& model, std::size_t i, const char* op) {
  if (i >= model.size()) throw DimensionError(std::string(op) + ": point index out of range");
}

void require_features(const RkbsModel& model, const Vector& u, const char* op) {
  if (static_cast<std::size_t>(u.size()) != model.features())
    throw DimensionError(std::string(op) + ": coefficient length must equal the feature dimension");
}

void require_points(const RkbsModel& model, const PointFunction& f, const char* op) {
  if (!(model.points() == f.points()))
    throw DimensionError(std::string(op) + ": function lives over a different point set");
}

Vector normalized(const Vector& u, double r) {
  const double n = lp_norm(u, r);
  return n > 0.0 ? Vector(u / n) : u;
}

// Projected ascent of a degree-1 homogeneous objective on the unit r-sphere.
// The gradient is a functional; J^{-1} turns it into a primal direction d,
// and the step moves toward d by the largest t in {1, 1/2, ...} that improves.
struct Ascent {
  std::function<double(const Vector&)> objective;
  std::function<Vector(const Vector&)> gradient;
  double exponent;
};

std::pair<Vector, double> ascend(const Ascent& a, Vector u, std::size_t budget) {
  const SipSpace sphere(static_cast<std::size_t>(u.size()), a.exponent);
  u = normalized(u, a.exponent);
  double best = a.objective(u);
  for (std::size_t it = 0; it < budget; ++it) {
    const Vector grad = a.gradient(u);
    if (linalg::max_abs(grad) == 0.0) break;
    const Vector d = normalized(inverse_duality_map(sphere, DualFunctional(grad)).entries(), a.exponent);
    bool improved = false;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      const Vector trial = (1.0 - t) * u + t * d;
      if (lp_norm(trial, a.exponent) == 0.0) continue;
      const Vector candidate = normalized(trial, a.exponent);
      const double value = a.objective(candidate);
      if (value > best) {
        u = candidate;
        improved = value > best * (1.0 + 1e-15);
        best = value;
        break;
      }
    }
    if (!improved) break;
  }
  return {u, best};
}

}  // namespace

RkbsModel::RkbsModel(PointSet points, Matrix psi, double p)
    : points_(std::move(points)), space_(static_cast<std::size_t>(std::max<Eigen::Index>(psi.cols(), 1)), p),
      psi_(std::move(psi)) {
  const auto m = static_cast<Eigen::Index>(points_.size());
  const Eigen::Index n = psi_.cols();
  if (psi_.rows() != m) throw DimensionError("RkbsModel: Psi must have one row per point");
  if (n < 1 || n > m) throw DomainError("RkbsModel: feature dimension must satisfy 1 <= n <= m");
  if (!psi_.allFinite()) throw DomainError("RkbsModel: Psi entries must be finite");
  if (linalg::numerical_rank(psi_) != static_cast<std::size_t>(n))
    throw DomainError("RkbsModel: Psi must have full column rank");

  w_.resize(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const DualFunctional feature(psi_.row(i).transpose());
    w_.row(i) = inverse_duality_map(space_, feature).entries().transpose();
  }
  psi_range_ = linalg::column_range(psi_);
  w_range_ = linalg::column_range(w_);
  psi_pinv_ = linalg::pseudo_inverse(psi_);
  w_pinv_ = linalg::pseudo_inverse(w_);
}

std::shared_ptr<const RkbsModel> RkbsModel::create(PointSet points, Matrix psi, double p) {
  return std::shared_ptr<const RkbsModel>(new RkbsModel(std::move(points), std::move(psi), p));
}

Vector RkbsModel::dual_feature(std::size_t i) const {
  require_index(*this, i, "dual_feature");
  return psi_.row(static_cast<Eigen::Index>(i)).transpose();
}

Vector RkbsModel::section(std::size_t i) const {
  require_index(*this, i, "section");
  return w_.row(static_cast<Eigen::Index>(i)).transpose();
}

Matrix RkbsModel::kernel_matrix() const { return psi_ * w_.transpose(); }

BFunction::BFunction(RkbsModelPtr model, Vector u) : model_(std::move(model)), u_(std::move(u)) {
  if (!model_) throw DomainError("BFunction: null model");
  require_features(*model_, u_, "BFunction");
  if (!u_.allFinite()) throw DomainError("BFunction: coefficients must be finite");
}

Vector BFunction::values() const { return model_->psi() * u_; }

double BFunction::norm() const { return lp_norm(u_, model_->p()); }

SharpFunction::SharpFunction(RkbsModelPtr model, Vector b) : model_(std::move(model)), b_(std::move(b)) {
  if (!model_) throw DomainError("SharpFunction: null model");
  if (static_cast<std::size_t>(b_.size()) != model_->size())
    throw DimensionError("SharpFunction: coefficient length must equal |X|");
  if (!b_.allFinite()) throw DomainError("SharpFunction: coefficients must be finite");
  v_ = model_->psi().transpose() * b_;
}

SharpFunction SharpFunction::from_dual(RkbsModelPtr model, const Vector& v) {
  require_features(*model, v, "SharpFunction::from_dual");
  Vector b = linalg::pseudo_inverse(model->psi().transpose()) * v;
  return SharpFunction(std::move(model), std::move(b));
}

Vector SharpFunction::values() const { return model_->w() * v_; }

Scalar rkbs_kernel(const RkbsModel& model, std::size_t i, std::size_t j) {
  require_index(model, i, "rkbs_kernel");
  require_index(model, j, "rkbs_kernel");
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  return (model.psi().row(ii).array() * model.w().row(jj).array()).sum();
}

double rkbs_reproduce_check(const RkbsModel& model, const Vector& u, std::size_t i) {
  require_index(model, i, "rkbs_reproduce_check");
  require_features(model, u, "rkbs_reproduce_check");
  const Scalar pairing = sip_eval(model.space(), SipVector(u), SipVector(model.section(i)));
  const Scalar value = (model.psi().row(static_cast<Eigen::Index>(i)) * u)(0);
  return std::abs(pairing - value);
}

double sharp_norm_closed(const SharpFunction& g) { return lp_norm(g.dual(), g.model()->q()); }

double sharp_norm_opt(const SharpFunction& g, std::size_t budget, bool warm_start,
                      std::uint64_t seed) {
  if (budget == 0) throw DomainError("sharp_norm_opt: budget must be >= 1");
  const Vector& v = g.dual();
  if (linalg::max_abs(v) == 0.0) return 0.0;
  const auto& model = *g.model();
  const double p = model.p();

  const std::function<double(const Vector&)> objective = [&](const Vector& u) {
    return std::abs((v.array() * u.array()).sum()) / lp_norm(u, p);
  };
  const std::function<Vector(const Vector&)> gradient = [&](const Vector& u) {
    const Scalar s = (v.array() * u.array()).sum();
    const Scalar phase = std::abs(s) > 0.0 ? std::conj(s) / std::abs(s) : Scalar(1.0);
    return Vector(phase * v);
  };

  Vector start;
  if (warm_start) {
    start = inverse_duality_map(model.space(), DualFunctional(v)).entries();
  } else {
    Rng rng(seed);
    start = rng.complex_vector(v.size());
  }
  return ascend({objective, gradient, p}, start, budget).second;
}

PointEvalNorms point_eval_norms(const RkbsModel& model, std::size_t j) {
  require_index(model, j, "point_eval_norms");
  return {lp_norm(model.dual_feature(j), model.q()), lp_norm(model.section(j), model.p())};
}

PointEvalBoundReport point_eval_bound_check(const RkbsModel& model, std::size_t j,
                                            std::size_t samples, std::uint64_t seed) {
  const auto norms = point_eval_norms(model, j);
  PointEvalBoundReport rep;
  rep.samples = samples;
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(model.features());
  const auto jj = static_cast<Eigen::Index>(j);
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector u = rng.complex_vector(n);
    const double bound_b = norms.on_b * lp_norm(u, model.p());
    const double fb = std::abs((model.psi().row(jj) * u)(0));
    rep.b_violation = std::max(rep.b_violation, std::max(0.0, fb - bound_b) / bound_b);

    const Vector v = rng.complex_vector(n);
    const double bound_s = norms.on_sharp * lp_norm(v, model.q());
    const double gs = std::abs((model.w().row(jj) * v)(0));
    rep.sharp_violation = std::max(rep.sharp_violation, std::max(0.0, gs - bound_s) / bound_s);
  }
  return rep;
}

namespace {

double invariance_residual(const Matrix& range, const Vector& f) {
  const double sup = linalg::max_abs(f);
  if (sup == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < range.cols(); ++k) {
    const Vector image = f.cwiseProduct(range.col(k));
    worst = std::max(worst, linalg::distance_to_range(range, image) / sup);
  }
  return worst;
}

}  // namespace

RkbsMembership rkbs_mult_membership(const RkbsModel& model, const PointFunction& f, double tol) {
  require_points(model, f, "rkbs_mult_membership");
  RkbsMembership out;
  out.residual_b = invariance_residual(model.psi_range(), f.values());
  out.residual_sharp = invariance_residual(model.w_range(), f.values());
  out.in_b = out.residual_b <= tol;
  out.in_sharp = out.residual_sharp <= tol;
  return out;
}

OperatorNormEstimate rkbs_mult_norm(const RkbsModel& model, const PointFunction& f, Side side,
                                    std::size_t budget, std::uint64_t seed) {
  if (budget == 0) throw DomainError("rkbs_mult_norm: budget must be >= 1");
  const auto membership = rkbs_mult_membership(model, f);
  const bool on_b = side == Side::b;
  if (on_b ? !membership.in_b : !membership.in_sharp) {
    std::ostringstream msg;
    msg << "rkbs_mult_norm: f is not a multiplier of " << (on_b ? "B" : "B#")
        << " (residual " << (on_b ? membership.residual_b : membership.residual_sharp) << ")";
    throw NotAMultiplier(msg.str(), on_b ? membership.residual_b : membership.residual_sharp);
  }
  const Matrix& features = on_b ? model.psi() : model.w();
  const Matrix& pinv = on_b ? model.psi_pinv() : model.w_pinv();
  const Matrix a = pinv * f.values().asDiagonal() * features;
  const double r = on_b ? model.p() : model.q();
  const SipSpace image_space(static_cast<std::size_t>(a.rows()), r);

  OperatorNormEstimate est;
  if (std::abs(r - 2.0) < 1e-15) est.spectral_reference = linalg::spectral_norm(a);
  if (linalg::max_abs(a) == 0.0) return est;

  const std::function<double(const Vector&)> objective = [&](const Vector& u) {
    return lp_norm(a * u, r) / lp_norm(u, r);
  };
  const std::function<Vector(const Vector&)> gradient = [&](const Vector& u) {
    const Vector au = a * u;
    return Vector(a.transpose() * duality_map(image_space, SipVector(au)).entries());
  };
  const Ascent ascent{objective, gradient, r};

  std::vector<Vector> starts;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinV);
  starts.push_back(svd.matrixV().col(0));
  for (Eigen::Index k = 0; k < a.cols(); ++k) starts.push_back(Vector::Unit(a.cols(), k));
  Rng rng(seed);
  while (starts.size() < 8 || starts.size() < static_cast<std::size_t>(a.cols()) + 4) {
    starts.push_back(rng.complex_vector(a.cols()));
  }
  for (const auto& s : starts) {
    est.value = std::max(est.value, ascend(ascent, s, budget).second);
  }
  est.starts = starts.size();
  return est;
}

ChainResiduals sip_adjoint_chain_check(const RkbsModel& model1, const RkbsModel& model2,
                                       const PointFunction& f, const Vector& u, std::size_t j) {
  if (!(model1.points() == model2.points()))
    throw DimensionError("sip_adjoint_chain_check: models must share the point set");
  require_points(model1, f, "sip_adjoint_chain_check");
  require_features(model1, u, "sip_adjoint_chain_check");
  require_index(model1, j, "sip_adjoint_chain_check");

  // f must carry range(Psi1) into range(Psi2)
  const double sup = f.sup_norm();
  double leak = 0.0;
  if (sup > 0.0) {
    for (Eigen::Index k = 0; k < model1.psi_range().cols(); ++k) {
      const Vector image = f.values().cwiseProduct(model1.psi_range().col(k));
      leak = std::max(leak, linalg::distance_to_range(model2.psi_range(), image) / sup);
    }
  }
  if (leak > 1e-9) {
    throw NotAMultiplier("sip_adjoint_chain_check: f does not multiply B1 into B2", leak);
  }

  const auto jj = static_cast<Eigen::Index>(j);
  const Scalar fj = f.values()(jj);
  const Vector h = model1.psi() * u;
  const Scalar target = fj * h(jj);

  const SipVector scaled_section(std::conj(fj) * model1.section(j));
  const Scalar lhs = sip_eval(model1.space(), SipVector(u), scaled_section);

  const Vector u2 = model2.psi_pinv() * f.values().cwiseProduct(h);
  const Scalar rhs = sip_eval(model2.space(), SipVector(u2), SipVector(model2.section(j)));

  ChainResiduals res;
  res.first = std::abs(lhs - target);
  res.second = std::abs(target - rhs);
  res.scale = (1.0 + std::abs(fj)) *
              (1.0 + lp_norm(u, model1.p()) * lp_norm(model1.dual_feature(j), model1.q()) +
               lp_norm(u2, model2.p()) * lp_norm(model2.dual_feature(j), model2.q()));
  return res;
}

double BanachRepresentationReport::max() const {
  return std::max({linearity_in_g, linearity_in_f, multiplicativity, boundedness});
}

namespace {

double relative_gap(const Vector& a, const Vector& b, double scale) {
  const double gap = (a - b).norm();
  if (gap == 0.0) return 0.0;
  return scale > 0.0 ? gap / scale : std::numeric_limits<double>::infinity();
}

}  // namespace

BanachRepresentationReport representation_check_banach(const RkbsModel& model,
                                                       const PointFunction& f1,
                                                       const PointFunction& f2, const Vector& u1,
                                                       const Vector& u2, Scalar alpha,
                                                       Scalar beta) {
  require_features(model, u1, "representation_check_banach");
  require_features(model, u2, "representation_check_banach");
  for (const auto* f : {&f1, &f2}) {
    const auto mem = rkbs_mult_membership(model, *f);
    if (!mem.in_b)
      throw NotAMultiplier("representation_check_banach: input is not a multiplier of B",
                           mem.residual_b);
  }
  const Matrix& psi = model.psi();
  const auto pi = [&](const PointFunction& f, const Vector& u) -> Vector {
    return f.values().cwiseProduct(psi * u);
  };

  BanachRepresentationReport rep;
  {
    const Vector p1 = pi(f1, u1);
    const Vector p2 = pi(f1, u2);
    const Vector lhs = pi(f1, alpha * u1 + beta * u2);
    rep.linearity_in_g = relative_gap(lhs, alpha * p1 + beta * p2,
                                      std::abs(alpha) * p1.norm() + std::abs(beta) * p2.norm());
  }
  {
    const Vector p1 = pi(f1, u1);
    const Vector p2 = pi(f2, u1);
    const Vector lhs = pi(alpha * f1 + beta * f2, u1);
    rep.linearity_in_f = relative_gap(lhs, alpha * p1 + beta * p2,
                                      std::abs(alpha) * p1.norm() + std::abs(beta) * p2.norm());
  }
  {
    const Vector lhs = pi(f1 * f2, u1);
    const Vector inner_coeffs = model.psi_pinv() * pi(f2, u1);
    const Vector rhs = pi(f1, inner_coeffs);
    rep.multiplicativity = relative_gap(lhs, rhs, std::max(lhs.norm(), rhs.norm()));
  }
  {
    const double image = pi(f1, u1).norm();
    const double bound = f1.sup_norm() * (psi * u1).norm() * (1.0 + 1e-9);
    const double excess = std::max(0.0, image - bound);
    rep.boundedness = excess == 0.0 ? 0.0 : excess / std::max(bound, image);
  }
  return rep;
}

IsoProbeReport multiplier_iso_probe(const RkbsModel& model, std::size_t samples,
                                    std::uint64_t seed, std::size_t budget) {
  if (samples == 0) throw DomainError("multiplier_iso_probe: samples must be >= 1");
  IsoProbeReport rep;
  rep.samples = samples;
  rep.histogram_edges = {0.0, 0.5, 0.9, 0.99, 1.01, 1.1, 2.0, std::numeric_limits<double>::infinity()};
  rep.histogram_counts.assign(rep.histogram_edges.size() - 1, 0);
  const auto m = static_cast<Eigen::Index>(model.size());
  double ratio_sum = 0.0;

  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, stream_id("iso-probe"), s));
    Vector values = (s % 4 == 0) ? Vector::Constant(m, rng.complex_normal()) : rng.complex_vector(m);
    const PointFunction f(model.points(), std::move(values));
    const auto mem = rkbs_mult_membership(model, f);
    IsoSample rec;
    rec.in_b = mem.in_b;
    rec.in_sharp = mem.in_sharp;
    rep.member_b += mem.in_b ? 1 : 0;
    rep.member_sharp += mem.in_sharp ? 1 : 0;
    rep.agreements += mem.in_b == mem.in_sharp ? 1 : 0;
    if (mem.in_b) rec.norm_b = rkbs_mult_norm(model, f, Side::b, budget, seed + s).value;
    if (mem.in_sharp) rec.norm_sharp = rkbs_mult_norm(model, f, Side::sharp, budget, seed + s).value;
    if (mem.in_b && mem.in_sharp && rec.norm_b > 0.0) {
      ++rep.both_members;
      const double ratio = rec.norm_sharp / rec.norm_b;
      ratio_sum += ratio;
      rep.ratio_min = rep.both_members == 1 ? ratio : std::min(rep.ratio_min, ratio);
      rep.ratio_max = rep.both_members == 1 ? ratio : std::max(rep.ratio_max, ratio);
      for (std::size_t k = 0; k + 1 < rep.histogram_edges.size(); ++k) {
        if (ratio >= rep.histogram_edges[k] && ratio < rep.histogram_edges[k + 1]) {
          ++rep.histogram_counts[k];
          break;
        }
      }
    }
    rep.records.push_back(rec);
  }
  if (rep.both_members > 0) rep.ratio_mean = ratio_sum / static_cast<double>(rep.both_members);
  return rep;
}

B0ProbeReport b0_probe(const RkbsModel& model, std::size_t samples, std::uint64_t seed,
                       double tol) {
  if (samples == 0) throw DomainError("b0_probe: samples must be >= 1");
  const double q = model.q();
  const auto m = static_cast<Eigen::Index>(model.size());

  std::vector<Vector> duals;
  duals.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    Vector b;
    if (s == 0) {
      b = Vector::Unit(m, 0);
    } else {
      Rng rng(derive_seed(seed, stream_id("b0-probe"), s));
      b = rng.complex_vector(m);
    }
    Vector v = model.psi().transpose() * b;
    const double nv = lp_norm(v, q);
    if (nv > 0.0) v /= nv;
    duals.push_back(std::move(v));
  }

  B0ProbeReport rep;
  rep.samples = samples;
  for (const auto& v : duals) {
    const Vector values = model.w() * v;
    const double scale = values.norm();
    const double off = scale > 0.0 ? linalg::distance_to_range(model.psi_range(), values) / scale : 0.0;
    rep.in_b += off <= tol ? 1 : 0;
  }

  const auto test_pair = [&](std::size_t a, std::size_t b) {
    ++rep.pair_tests;
    const double sum_norm = lp_norm(duals[a] + duals[b], q);
    if (std::abs(sum_norm - 1.0) > tol) {
      ++rep.closure_failures;
      if (rep.counterexamples.size() < 5) rep.counterexamples.push_back({a, b, sum_norm});
    }
  };
  test_pair(0, 0);
  for (std::size_t s = 1; s < samples; ++s) test_pair(s - 1, s);
  return rep;
}

namespace {

std::vector<Vector> generate_sequence(const SequenceSpec& spec) {
  std::vector<Vector> out;
  if (spec.kind == SequenceKind::listed) return spec.listed;
  if (spec.terms < 2) throw DomainError("norm_consistency_check: at least two terms required");
  Rng rng(spec.seed);
  const double base_norm = spec.base.norm();
  for (std::size_t n = 0; n < spec.terms; ++n) {
    switch (spec.kind) {
      case SequenceKind::harmonic:
        out.push_back(spec.base / static_cast<double>(n + 1));
        break;
      case SequenceKind::geometric:
        out.push_back(std::pow(spec.ratio, static_cast<double>(n)) * spec.base);
        break;
      case SequenceKind::constant:
        out.push_back(spec.base);
        break;
      case SequenceKind::random_decay: {
        Vector z = spec.base;
        if (n > 0) {
          z = rng.complex_vector(spec.base.size());
          z *= base_norm / z.norm();
        }
        out.push_back(std::pow(spec.ratio, static_cast<double>(n)) * z);
        break;
      }
      case SequenceKind::listed:
        break;
    }
  }
  return out;
}

}  // namespace

NormConsistencyReport norm_consistency_check(const ConsistencyInstance& instance,
                                             const SequenceSpec& sequence, double norm_tol) {
  const auto terms = generate_sequence(sequence);
  if (terms.size() < 2) throw DomainError("norm_consistency_check: at least two terms required");

  std::function<double(const Vector&)> norm_of;
  std::function<Vector(const Vector&)> values_of;
  std::size_t dim = 0;
  if (const auto* base = std::get_if<RkhsBasePtr>(&instance)) {
    const RkhsBasePtr b = *base;
    dim = b->size();
    norm_of = [b](const Vector& c) { return norm(SpanFunction(b, c)); };
    values_of = [b](const Vector& c) { return Vector(b->gram().matrix() * c); };
  } else {
    const RkbsModelPtr model = std::get<RkbsModelPtr>(instance);
    dim = model->features();
    norm_of = [model](const Vector& u) { return lp_norm(u, model->p()); };
    values_of = [model](const Vector& u) { return Vector(model->psi() * u); };
  }
  for (const auto& t : terms) {
    if (static_cast<std::size_t>(t.size()) != dim)
      throw DimensionError("norm_consistency_check: term length does not match the space");
  }

  NormConsistencyReport rep;
  rep.norm_tol = norm_tol;
  double max_norm = 0.0;
  double max_diff = 0.0;
  std::vector<double> diffs;
  for (std::size_t n = 0; n < terms.size(); ++n) {
    const double nrm = norm_of(terms[n]);
    const double sup = linalg::max_abs(values_of(terms[n]));
    rep.norms.push_back(nrm);
    rep.sup_values.push_back(sup);
    max_norm = std::max(max_norm, nrm);
    if (sup > 0.0) rep.norm_to_sup_max = std::max(rep.norm_to_sup_max, nrm / sup);
    if (n > 0) {
      diffs.push_back(norm_of(Vector(terms[n] - terms[n - 1])));
      max_diff = std::max(max_diff, diffs.back());
    }
  }
  const bool vanishing = max_diff <= 1e-12 * (1.0 + max_norm);
  if (!vanishing && diffs.back() > 0.5 * max_diff) {
    std::ostringstream msg;
    msg << "norm_consistency_check: sequence is not Cauchy (last difference " << diffs.back()
        << ", largest " << max_diff << ")";
    throw NotCauchy(msg.str());
  }
  const double max_sup = *std::max_element(rep.sup_values.begin(), rep.sup_values.end());
  rep.antecedent = rep.sup_values.back() <= rep.pointwise_threshold * max_sup;
  rep.consequent = rep.norms.back() <= norm_tol * max_norm;
  return rep;
}

}  // namespace kml
