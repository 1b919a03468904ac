#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <variant>
#include <vector>

#include "kml/multipliers.hpp"
#include "kml/rkhs.hpp"
#include "kml/sip.hpp"

namespace kml {

/// Feature-map s.i.p. RKBS over a finite point set.
///
/// Row i of Psi is the dual feature Psi(x_i) in l^q; row i of W is
/// w_{x_i} = J^{-1}(Psi(x_i)) in l^p. The space B consists of f_u with
/// f_u(x_i) = <Psi(x_i), u> and norm ||u||_p, and the kernel is
/// K(x_i, x_j) = <Psi(x_i), w_{x_j}>. Because J(w_x) = Psi(x), the
/// reproducing identity [f_u, K(., x)] = [u, w_x] = f_u(x) holds exactly.
class RkbsModel {
 public:
  /// psi is m x n with 1 <= n <= m and full column rank.
  static std::shared_ptr<const RkbsModel> create(PointSet points, Matrix psi, double p);

  const PointSet& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t features() const noexcept { return static_cast<std::size_t>(psi_.cols()); }
  double p() const noexcept { return space_.p(); }
  double q() const noexcept { return space_.q(); }
  /// l^p on the feature coordinates (the coefficient space of B).
  const SipSpace& space() const noexcept { return space_; }

  const Matrix& psi() const noexcept { return psi_; }
  const Matrix& w() const noexcept { return w_; }
  Vector dual_feature(std::size_t i) const;
  Vector section(std::size_t i) const;

  /// [K(x_i, x_j)]_{ij} = Psi W^T.
  Matrix kernel_matrix() const;

  /// Orthonormal bases of range(Psi) and range(W) in C^m, and pseudoinverses.
  const Matrix& psi_range() const noexcept { return psi_range_; }
  const Matrix& w_range() const noexcept { return w_range_; }
  const Matrix& psi_pinv() const noexcept { return psi_pinv_; }
  const Matrix& w_pinv() const noexcept { return w_pinv_; }

 private:
  RkbsModel(PointSet points, Matrix psi, double p);

  PointSet points_;
  SipSpace space_;
  Matrix psi_;
  Matrix w_;
  Matrix psi_range_;
  Matrix w_range_;
  Matrix psi_pinv_;
  Matrix w_pinv_;
};

using RkbsModelPtr = std::shared_ptr<const RkbsModel>;

/// f_u in B.
class BFunction {
 public:
  BFunction(RkbsModelPtr model, Vector u);
  const RkbsModelPtr& model() const noexcept { return model_; }
  const Vector& coeffs() const noexcept { return u_; }
  /// f_u(x_i) = (Psi u)_i
  Vector values() const;
  /// ||u||_p
  double norm() const;

 private:
  RkbsModelPtr model_;
  Vector u_;
};

/// g = sum_i b_i K(x_i, .) in B#, identified with the functional v = Psi^T b on l^p.
class SharpFunction {
 public:
  SharpFunction(RkbsModelPtr model, Vector b);
  /// Some g whose dual vector is v (b = pinv(Psi^T) v).
  static SharpFunction from_dual(RkbsModelPtr model, const Vector& v);

  const RkbsModelPtr& model() const noexcept { return model_; }
  const Vector& coeffs() const noexcept { return b_; }
  const Vector& dual() const noexcept { return v_; }
  /// g(x_j) = sum_k W[j][k] v_k
  Vector values() const;

 private:
  RkbsModelPtr model_;
  Vector b_;
  Vector v_;
};

Scalar rkbs_kernel(const RkbsModel& model, std::size_t i, std::size_t j);

/// |[u, w_{x_i}]_p - f_u(x_i)|.
double rkbs_reproduce_check(const RkbsModel& model, const Vector& u, std::size_t i);

/// sup_{f != 0} |[f, g]| / ||f|| in closed form: ||v||_q.
double sharp_norm_closed(const SharpFunction& g);

/// Numerical sup of |<v, u>| / ||u||_p by projected ascent on the unit p-sphere.
/// The warm start is the analytic maximizer J^{-1}(v); without it the ascent
/// starts from a seeded random point.
double sharp_norm_opt(const SharpFunction& g, std::size_t budget, bool warm_start = true,
                      std::uint64_t seed = 0);

/// Norms of evaluation at x_j on B (||Psi(x_j)||_q) and on B# (||w_{x_j}||_p).
struct PointEvalNorms {
  double on_b = 0.0;
  double on_sharp = 0.0;
};
PointEvalNorms point_eval_norms(const RkbsModel& model, std::size_t j);

/// Largest relative violation of |f_u(x_j)| <= ||Psi(x_j)||_q ||u||_p and
/// |g(x_j)| <= ||w_{x_j}||_p ||v||_q over sampled u and v.
struct PointEvalBoundReport {
  std::size_t samples = 0;
  double b_violation = 0.0;
  double sharp_violation = 0.0;
};
PointEvalBoundReport point_eval_bound_check(const RkbsModel& model, std::size_t j,
                                            std::size_t samples, std::uint64_t seed);

enum class Side { b, sharp };

struct RkbsMembership {
  bool in_b = false;
  bool in_sharp = false;
  double residual_b = 0.0;      // max_k dist(D_f q_k, range(Psi)) / max|f|
  double residual_sharp = 0.0;  // same with range(W)
};
RkbsMembership rkbs_mult_membership(const RkbsModel& model, const PointFunction& f,
                                    double tol = 1e-9);

struct OperatorNormEstimate {
  double value = 0.0;
  /// Largest singular value of the coefficient map; set only for p = 2.
  double spectral_reference = std::numeric_limits<double>::quiet_NaN();
  std::size_t starts = 0;
};

/// ||Psi^+ D_f Psi||_{p->p} (side b) or ||W^+ D_f W||_{q->q} (side sharp) by
/// multi-start projected ascent. Throws NotAMultiplier if f fails membership.
OperatorNormEstimate rkbs_mult_norm(const RkbsModel& model, const PointFunction& f, Side side,
                                    std::size_t budget, std::uint64_t seed = 0);

/// Residuals of the two equalities
///   [h, conj(f(x_j)) k1_{x_j}]_1 = f(x_j) h(x_j) = [M_f h, k2_{x_j}]_2.
struct ChainResiduals {
  double first = 0.0;
  double second = 0.0;
  /// (1 + |f(x_j)|)(1 + ||u||_p1 ||Psi1(x_j)||_q1 + ||u2||_p2 ||Psi2(x_j)||_q2)
  double scale = 1.0;
  double relative() const { return std::max(first, second) / scale; }
};
ChainResiduals sip_adjoint_chain_check(const RkbsModel& model1, const RkbsModel& model2,
                                       const PointFunction& f, const Vector& u, std::size_t j);

/// Axioms of pi_B(f, g) = f g, read in the value space l^2(X).
struct BanachRepresentationReport {
  double linearity_in_g = 0.0;
  double linearity_in_f = 0.0;
  double multiplicativity = 0.0;  // pi(f1 f2, g) vs f1 (f2 g) with f2 g re-expressed in B
  double boundedness = 0.0;       // relative excess over ||f||_inf ||g||_2 (1 + 1e-9)
  double max() const;
};
BanachRepresentationReport representation_check_banach(const RkbsModel& model,
                                                       const PointFunction& f1,
                                                       const PointFunction& f2, const Vector& u1,
                                                       const Vector& u2, Scalar alpha,
                                                       Scalar beta);

struct IsoSample {
  bool in_b = false;
  bool in_sharp = false;
  double norm_b = std::numeric_limits<double>::quiet_NaN();
  double norm_sharp = std::numeric_limits<double>::quiet_NaN();
};

struct IsoProbeReport {
  std::size_t samples = 0;
  std::size_t member_b = 0;
  std::size_t member_sharp = 0;
  std::size_t agreements = 0;
  std::size_t both_members = 0;
  double agreement_rate() const {
    return samples == 0 ? 0.0 : static_cast<double>(agreements) / static_cast<double>(samples);
  }
  /// norm_sharp / norm_b over samples that are multipliers on both sides.
  double ratio_min = std::numeric_limits<double>::quiet_NaN();
  double ratio_max = std::numeric_limits<double>::quiet_NaN();
  double ratio_mean = std::numeric_limits<double>::quiet_NaN();
  /// Histogram bin edges and counts for the ratio (edges.size() == counts.size() + 1).
  std::vector<double> histogram_edges;
  std::vector<std::size_t> histogram_counts;
  std::vector<IsoSample> records;
};

/// Evidence about M_B versus M_B#: membership agreement and norm ratios over
/// random functions (every fourth sample is a random constant). Asserts nothing.
IsoProbeReport multiplier_iso_probe(const RkbsModel& model, std::size_t samples,
                                    std::uint64_t seed, std::size_t budget = 50);

struct ClosureCounterexample {
  std::size_t first = 0;
  std::size_t second = 0;
  double sum_norm = 0.0;
};

struct B0ProbeReport {
  std::size_t samples = 0;
  std::size_t in_b = 0;
  std::size_t pair_tests = 0;
  std::size_t closure_failures = 0;
  std::vector<ClosureCounterexample> counterexamples;  // first few only
  double membership_fraction() const {
    return samples == 0 ? 0.0 : static_cast<double>(in_b) / static_cast<double>(samples);
  }
};

/// Samples of the unit sphere of B#: sample 0 is K(x_1, .) normalized, the rest
/// random. Records membership of their value vectors in B and whether sums of
/// pairs (including g + g for sample 0) stay on the sphere. Asserts nothing.
B0ProbeReport b0_probe(const RkbsModel& model, std::size_t samples, std::uint64_t seed,
                       double tol = 1e-9);

enum class SequenceKind { harmonic, geometric, constant, random_decay, listed };

/// Coefficient sequence in an RKHS base (length m) or RKBS model (length n).
///   harmonic:     f_n = base / n,            n = 1..terms
///   geometric:    f_n = ratio^n base,        n = 0..terms-1
///   constant:     f_n = base
///   random_decay: f_n = ratio^n z_n, z_0 = base, z_n random with ||z_n||_2 = ||base||_2
///   listed:       the given terms
struct SequenceSpec {
  SequenceKind kind = SequenceKind::geometric;
  Vector base;
  double ratio = 0.5;
  std::size_t terms = 30;
  std::uint64_t seed = 0;
  std::vector<Vector> listed;
};

using ConsistencyInstance = std::variant<RkhsBasePtr, RkbsModelPtr>;

struct NormConsistencyReport {
  std::vector<double> sup_values;  // sup_X |f_n|
  std::vector<double> norms;       // ||f_n||
  bool antecedent = false;  // last sup <= pointwise_threshold * max sup
  bool consequent = false;  // last norm <= norm_tol * max norm
  bool implication_holds() const { return !antecedent || consequent; }
  double pointwise_threshold = 1e-8;
  double norm_tol = 1e-4;
  /// max_n ||f_n|| / sup |f_n| over nonzero terms.
  double norm_to_sup_max = 0.0;
};

/// Throws NotCauchy when the last consecutive difference is not at most half
/// the largest one (sequences with vanishing differences pass).
NormConsistencyReport norm_consistency_check(const ConsistencyInstance& instance,
                                             const SequenceSpec& sequence,
                                             double norm_tol = 1e-4);

}  // namespace kml
