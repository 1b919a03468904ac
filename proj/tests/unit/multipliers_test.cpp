#include <gtest/gtest.h>

#include <cmath>

#include "kml/errors.hpp"
#include "kml/multipliers.hpp"
#include "kml/suite/fixtures.hpp"
#include "oracles.hpp"

using namespace kml;

namespace {

Matrix solve_columns(const Matrix& a, const Matrix& b) {
  Matrix x(b.rows(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j) x.col(j) = oracle::solve(a, b.col(j));
  return x;
}

// ||M_f||^2 on values with ||v||^2 = v^H G2^{-1} v on the target and
// v^H G1^{-1} v on the source is the top eigenvalue of G1 F^H G2^{-1} F.
double norm_oracle(const Vector& f, const Matrix& g1, const Matrix& g2) {
  const Matrix fm = f.asDiagonal();
  const Matrix a = g1 * fm.adjoint() * solve_columns(g2, fm);
  // a is similar to a PSD matrix; power iteration converges to its top eigenvalue
  Vector v = Vector::Ones(a.rows());
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    const Vector w = a * v;
    lambda = w.norm() / v.norm();
    v = w / w.norm();
  }
  return std::sqrt(lambda);
}

double value_norm(const Matrix& g, const Vector& v) { return std::sqrt(std::real(v.dot(oracle::solve(g, v)))); }

PointFunction values_on(const PointSet& xs, std::initializer_list<Scalar> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (Scalar s : vals) v(i++) = s;
  return PointFunction(xs, v);
}

}  // namespace

TEST(PointFunction, Algebra) {
  const PointSet xs = PointSet::integers(3);
  const auto f = values_on(xs, {1.0, Scalar(0, 1), -2.0});
  const auto g = values_on(xs, {2.0, 2.0, Scalar(1, 1)});
  EXPECT_EQ((f * g)[1], Scalar(0, 2));
  EXPECT_EQ((f + g)[2], Scalar(-1, 1));
  EXPECT_EQ((Scalar(0, 1) * f)[0], Scalar(0, 1));
  EXPECT_EQ(f.sup_norm(), 2.0);
  EXPECT_THROW(PointFunction(xs, Vector::Zero(2)), DimensionError);
  EXPECT_THROW(f * PointFunction::constant(PointSet::integers(2), 1.0), DimensionError);
}

TEST(ApplyMultiplier, ReferenceCases) {
  Rng rng(1);
  const auto spec = KernelSpec::gaussian(1.0);
  const auto base = RkhsBase::create(spec, fixtures::random_points(rng, spec, 4));
  const SpanFunction h(base, rng.complex_vector(4));
  const auto one = apply_multiplier(PointFunction::constant(base->points(), 1.0), h);
  EXPECT_LE((one.values() - h.values()).norm(), 1e-12 * h.values().norm());
  const auto zero = apply_multiplier(PointFunction::constant(base->points(), 0.0), h);
  EXPECT_LE(zero.values().norm(), 1e-15);

  const auto single = RkhsBase::create(spec, PointSet{Point{0.3, 0.1}});
  const auto out = apply_multiplier(PointFunction::constant(single->points(), Scalar(2, 1)),
                                    SpanFunction::section(single, 0));
  EXPECT_NEAR(std::abs(out.values()(0) - Scalar(2, 1)), 0.0, 1e-15);
}

TEST(ApplyMultiplier, ValuesArePointwiseProducts) {
  Rng rng(12);
  const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::laplacian(1.0), 6, 1e-4);
  const auto base = RkhsBase::create(g);
  const SpanFunction h(base, rng.complex_vector(6));
  const auto f = fixtures::random_function(rng, g.points());
  const auto fh = apply_multiplier(f, h);
  for (std::size_t i = 0; i < 6; ++i) {
    const Scalar want = f[i] * evaluate(h, g.points()[i]);
    EXPECT_LE(std::abs(evaluate(fh, g.points()[i]) - want), 1e-9 * (1 + std::abs(want)));
  }
}

TEST(ApplyMultiplier, RankDeficientGramRejectsNonMultipliers) {
  const PointSet xs = PointSet::integers(2);
  const auto g = GramMatrix::custom(xs, Matrix::Ones(2, 2));
  const auto base = RkhsBase::create(g);
  const auto f = values_on(xs, {1.0, 2.0});
  EXPECT_THROW(apply_multiplier(f, SpanFunction::section(base, 0)), NotInSpace);
  EXPECT_FALSE(multiplier_membership(f, g).member);
  EXPECT_TRUE(multiplier_membership(PointFunction::constant(xs, 3.0), g).member);
}

TEST(MultiplierNormEig, ReferenceCases) {
  Rng rng(2);
  const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::gaussian(1.0), 5, 1e-4);
  const Scalar c(1.5, -0.5);
  EXPECT_NEAR(multiplier_norm_eig(PointFunction::constant(g.points(), c), g).bound, std::abs(c),
              1e-12 * std::abs(c));

  const PointSet xs = PointSet::integers(3);
  const auto id = GramMatrix::custom(xs, Matrix::Identity(3, 3));
  const auto f = values_on(xs, {1.0, -2.0, Scalar(0, 1)});
  EXPECT_NEAR(multiplier_norm_eig(f, id).bound, 2.0, 1e-14);

  const auto g3 = gram(KernelSpec::gaussian(1.0), PointSet{Point{0.0}, Point{1.0}, Point{2.0}});
  const auto fx = values_on(g3.points(), {0.0, 1.0, 2.0});
  const double eig = multiplier_norm_eig(fx, g3).bound;
  EXPECT_NEAR(eig, multiplier_norm_bisect(fx, g3).bound, 1e-6);
  EXPECT_NEAR(eig, norm_oracle(fx.values(), g3.matrix(), g3.matrix()), 1e-9 * eig);
}

TEST(MultiplierNormEig, MatchesPowerIterationOracle) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(50 + s);
    const auto g = fixtures::well_conditioned_gram(
        rng, s % 2 ? KernelSpec::laplacian(0.7) : KernelSpec::gaussian(0.5), 6, 1e-4);
    const auto f = fixtures::random_function(rng, g.points());
    const double want = norm_oracle(f.values(), g.matrix(), g.matrix());
    EXPECT_NEAR(multiplier_norm_eig(f, g).bound, want, 1e-8 * want) << "seed " << s;
    // and it dominates every sampled ratio ||f h|| / ||h||
    for (int t = 0; t < 50; ++t) {
      const Vector v = rng.complex_vector(6);
      const Vector fv = f.values().cwiseProduct(v);
      EXPECT_LE(value_norm(g.matrix(), fv), want * value_norm(g.matrix(), v) * (1 + 1e-9));
    }
  }
}

TEST(MultiplierNormBisect, ReferenceCases) {
  const PointSet xs = PointSet::integers(3);
  const auto id = GramMatrix::custom(xs, Matrix::Identity(3, 3));
  EXPECT_EQ(multiplier_norm_bisect(PointFunction::constant(xs, 0.0), id).bound, 0.0);
  const auto cert = multiplier_norm_bisect(values_on(xs, {1.0, -2.0, Scalar(0, 1)}), id, 1e-10);
  EXPECT_NEAR(cert.bound, 2.0, 2e-10);
  EXPECT_EQ(cert.method, NormMethod::psd_bisection);
  EXPECT_GE(cert.margin, -cert.tolerance);
  EXPECT_THROW(multiplier_norm_bisect(PointFunction::constant(xs, 1.0), id, 0.0), DomainError);

  Rng rng(33);
  const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::gaussian(1.0), 6, 1e-4);
  const auto f = fixtures::random_function(rng, g.points());
  EXPECT_NEAR(multiplier_norm_bisect(f, g).bound, multiplier_norm_eig(f, g).bound, 1e-6);
}

TEST(MultiplierNormBisect, CertificateIsFeasibleJustAbove) {
  Rng rng(77);
  const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::brownian_min(), 7, 1e-4);
  const auto f = fixtures::random_function(rng, g.points());
  const auto cert = multiplier_norm_bisect(f, g, 1e-10);
  const double c = cert.bound + 1e-10;
  EXPECT_GE(multiplier_psd_floor(f, g, c), -multiplier_psd_tolerance(f, g, c));
  // well below the bound the matrix is clearly indefinite
  EXPECT_LT(multiplier_psd_floor(f, g, 0.9 * cert.bound), 0.0);
}

TEST(MultiplierNormTwo, ReferenceCases) {
  const PointSet xs = PointSet::integers(3);
  const auto id = GramMatrix::custom(xs, Matrix::Identity(3, 3));
  EXPECT_NEAR(multiplier_norm_two(PointFunction::constant(xs, 1.0), id, id).bound, 1.0, 1e-14);

  Rng rng(3);
  const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::laplacian(1.0), 5, 1e-4);
  const auto f = fixtures::random_function(rng, g.points());
  EXPECT_NEAR(multiplier_norm_two(f, g, g).bound, multiplier_norm_eig(f, g).bound, 1e-9);
}

TEST(MultiplierNormTwo, IdentityBetweenGaussianAndPolynomial) {
  Rng rng(4);
  const auto g1 = fixtures::well_conditioned_gram(rng, KernelSpec::gaussian(1.0), 4, 1e-4);
  const auto g2 = gram(KernelSpec::polynomial(2, 1.0), g1.points());
  ASSERT_GT(psd_floor(g2), 1e-8);
  const auto one = PointFunction::constant(g1.points(), 1.0);
  const double certified = multiplier_norm_two(one, g1, g2).bound;

  // random search over h: ratio ||h||_2 / ||h||_1 computed from value vectors
  Rng search(5);
  Vector best = search.complex_vector(4);
  const auto ratio = [&](const Vector& v) { return value_norm(g2.matrix(), v) / value_norm(g1.matrix(), v); };
  double best_r = ratio(best);
  double step = 1.0;
  for (int e = 0; e < 10000; ++e) {
    const Vector cand = best + step * best.norm() * search.complex_vector(4);
    const double r = ratio(cand);
    if (r > best_r) {
      best = cand / cand.norm();
      best_r = r;
    } else {
      step = std::max(0.98 * step, 1e-10);
    }
  }
  EXPECT_LE(best_r, certified * (1 + 1e-9));
  EXPECT_LE((certified - best_r) / certified, 1e-3);
  EXPECT_NEAR(certified, norm_oracle(one.values(), g1.matrix(), g2.matrix()), 1e-8 * certified);
}

TEST(MultiplierNormTwo, InfeasibleWhenProductLeavesTarget) {
  const PointSet xs = PointSet::integers(2);
  const auto id = GramMatrix::custom(xs, Matrix::Identity(2, 2));
  const auto flat = GramMatrix::custom(xs, Matrix::Ones(2, 2));
  const auto cert = multiplier_norm_two(PointFunction::constant(xs, 1.0), id, flat);
  EXPECT_FALSE(cert.feasible);
  EXPECT_TRUE(std::isinf(cert.bound));
}

TEST(AdjointIdentity, ReferenceCases) {
  Rng rng(6);
  const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::gaussian(1.0), 8, 1e-4);
  EXPECT_LE(adjoint_identity_check(PointFunction::constant(g.points(), 1.0), g), 1e-12);
  EXPECT_EQ(adjoint_identity_check(PointFunction::constant(g.points(), 0.0), g), 0.0);
  const auto f = fixtures::random_function(rng, g.points());
  const double scale = (1 + f.sup_norm()) * linalg::spectral_norm(g.matrix());
  EXPECT_LE(adjoint_identity_check(f, g), 1e-9 * scale);
}

TEST(AdjointIdentity, HandComputedPairing) {
  // <M_f h, k_y> = f(y) h(y) and <h, conj(f(y)) k_y> = f(y) h(y)
  Rng rng(7);
  const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::laplacian(1.0), 5, 1e-4);
  const auto base = RkhsBase::create(g);
  const auto f = fixtures::random_function(rng, g.points());
  const SpanFunction h(base, rng.complex_vector(5));
  for (std::size_t y = 0; y < 5; ++y) {
    const auto ky = SpanFunction::section(base, y);
    const Scalar lhs = inner(apply_multiplier(f, h), ky);
    const Scalar rhs = inner(h, std::conj(f[y]) * ky);
    const Scalar want = f[y] * h.values()(static_cast<Eigen::Index>(y));
    EXPECT_LE(std::abs(lhs - want), 1e-9 * (1 + std::abs(want)));
    EXPECT_LE(std::abs(rhs - want), 1e-12 * (1 + std::abs(want)));
  }
}

TEST(RepresentationHilbert, RandomInstances) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(900 + s);
    const std::size_t m = 2 + s % 9;
    const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::gaussian(1.0), m, 1e-4);
    const auto base = RkhsBase::create(g);
    const auto n = static_cast<Eigen::Index>(m);
    const auto rep = representation_check_hilbert(
        fixtures::random_function(rng, g.points()), fixtures::random_function(rng, g.points()),
        SpanFunction(base, rng.complex_vector(n)), SpanFunction(base, rng.complex_vector(n)),
        rng.complex_normal(), rng.complex_normal());
    EXPECT_LE(rep.max(), 1e-9) << "seed " << s;
  }
}

TEST(MultiplierNorm, Submultiplicative) {
  Rng rng(8);
  const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::gaussian(1.0), 6, 1e-4);
  for (int t = 0; t < 20; ++t) {
    const auto f1 = fixtures::random_function(rng, g.points());
    const auto f2 = fixtures::random_function(rng, g.points());
    EXPECT_LE(multiplier_norm_eig(f1 * f2, g).bound,
              multiplier_norm_eig(f1, g).bound * multiplier_norm_eig(f2, g).bound * (1 + 1e-9));
  }
}

TEST(MultiplierNorm, RejectsMismatchedPoints) {
  const auto g = GramMatrix::custom(PointSet::integers(2), Matrix::Identity(2, 2));
  EXPECT_THROW(multiplier_norm_eig(PointFunction::constant(PointSet::integers(3), 1.0), g),
               DimensionError);
}
