#include <gtest/gtest.h>

#include "kml/linalg.hpp"
#include "kml/random.hpp"
#include "oracles.hpp"

using namespace kml;

TEST(Linalg, EighIsAscendingAndReconstructs) {
  Rng rng(3);
  const Matrix a = rng.complex_matrix(5, 5);
  const Matrix h = a * a.adjoint();
  const auto s = linalg::eigh(h);
  for (Eigen::Index i = 1; i < s.values.size(); ++i) EXPECT_LE(s.values(i - 1), s.values(i));
  const Matrix back = s.vectors * s.values.cast<Scalar>().asDiagonal() * s.vectors.adjoint();
  EXPECT_LT((back - h).norm(), 1e-12 * h.norm());
  EXPECT_NEAR(linalg::max_eigenvalue(h), oracle::power_max(h), 1e-9 * h.norm());
}

TEST(Linalg, HermitianDefect) {
  Matrix a(2, 2);
  a << 1.0, Scalar(0, 1), Scalar(0, -1), 2.0;
  EXPECT_EQ(linalg::hermitian_defect(a), 0.0);
  a(0, 1) = 3.0;
  EXPECT_GT(linalg::hermitian_defect(a), 0.1);
  EXPECT_EQ(linalg::hermitian_defect(linalg::hermitian_part(a)), 0.0);
}

TEST(Linalg, PsdRangeDropsNullDirections) {
  Vector v(3);
  v << 1.0, Scalar(0, 2), -1.0;
  const Matrix rank1 = v * v.adjoint();
  const auto r = linalg::psd_range(rank1);
  ASSERT_EQ(r.rank(), 1u);
  EXPECT_NEAR(r.values(0), v.squaredNorm(), 1e-12);
  EXPECT_EQ(linalg::numerical_rank(rank1), 1u);
}

TEST(Linalg, LeastSquaresMatchesNormalEquations) {
  Rng rng(5);
  const Matrix a = rng.complex_matrix(6, 3);
  const Vector b = rng.complex_vector(6);
  const Vector x = linalg::least_squares(a, b);
  const Vector ref = oracle::solve(a.adjoint() * a, a.adjoint() * b);
  EXPECT_LT((x - ref).norm(), 1e-10 * ref.norm());
}

TEST(Linalg, PseudoInverseOfRankDeficient) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  const Matrix p = linalg::pseudo_inverse(a);
  EXPECT_NEAR(std::abs(p(0, 0)), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(p(1, 1)), 0.25, 1e-15);
  EXPECT_EQ(std::abs(p(2, 2)), 0.0);
}

TEST(Linalg, SpectralNormAndRangeDistance) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = Scalar(0, -5);
  EXPECT_NEAR(linalg::spectral_norm(d), 5.0, 1e-14);
  Matrix basis = Matrix::Zero(3, 1);
  basis(0, 0) = 1.0;
  Vector v(3);
  v << 7.0, 3.0, 4.0;
  EXPECT_NEAR(linalg::distance_to_range(basis, v), 5.0, 1e-14);
}
