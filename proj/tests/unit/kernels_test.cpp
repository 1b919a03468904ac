#include <gtest/gtest.h>

#include <cmath>

#include "kml/errors.hpp"
#include "kml/kernels.hpp"
#include "kml/random.hpp"
#include "oracles.hpp"

using namespace kml;

TEST(EvalKernel, ReferenceCases) {
  EXPECT_EQ(eval_kernel(KernelSpec::gaussian(1.0), Point{0.0}, Point{0.0}), Scalar(1.0));
  EXPECT_EQ(eval_kernel(KernelSpec::brownian_min(), Point{2.0}, Point{3.0}), Scalar(2.0));
  EXPECT_EQ(eval_kernel(KernelSpec::polynomial(2, 1.0), Point{1.0, 0.0}, Point{0.0, 1.0}),
            Scalar(1.0));
}

TEST(EvalKernel, DirectFormulas) {
  const Point x{0.5, -1.0}, y{2.0, 1.0};
  const double d2 = 1.5 * 1.5 + 2.0 * 2.0;
  EXPECT_NEAR(eval_kernel(KernelSpec::gaussian(0.3), x, y).real(), std::exp(-0.3 * d2), 1e-15);
  EXPECT_NEAR(eval_kernel(KernelSpec::laplacian(0.7), x, y).real(), std::exp(-0.7 * std::sqrt(d2)),
              1e-15);
  EXPECT_NEAR(eval_kernel(KernelSpec::polynomial(3, 0.5), x, y).real(), std::pow(1.0 - 1.0 + 0.5, 3),
              1e-15);
}

TEST(EvalKernel, RejectsBadInput) {
  EXPECT_THROW(KernelSpec::gaussian(0.0), DomainError);
  EXPECT_THROW(KernelSpec::laplacian(-1.0), DomainError);
  EXPECT_THROW(KernelSpec::polynomial(0, 1.0), DomainError);
  EXPECT_THROW(KernelSpec::polynomial(2, -0.5), DomainError);
  EXPECT_THROW(eval_kernel(KernelSpec::gaussian(1.0), Point{0.0}, Point{0.0, 1.0}), DimensionError);
  EXPECT_THROW(eval_kernel(KernelSpec::brownian_min(), Point{-1.0}, Point{1.0}), DomainError);
  EXPECT_THROW(eval_kernel(KernelSpec::brownian_min(), Point{1.0, 1.0}, Point{1.0, 1.0}), DomainError);
  EXPECT_THROW(Point(std::vector<double>{}), DomainError);
  EXPECT_THROW(Point({std::nan("")}), DomainError);
}

TEST(PointSet, DistinctnessAndLookup) {
  EXPECT_THROW(PointSet({Point{0.0}, Point{1e-12}}), DomainError);
  EXPECT_THROW(PointSet({Point{0.0}, Point{0.0, 1.0}}), DimensionError);
  EXPECT_THROW(PointSet(std::vector<Point>{}), DomainError);
  const PointSet xs{Point{1.0}, Point{2.0}, Point{3.0}};
  EXPECT_EQ(xs.index_of(Point{2.0}), 1u);
  EXPECT_EQ(xs.index_of(Point{2.0 + 1e-11}), 1u);
  EXPECT_FALSE(xs.index_of(Point{1.5}).has_value());
  EXPECT_EQ(PointSet::integers(3), xs);
}

TEST(Gram, SinglePointAndTwoPoint) {
  const auto g1 = gram(KernelSpec::gaussian(1.0), PointSet{Point{0.0}});
  ASSERT_EQ(g1.size(), 1u);
  EXPECT_EQ(g1(0, 0), Scalar(1.0));

  const auto g2 = gram(KernelSpec::gaussian(1.0), PointSet{Point{0.0}, Point{1.0}});
  const double e = std::exp(-1.0);
  EXPECT_NEAR(std::abs(g2(0, 1) - e), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(g2(1, 0) - e), 0.0, 1e-16);
  EXPECT_EQ(g2(0, 0), Scalar(1.0));
}

TEST(Gram, BrownianMinMatrixAndEigenvalues) {
  const auto g = gram(KernelSpec::brownian_min(), PointSet{Point{1.0}, Point{2.0}, Point{3.0}});
  Matrix expected(3, 3);
  expected << 1, 1, 1, 1, 2, 2, 1, 2, 3;
  EXPECT_EQ(g.matrix(), expected);
  // trace 6 and determinant 1 pin the spectrum sum and product
  const auto s = linalg::eigh(g.matrix());
  EXPECT_GT(s.values(0), 0.0);
  EXPECT_NEAR(s.values.sum(), 6.0, 1e-13);
  EXPECT_NEAR(s.values.prod(), 1.0, 1e-13);
}

TEST(Gram, IsHermitianWithUnitDiagonalForRadialKernels) {
  Rng rng(9);
  std::vector<Point> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(Point{rng.uniform(-2, 2), rng.uniform(-2, 2)});
  const PointSet xs(pts);
  for (const auto& spec : {KernelSpec::gaussian(0.8), KernelSpec::laplacian(1.3)}) {
    const auto g = gram(spec, xs);
    EXPECT_EQ(linalg::hermitian_defect(g.matrix()), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(g(i, i), Scalar(1.0));
    EXPECT_GE(psd_floor(g), -g.psd_tolerance());
  }
}

TEST(PsdFloor, ReferenceCases) {
  EXPECT_NEAR(psd_floor(Matrix(Matrix::Identity(2, 2))), 1.0, 1e-15);
  Matrix ones = Matrix::Ones(2, 2);
  EXPECT_NEAR(psd_floor(ones), 0.0, 1e-15);
  const auto g = gram(KernelSpec::gaussian(1.0), PointSet{Point{0.0}, Point{1.0}});
  EXPECT_NEAR(psd_floor(g), 1.0 - std::exp(-1.0), 1e-15);
}

TEST(PsdFloor, RejectsNonHermitianAndNonSquare) {
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_THROW(psd_floor(a), DomainError);
  EXPECT_THROW(psd_floor(Matrix(Matrix::Ones(2, 3))), DimensionError);
}

TEST(GramCustom, ValidatesEntries) {
  const PointSet xs{Point{0.0}, Point{1.0}};
  Matrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  try {
    GramMatrix::custom(xs, indefinite);
    FAIL() << "expected NotPositiveSemidefinite";
  } catch (const NotPositiveSemidefinite& e) {
    EXPECT_NEAR(e.min_eigenvalue(), -1.0, 1e-14);
  }
  Matrix skew(2, 2);
  skew << 1, 0.5, 0.2, 1;
  EXPECT_THROW(GramMatrix::custom(xs, skew), DomainError);
  EXPECT_THROW(GramMatrix::custom(xs, Matrix::Identity(3, 3)), DimensionError);
  const auto g = GramMatrix::custom(xs, Matrix::Identity(2, 2));
  EXPECT_FALSE(g.kernel().has_value());
}
