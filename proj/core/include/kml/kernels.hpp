#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kml/linalg.hpp"

namespace kml {

/// A point of X: a finite real coordinate vector, dimension >= 1.
class Point {
 public:
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

double squared_distance(const Point& x, const Point& y);
double distance(const Point& x, const Point& y);
double dot(const Point& x, const Point& y);

/// Ordered finite set of distinct points of common dimension.
class PointSet {
 public:
  /// Pairwise Euclidean distances must be at least this large.
  static constexpr double kDistinctnessFloor = 1e-9;

  explicit PointSet(std::vector<Point> points);
  PointSet(std::initializer_list<Point> points) : PointSet(std::vector<Point>(points)) {}

  /// One-dimensional set {1, 2, ..., m}; handy for models where only the index matters.
  static PointSet integers(std::size_t m);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return points_.front().dim(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// Index of the member within half the distinctness floor of y, if any.
  std::optional<std::size_t> index_of(const Point& y) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Point> points_;
};

struct Gaussian {
  double gamma = 1.0;  // exp(-gamma |x-y|^2)
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};
struct Laplacian {
  double gamma = 1.0;  // exp(-gamma |x-y|)
  friend bool operator==(const Laplacian&, const Laplacian&) = default;
};
struct Polynomial {
  int degree = 2;       // (<x,y> + offset)^degree
  double offset = 1.0;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};
/// min(x, y) on strictly positive reals.
struct BrownianMin {
  friend bool operator==(const BrownianMin&, const BrownianMin&) = default;
};

/// One of the four positive-definite kernel families, with validated parameters.
class KernelSpec {
 public:
  using Variant = std::variant<Gaussian, Laplacian, Polynomial, BrownianMin>;

  KernelSpec(Variant v);  // NOLINT(google-explicit-constructor)

  static KernelSpec gaussian(double gamma) { return KernelSpec(Gaussian{gamma}); }
  static KernelSpec laplacian(double gamma) { return KernelSpec(Laplacian{gamma}); }
  static KernelSpec polynomial(int degree, double offset) { return KernelSpec(Polynomial{degree, offset}); }
  static KernelSpec brownian_min() { return KernelSpec(BrownianMin{}); }

  const Variant& variant() const noexcept { return variant_; }

  /// Family name: "gaussian", "laplacian", "polynomial" or "brownian-min".
  std::string family() const;
  /// Family name with parameters, e.g. "gaussian(gamma=1)".
  std::string describe() const;

  /// Throws DomainError if the point is not admissible for this kernel.
  void validate(const Point& x) const;
  void validate(const PointSet& xs) const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  Variant variant_;
};

/// K(x, y). All four families are real-valued, so K(x,y) = conj(K(y,x)) holds exactly.
Scalar eval_kernel(const KernelSpec& spec, const Point& x, const Point& y);

/// Hermitian PSD matrix over a point set. Built either from a kernel (gram())
/// or from an explicit matrix (custom()).
class GramMatrix {
 public:
  /// Validates squareness, size against the point set, near-Hermitian input
  /// (defect <= 1e-12 relative) and PSD-ness; stores the Hermitian part.
  static GramMatrix custom(PointSet points, const Matrix& entries);

  const Matrix& matrix() const noexcept { return entries_; }
  const PointSet& points() const noexcept { return points_; }
  const std::optional<KernelSpec>& kernel() const noexcept { return kernel_; }
  std::size_t size() const noexcept { return points_.size(); }
  Scalar operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double max_diagonal() const;
  /// Admissible negative eigenvalue magnitude: 1e-8 * m * max diagonal.
  double psd_tolerance() const;

 private:
  GramMatrix(PointSet points, std::optional<KernelSpec> kernel, Matrix entries);
  friend GramMatrix gram(const KernelSpec&, const PointSet&);

  PointSet points_;
  std::optional<KernelSpec> kernel_;
  Matrix entries_;
};

/// G[i][j] = K(x_i, x_j). Throws NotPositiveSemidefinite if the minimum
/// eigenvalue falls below -psd_tolerance().
GramMatrix gram(const KernelSpec& spec, const PointSet& xs);

/// Minimum eigenvalue of a Hermitian matrix. Rejects inputs whose Hermitian
/// defect exceeds 1e-10 (relative) with DomainError.
double psd_floor(const Matrix& g);
double psd_floor(const GramMatrix& g);

}  // namespace kml
