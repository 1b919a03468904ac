#include "kml/kernels.hpp"

#include <cmath>
#include <sstream>

#include "kml/errors.hpp"

namespace kml {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("Point: dimension must be at least 1");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw DomainError("Point: coordinates must be finite");
  }
}

double squared_distance(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw DimensionError("squared_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double distance(const Point& x, const Point& y) { return std::sqrt(squared_distance(x, y)); }

double dot(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw DimensionError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("PointSet: at least one point required");
  const std::size_t d = points_.front().dim();
  for (const auto& p : points_) {
    if (p.dim() != d) throw DimensionError("PointSet: points must share one dimension");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (distance(points_[i], points_[j]) < kDistinctnessFloor) {
        std::ostringstream msg;
        msg << "PointSet: points " << i << " and " << j << " are closer than "
            << kDistinctnessFloor;
        throw DomainError(msg.str());
      }
    }
  }
}

PointSet PointSet::integers(std::size_t m) {
  std::vector<Point> pts;
  pts.reserve(m);
  for (std::size_t i = 1; i <= m; ++i) pts.push_back(Point{static_cast<double>(i)});
  return PointSet(std::move(pts));
}

std::optional<std::size_t> PointSet::index_of(const Point& y) const {
  if (y.dim() != dim()) return std::nullopt;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (distance(points_[i], y) < 0.5 * kDistinctnessFloor) return i;
  }
  return std::nullopt;
}

KernelSpec::KernelSpec(Variant v) : variant_(std::move(v)) {
  std::visit(overloaded{
                 [](const Gaussian& k) {
                   if (!(k.gamma > 0.0) || !std::isfinite(k.gamma))
                     throw DomainError("Gaussian kernel: gamma must be > 0");
                 },
                 [](const Laplacian& k) {
                   if (!(k.gamma > 0.0) || !std::isfinite(k.gamma))
                     throw DomainError("Laplacian kernel: gamma must be > 0");
                 },
                 [](const Polynomial& k) {
                   if (k.degree < 1) throw DomainError("Polynomial kernel: degree must be >= 1");
                   if (!(k.offset >= 0.0) || !std::isfinite(k.offset))
                     throw DomainError("Polynomial kernel: offset must be >= 0");
                 },
                 [](const BrownianMin&) {},
             },
             variant_);
}

std::string KernelSpec::family() const {
  return std::visit(overloaded{
                        [](const Gaussian&) { return std::string("gaussian"); },
                        [](const Laplacian&) { return std::string("laplacian"); },
                        [](const Polynomial&) { return std::string("polynomial"); },
                        [](const BrownianMin&) { return std::string("brownian-min"); },
                    },
                    variant_);
}

std::string KernelSpec::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const Gaussian& k) { out << "gaussian(gamma=" << k.gamma << ")"; },
                 [&](const Laplacian& k) { out << "laplacian(gamma=" << k.gamma << ")"; },
                 [&](const Polynomial& k) {
                   out << "polynomial(degree=" << k.degree << ",offset=" << k.offset << ")";
                 },
                 [&](const BrownianMin&) { out << "brownian-min"; },
             },
             variant_);
  return out.str();
}

void KernelSpec::validate(const Point& x) const {
  if (std::holds_alternative<BrownianMin>(variant_)) {
    if (x.dim() != 1) throw DomainError("BrownianMin kernel: points must be one-dimensional");
    if (!(x[0] > 0.0)) throw DomainError("BrownianMin kernel: coordinates must be > 0");
  }
}

void KernelSpec::validate(const PointSet& xs) const {
  for (const auto& x : xs) validate(x);
}

Scalar eval_kernel(const KernelSpec& spec, const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw DimensionError("eval_kernel: dimension mismatch");
  spec.validate(x);
  spec.validate(y);
  const double value = std::visit(
      overloaded{
          [&](const Gaussian& k) { return std::exp(-k.gamma * squared_distance(x, y)); },
          [&](const Laplacian& k) { return std::exp(-k.gamma * distance(x, y)); },
          [&](const Polynomial& k) { return std::pow(dot(x, y) + k.offset, k.degree); },
          [&](const BrownianMin&) { return std::min(x[0], y[0]); },
      },
      spec.variant());
  return {value, 0.0};
}

GramMatrix::GramMatrix(PointSet points, std::optional<KernelSpec> kernel, Matrix entries)
    : points_(std::move(points)), kernel_(std::move(kernel)), entries_(std::move(entries)) {}

double GramMatrix::max_diagonal() const {
  return entries_.diagonal().real().maxCoeff();
}

double GramMatrix::psd_tolerance() const {
  return 1e-8 * static_cast<double>(size()) * std::max(max_diagonal(), 0.0);
}

namespace {

void require_psd(const GramMatrix& g, const Matrix& entries) {
  const double floor = linalg::min_eigenvalue(entries);
  if (floor < -g.psd_tolerance()) {
    std::ostringstream msg;
    msg << "Gram matrix is not positive semidefinite: minimum eigenvalue " << floor
        << " below tolerance -" << g.psd_tolerance();
    throw NotPositiveSemidefinite(msg.str(), floor);
  }
}

}  // namespace

GramMatrix GramMatrix::custom(PointSet points, const Matrix& entries) {
  const auto m = static_cast<Eigen::Index>(points.size());
  if (entries.rows() != m || entries.cols() != m)
    throw DimensionError("GramMatrix::custom: matrix size must equal the point count");
  if (!entries.allFinite()) throw DomainError("GramMatrix::custom: entries must be finite");
  if (linalg::hermitian_defect(entries) > 1e-12)
    throw DomainError("GramMatrix::custom: matrix is not Hermitian");
  GramMatrix g(std::move(points), std::nullopt, linalg::hermitian_part(entries));
  require_psd(g, g.entries_);
  return g;
}

GramMatrix gram(const KernelSpec& spec, const PointSet& xs) {
  spec.validate(xs);
  const auto m = static_cast<Eigen::Index>(xs.size());
  Matrix g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const Scalar k = eval_kernel(spec, xs[static_cast<std::size_t>(i)],
                                   xs[static_cast<std::size_t>(j)]);
      g(i, j) = k;
      g(j, i) = std::conj(k);
    }
  }
  GramMatrix out(xs, spec, std::move(g));
  require_psd(out, out.entries_);
  return out;
}

double psd_floor(const Matrix& g) {
  if (g.rows() != g.cols()) throw DimensionError("psd_floor: matrix must be square");
  if (linalg::hermitian_defect(g) > 1e-10) throw DomainError("psd_floor: matrix is not Hermitian");
  return linalg::min_eigenvalue(g);
}

double psd_floor(const GramMatrix& g) { return psd_floor(g.matrix()); }

}  // namespace kml
