#include "kml/suite/fixtures.hpp"

#include <array>

#include "kml/errors.hpp"

namespace kml::fixtures {

KernelSpec kernel_named(std::string_view family, const KernelParams& params) {
  if (family == "gaussian") return KernelSpec::gaussian(params.gamma);
  if (family == "laplacian") return KernelSpec::laplacian(params.gamma);
  if (family == "polynomial") return KernelSpec::polynomial(params.degree, params.offset);
  if (family == "brownian-min") return KernelSpec::brownian_min();
  throw DomainError("unknown kernel family \"" + std::string(family) + "\"");
}

KernelSpec kernel_for_instance(std::string_view choice, std::size_t index,
                               const KernelParams& params) {
  static constexpr std::array<std::string_view, 4> families = {"gaussian", "laplacian",
                                                               "polynomial", "brownian-min"};
  if (choice == "mixed") return kernel_named(families[index % families.size()], params);
  return kernel_named(choice, params);
}

PointSet random_points(Rng& rng, const KernelSpec& spec, std::size_t m) {
  const bool brownian = std::holds_alternative<BrownianMin>(spec.variant());
  const bool poly = std::holds_alternative<Polynomial>(spec.variant());
  std::vector<Point> pts;
  pts.reserve(m);
  while (pts.size() < m) {
    Point candidate = brownian ? Point{rng.uniform(0.2, 5.0)}
                     : poly    ? Point{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}
                               : Point{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    bool ok = true;
    for (const auto& p : pts) ok = ok && distance(p, candidate) >= 1e-3;
    if (ok) pts.push_back(std::move(candidate));
  }
  return PointSet(std::move(pts));
}

GramMatrix well_conditioned_gram(Rng& rng, const KernelSpec& spec, std::size_t m,
                                 double min_ratio) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    auto g = gram(spec, random_points(rng, spec, m));
    if (linalg::min_eigenvalue(g.matrix()) >= min_ratio * g.max_diagonal()) return g;
  }
  throw NumericalError("well_conditioned_gram: no admissible point set found for " +
                       spec.describe() + " with m = " + std::to_string(m));
}

PointFunction random_function(Rng& rng, const PointSet& points) {
  return PointFunction(points, rng.complex_vector(static_cast<Eigen::Index>(points.size())));
}

Matrix random_features(Rng& rng, std::size_t m, std::size_t n) {
  for (;;) {
    Matrix psi = rng.complex_matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    Eigen::JacobiSVD<Matrix> svd(psi);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) > 1e-3 * s(0)) return psi;
  }
}

RkbsModelPtr random_model(Rng& rng, std::size_t m, std::size_t n, double p) {
  return RkbsModel::create(PointSet::integers(m), random_features(rng, m, n), p);
}

RkbsModelPtr identity_model(std::size_t m, double p) {
  const auto mm = static_cast<Eigen::Index>(m);
  return RkbsModel::create(PointSet::integers(m), Matrix::Identity(mm, mm), p);
}

ClusteredModel clustered_model(Rng& rng, std::size_t clusters, std::size_t points_per_cluster,
                               std::size_t features_per_cluster, double p) {
  const std::size_t m = clusters * points_per_cluster;
  const std::size_t n = clusters * features_per_cluster;
  Matrix psi = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  ClusteredModel cm;
  cm.clusters = clusters;
  cm.cluster_of.resize(m);
  for (std::size_t c = 0; c < clusters; ++c) {
    const Matrix block = random_features(rng, points_per_cluster, features_per_cluster);
    psi.block(static_cast<Eigen::Index>(c * points_per_cluster),
              static_cast<Eigen::Index>(c * features_per_cluster),
              static_cast<Eigen::Index>(points_per_cluster),
              static_cast<Eigen::Index>(features_per_cluster)) = block;
    for (std::size_t i = 0; i < points_per_cluster; ++i) cm.cluster_of[c * points_per_cluster + i] = c;
  }
  cm.model = RkbsModel::create(PointSet::integers(m), std::move(psi), p);
  return cm;
}

ClusteredModel reexponent(const ClusteredModel& like, double p) {
  ClusteredModel cm = like;
  cm.model = RkbsModel::create(like.model->points(), like.model->psi(), p);
  return cm;
}

PointFunction cluster_constant_function(Rng& rng, const ClusteredModel& cm) {
  const Vector levels = rng.complex_vector(static_cast<Eigen::Index>(cm.clusters));
  Vector values(static_cast<Eigen::Index>(cm.cluster_of.size()));
  for (std::size_t i = 0; i < cm.cluster_of.size(); ++i)
    values(static_cast<Eigen::Index>(i)) = levels(static_cast<Eigen::Index>(cm.cluster_of[i]));
  return PointFunction(cm.model->points(), std::move(values));
}

}  // namespace kml::fixtures
