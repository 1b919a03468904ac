#pragma once

#include <string_view>
#include <vector>

#include "kml/kernels.hpp"
#include "kml/multipliers.hpp"
#include "kml/random.hpp"
#include "kml/rkbs.hpp"

namespace kml::fixtures {

struct KernelParams {
  double gamma = 1.0;
  int degree = 2;
  double offset = 1.0;
};

/// Kernel of the named family ("gaussian", "laplacian", "polynomial", "brownian-min").
KernelSpec kernel_named(std::string_view family, const KernelParams& params = {});

/// "mixed" cycles through all four families by index; any other name is fixed.
KernelSpec kernel_for_instance(std::string_view choice, std::size_t index,
                               const KernelParams& params = {});

/// Random distinct points admissible for the kernel: uniform on (0.2, 5) in one
/// dimension for BrownianMin, [-1, 1]^2 for Polynomial, [-2, 2]^2 otherwise.
/// Pairs closer than 1e-3 are resampled.
PointSet random_points(Rng& rng, const KernelSpec& spec, std::size_t m);

/// Gram matrix whose minimum eigenvalue is at least min_ratio * max diagonal,
/// resampling points up to 200 times (NumericalError afterwards).
GramMatrix well_conditioned_gram(Rng& rng, const KernelSpec& spec, std::size_t m,
                                 double min_ratio = 1e-6);

PointFunction random_function(Rng& rng, const PointSet& points);

/// Random m x n complex features with full column rank.
Matrix random_features(Rng& rng, std::size_t m, std::size_t n);

RkbsModelPtr random_model(Rng& rng, std::size_t m, std::size_t n, double p);

/// Psi = I on m points.
RkbsModelPtr identity_model(std::size_t m, double p);

/// Block-diagonal features: points are grouped into clusters and each cluster
/// gets its own feature block. Functions constant on clusters are multipliers
/// of B (and of B#) for such models.
struct ClusteredModel {
  RkbsModelPtr model;
  std::vector<std::size_t> cluster_of;
  std::size_t clusters = 0;
};
ClusteredModel clustered_model(Rng& rng, std::size_t clusters, std::size_t points_per_cluster,
                               std::size_t features_per_cluster, double p);
/// Same features as `like`, different exponent.
ClusteredModel reexponent(const ClusteredModel& like, double p);

PointFunction cluster_constant_function(Rng& rng, const ClusteredModel& cm);

}  // namespace kml::fixtures
