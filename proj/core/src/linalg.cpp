#include "kml/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace kml::linalg {

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double hermitian_defect(const Matrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  const double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  return max_abs(Matrix(a - a.adjoint())) / scale;
}

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

HermitianSpectrum eigh(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

PsdRange psd_range(const Matrix& g, double cutoff) {
  const auto spectrum = eigh(g);
  const Eigen::Index n = spectrum.values.size();
  const double largest = n > 0 ? std::max(spectrum.values(n - 1), 0.0) : 0.0;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (largest > 0.0 && spectrum.values(i) > cutoff * largest) kept.push_back(i);
  }
  PsdRange out{Matrix(g.rows(), static_cast<Eigen::Index>(kept.size())),
               RealVector(static_cast<Eigen::Index>(kept.size()))};
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out.basis.col(col) = spectrum.vectors.col(kept[k]);
    out.values(col) = spectrum.values(kept[k]);
  }
  return out;
}

Matrix column_range(const Matrix& a, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    while (r < s.size() && s(r) > cutoff * s(0)) ++r;
  }
  return svd.matrixU().leftCols(r);
}

std::size_t numerical_rank(const Matrix& a, double cutoff) {
  return static_cast<std::size_t>(column_range(a, cutoff).cols());
}

Matrix pseudo_inverse(const Matrix& a, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  RealVector inv = RealVector::Zero(s.size());
  if (s.size() > 0 && s(0) > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > cutoff * s(0)) inv(i) = 1.0 / s(i);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Vector least_squares(const Matrix& a, const Vector& b, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(cutoff);
  return svd.solve(b);
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double distance_to_range(const Matrix& orthonormal_basis, const Vector& v) {
  if (orthonormal_basis.cols() == 0) return v.norm();
  const Vector projected = orthonormal_basis * (orthonormal_basis.adjoint() * v);
  return (v - projected).norm();
}

}  // namespace kml::linalg
