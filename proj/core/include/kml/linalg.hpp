#pragma once

#include <complex>

#include <Eigen/Dense>

namespace kml {

using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankCutoff = 1e-12;

namespace linalg {

double max_abs(const Matrix& a);
double max_abs(const Vector& v);

/// Largest entrywise deviation |A - A^H|, relative to max |A| (0 for the zero matrix).
double hermitian_defect(const Matrix& a);

/// (A + A^H) / 2; the result is Hermitian bit-for-bit.
Matrix hermitian_part(const Matrix& a);

struct HermitianSpectrum {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

/// Eigendecomposition of the Hermitian part of a.
HermitianSpectrum eigh(const Matrix& a);

double min_eigenvalue(const Matrix& a);
double max_eigenvalue(const Matrix& a);

/// Orthonormal basis of the numerical range of a Hermitian PSD matrix, with
/// the retained eigenvalues (descending). Eigenvalues below cutoff * largest are dropped.
struct PsdRange {
  Matrix basis;
  RealVector values;
  std::size_t rank() const { return static_cast<std::size_t>(values.size()); }
};
PsdRange psd_range(const Matrix& g, double cutoff = kRankCutoff);

/// Orthonormal basis of the column space of an arbitrary matrix (thin SVD).
Matrix column_range(const Matrix& a, double cutoff = kRankCutoff);

std::size_t numerical_rank(const Matrix& a, double cutoff = kRankCutoff);

/// Moore-Penrose pseudoinverse with relative singular-value cutoff.
Matrix pseudo_inverse(const Matrix& a, double cutoff = kRankCutoff);

/// Minimum-norm least-squares solution of a x = b.
Vector least_squares(const Matrix& a, const Vector& b, double cutoff = kRankCutoff);

double spectral_norm(const Matrix& a);

/// ||(I - Q Q^H) v||_2 for an orthonormal Q.
double distance_to_range(const Matrix& orthonormal_basis, const Vector& v);

}  // namespace linalg
}  // namespace kml
