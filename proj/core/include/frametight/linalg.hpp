#pragma once

// Field-generic dense kernel: Hermitian eigendecomposition, functions of
// positive definite matrices, Hilbert-Schmidt norms and the unitary DFT.

#include <complex>
#include <concepts>
#include <cstddef>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace frametight {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// The two supported scalar fields: real and complex double precision.
template <class S>
concept Field = std::same_as<S, double> || std::same_as<S, Complex>;

template <Field S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <Field S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

enum class FieldKind { real, complex };

template <Field S>
inline constexpr bool is_complex_v = std::same_as<S, Complex>;

template <Field S>
inline constexpr FieldKind field_kind_v = is_complex_v<S> ? FieldKind::complex : FieldKind::real;

const char* to_string(FieldKind kind) noexcept;
FieldKind parse_field_kind(const std::string& name);

/// Relative Frobenius tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;
/// pd_power refuses matrices with lambda_min <= kSingularRatio * lambda_max.
inline constexpr double kSingularRatio = 1e-14;
/// Rank decisions: eigenvalues below kRankTolerance * lambda_max count as zero.
inline constexpr double kRankTolerance = 1e-10;

template <Field S>
struct EigenDecomposition {
  RealVector values;   // ascending
  Matrix<S> vectors;   // unitary, columns are eigenvectors
};

/// (A + A^H) / 2.
template <Field S>
Matrix<S> hermitian_part(const Matrix<S>& a);

template <Field S>
bool is_hermitian(const Matrix<S>& a, double rel_tol = kHermitianTolerance);

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first;
/// throws PreconditionError when it is not square or not Hermitian within
/// kHermitianTolerance.
template <Field S>
EigenDecomposition<S> herm_eig(const Matrix<S>& a);

/// Eigenvalues only (ascending), same preconditions as herm_eig.
template <Field S>
RealVector herm_eigenvalues(const Matrix<S>& a);

/// Largest |eigenvalue| of a Hermitian matrix, i.e. its operator 2-norm.
template <Field S>
double hermitian_norm(const Matrix<S>& a);

/// Number of eigenvalues above kRankTolerance * lambda_max of a Hermitian PSD matrix.
template <Field S>
Index psd_rank(const Matrix<S>& a, double rel_tol = kRankTolerance);

/// Hermitian positive definite matrix with a cached eigendecomposition.
template <Field S>
class HermitianPD {
 public:
  /// Validates Hermitian-ness and positivity; throws SingularityError when
  /// some eigenvalue is not strictly positive.
  explicit HermitianPD(const Matrix<S>& a);

  static HermitianPD identity(Index dim, double scale = 1.0);

  Index dim() const noexcept { return matrix_.rows(); }
  const Matrix<S>& matrix() const noexcept { return matrix_; }
  const RealVector& eigenvalues() const noexcept { return eig_.values; }
  const Matrix<S>& eigenvectors() const noexcept { return eig_.vectors; }

  double trace() const;
  double min_eigenvalue() const { return eig_.values(0); }
  double max_eigenvalue() const { return eig_.values(eig_.values.size() - 1); }
  double condition() const { return max_eigenvalue() / min_eigenvalue(); }

  /// V diag(f(lambda)) V^H for a scalar map f.
  template <class F>
  Matrix<S> spectral_map(F&& f) const {
    RealVector mapped = eig_.values.unaryExpr(std::forward<F>(f));
    return eig_.vectors * mapped.asDiagonal() * eig_.vectors.adjoint();
  }

  HermitianPD scaled(double factor) const;

 private:
  HermitianPD(Matrix<S> matrix, EigenDecomposition<S> eig);

  Matrix<S> matrix_;
  EigenDecomposition<S> eig_;
};

/// A^p for p in {1/2, -1/2, -1}. Throws SingularityError (carrying the
/// smallest eigenvalue) when lambda_min <= kSingularRatio * lambda_max and
/// PreconditionError for any other exponent.
template <Field S>
HermitianPD<S> pd_power(const HermitianPD<S>& a, double exponent);

/// sqrt(sum |t_ij|^2).
template <Field S>
double hs_norm(const Matrix<S>& t);

/// trace(T^H G T), computed without forming G^{1/2}.
template <Field S>
double trace_quadratic(const Matrix<S>& t, const HermitianPD<S>& g);

/// Real part of trace(A B) for Hermitian A, B of equal size.
template <Field S>
double trace_product(const Matrix<S>& a, const Matrix<S>& b);

/// Unitary-normalized DFT: X_k = d^{-1/2} sum_n x_n e^{-2 pi i k n / d}.
/// inverse = true applies the conjugate transform.
ComplexVector dft(const ComplexVector& x, bool inverse = false);

/// Unnormalized in-place FFT (forward sign -1, inverse sign +1, no 1/d).
void fft_inplace(Complex* data, Index length, bool inverse);

}  // namespace frametight
