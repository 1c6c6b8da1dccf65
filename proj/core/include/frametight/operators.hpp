#pragma once

// Structured linear operators T : K^r -> K^d with fast apply / adjoint_apply,
// and matrix-free application of inverse weighted frame operators.

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "frametight/linalg.hpp"

namespace frametight {

enum class OperatorKind { dense, circulant_block, gabor_block, projector_factor, subsampler, scaled };

const char* to_string(OperatorKind kind) noexcept;

namespace instrumentation {

/// Counts public to_dense() calls on non-dense operators plus every dense
/// Gamma-type matrix (Gamma, Gamma^{1/2}, S^{-1}, S^{-1/2}) formed or applied
/// by a filter-bank pipeline. Monotone, process-wide.
std::uint64_t dense_materializations() noexcept;
void record_dense_materialization() noexcept;

}  // namespace instrumentation

template <Field S>
class StructuredOperator {
 public:
  static StructuredOperator dense(Matrix<S> matrix);

  /// Left d x k block of the circulant matrix whose first column is
  /// `generator` (column j+1 is the cyclic shift of column j).
  static StructuredOperator circulant(Vector<S> generator, Index columns);

  /// m^2 x m matrix whose rows are (M^l C^k g)^H / sqrt(m ||g||^2), row index
  /// l*m + k. T^H T = I_m and T T^H is an orthogonal projector. Complex only.
  static StructuredOperator gabor(Vector<S> window);

  /// d x r factor with orthonormal columns (checked to 1e-10).
  static StructuredOperator projector(Matrix<S> factor);

  /// rows x indices.size() selection matrix: column j has a single one at
  /// row indices[j].
  static StructuredOperator subsampler(Index rows, std::vector<Index> indices);

  static StructuredOperator scaled(StructuredOperator inner, S factor);

  OperatorKind kind() const noexcept;
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  Vector<S> apply(const Vector<S>& c) const;
  Vector<S> adjoint_apply(const Vector<S>& x) const;

  /// Exact dense materialization (counted by instrumentation for non-dense kinds).
  Matrix<S> to_dense() const;

  /// T T^H as a dense d x d matrix (not counted).
  Matrix<S> gram() const;

  /// ||T||_HS^2, closed form where the structure allows it.
  double hs_norm_squared() const;

  // Payload access; each throws PreconditionError for the wrong kind.
  const Matrix<S>& dense_matrix() const;
  const Vector<S>& generator() const;
  const Vector<S>& window() const;
  const Matrix<S>& factor_matrix() const;
  const std::vector<Index>& indices() const;
  const StructuredOperator& inner() const;
  S scale_factor() const;

 private:
  struct Dense {
    Matrix<S> matrix;
  };
  struct Circulant {
    Vector<S> generator;
    ComplexVector spectrum;  // unnormalized FFT of the generator
  };
  struct Gabor {
    Vector<S> window;
    double row_scale;
  };
  struct Projector {
    Matrix<S> factor;
  };
  struct Subsampler {
    std::vector<Index> indices;
  };
  struct Scaled {
    std::shared_ptr<const StructuredOperator> inner;
    S factor;
  };
  using Payload = std::variant<Dense, Circulant, Gabor, Projector, Subsampler, Scaled>;

  StructuredOperator(Index rows, Index cols, Payload payload);
  Matrix<S> materialize() const;

  Index rows_;
  Index cols_;
  Payload payload_;
};

/// Full Gabor system {M^l C^k g : l, k = 0..m-1}, ordered l-major.
std::vector<ComplexVector> gabor_system(const ComplexVector& window);

struct SolverOptions {
  double tol = 1e-10;     // relative residual ||A z - y|| / ||y||
  Index max_iter = 0;     // 0 means 10 * d
};

template <Field S>
struct SolveResult {
  Vector<S> solution;
  Index iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradients on A = sum_j w_j^2 T_j T_j^H using only apply and
/// adjoint_apply of the elements. Never throws on non-convergence.
template <Field S>
SolveResult<S> weighted_frame_solve(std::span<const double> weights, std::span<const StructuredOperator<S>> elements,
                                    const Vector<S>& y, const SolverOptions& options = {});

/// z = (sum_j c_j^2 T_j T_j^H)^{-1} y, i.e. Gamma y once the weights come from
/// a converged tightening. Throws ConvergenceError carrying the achieved
/// residual when the tolerance is not met within the iteration cap.
template <Field S>
Vector<S> gamma_apply(std::span<const double> weights, std::span<const StructuredOperator<S>> elements,
                      const Vector<S>& y, const SolverOptions& options = {});

}  // namespace frametight
