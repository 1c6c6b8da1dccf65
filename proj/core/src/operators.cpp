#include "frametight/operators.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "frametight/errors.hpp"

namespace frametight {

const char* to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::dense: return "dense";
    case OperatorKind::circulant_block: return "circulant";
    case OperatorKind::gabor_block: return "gabor";
    case OperatorKind::projector_factor: return "projector";
    case OperatorKind::subsampler: return "subsampler";
    case OperatorKind::scaled: return "scaled";
  }
  return "unknown";
}

namespace instrumentation {
namespace {
std::atomic<std::uint64_t> g_dense_materializations{0};
}
std::uint64_t dense_materializations() noexcept { return g_dense_materializations.load(); }
void record_dense_materialization() noexcept { g_dense_materializations.fetch_add(1); }
}  // namespace instrumentation

namespace {

template <Field S>
S from_complex(Complex z) {
  if constexpr (is_complex_v<S>) {
    return z;
  } else {
    return z.real();
  }
}

template <Field S>
ComplexVector to_complex(const Vector<S>& v) {
  return v.template cast<Complex>();
}

template <Field S>
Vector<S> from_complex_vector(const ComplexVector& v) {
  if constexpr (is_complex_v<S>) {
    return v;
  } else {
    return v.real();
  }
}

void require_size(Index actual, Index expected, const char* who) {
  if (actual != expected) {
    throw DimensionError(std::string(who) + ": expected length " + std::to_string(expected) + ", got " +
                         std::to_string(actual));
  }
}

}  // namespace

template <Field S>
StructuredOperator<S>::StructuredOperator(Index rows, Index cols, Payload payload)
    : rows_(rows), cols_(cols), payload_(std::move(payload)) {}

template <Field S>
StructuredOperator<S> StructuredOperator<S>::dense(Matrix<S> matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) throw PreconditionError("dense operator must be non-empty");
  if (!matrix.allFinite()) throw PreconditionError("dense operator has non-finite entries");
  const Index r = matrix.rows();
  const Index c = matrix.cols();
  return StructuredOperator(r, c, Dense{std::move(matrix)});
}

template <Field S>
StructuredOperator<S> StructuredOperator<S>::circulant(Vector<S> generator, Index columns) {
  const Index d = generator.size();
  if (d == 0) throw PreconditionError("circulant generator must be non-empty");
  if (columns < 1 || columns > d) throw PreconditionError("circulant block needs 1 <= k <= d");
  if (!generator.allFinite()) throw PreconditionError("circulant generator has non-finite entries");
  ComplexVector spectrum = to_complex<S>(generator);
  fft_inplace(spectrum.data(), d, false);
  return StructuredOperator(d, columns, Circulant{std::move(generator), std::move(spectrum)});
}

template <Field S>
StructuredOperator<S> StructuredOperator<S>::gabor(Vector<S> window) {
  if constexpr (!is_complex_v<S>) {
    throw PreconditionError("gabor blocks need the complex field (modulations are complex)");
  } else {
    const Index m = window.size();
    const double energy = window.squaredNorm();
    if (m == 0 || !(energy > 0.0)) throw PreconditionError("gabor window must be non-zero");
    const double scale = 1.0 / std::sqrt(static_cast<double>(m) * energy);
    return StructuredOperator(m * m, m, Gabor{std::move(window), scale});
  }
}

template <Field S>
StructuredOperator<S> StructuredOperator<S>::projector(Matrix<S> factor) {
  if (factor.rows() == 0 || factor.cols() == 0) throw PreconditionError("projector factor must be non-empty");
  const Matrix<S> gram = factor.adjoint() * factor;
  if ((gram - Matrix<S>::Identity(factor.cols(), factor.cols())).norm() > 1e-10) {
    throw PreconditionError("projector factor columns are not orthonormal");
  }
  const Index r = factor.rows();
  const Index c = factor.cols();
  return StructuredOperator(r, c, Projector{std::move(factor)});
}

template <Field S>
StructuredOperator<S> StructuredOperator<S>::subsampler(Index rows, std::vector<Index> indices) {
  if (rows < 1 || indices.empty()) throw PreconditionError("subsampler needs rows >= 1 and at least one column");
  for (Index i : indices) {
    if (i < 0 || i >= rows) throw PreconditionError("subsampler index out of range");
  }
  const auto cols = static_cast<Index>(indices.size());
  return StructuredOperator(rows, cols, Subsampler{std::move(indices)});
}

template <Field S>
StructuredOperator<S> StructuredOperator<S>::scaled(StructuredOperator inner, S factor) {
  if (!std::isfinite(std::abs(factor)) || factor == S(0)) throw PreconditionError("scale factor must be finite and non-zero");
  const Index r = inner.rows();
  const Index c = inner.cols();
  return StructuredOperator(r, c, Scaled{std::make_shared<const StructuredOperator>(std::move(inner)), factor});
}

template <Field S>
OperatorKind StructuredOperator<S>::kind() const noexcept {
  switch (payload_.index()) {
    case 0: return OperatorKind::dense;
    case 1: return OperatorKind::circulant_block;
    case 2: return OperatorKind::gabor_block;
    case 3: return OperatorKind::projector_factor;
    case 4: return OperatorKind::subsampler;
    default: return OperatorKind::scaled;
  }
}

template <Field S>
Vector<S> StructuredOperator<S>::apply(const Vector<S>& c) const {
  require_size(c.size(), cols_, "apply");
  return std::visit(
      [&](const auto& p) -> Vector<S> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Dense>) {
          return p.matrix * c;
        } else if constexpr (std::is_same_v<P, Circulant>) {
          // C [c; 0] = ifft(fft(x) .* fft([c; 0])) / d
          ComplexVector buf = ComplexVector::Zero(rows_);
          buf.head(cols_) = to_complex<S>(c);
          fft_inplace(buf.data(), rows_, false);
          buf.array() *= p.spectrum.array();
          fft_inplace(buf.data(), rows_, true);
          buf /= static_cast<double>(rows_);
          return from_complex_vector<S>(buf);
        } else if constexpr (std::is_same_v<P, Gabor>) {
          // (Tc)_{l m + k} = s * sum_i e^{-2 pi i l i / m} conj(g_{i-k}) c_i
          const Index m = cols_;
          Vector<S> out(rows_);
          ComplexVector buf(m);
          for (Index k = 0; k < m; ++k) {
            for (Index i = 0; i < m; ++i) buf(i) = std::conj(Complex(p.window((i - k + m) % m))) * Complex(c(i));
            fft_inplace(buf.data(), m, false);
            for (Index l = 0; l < m; ++l) out(l * m + k) = from_complex<S>(buf(l) * p.row_scale);
          }
          return out;
        } else if constexpr (std::is_same_v<P, Projector>) {
          return p.factor * c;
        } else if constexpr (std::is_same_v<P, Subsampler>) {
          Vector<S> out = Vector<S>::Zero(rows_);
          for (Index j = 0; j < cols_; ++j) out(p.indices[static_cast<size_t>(j)]) += c(j);
          return out;
        } else {
          return p.factor * p.inner->apply(c);
        }
      },
      payload_);
}

template <Field S>
Vector<S> StructuredOperator<S>::adjoint_apply(const Vector<S>& x) const {
  require_size(x.size(), rows_, "adjoint_apply");
  return std::visit(
      [&](const auto& p) -> Vector<S> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Dense>) {
          return p.matrix.adjoint() * x;
        } else if constexpr (std::is_same_v<P, Circulant>) {
          // C^H x = ifft(conj(fft(x_gen)) .* fft(x)) / d, truncated to k entries
          ComplexVector buf = to_complex<S>(x);
          fft_inplace(buf.data(), rows_, false);
          buf.array() *= p.spectrum.array().conjugate();
          fft_inplace(buf.data(), rows_, true);
          buf /= static_cast<double>(rows_);
          return from_complex_vector<S>(buf.head(cols_));
        } else if constexpr (std::is_same_v<P, Gabor>) {
          // (T^H y)_i = s * sum_k g_{i-k} sum_l e^{2 pi i l i / m} y_{l m + k}
          const Index m = cols_;
          ComplexVector acc = ComplexVector::Zero(m);
          ComplexVector buf(m);
          for (Index k = 0; k < m; ++k) {
            for (Index l = 0; l < m; ++l) buf(l) = Complex(x(l * m + k));
            fft_inplace(buf.data(), m, true);
            for (Index i = 0; i < m; ++i) acc(i) += Complex(p.window((i - k + m) % m)) * buf(i);
          }
          return from_complex_vector<S>(acc * p.row_scale);
        } else if constexpr (std::is_same_v<P, Projector>) {
          return p.factor.adjoint() * x;
        } else if constexpr (std::is_same_v<P, Subsampler>) {
          Vector<S> out(cols_);
          for (Index j = 0; j < cols_; ++j) out(j) = x(p.indices[static_cast<size_t>(j)]);
          return out;
        } else {
          if constexpr (is_complex_v<S>) {
            return std::conj(p.factor) * p.inner->adjoint_apply(x);
          } else {
            return p.factor * p.inner->adjoint_apply(x);
          }
        }
      },
      payload_);
}

template <Field S>
Matrix<S> StructuredOperator<S>::materialize() const {
  return std::visit(
      [&](const auto& p) -> Matrix<S> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Dense>) {
          return p.matrix;
        } else if constexpr (std::is_same_v<P, Circulant>) {
          Matrix<S> out(rows_, cols_);
          for (Index j = 0; j < cols_; ++j) {
            for (Index i = 0; i < rows_; ++i) out(i, j) = p.generator((i - j + rows_) % rows_);
          }
          return out;
        } else if constexpr (std::is_same_v<P, Gabor>) {
          if constexpr (is_complex_v<S>) {
            const ComplexVector g = p.window;
            const auto system = gabor_system(g);
            Matrix<S> out(rows_, cols_);
            for (Index row = 0; row < rows_; ++row) {
              out.row(row) = system[static_cast<size_t>(row)].adjoint() * p.row_scale;
            }
            return out;
          } else {
            throw PreconditionError("gabor block in the real field");
          }
        } else if constexpr (std::is_same_v<P, Projector>) {
          return p.factor;
        } else if constexpr (std::is_same_v<P, Subsampler>) {
          Matrix<S> out = Matrix<S>::Zero(rows_, cols_);
          for (Index j = 0; j < cols_; ++j) out(p.indices[static_cast<size_t>(j)], j) = S(1);
          return out;
        } else {
          return p.factor * p.inner->materialize();
        }
      },
      payload_);
}

template <Field S>
Matrix<S> StructuredOperator<S>::to_dense() const {
  if (kind() != OperatorKind::dense) instrumentation::record_dense_materialization();
  return materialize();
}

template <Field S>
Matrix<S> StructuredOperator<S>::gram() const {
  if (const auto* c = std::get_if<Circulant>(&payload_); c != nullptr && cols_ == rows_) {
    // Full circulant: C C^H is circulant with spectrum |fft(x)|^2.
    ComplexVector col = c->spectrum.cwiseAbs2().template cast<Complex>();
    fft_inplace(col.data(), rows_, true);
    col /= static_cast<double>(rows_);
    Matrix<S> out(rows_, rows_);
    for (Index j = 0; j < rows_; ++j) {
      for (Index i = 0; i < rows_; ++i) out(i, j) = from_complex<S>(col((i - j + rows_) % rows_));
    }
    return hermitian_part(out);
  }
  const Matrix<S> t = materialize();
  return hermitian_part<S>(t * t.adjoint());
}

template <Field S>
double StructuredOperator<S>::hs_norm_squared() const {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Dense>) {
          return p.matrix.squaredNorm();
        } else if constexpr (std::is_same_v<P, Circulant>) {
          return static_cast<double>(cols_) * p.generator.squaredNorm();
        } else if constexpr (std::is_same_v<P, Gabor>) {
          return static_cast<double>(cols_);
        } else if constexpr (std::is_same_v<P, Projector>) {
          return p.factor.squaredNorm();
        } else if constexpr (std::is_same_v<P, Subsampler>) {
          return static_cast<double>(cols_);
        } else {
          return std::norm(p.factor) * p.inner->hs_norm_squared();
        }
      },
      payload_);
}

namespace {
template <class P, class V>
const P& payload_as(const V& payload, const char* what) {
  const P* p = std::get_if<P>(&payload);
  if (p == nullptr) throw PreconditionError(std::string("operator has no ") + what + " payload");
  return *p;
}
}  // namespace

template <Field S>
const Matrix<S>& StructuredOperator<S>::dense_matrix() const {
  return payload_as<Dense>(payload_, "dense").matrix;
}
template <Field S>
const Vector<S>& StructuredOperator<S>::generator() const {
  return payload_as<Circulant>(payload_, "circulant").generator;
}
template <Field S>
const Vector<S>& StructuredOperator<S>::window() const {
  return payload_as<Gabor>(payload_, "gabor").window;
}
template <Field S>
const Matrix<S>& StructuredOperator<S>::factor_matrix() const {
  return payload_as<Projector>(payload_, "projector").factor;
}
template <Field S>
const std::vector<Index>& StructuredOperator<S>::indices() const {
  return payload_as<Subsampler>(payload_, "subsampler").indices;
}
template <Field S>
const StructuredOperator<S>& StructuredOperator<S>::inner() const {
  return *payload_as<Scaled>(payload_, "scaled").inner;
}
template <Field S>
S StructuredOperator<S>::scale_factor() const {
  return payload_as<Scaled>(payload_, "scaled").factor;
}

std::vector<ComplexVector> gabor_system(const ComplexVector& window) {
  const Index m = window.size();
  if (m == 0 || window.squaredNorm() == 0.0) throw PreconditionError("gabor_system: window must be non-zero");
  std::vector<ComplexVector> out;
  out.reserve(static_cast<size_t>(m * m));
  for (Index l = 0; l < m; ++l) {
    for (Index k = 0; k < m; ++k) {
      ComplexVector v(m);
      for (Index i = 0; i < m; ++i) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(l * i % m) / static_cast<double>(m);
        v(i) = std::polar(1.0, phase) * window((i - k + m) % m);
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

template <Field S>
SolveResult<S> weighted_frame_solve(std::span<const double> weights, std::span<const StructuredOperator<S>> elements,
                                    const Vector<S>& y, const SolverOptions& options) {
  if (weights.size() != elements.size()) throw DimensionError("weighted_frame_solve: one weight per element");
  if (elements.empty()) throw PreconditionError("weighted_frame_solve: no elements");
  const Index d = elements.front().rows();
  require_size(y.size(), d, "weighted_frame_solve");

  auto apply_a = [&](const Vector<S>& v) {
    Vector<S> out = Vector<S>::Zero(d);
    for (size_t j = 0; j < elements.size(); ++j) {
      out += (weights[j] * weights[j]) * elements[j].apply(elements[j].adjoint_apply(v));
    }
    return out;
  };

  SolveResult<S> result;
  result.solution = Vector<S>::Zero(d);
  const double y_norm = y.norm();
  if (y_norm == 0.0) {
    result.converged = true;
    return result;
  }
  const Index cap = options.max_iter > 0 ? options.max_iter : 10 * d;

  Vector<S> z = Vector<S>::Zero(d);
  Vector<S> r = y;
  Vector<S> p = r;
  double rr = r.squaredNorm();
  Index it = 0;
  double rel = 1.0;
  while (it < cap) {
    const Vector<S> ap = apply_a(p);
    const double pap = std::real(p.dot(ap));
    if (!(pap > 0.0)) break;
    const double step = rr / pap;
    z += step * p;
    r -= step * ap;
    ++it;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= options.tol * y_norm) {
      // confirm against the true residual before accepting
      r = y - apply_a(z);
      rel = r.norm() / y_norm;
      if (rel <= options.tol) break;
      rr = r.squaredNorm();
      p = r;
      continue;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  rel = (y - apply_a(z)).norm() / y_norm;
  result.solution = std::move(z);
  result.iterations = it;
  result.relative_residual = rel;
  result.converged = rel <= options.tol;
  return result;
}

template <Field S>
Vector<S> gamma_apply(std::span<const double> weights, std::span<const StructuredOperator<S>> elements,
                      const Vector<S>& y, const SolverOptions& options) {
  SolveResult<S> result = weighted_frame_solve<S>(weights, elements, y, options);
  if (!result.converged) {
    throw ConvergenceError("gamma_apply: solver stopped at relative residual " +
                               std::to_string(result.relative_residual) + " after " +
                               std::to_string(result.iterations) + " iterations",
                           result.relative_residual);
  }
  return std::move(result.solution);
}

template class StructuredOperator<double>;
template class StructuredOperator<Complex>;
template SolveResult<double> weighted_frame_solve<double>(std::span<const double>,
                                                          std::span<const StructuredOperator<double>>,
                                                          const Vector<double>&, const SolverOptions&);
template SolveResult<Complex> weighted_frame_solve<Complex>(std::span<const double>,
                                                            std::span<const StructuredOperator<Complex>>,
                                                            const Vector<Complex>&, const SolverOptions&);
template Vector<double> gamma_apply<double>(std::span<const double>, std::span<const StructuredOperator<double>>,
                                            const Vector<double>&, const SolverOptions&);
template Vector<Complex> gamma_apply<Complex>(std::span<const double>, std::span<const StructuredOperator<Complex>>,
                                              const Vector<Complex>&, const SolverOptions&);

}  // namespace frametight
