#include "frametight/linalg.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

#include "frametight/errors.hpp"

namespace frametight {

const char* to_string(FieldKind kind) noexcept {
  return kind == FieldKind::complex ? "complex" : "real";
}

FieldKind parse_field_kind(const std::string& name) {
  if (name == "real") return FieldKind::real;
  if (name == "complex") return FieldKind::complex;
  throw ParseError("unknown field '" + name + "' (expected real or complex)");
}

template <Field S>
Matrix<S> hermitian_part(const Matrix<S>& a) {
  return (a + a.adjoint()) * 0.5;
}

template <Field S>
bool is_hermitian(const Matrix<S>& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

namespace {

template <Field S>
void require_hermitian(const Matrix<S>& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw PreconditionError(std::string(who) + ": matrix must be square and non-empty");
  }
  if (!a.allFinite()) throw PreconditionError(std::string(who) + ": matrix has non-finite entries");
  if (!is_hermitian(a)) throw PreconditionError(std::string(who) + ": matrix is not Hermitian");
}

}  // namespace

template <Field S>
EigenDecomposition<S> herm_eig(const Matrix<S>& a) {
  require_hermitian(a, "herm_eig");
  Eigen::SelfAdjointEigenSolver<Matrix<S>> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) throw Error("herm_eig: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <Field S>
RealVector herm_eigenvalues(const Matrix<S>& a) {
  require_hermitian(a, "herm_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Matrix<S>> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("herm_eigenvalues: eigensolver did not converge");
  return solver.eigenvalues();
}

template <Field S>
double hermitian_norm(const Matrix<S>& a) {
  return herm_eigenvalues(a).cwiseAbs().maxCoeff();
}

template <Field S>
Index psd_rank(const Matrix<S>& a, double rel_tol) {
  const RealVector values = herm_eigenvalues(a);
  const double top = values.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return (values.array() > rel_tol * top).count();
}

template <Field S>
HermitianPD<S>::HermitianPD(const Matrix<S>& a) : matrix_(), eig_() {
  eig_ = herm_eig(a);
  if (!(eig_.values(0) > 0.0)) {
    throw SingularityError("HermitianPD: matrix is not positive definite", eig_.values(0));
  }
  matrix_ = hermitian_part(a);
}

template <Field S>
HermitianPD<S>::HermitianPD(Matrix<S> matrix, EigenDecomposition<S> eig)
    : matrix_(std::move(matrix)), eig_(std::move(eig)) {}

template <Field S>
HermitianPD<S> HermitianPD<S>::identity(Index dim, double scale) {
  if (dim <= 0 || !(scale > 0.0)) throw PreconditionError("HermitianPD::identity: bad arguments");
  EigenDecomposition<S> eig{RealVector::Constant(dim, scale), Matrix<S>::Identity(dim, dim)};
  return HermitianPD(Matrix<S>::Identity(dim, dim) * S(scale), std::move(eig));
}

template <Field S>
double HermitianPD<S>::trace() const {
  return std::real(matrix_.trace());
}

template <Field S>
HermitianPD<S> HermitianPD<S>::scaled(double factor) const {
  if (!(factor > 0.0)) throw PreconditionError("HermitianPD::scaled: factor must be positive");
  EigenDecomposition<S> eig{eig_.values * factor, eig_.vectors};
  return HermitianPD(matrix_ * S(factor), std::move(eig));
}

template <Field S>
HermitianPD<S> pd_power(const HermitianPD<S>& a, double exponent) {
  if (exponent != 0.5 && exponent != -0.5 && exponent != -1.0) {
    throw PreconditionError("pd_power: exponent must be one of 1/2, -1/2, -1");
  }
  if (a.min_eigenvalue() <= kSingularRatio * a.max_eigenvalue()) {
    throw SingularityError("pd_power: matrix is numerically singular", a.min_eigenvalue());
  }
  Matrix<S> result = a.spectral_map([exponent](double v) { return std::pow(v, exponent); });
  return HermitianPD<S>(hermitian_part(result));
}

template <Field S>
double hs_norm(const Matrix<S>& t) {
  return t.norm();
}

template <Field S>
double trace_quadratic(const Matrix<S>& t, const HermitianPD<S>& g) {
  if (t.rows() != g.dim()) throw DimensionError("trace_quadratic: T rows must match G");
  // trace(T^H G T) = sum_ij conj(T_ij) (G T)_ij
  return std::real(t.cwiseProduct((g.matrix() * t).conjugate()).sum());
}

template <Field S>
double trace_product(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) throw DimensionError("trace_product: shape mismatch");
  // trace(AB) = sum_ij A_ij B_ji
  return std::real(a.cwiseProduct(b.transpose()).sum());
}

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Index n, bool inverse) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, inverse);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<size_t>(n)));
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch,
                                      inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw Error("fft: FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<Index, bool>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_inplace(Complex* data, Index length, bool inverse) {
  if (length <= 0) throw PreconditionError("fft: length must be positive");
  if (length == 1) return;
  fftw_plan plan = plan_cache().get(length, inverse);
  auto* buffer = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buffer, buffer);
}

ComplexVector dft(const ComplexVector& x, bool inverse) {
  if (x.size() == 0) throw PreconditionError("dft: empty input");
  ComplexVector out = x;
  fft_inplace(out.data(), out.size(), inverse);
  out /= std::sqrt(static_cast<double>(out.size()));
  return out;
}

#define FRAMETIGHT_INSTANTIATE_LINALG(S)                                       \
  template Matrix<S> hermitian_part<S>(const Matrix<S>&);                      \
  template bool is_hermitian<S>(const Matrix<S>&, double);                     \
  template EigenDecomposition<S> herm_eig<S>(const Matrix<S>&);                \
  template RealVector herm_eigenvalues<S>(const Matrix<S>&);                   \
  template double hermitian_norm<S>(const Matrix<S>&);                         \
  template Index psd_rank<S>(const Matrix<S>&, double);                        \
  template class HermitianPD<S>;                                               \
  template HermitianPD<S> pd_power<S>(const HermitianPD<S>&, double);          \
  template double hs_norm<S>(const Matrix<S>&);                                \
  template double trace_quadratic<S>(const Matrix<S>&, const HermitianPD<S>&); \
  template double trace_product<S>(const Matrix<S>&, const Matrix<S>&);

FRAMETIGHT_INSTANTIATE_LINALG(double)
FRAMETIGHT_INSTANTIATE_LINALG(Complex)

}  // namespace frametight
