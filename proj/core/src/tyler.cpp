#include "frametight/tyler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frametight/errors.hpp"

namespace frametight {

const char* to_string(TightenStatus s) noexcept {
  switch (s) {
    case TightenStatus::converged: return "converged";
    case TightenStatus::max_iterations: return "max_iterations";
    case TightenStatus::diverged: return "diverged";
    case TightenStatus::not_a_frame: return "not_a_frame";
  }
  return "unknown";
}

namespace {

template <Field S>
std::vector<double> quadratic_traces(const std::vector<Matrix<S>>& grams, const Matrix<S>& gamma) {
  std::vector<double> out;
  out.reserve(grams.size());
  for (size_t j = 0; j < grams.size(); ++j) {
    const double t = trace_product<S>(gamma, grams[j]);
    if (!(t > 0.0)) {
      throw PreconditionError("degenerate weight: trace(T_j^H G T_j) = 0 for element " + std::to_string(j));
    }
    out.push_back(t);
  }
  return out;
}

// W = (d/n) sum_j P_j / t_j
template <Field S>
Matrix<S> weighted_operator(const std::vector<Matrix<S>>& grams, const std::vector<double>& traces, Index d) {
  Matrix<S> w = Matrix<S>::Zero(d, d);
  for (size_t j = 0; j < grams.size(); ++j) w += grams[j] / traces[j];
  w *= static_cast<double>(d) / static_cast<double>(grams.size());
  return hermitian_part(w);
}

template <Field S>
HermitianPD<S> normalized_inverse(const Matrix<S>& w) {
  const auto eig = herm_eig<S>(w);
  const double top = eig.values(eig.values.size() - 1);
  if (!(eig.values(0) > kSingularRatio * top)) {
    throw NotAFrameError("weighted frame operator is singular", eig.values(0));
  }
  const RealVector inv = eig.values.cwiseInverse();
  const Matrix<S> g = eig.vectors * (inv / inv.sum()).asDiagonal() * eig.vectors.adjoint();
  return HermitianPD<S>(hermitian_part(g));
}

template <Field S>
HermitianPD<S> trace_one(const HermitianPD<S>& g) {
  return g.scaled(1.0 / g.trace());
}

}  // namespace

template <Field S>
Matrix<S> m_map(const GFrame<S>& frame, const HermitianPD<S>& gamma) {
  const auto grams = frame.grams();
  const auto traces = quadratic_traces(grams, gamma.matrix());
  const Matrix<S> half = pd_power(gamma, 0.5).matrix();
  return hermitian_part<S>(half * weighted_operator(grams, traces, frame.ambient_dim()) * half);
}

template <Field S>
HermitianPD<S> tyler_step(const GFrame<S>& frame, const HermitianPD<S>& gamma) {
  const auto grams = frame.grams();
  const auto traces = quadratic_traces(grams, gamma.matrix());
  return normalized_inverse(weighted_operator(grams, traces, frame.ambient_dim()));
}

template <Field S>
HermitianPD<S> tyler_step_sqrt(const GFrame<S>& frame, const HermitianPD<S>& gamma) {
  const Matrix<S> half = pd_power(gamma, 0.5).matrix();
  HermitianPD<S> m(m_map(frame, gamma));
  const Matrix<S> m_inv = pd_power(m, -1.0).matrix();
  const double scale = trace_product<S>(gamma.matrix(), m_inv);
  return HermitianPD<S>(hermitian_part<S>(half * m_inv * half / scale));
}

template <Field S>
TightenResult<S> tighten(const GFrame<S>& frame, const TightenOptions& options,
                         const std::optional<HermitianPD<S>>& initial) {
  TightenResult<S> result;
  const Index d = frame.ambient_dim();
  if (!is_frame(frame)) {
    result.status = TightenStatus::not_a_frame;
    result.message = "element ranges do not span the ambient space";
    return result;
  }
  if (initial && initial->dim() != d) throw DimensionError("tighten: initial Gamma has the wrong size");

  const auto grams = frame.grams();
  HermitianPD<S> gamma = initial ? trace_one(*initial) : HermitianPD<S>::identity(d, 1.0 / static_cast<double>(d));

  for (Index k = 0;; ++k) {
    const auto traces = quadratic_traces(grams, gamma.matrix());
    const Matrix<S> w = weighted_operator(grams, traces, d);

    // M_k = Gamma^{1/2} W Gamma^{1/2} is similar to L^H W L for Gamma = L L^H.
    Eigen::LLT<Matrix<S>> llt(gamma.matrix());
    if (llt.info() != Eigen::Success) {
      result.status = TightenStatus::diverged;
      result.message = "Gamma lost positive definiteness";
      break;
    }
    const Matrix<S> l = llt.matrixL();
    const Matrix<S> similar = hermitian_part<S>(l.adjoint() * w * l);
    const RealVector lambda = herm_eigenvalues<S>(similar);

    IterationState<S> state;
    state.k = k;
    state.lambda_min = lambda(0);
    state.lambda_max = lambda(lambda.size() - 1);
    state.residual = std::max(std::abs(state.lambda_max - 1.0), std::abs(1.0 - state.lambda_min));
    state.gamma_trace = gamma.trace();
    state.m_trace = lambda.sum();
    if (options.record_matrices) {
      state.gamma = gamma.matrix();
      state.m = m_map(frame, gamma);
    }
    result.log.push_back(std::move(state));
    result.iterations = k;
    result.residual = result.log.back().residual;

    if (result.residual <= options.tol) {
      result.status = TightenStatus::converged;
      break;
    }
    if (k >= options.max_iterations) {
      result.status = TightenStatus::max_iterations;
      break;
    }
    if (options.stall_window > 0 && k >= options.stall_window) {
      const double before = result.log[static_cast<size_t>(k - options.stall_window)].residual;
      if (before - result.residual < options.stall_decrease) {
        result.status = TightenStatus::diverged;
        result.message = "residual stalled over the last " + std::to_string(options.stall_window) + " iterations";
        break;
      }
    }

    try {
      HermitianPD<S> next = normalized_inverse(w);
      if (options.cross_check) {
        const Matrix<S> other = tyler_step_sqrt(frame, gamma).matrix();
        const double gap = (other - next.matrix()).norm() / next.matrix().norm();
        result.cross_check_discrepancy = std::max(result.cross_check_discrepancy, gap);
      }
      gamma = std::move(next);
    } catch (const SingularityError& e) {
      result.status = TightenStatus::diverged;
      result.message = std::string("Gamma became numerically singular: ") + e.what();
      break;
    }
  }

  result.gamma = gamma;
  result.weights = weights_from(frame, gamma);
  if (gamma.min_eigenvalue() > kSingularRatio * gamma.max_eigenvalue()) {
    result.tight_frame = tight_frame_from(frame, gamma);
  }
  return result;
}

template <Field S>
GFrame<S> tight_frame_from(const GFrame<S>& frame, const HermitianPD<S>& gamma) {
  const Matrix<S> half = pd_power(gamma, 0.5).matrix();
  std::vector<Matrix<S>> out;
  out.reserve(static_cast<size_t>(frame.size()));
  for (const auto& t : frame.elements()) {
    Matrix<S> r = half * t.to_dense();
    r /= r.norm();
    out.push_back(std::move(r));
  }
  return GFrame<S>::from_dense(out);
}

template <Field S>
std::vector<double> weights_from(const GFrame<S>& frame, const HermitianPD<S>& gamma) {
  const auto traces = quadratic_traces(frame.grams(), gamma.matrix());
  const double ratio = static_cast<double>(frame.ambient_dim()) / static_cast<double>(frame.size());
  std::vector<double> out;
  out.reserve(traces.size());
  for (double t : traces) out.push_back(std::sqrt(ratio / t));
  return out;
}

template <Field S>
double tightness_defect(const GFrame<S>& frame) {
  const Index d = frame.ambient_dim();
  const Matrix<S> s = frame_operator(frame) * (static_cast<double>(d) / frame.total_hs_squared());
  return hermitian_norm<S>(s - Matrix<S>::Identity(d, d));
}

template <Field S>
double fixed_point_residual(const GFrame<S>& frame, const HermitianPD<S>& gamma) {
  const Index d = frame.ambient_dim();
  return hermitian_norm<S>(m_map(frame, gamma) - Matrix<S>::Identity(d, d));
}

template <Field S>
bool uniqueness_check(const GFrame<S>& frame, const HermitianPD<S>& gamma_a, const HermitianPD<S>& gamma_b,
                      double tol) {
  if (fixed_point_residual(frame, gamma_a) > tol || fixed_point_residual(frame, gamma_b) > tol) {
    throw PreconditionError("uniqueness_check: both matrices must make the frame tight");
  }
  const GFrame<S> a = tight_frame_from(frame, gamma_a);
  const GFrame<S> b = tight_frame_from(frame, gamma_b);
  for (Index j = 0; j < frame.size(); ++j) {
    if ((a[j].dense_matrix() - b[j].dense_matrix()).norm() > tol) return false;
  }
  return true;
}

#define FRAMETIGHT_INSTANTIATE_TYLER(S)                                                                      \
  template Matrix<S> m_map<S>(const GFrame<S>&, const HermitianPD<S>&);                                      \
  template HermitianPD<S> tyler_step<S>(const GFrame<S>&, const HermitianPD<S>&);                            \
  template HermitianPD<S> tyler_step_sqrt<S>(const GFrame<S>&, const HermitianPD<S>&);                       \
  template TightenResult<S> tighten<S>(const GFrame<S>&, const TightenOptions&,                              \
                                       const std::optional<HermitianPD<S>>&);                                \
  template GFrame<S> tight_frame_from<S>(const GFrame<S>&, const HermitianPD<S>&);                           \
  template std::vector<double> weights_from<S>(const GFrame<S>&, const HermitianPD<S>&);                     \
  template double tightness_defect<S>(const GFrame<S>&);                                                     \
  template double fixed_point_residual<S>(const GFrame<S>&, const HermitianPD<S>&);                          \
  template bool uniqueness_check<S>(const GFrame<S>&, const HermitianPD<S>&, const HermitianPD<S>&, double);

FRAMETIGHT_INSTANTIATE_TYLER(double)
FRAMETIGHT_INSTANTIATE_TYLER(Complex)

}  // namespace frametight
