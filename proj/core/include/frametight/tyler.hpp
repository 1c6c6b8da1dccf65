#pragma once

// Tyler-type fixed-point iteration producing a trace-one Gamma with
//   M(Gamma) = (d/n) sum_j Gamma^{1/2} T_j T_j^H Gamma^{1/2} / trace(T_j^H Gamma T_j) = I,
// so that R_j = Gamma^{1/2} T_j / ||Gamma^{1/2} T_j||_HS is a unit-norm tight frame.

#include <optional>
#include <string>
#include <vector>

#include "frametight/gframe.hpp"
#include "frametight/linalg.hpp"

namespace frametight {

enum class TightenStatus { converged, max_iterations, diverged, not_a_frame };

const char* to_string(TightenStatus s) noexcept;

struct TightenOptions {
  double tol = 1e-12;              // on ||M_k - I||_2
  Index max_iterations = 10000;
  Index stall_window = 100;
  double stall_decrease = 1e-15;   // minimum residual drop over the window
  bool record_matrices = false;    // keep Gamma_k and M_k in the log
  bool cross_check = false;        // also evaluate the square-root form of each step
};

template <Field S>
struct IterationState {
  Index k = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double residual = 0.0;
  double gamma_trace = 0.0;
  double m_trace = 0.0;
  std::optional<Matrix<S>> gamma;
  std::optional<Matrix<S>> m;
};

template <Field S>
struct TightenResult {
  TightenStatus status = TightenStatus::not_a_frame;
  Index iterations = 0;
  double residual = 0.0;
  std::optional<HermitianPD<S>> gamma;
  std::vector<double> weights;               // c_j
  std::optional<GFrame<S>> tight_frame;      // the R_j
  std::vector<IterationState<S>> log;
  double cross_check_discrepancy = 0.0;      // max relative gap between the two step forms
  std::string message;

  bool converged() const noexcept { return status == TightenStatus::converged; }
};

/// M(G). Throws PreconditionError when some trace(T_j^H G T_j) vanishes.
template <Field S>
Matrix<S> m_map(const GFrame<S>& frame, const HermitianPD<S>& gamma);

/// Gamma_{k+1} = W^{-1} / trace(W^{-1}), W = (d/n) sum_j T_j T_j^H / trace(T_j^H G T_j).
/// Throws NotAFrameError when W is singular.
template <Field S>
HermitianPD<S> tyler_step(const GFrame<S>& frame, const HermitianPD<S>& gamma);

/// Same step through G^{1/2} M(G)^{-1} G^{1/2} / trace(G M(G)^{-1}).
template <Field S>
HermitianPD<S> tyler_step_sqrt(const GFrame<S>& frame, const HermitianPD<S>& gamma);

/// Runs the iteration from Gamma_0 = I/d, or from `initial` (rescaled to trace 1).
template <Field S>
TightenResult<S> tighten(const GFrame<S>& frame, const TightenOptions& options = {},
                         const std::optional<HermitianPD<S>>& initial = std::nullopt);

/// {Gamma^{1/2} T_j / ||Gamma^{1/2} T_j||_HS}, dense.
template <Field S>
GFrame<S> tight_frame_from(const GFrame<S>& frame, const HermitianPD<S>& gamma);

/// c_j = sqrt(d / (n trace(T_j^H Gamma T_j))).
template <Field S>
std::vector<double> weights_from(const GFrame<S>& frame, const HermitianPD<S>& gamma);

/// ||(d / sum_j ||T_j||^2) S - I||_2; zero exactly for tight frames.
template <Field S>
double tightness_defect(const GFrame<S>& frame);

/// ||M(G) - I||_2
template <Field S>
double fixed_point_residual(const GFrame<S>& frame, const HermitianPD<S>& gamma);

/// Whether the normalized frames built from G_a and G_b coincide within `tol`.
/// Throws PreconditionError unless both make the frame tight within `tol`.
template <Field S>
bool uniqueness_check(const GFrame<S>& frame, const HermitianPD<S>& gamma_a, const HermitianPD<S>& gamma_b,
                      double tol = 1e-8);

}  // namespace frametight
