#pragma once

// Analysis -> channel processing -> synthesis pipelines. The two
// preconditioned schemes use the tightened frame; the three reference
// schemes use the canonical dual (on either side) or the canonical tight frame.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frametight/gframe.hpp"
#include "frametight/operators.hpp"
#include "frametight/tyler.hpp"

namespace frametight {

enum class Scheme {
  preconditioned_symmetric,
  preconditioned_post,
  canonical_dual_synthesis,
  canonical_dual_analysis,
  canonical_tight,
};

inline constexpr Scheme kAllSchemes[] = {Scheme::preconditioned_symmetric, Scheme::preconditioned_post,
                                         Scheme::canonical_dual_synthesis, Scheme::canonical_dual_analysis,
                                         Scheme::canonical_tight};

const char* to_string(Scheme s) noexcept;
Scheme parse_scheme(const std::string& name);
bool needs_tightening(Scheme s) noexcept;

/// Channel-wise map applied to the coefficients of element j.
template <Field S>
using Processor = std::function<Vector<S>(Index j, const Vector<S>& coeffs)>;

/// Real: sign(c) max(|c| - lambda, 0). Complex: c max(1 - lambda/|c|, 0).
template <Field S>
Vector<S> soft_threshold(const Vector<S>& c, double lambda);

template <Field S>
Processor<S> identity_processor();

template <Field S>
Processor<S> soft_threshold_processor(double lambda);

template <Field S>
class Pipeline {
 public:
  /// Preconditioned schemes need a converged tightening of the same frame.
  Pipeline(Scheme scheme, GFrame<S> frame, const TightenResult<S>* tightening = nullptr,
           SolverOptions solver = {1e-12, 0});

  Scheme scheme() const noexcept { return scheme_; }
  const GFrame<S>& frame() const noexcept { return frame_; }

  Vector<S> run(const Vector<S>& x, const Processor<S>& processor) const;

  /// Channel normalizations ||Gamma^{1/2} T_j||_HS (ones for the reference schemes).
  const std::vector<double>& channel_norms() const noexcept { return norms_; }

 private:
  Vector<S> solve(const Vector<S>& y) const;
  Vector<S> channels(const Vector<S>& u, const Processor<S>& processor) const;

  Scheme scheme_;
  GFrame<S> frame_;
  SolverOptions solver_;
  std::vector<double> norms_;
  std::vector<double> weights_;  // c_j for preconditioned_post, ones for the CG schemes
  Matrix<S> left_;               // sqrt(d/n) Gamma^{1/2} or S^{-1/2}, when used
};

template <Field S>
struct PipelineSpec {
  Scheme scheme = Scheme::canonical_dual_synthesis;
  const GFrame<S>* frame = nullptr;
  const TightenResult<S>* tightening = nullptr;
  Processor<S> processor;  // empty means identity
};

template <Field S>
Vector<S> run_pipeline(const PipelineSpec<S>& spec, const Vector<S>& x);

struct DenoiseReport {
  Scheme scheme = Scheme::canonical_dual_synthesis;
  double snr = 0.0;
  double best_threshold = 0.0;
  double rmse = 0.0;
  std::vector<std::pair<double, double>> threshold_sweep;  // (lambda, rmse)
  bool ok = true;
  std::string error;
};

struct DenoiseOptions {
  std::vector<double> snr_list{10.0};    // infinity means noiseless
  std::vector<double> lambda_grid{0.0};
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::uint64_t seed = 0;
  int threads = 1;
};

/// sigma = ||clean|| / (snr sqrt(total length)) over all tiles together.
double noise_sigma(double clean_norm, Index total_length, double snr);

/// The signal is a list of length-d tiles; rmse is taken over all tiles.
template <Field S>
std::vector<DenoiseReport> denoise_experiment(const GFrame<S>& frame, const std::vector<Vector<S>>& clean,
                                              const DenoiseOptions& options);

/// Seeded additive Gaussian noise at the given snr (same convention as above).
template <Field S>
std::vector<Vector<S>> add_noise(const std::vector<Vector<S>>& clean, double snr, std::uint64_t seed);

}  // namespace frametight
