#include "frametight/filterbank.hpp"

#include <cmath>
#include <limits>

#include "frametight/errors.hpp"
#include "frametight/parallel.hpp"
#include "frametight/random.hpp"

namespace frametight {

const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::preconditioned_symmetric: return "preconditioned_symmetric";
    case Scheme::preconditioned_post: return "preconditioned_post";
    case Scheme::canonical_dual_synthesis: return "canonical_dual_synthesis";
    case Scheme::canonical_dual_analysis: return "canonical_dual_analysis";
    case Scheme::canonical_tight: return "canonical_tight";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : kAllSchemes) {
    if (name == to_string(s)) return s;
  }
  throw ParseError("unknown scheme '" + name + "'");
}

bool needs_tightening(Scheme s) noexcept {
  return s == Scheme::preconditioned_symmetric || s == Scheme::preconditioned_post;
}

template <Field S>
Vector<S> soft_threshold(const Vector<S>& c, double lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("soft_threshold: lambda must be >= 0");
  Vector<S> out(c.size());
  for (Index i = 0; i < c.size(); ++i) {
    const double mag = std::abs(c(i));
    if constexpr (is_complex_v<S>) {
      out(i) = mag > lambda ? c(i) * (1.0 - lambda / mag) : S(0);
    } else {
      out(i) = mag > lambda ? std::copysign(mag - lambda, c(i)) : 0.0;
    }
  }
  return out;
}

template <Field S>
Processor<S> identity_processor() {
  return [](Index, const Vector<S>& c) { return c; };
}

template <Field S>
Processor<S> soft_threshold_processor(double lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("soft_threshold: lambda must be >= 0");
  return [lambda](Index, const Vector<S>& c) { return soft_threshold<S>(c, lambda); };
}

template <Field S>
Pipeline<S>::Pipeline(Scheme scheme, GFrame<S> frame, const TightenResult<S>* tightening, SolverOptions solver)
    : scheme_(scheme), frame_(std::move(frame)), solver_(solver) {
  const Index n = frame_.size();
  const Index d = frame_.ambient_dim();
  const double ratio = static_cast<double>(d) / static_cast<double>(n);
  norms_.assign(static_cast<size_t>(n), 1.0);
  weights_.assign(static_cast<size_t>(n), 1.0);

  if (needs_tightening(scheme_)) {
    if (tightening == nullptr) {
      throw PreconditionError(std::string(to_string(scheme_)) + " needs a tightening result");
    }
    if (!tightening->converged() || !tightening->gamma) {
      throw PreconditionError(std::string(to_string(scheme_)) + " needs a converged tightening");
    }
    if (static_cast<Index>(tightening->weights.size()) != n || tightening->gamma->dim() != d) {
      throw DimensionError("tightening result does not belong to this frame");
    }
    // ||Gamma^{1/2} T_j||^2 = trace(T_j^H Gamma T_j) = d / (n c_j^2)
    for (Index j = 0; j < n; ++j) {
      const double c = tightening->weights[static_cast<size_t>(j)];
      norms_[static_cast<size_t>(j)] = std::sqrt(ratio) / c;
    }
    if (scheme_ == Scheme::preconditioned_symmetric) {
      instrumentation::record_dense_materialization();
      left_ = pd_power(*tightening->gamma, 0.5).matrix() * std::sqrt(ratio);
    } else {
      weights_ = tightening->weights;
    }
  } else if (scheme_ == Scheme::canonical_tight) {
    instrumentation::record_dense_materialization();
    left_ = pd_power(frame_operator_pd(frame_), -0.5).matrix();
  } else if (!is_frame(frame_)) {
    throw NotAFrameError("canonical dual pipeline on a non-frame", 0.0);
  }
}

template <Field S>
Vector<S> Pipeline<S>::solve(const Vector<S>& y) const {
  return gamma_apply<S>(weights_, frame_.elements(), y, solver_);
}

template <Field S>
Vector<S> Pipeline<S>::channels(const Vector<S>& u, const Processor<S>& processor) const {
  Vector<S> out = Vector<S>::Zero(frame_.ambient_dim());
  for (Index j = 0; j < frame_.size(); ++j) {
    const double norm = norms_[static_cast<size_t>(j)];
    const auto& t = frame_[j];
    Vector<S> c = t.adjoint_apply(u) / norm;
    if (processor) c = processor(j, c);
    out += t.apply(c) / norm;
  }
  return out;
}

template <Field S>
Vector<S> Pipeline<S>::run(const Vector<S>& x, const Processor<S>& processor) const {
  if (x.size() != frame_.ambient_dim()) throw DimensionError("pipeline: input length must equal d");
  const double ratio = static_cast<double>(frame_.ambient_dim()) / static_cast<double>(frame_.size());
  switch (scheme_) {
    case Scheme::preconditioned_symmetric:
    case Scheme::canonical_tight:
      return left_ * channels(left_ * x, processor);
    case Scheme::preconditioned_post:
      return solve(channels(x, processor)) * ratio;
    case Scheme::canonical_dual_synthesis:
      return solve(channels(x, processor));
    case Scheme::canonical_dual_analysis:
      return channels(solve(x), processor);
  }
  throw PreconditionError("unknown scheme");
}

template <Field S>
Vector<S> run_pipeline(const PipelineSpec<S>& spec, const Vector<S>& x) {
  if (spec.frame == nullptr) throw PreconditionError("run_pipeline: no frame");
  const Pipeline<S> pipeline(spec.scheme, *spec.frame, spec.tightening);
  return pipeline.run(x, spec.processor);
}

double noise_sigma(double clean_norm, Index total_length, double snr) {
  if (!(snr > 0.0)) throw PreconditionError("snr must be positive");
  if (std::isinf(snr)) return 0.0;
  return clean_norm / (snr * std::sqrt(static_cast<double>(total_length)));
}

template <Field S>
std::vector<Vector<S>> add_noise(const std::vector<Vector<S>>& clean, double snr, std::uint64_t seed) {
  double energy = 0.0;
  Index length = 0;
  for (const auto& v : clean) {
    energy += v.squaredNorm();
    length += v.size();
  }
  const double sigma = noise_sigma(std::sqrt(energy), std::max<Index>(length, 1), snr);
  std::vector<Vector<S>> out = clean;
  if (sigma == 0.0) return out;
  for (size_t t = 0; t < out.size(); ++t) {
    Rng rng(seed, t);
    for (Index i = 0; i < out[t].size(); ++i) out[t](i) += sigma * rng.gaussian<S>();
  }
  return out;
}

template <Field S>
std::vector<DenoiseReport> denoise_experiment(const GFrame<S>& frame, const std::vector<Vector<S>>& clean,
                                              const DenoiseOptions& options) {
  if (clean.empty()) throw PreconditionError("denoise: empty signal");
  if (options.lambda_grid.empty()) throw PreconditionError("denoise: empty threshold grid");
  Index length = 0;
  for (const auto& v : clean) {
    if (v.size() != frame.ambient_dim()) throw DimensionError("denoise: tile length must equal the frame dimension");
    length += v.size();
  }

  std::optional<TightenResult<S>> tightening;
  for (Scheme s : options.schemes) {
    if (needs_tightening(s)) {
      tightening = tighten(frame);
      break;
    }
  }

  std::vector<DenoiseReport> reports;
  for (size_t si = 0; si < options.snr_list.size(); ++si) {
    const double snr = options.snr_list[si];
    const auto noisy = add_noise(clean, snr, derive_seed(options.seed, si));
    for (Scheme scheme : options.schemes) {
      DenoiseReport report;
      report.scheme = scheme;
      report.snr = snr;
      try {
        const Pipeline<S> pipeline(scheme, frame, tightening ? &*tightening : nullptr);
        const auto& grid = options.lambda_grid;
        std::vector<double> rmse(grid.size());
        parallel_for(static_cast<Index>(grid.size()), options.threads, [&](Index g) {
          const auto proc = soft_threshold_processor<S>(grid[static_cast<size_t>(g)]);
          double err = 0.0;
          for (size_t t = 0; t < noisy.size(); ++t) err += (pipeline.run(noisy[t], proc) - clean[t]).squaredNorm();
          rmse[static_cast<size_t>(g)] = std::sqrt(err / static_cast<double>(length));
        });
        report.rmse = std::numeric_limits<double>::infinity();
        for (size_t g = 0; g < grid.size(); ++g) {
          report.threshold_sweep.emplace_back(grid[g], rmse[g]);
          if (rmse[g] < report.rmse) {
            report.rmse = rmse[g];
            report.best_threshold = grid[g];
          }
        }
      } catch (const Error& e) {
        report.ok = false;
        report.error = e.what();
        if (tightening && !tightening->converged()) {
          report.error += std::string(" (tightening status: ") + to_string(tightening->status) + ")";
        }
      }
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

#define FRAMETIGHT_INSTANTIATE_FILTERBANK(S)                                                                 \
  template Vector<S> soft_threshold<S>(const Vector<S>&, double);                                            \
  template Processor<S> identity_processor<S>();                                                              \
  template Processor<S> soft_threshold_processor<S>(double);                                                  \
  template class Pipeline<S>;                                                                                 \
  template Vector<S> run_pipeline<S>(const PipelineSpec<S>&, const Vector<S>&);                              \
  template std::vector<Vector<S>> add_noise<S>(const std::vector<Vector<S>>&, double, std::uint64_t);        \
  template std::vector<DenoiseReport> denoise_experiment<S>(const GFrame<S>&, const std::vector<Vector<S>>&, \
                                                            const DenoiseOptions&);

FRAMETIGHT_INSTANTIATE_FILTERBANK(double)
FRAMETIGHT_INSTANTIATE_FILTERBANK(Complex)

}  // namespace frametight
