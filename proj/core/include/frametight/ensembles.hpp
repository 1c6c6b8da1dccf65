#pragma once

// Random generalized frames, moment probes and the matrix Chernoff
// concentration experiment.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frametight/gframe.hpp"
#include "frametight/linalg.hpp"

namespace frametight {

enum class EnsembleKind {
  gaussian_iid,
  uniform_sphere,
  haar_subspace,
  gabor_random_window,
  circulant_block_random,
  subsampler_random,
  elliptical_gaussian,
};

/// Distribution of window / generator entries.
enum class WindowDist { rademacher, steinhaus, gaussian };

const char* to_string(EnsembleKind k) noexcept;
const char* to_string(WindowDist w) noexcept;
EnsembleKind parse_ensemble_kind(const std::string& name);
WindowDist parse_window_dist(const std::string& name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::gaussian_iid;
  Index d = 2;
  Index r = 1;
  Index n = 1;
  WindowDist window = WindowDist::rademacher;
  std::uint64_t seed = 0;
  Eigen::MatrixXd sigma;  // elliptical_gaussian only; empty means identity
};

/// Throws PreconditionError for inconsistent dimensions:
///   uniform_sphere needs r = 1, haar_subspace r < d, gabor d = r^2,
///   circulant r <= d, elliptical sigma d x d positive definite.
void validate(const EnsembleSpec& spec);

/// Element j is drawn from its own stream (seed, j), so a frame is a prefix
/// of any larger frame drawn with the same seed.
template <Field S>
GFrame<S> sample(const EnsembleSpec& spec);

struct MomentBounds {
  double lower;  // min over directions of the empirical mean of ||T^H x||^{2p}
  double upper;
};

template <Field S>
MomentBounds order_p_tightness(const EnsembleSpec& spec, int p, Index samples, Index directions);

/// 2d exp(-(n/d) a_eps), a_eps = (1+eps) ln(1+eps) - eps
double chernoff_bound(Index d, Index n, double eps);

struct ConcentrationRow {
  Index n = 0;
  Index trials = 0;
  Index failures = 0;
  double rate = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
};

/// For each n: fraction of trials with ||I - sum_j (d/(nR)) T_j T_j^H||_2 >= eps,
/// where R = ||T_j||_HS^2 must be the same for every element.
template <Field S>
std::vector<ConcentrationRow> concentration_experiment(const EnsembleSpec& spec, const std::vector<Index>& n_grid,
                                                       double eps, Index trials, int threads = 1);

}  // namespace frametight
