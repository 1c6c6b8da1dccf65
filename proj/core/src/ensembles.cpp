#include "frametight/ensembles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "frametight/errors.hpp"
#include "frametight/parallel.hpp"
#include "frametight/random.hpp"

namespace frametight {

const char* to_string(EnsembleKind k) noexcept {
  switch (k) {
    case EnsembleKind::gaussian_iid: return "gaussian_iid";
    case EnsembleKind::uniform_sphere: return "uniform_sphere";
    case EnsembleKind::haar_subspace: return "haar_subspace";
    case EnsembleKind::gabor_random_window: return "gabor_random_window";
    case EnsembleKind::circulant_block_random: return "circulant_block_random";
    case EnsembleKind::subsampler_random: return "subsampler_random";
    case EnsembleKind::elliptical_gaussian: return "elliptical_gaussian";
  }
  return "unknown";
}

const char* to_string(WindowDist w) noexcept {
  switch (w) {
    case WindowDist::rademacher: return "rademacher";
    case WindowDist::steinhaus: return "steinhaus";
    case WindowDist::gaussian: return "gaussian";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
  for (auto k : {EnsembleKind::gaussian_iid, EnsembleKind::uniform_sphere, EnsembleKind::haar_subspace,
                 EnsembleKind::gabor_random_window, EnsembleKind::circulant_block_random,
                 EnsembleKind::subsampler_random, EnsembleKind::elliptical_gaussian}) {
    if (name == to_string(k)) return k;
  }
  throw ParseError("unknown ensemble '" + name + "'");
}

WindowDist parse_window_dist(const std::string& name) {
  for (auto w : {WindowDist::rademacher, WindowDist::steinhaus, WindowDist::gaussian}) {
    if (name == to_string(w)) return w;
  }
  throw ParseError("unknown window distribution '" + name + "'");
}

void validate(const EnsembleSpec& spec) {
  if (spec.d < 1 || spec.r < 1 || spec.n < 1) throw PreconditionError("ensemble: d, r, n must be positive");
  switch (spec.kind) {
    case EnsembleKind::uniform_sphere:
      if (spec.r != 1) throw PreconditionError("uniform_sphere: r must be 1");
      break;
    case EnsembleKind::haar_subspace:
      if (spec.r >= spec.d) throw PreconditionError("haar_subspace: r must be < d");
      break;
    case EnsembleKind::gabor_random_window:
      if (spec.d != spec.r * spec.r) throw PreconditionError("gabor_random_window: d must equal r^2");
      break;
    case EnsembleKind::circulant_block_random:
      if (spec.r > spec.d) throw PreconditionError("circulant_block_random: r must be <= d");
      break;
    case EnsembleKind::elliptical_gaussian:
      if (spec.sigma.size() != 0) {
        if (spec.sigma.rows() != spec.d || spec.sigma.cols() != spec.d) {
          throw DimensionError("elliptical_gaussian: sigma must be d x d");
        }
        HermitianPD<double> check(spec.sigma);
        (void)check;
      }
      break;
    default:
      break;
  }
}

namespace {

template <Field S>
S window_entry(Rng& rng, WindowDist dist) {
  switch (dist) {
    case WindowDist::rademacher:
      return (rng.bits() >> 63) != 0 ? S(1) : S(-1);
    case WindowDist::steinhaus:
      if constexpr (is_complex_v<S>) {
        return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform01());
      } else {
        throw PreconditionError("steinhaus windows need the complex field");
      }
    case WindowDist::gaussian:
      return rng.gaussian<S>();
  }
  return S(0);
}

template <Field S>
Vector<S> window_vector(Rng& rng, WindowDist dist, Index length) {
  Vector<S> v(length);
  for (Index i = 0; i < length; ++i) v(i) = window_entry<S>(rng, dist);
  return v;
}

// Thin Q of a Gaussian matrix with the signs fixed so that R has a positive
// diagonal; this makes range(Q) Haar distributed and Q itself deterministic.
template <Field S>
Matrix<S> haar_factor(Rng& rng, Index d, Index r) {
  const Matrix<S> g = rng.gaussian_matrix<S>(d, r);
  Eigen::HouseholderQR<Matrix<S>> qr(g);
  Matrix<S> q = qr.householderQ() * Matrix<S>::Identity(d, r);
  const Matrix<S> rr = qr.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  for (Index c = 0; c < r; ++c) {
    const S diag = rr(c, c);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(c) *= diag / mag;
  }
  return q;
}

template <Field S>
StructuredOperator<S> draw_element(const EnsembleSpec& spec, const Matrix<S>& sigma_half, Rng& rng) {
  using Op = StructuredOperator<S>;
  switch (spec.kind) {
    case EnsembleKind::gaussian_iid:
      return Op::dense(rng.gaussian_matrix<S>(spec.d, spec.r));
    case EnsembleKind::uniform_sphere: {
      Vector<S> v = rng.gaussian_matrix<S>(spec.d, 1);
      double norm = v.norm();
      while (norm == 0.0) {
        v = rng.gaussian_matrix<S>(spec.d, 1);
        norm = v.norm();
      }
      return Op::dense(Matrix<S>(v / norm));
    }
    case EnsembleKind::haar_subspace:
      return Op::projector(haar_factor<S>(rng, spec.d, spec.r));
    case EnsembleKind::gabor_random_window:
      return Op::gabor(window_vector<S>(rng, spec.window, spec.r));
    case EnsembleKind::circulant_block_random: {
      Vector<S> g = window_vector<S>(rng, spec.window, spec.d);
      while (g.squaredNorm() == 0.0) g = window_vector<S>(rng, spec.window, spec.d);
      return Op::circulant(std::move(g), spec.r);
    }
    case EnsembleKind::subsampler_random: {
      std::vector<Index> idx(static_cast<size_t>(spec.r));
      for (auto& i : idx) i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.d)));
      return Op::subsampler(spec.d, std::move(idx));
    }
    case EnsembleKind::elliptical_gaussian:
      return Op::dense(sigma_half * rng.gaussian_matrix<S>(spec.d, spec.r));
  }
  throw PreconditionError("unknown ensemble kind");
}

}  // namespace

template <Field S>
GFrame<S> sample(const EnsembleSpec& spec) {
  validate(spec);
  if (spec.kind == EnsembleKind::gabor_random_window && !is_complex_v<S>) {
    throw PreconditionError("gabor_random_window needs the complex field");
  }
  Matrix<S> sigma_half;
  if (spec.kind == EnsembleKind::elliptical_gaussian) {
    const Eigen::MatrixXd sigma = spec.sigma.size() == 0 ? Eigen::MatrixXd::Identity(spec.d, spec.d) : spec.sigma;
    sigma_half = pd_power(HermitianPD<double>(sigma), 0.5).matrix().template cast<S>();
  }
  const Index ambient = spec.d;
  std::vector<StructuredOperator<S>> elements;
  elements.reserve(static_cast<size_t>(spec.n));
  for (Index j = 0; j < spec.n; ++j) {
    Rng rng(spec.seed, static_cast<std::uint64_t>(j));
    elements.push_back(draw_element<S>(spec, sigma_half, rng));
  }
  return GFrame<S>(ambient, std::move(elements));
}

template <Field S>
MomentBounds order_p_tightness(const EnsembleSpec& spec, int p, Index samples, Index directions) {
  if (p < 1) throw PreconditionError("order_p_tightness: p must be >= 1");
  if (samples < 1 || directions < 1) throw PreconditionError("order_p_tightness: need samples and directions");
  EnsembleSpec draw = spec;
  draw.n = samples;
  const GFrame<S> frame = sample<S>(draw);
  Rng rng(spec.seed, 0xd1ec7105ULL);
  MomentBounds out{std::numeric_limits<double>::infinity(), 0.0};
  for (Index k = 0; k < directions; ++k) {
    Matrix<S> x = rng.gaussian_matrix<S>(spec.d, 1);
    const Vector<S> u = x.col(0) / x.norm();
    double mean = 0.0;
    for (const auto& t : frame.elements()) mean += std::pow(t.adjoint_apply(u).squaredNorm(), p);
    mean /= static_cast<double>(samples);
    out.lower = std::min(out.lower, mean);
    out.upper = std::max(out.upper, mean);
  }
  return out;
}

double chernoff_bound(Index d, Index n, double eps) {
  if (d < 1 || n < 1 || !(eps > 0.0)) throw PreconditionError("chernoff_bound: need d, n >= 1 and eps > 0");
  const double a = (1.0 + eps) * std::log1p(eps) - eps;
  return 2.0 * static_cast<double>(d) * std::exp(-(static_cast<double>(n) / static_cast<double>(d)) * a);
}

template <Field S>
std::vector<ConcentrationRow> concentration_experiment(const EnsembleSpec& spec, const std::vector<Index>& n_grid,
                                                       double eps, Index trials, int threads) {
  switch (spec.kind) {
    case EnsembleKind::haar_subspace:
    case EnsembleKind::gabor_random_window:
    case EnsembleKind::uniform_sphere:
    case EnsembleKind::subsampler_random:
      break;
    default:
      throw PreconditionError(std::string("concentration_experiment: ensemble ") + to_string(spec.kind) +
                              " does not have constant ||T||_HS");
  }
  if (!(eps > 0.0) || trials < 1) throw PreconditionError("concentration_experiment: need eps > 0 and trials >= 1");
  const Index d = spec.d;
  std::vector<ConcentrationRow> rows;
  for (Index n : n_grid) {
    if (n < 1) throw PreconditionError("concentration_experiment: n must be positive");
    std::vector<char> failed(static_cast<size_t>(trials), 0);
    parallel_for(trials, threads, [&](Index t) {
      EnsembleSpec draw = spec;
      draw.n = n;
      draw.seed = derive_seed(spec.seed, (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(t));
      const GFrame<S> frame = sample<S>(draw);
      const double hs = frame[0].hs_norm_squared();
      for (const auto& e : frame.elements()) {
        if (std::abs(e.hs_norm_squared() - hs) > 1e-10 * hs) {
          throw PreconditionError("concentration_experiment: elements have different HS norms");
        }
      }
      const Matrix<S> s = frame_operator(frame) * (static_cast<double>(d) / (static_cast<double>(n) * hs));
      const double dev = hermitian_norm<S>(Matrix<S>::Identity(d, d) - s);
      failed[static_cast<size_t>(t)] = dev >= eps ? 1 : 0;
    });
    ConcentrationRow row;
    row.n = n;
    row.trials = trials;
    for (char f : failed) row.failures += f;
    row.rate = static_cast<double>(row.failures) / static_cast<double>(trials);
    row.standard_error = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(trials));
    row.bound = chernoff_bound(d, n, eps);
    rows.push_back(row);
  }
  return rows;
}

#define FRAMETIGHT_INSTANTIATE_ENSEMBLES(S)                                                                        \
  template GFrame<S> sample<S>(const EnsembleSpec&);                                                               \
  template MomentBounds order_p_tightness<S>(const EnsembleSpec&, int, Index, Index);                              \
  template std::vector<ConcentrationRow> concentration_experiment<S>(const EnsembleSpec&, const std::vector<Index>&, \
                                                                      double, Index, int);

FRAMETIGHT_INSTANTIATE_ENSEMBLES(double)
FRAMETIGHT_INSTANTIATE_ENSEMBLES(Complex)

}  // namespace frametight
