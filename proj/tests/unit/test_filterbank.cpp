#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "frametight/errors.hpp"
#include "frametight/filterbank.hpp"
#include "frametight/random.hpp"
#include "helpers.hpp"

using namespace frametight;
using testing_support::gaussian_frame;

namespace {

GFrame<double> circulant_frame(Index d, Index k, Index n, std::uint64_t seed) {
  EnsembleSpec s;
  s.kind = EnsembleKind::circulant_block_random;
  s.d = d;
  s.r = k;
  s.n = n;
  s.window = WindowDist::gaussian;
  s.seed = seed;
  return sample<double>(s);
}

template <Field S>
Vector<S> random_vector(Index d, std::uint64_t seed) {
  Rng rng(seed, 12345);
  return rng.gaussian_matrix<S>(d, 1);
}

}  // namespace

TEST(SoftThreshold, RealAndComplex) {
  Vector<double> c(4);
  c << 3.0, -0.5, 1.0, -2.0;
  const Vector<double> t = soft_threshold(c, 1.0);
  EXPECT_EQ(t(0), 2.0);
  EXPECT_EQ(t(1), 0.0);
  EXPECT_EQ(t(2), 0.0);
  EXPECT_EQ(t(3), -1.0);
  EXPECT_EQ(soft_threshold(c, 0.0), c);

  Vector<Complex> z(2);
  z << Complex(3, 4), Complex(0.3, 0.4);
  const Vector<Complex> tz = soft_threshold(z, 1.0);
  EXPECT_NEAR(std::abs(tz(0) - Complex(2.4, 3.2)), 0.0, 1e-15);
  EXPECT_EQ(tz(1), Complex(0, 0));
}

TEST(Schemes, NamesRoundTrip) {
  for (Scheme s : kAllSchemes) EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_TRUE(needs_tightening(Scheme::preconditioned_post));
  EXPECT_FALSE(needs_tightening(Scheme::canonical_tight));
  EXPECT_THROW(parse_scheme("bogus"), ParseError);
}

TEST(Pipeline, PerfectReconstructionAllSchemes) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = gaussian_frame<Complex>(4, 2, 6, seed);
    const auto t = tighten(f);
    ASSERT_TRUE(t.converged());
    for (Scheme s : kAllSchemes) {
      const Pipeline<Complex> p(s, f, &t);
      for (std::uint64_t k = 0; k < 5; ++k) {
        const Vector<Complex> x = random_vector<Complex>(4, seed * 10 + k);
        EXPECT_LE((p.run(x, identity_processor<Complex>()) - x).norm(), 1e-8 * x.norm()) << to_string(s);
      }
      EXPECT_LE(p.run(Vector<Complex>::Zero(4), identity_processor<Complex>()).norm(), 1e-14);
    }
  }
}

TEST(Pipeline, CirculantPerfectReconstruction) {
  const auto f = circulant_frame(16, 4, 6, 3);
  const auto t = tighten(f);
  ASSERT_TRUE(t.converged());
  for (Scheme s : kAllSchemes) {
    const Pipeline<double> p(s, f, &t);
    const Vector<double> x = random_vector<double>(16, 7);
    EXPECT_LE((p.run(x, identity_processor<double>()) - x).norm(), 1e-8 * x.norm()) << to_string(s);
  }
}

TEST(Pipeline, PostSchemeAvoidsDenseGammaOnCirculantFrames) {
  const auto f = circulant_frame(32, 4, 12, 4);
  const auto t = tighten(f);
  ASSERT_TRUE(t.converged());
  const auto before = instrumentation::dense_materializations();
  const Pipeline<double> p(Scheme::preconditioned_post, f, &t);
  for (std::uint64_t k = 0; k < 3; ++k) {
    const Vector<double> x = random_vector<double>(32, k);
    EXPECT_LE((p.run(x, identity_processor<double>()) - x).norm(), 1e-8 * x.norm());
  }
  EXPECT_EQ(instrumentation::dense_materializations(), before);

  const Pipeline<double> sym(Scheme::preconditioned_symmetric, f, &t);
  sym.run(random_vector<double>(32, 9), identity_processor<double>());
  EXPECT_GT(instrumentation::dense_materializations(), before);
}

TEST(Pipeline, PreconditionedChannelsHaveUnitNorm) {
  const auto f = gaussian_frame<double>(3, 1, 7, 2);
  const auto t = tighten(f);
  ASSERT_TRUE(t.converged());
  const Pipeline<double> p(Scheme::preconditioned_symmetric, f, &t);
  ASSERT_EQ(p.channel_norms().size(), 7u);
  for (Index j = 0; j < 7; ++j) {
    const double expected = std::sqrt(trace_quadratic(f[j].to_dense(), *t.gamma));
    EXPECT_NEAR(p.channel_norms()[static_cast<size_t>(j)], expected, 1e-12);
    EXPECT_NEAR(t.tight_frame->operator[](j).dense_matrix().norm(), 1.0, 1e-12);
  }
  const Pipeline<double> ref(Scheme::canonical_dual_synthesis, f);
  for (double c : ref.channel_norms()) EXPECT_EQ(c, 1.0);
}

TEST(Pipeline, PreconditionedSchemeNeedsTightening) {
  const auto f = gaussian_frame<double>(3, 1, 7, 2);
  EXPECT_THROW(Pipeline<double>(Scheme::preconditioned_post, f), PreconditionError);
}

TEST(Noise, SigmaConventionAndDeterminism) {
  EXPECT_NEAR(noise_sigma(10.0, 100, 5.0), 10.0 / (5.0 * 10.0), 1e-15);
  EXPECT_EQ(noise_sigma(10.0, 100, std::numeric_limits<double>::infinity()), 0.0);
  const std::vector<Vector<double>> clean{Vector<double>::Ones(8), Vector<double>::Ones(8)};
  const auto a = add_noise(clean, 10.0, 3);
  const auto b = add_noise(clean, 10.0, 3);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  const auto c = add_noise(clean, std::numeric_limits<double>::infinity(), 3);
  for (size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], clean[i]);
}

TEST(Denoise, NoiselessInputReconstructsExactly) {
  const auto f = gaussian_frame<double>(8, 2, 6, 1);
  std::vector<Vector<double>> clean;
  for (std::uint64_t k = 0; k < 4; ++k) clean.push_back(random_vector<double>(8, k));
  DenoiseOptions opt;
  opt.snr_list = {std::numeric_limits<double>::infinity()};
  opt.lambda_grid = {0.0};
  const auto reports = denoise_experiment(f, clean, opt);
  ASSERT_EQ(reports.size(), 5u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.ok) << r.error;
    EXPECT_LE(r.rmse, 1e-8);
  }
}

TEST(Denoise, ThresholdingNeverHurtsAtOptimum) {
  const Index d = 256;
  const auto f = circulant_frame(d, 64, 8, 5);
  std::vector<Vector<double>> clean;
  for (Index tile = 0; tile < 4; ++tile) {
    Vector<double> x(d);
    for (Index i = 0; i < d; ++i) x(i) = std::sin(2.0 * 3.141592653589793 * 3.0 * i / d) + (i > d / 2 ? 1.0 : 0.0);
    clean.push_back(x);
  }
  DenoiseOptions opt;
  opt.snr_list = {10.0};
  opt.lambda_grid = {0.0, 0.05, 0.1, 0.2, 0.4, 0.8};
  opt.seed = 2;
  for (const auto& r : denoise_experiment(f, clean, opt)) {
    ASSERT_TRUE(r.ok) << r.error;
    ASSERT_FALSE(r.threshold_sweep.empty());
    EXPECT_EQ(r.threshold_sweep.front().first, 0.0);
    EXPECT_LE(r.rmse, r.threshold_sweep.front().second) << to_string(r.scheme);
    for (const auto& [lambda, rmse] : r.threshold_sweep) EXPECT_GE(rmse, r.rmse);
  }
}
