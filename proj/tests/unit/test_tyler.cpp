#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "frametight/errors.hpp"
#include "frametight/experiments.hpp"
#include "frametight/random.hpp"
#include "frametight/tyler.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace frametight;
using testing_support::dense_elements;
using testing_support::gaussian_frame;
using testing_support::unit_vectors_at;
using testing_support::vectors;

namespace {

GFrame<double> mercedes() { return unit_vectors_at({0.0, std::numbers::pi / 3, 2 * std::numbers::pi / 3}); }

template <Field S>
void expect_tight_unit_norm(const GFrame<S>& r, double n_over_d) {
  for (Index j = 0; j < r.size(); ++j) EXPECT_NEAR(std::sqrt(r[j].hs_norm_squared()), 1.0, 1e-10);
  const Matrix<S> s = frame_operator(r);
  EXPECT_LE(hermitian_norm<S>(s - n_over_d * Matrix<S>::Identity(s.rows(), s.cols())), 1e-8);
}

}  // namespace

TEST(MMap, TightFrameAtIdentityIsIdentity) {
  const auto f = mercedes();
  const Matrix<double> m = m_map(f, HermitianPD<double>::identity(2, 0.5));
  EXPECT_LE((m - Matrix<double>::Identity(2, 2)).norm(), 1e-14);
}

TEST(MMap, ScaleInvarianceAndTrace) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = gaussian_frame<Complex>(3, 2, 5, seed);
    Rng rng(seed + 99);
    const Matrix<Complex> a = rng.gaussian_matrix<Complex>(3, 3);
    const HermitianPD<Complex> g(a * a.adjoint() + Matrix<Complex>::Identity(3, 3));
    const Matrix<Complex> m1 = m_map(f, g);
    const Matrix<Complex> m7 = m_map(f, g.scaled(7.0));
    EXPECT_LE((m1 - m7).norm(), 1e-12 * m1.norm());
    EXPECT_NEAR(m1.trace().real(), 3.0, 1e-10);
  }
}

TEST(MMap, MatchesTermByTermOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = gaussian_frame<double>(2, 1, 4, seed);
    const Matrix<double> m = m_map(f, HermitianPD<double>::identity(2, 0.5));
    const Matrix<double> ref = oracle::m_map(dense_elements(f), Matrix<double>(Matrix<double>::Identity(2, 2) / 2.0));
    EXPECT_LE((m - ref).norm(), 1e-12);
    Rng rng(seed);
    const Matrix<double> a = rng.gaussian_matrix<double>(2, 2);
    const Matrix<double> g = a * a.transpose() + 0.2 * Matrix<double>::Identity(2, 2);
    EXPECT_LE((m_map(f, HermitianPD<double>(g)) - oracle::m_map(dense_elements(f), g)).norm(), 1e-10);
  }
}

TEST(TylerStep, FixedPointOfTightFrame) {
  const auto g = tyler_step(mercedes(), HermitianPD<double>::identity(2, 0.5));
  EXPECT_LE((g.matrix() - 0.5 * Matrix<double>::Identity(2, 2)).norm(), 1e-14);
}

TEST(TylerStep, FirstStepIsNormalizedInverseOfNormalizedFrameOperator) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = gaussian_frame<Complex>(3, 1, 7, seed);
    const auto g1 = tyler_step(f, HermitianPD<Complex>::identity(3, 1.0 / 3.0));
    std::vector<Matrix<Complex>> normalized;
    for (const auto& t : dense_elements(f)) normalized.push_back(t / t.norm());
    const Matrix<Complex> s_inv = oracle::frame_operator(normalized).inverse();
    const Matrix<Complex> expected = s_inv / s_inv.trace().real();
    EXPECT_LE((g1.matrix() - expected).norm(), 1e-10 * expected.norm());
    EXPECT_NEAR(g1.trace(), 1.0, 1e-12);
  }
}

TEST(TylerStep, InverseAndSquareRootRoutesAgree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = gaussian_frame<Complex>(4, 2, 6, seed);
    Rng rng(seed);
    const Matrix<Complex> a = rng.gaussian_matrix<Complex>(4, 4);
    const HermitianPD<Complex> g = HermitianPD<Complex>(a * a.adjoint() + Matrix<Complex>::Identity(4, 4));
    const HermitianPD<Complex> g1 = g.scaled(1.0 / g.trace());
    const Matrix<Complex> x = tyler_step(f, g1).matrix();
    const Matrix<Complex> y = tyler_step_sqrt(f, g1).matrix();
    EXPECT_LE((x - y).norm(), 1e-10 * x.norm());
  }
}

TEST(TylerStep, SingularWeightedOperatorThrows) {
  EXPECT_THROW(tyler_step(vectors({{1, 0}, {2, 0}}), HermitianPD<double>::identity(2, 0.5)), NotAFrameError);
}

TEST(Tighten, AlreadyTightUnitNorm) {
  const auto f = mercedes();
  const auto r = tighten(f);
  ASSERT_TRUE(r.converged());
  EXPECT_LE(r.iterations, 2);
  EXPECT_LE((r.gamma->matrix() - 0.5 * Matrix<double>::Identity(2, 2)).norm(), 1e-12);
  for (Index j = 0; j < 3; ++j) EXPECT_LE((r.tight_frame->operator[](j).dense_matrix() - f[j].dense_matrix()).norm(), 1e-12);
}

TEST(Tighten, SingleRegularElement) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Matrix<Complex> t = rng.gaussian_matrix<Complex>(3, 3);
    const auto r = tighten(GFrame<Complex>::from_dense({t}));
    ASSERT_TRUE(r.converged());
    const Matrix<Complex> expected = oracle::inv_sqrtm(Matrix<Complex>(t * t.adjoint())) * t / std::sqrt(3.0);
    EXPECT_LE((r.tight_frame->operator[](0).dense_matrix() - expected).norm(), 1e-8);
    const Matrix<Complex> tt_inv = (t * t.adjoint()).inverse();
    EXPECT_LE((r.gamma->matrix() - tt_inv / tt_inv.trace().real()).norm(), 1e-8);
  }
}

TEST(Tighten, FailureExample) {
  const auto at0 = tighten(failure_frame(0.0));
  EXPECT_FALSE(at0.converged());
  EXPECT_TRUE(at0.status == TightenStatus::diverged || at0.status == TightenStatus::max_iterations);
  EXPECT_TRUE(tighten(failure_frame(0.1)).converged());
  EXPECT_TRUE(tighten(failure_frame(0.05)).converged());
}

TEST(Tighten, NotAFrame) {
  const auto r = tighten(vectors({{1, 0}, {-3, 0}}));
  EXPECT_EQ(r.status, TightenStatus::not_a_frame);
  EXPECT_FALSE(r.gamma.has_value());
}

TEST(Tighten, MaxIterationsStatus) {
  TightenOptions opt;
  opt.max_iterations = 3;
  const auto r = tighten(gaussian_frame<double>(3, 1, 6, 4), opt);
  EXPECT_EQ(r.status, TightenStatus::max_iterations);
  EXPECT_EQ(r.iterations, 3);
}

TEST(Tighten, RunInvariants) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index d = 2 + static_cast<Index>(seed % 3);
    const auto f = gaussian_frame<Complex>(d, 1 + static_cast<Index>(seed % 2), 3 * d, seed);
    TightenOptions opt;
    opt.record_matrices = true;
    const auto r = tighten(f, opt);
    ASSERT_TRUE(r.converged()) << seed;
    EXPECT_LE(r.residual, 1e-12);
    for (size_t k = 0; k < r.log.size(); ++k) {
      const auto& s = r.log[k];
      EXPECT_EQ(s.k, static_cast<Index>(k));
      EXPECT_NEAR(s.gamma_trace, 1.0, 1e-12);
      EXPECT_NEAR(s.m_trace, static_cast<double>(d), 1e-10);
      ASSERT_TRUE(s.gamma && s.m);
      EXPECT_NEAR(s.gamma->trace().real(), 1.0, 1e-12);
      if (k > 0) {
        EXPECT_GE(s.lambda_min, r.log[k - 1].lambda_min - 1e-12);
        EXPECT_LE(s.lambda_max, r.log[k - 1].lambda_max + 1e-12);
      }
    }
    expect_tight_unit_norm(*r.tight_frame, static_cast<double>(f.size()) / static_cast<double>(d));
    EXPECT_LE(tightness_defect(*r.tight_frame), 1e-8);
    EXPECT_LE(fixed_point_residual(f, *r.gamma), 1e-12);

    // weights and Gamma^{-1} = sum (c_j T_j)(c_j T_j)^H
    Matrix<Complex> acc = Matrix<Complex>::Zero(d, d);
    for (Index j = 0; j < f.size(); ++j) {
      const double c = r.weights[static_cast<size_t>(j)];
      EXPECT_NEAR(c, std::sqrt(static_cast<double>(d) / (static_cast<double>(f.size()) *
                                                         trace_quadratic(f[j].to_dense(), *r.gamma))),
                  1e-12 * c);
      acc += c * c * f[j].gram();
    }
    const Matrix<Complex> g_inv = r.gamma->matrix().inverse();
    EXPECT_LE((acc - g_inv).norm(), 1e-8 * g_inv.norm());
  }
}

TEST(Tighten, CrossCheckRecordsSmallDiscrepancy) {
  TightenOptions opt;
  opt.cross_check = true;
  const auto r = tighten(gaussian_frame<double>(3, 2, 5, 8), opt);
  ASSERT_TRUE(r.converged());
  EXPECT_LE(r.cross_check_discrepancy, 1e-10);
}

TEST(Tighten, UnitaryEquivariance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = gaussian_frame<Complex>(3, 2, 5, seed);
    Rng rng(seed + 7);
    Eigen::HouseholderQR<Matrix<Complex>> qr(rng.gaussian_matrix<Complex>(3, 3));
    const Matrix<Complex> u = qr.householderQ();
    std::vector<Matrix<Complex>> rotated;
    for (const auto& e : f.elements()) rotated.push_back(u * e.dense_matrix());
    const auto a = tighten(f);
    const auto b = tighten(GFrame<Complex>::from_dense(rotated));
    ASSERT_TRUE(a.converged() && b.converged());
    EXPECT_LE((b.gamma->matrix() - u * a.gamma->matrix() * u.adjoint()).norm(), 1e-8);
    for (Index j = 0; j < f.size(); ++j) {
      EXPECT_LE((b.tight_frame->operator[](j).dense_matrix() - u * a.tight_frame->operator[](j).dense_matrix()).norm(),
                1e-8);
    }
  }
}

TEST(Tighten, MatchesBruteForceMinimizerInTwoDimensions) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = gaussian_frame<double>(2, 1, 5, 300 + seed);
    const auto r = tighten(f);
    ASSERT_TRUE(r.converged());
    const Matrix<double> ref = oracle::brute_force_gamma_2x2(dense_elements(f));
    EXPECT_LE((r.gamma->matrix() - ref).norm(), 1e-4) << seed;
  }
}

TEST(Tightness, Defect) {
  EXPECT_NEAR(tightness_defect(mercedes()), 0.0, 1e-12);
  EXPECT_NEAR(tightness_defect(vectors({{1, 0}, {1, 0}, {0, 1}})), 1.0 / 3.0, 1e-14);
}

TEST(Uniqueness, ScaledAndRestartedAgree) {
  const auto f = gaussian_frame<double>(3, 1, 8, 5);
  const auto r = tighten(f);
  ASSERT_TRUE(r.converged());
  EXPECT_TRUE(uniqueness_check(f, *r.gamma, r.gamma->scaled(3.0)));

  Matrix<double> start = Matrix<double>::Identity(3, 3);
  start(0, 0) = 5.0;
  start(1, 2) = start(2, 1) = 0.3;
  const auto r2 = tighten(f, TightenOptions{}, std::optional<HermitianPD<double>>(HermitianPD<double>(start)));
  ASSERT_TRUE(r2.converged());
  EXPECT_TRUE(uniqueness_check(f, *r.gamma, *r2.gamma));
}

TEST(Uniqueness, NonTightInputRejected) {
  const auto f = gaussian_frame<double>(3, 1, 8, 6);
  const auto r = tighten(f);
  ASSERT_TRUE(r.converged());
  Matrix<double> off = r.gamma->matrix();
  off(0, 1) += 0.05;
  off(1, 0) += 0.05;
  EXPECT_THROW(uniqueness_check(f, *r.gamma, HermitianPD<double>(off)), PreconditionError);
}
