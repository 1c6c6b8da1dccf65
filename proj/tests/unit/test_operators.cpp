#include <gtest/gtest.h>

#include <cmath>

#include "frametight/errors.hpp"
#include "frametight/operators.hpp"
#include "frametight/random.hpp"
#include "oracles.hpp"

using namespace frametight;

namespace {

template <Field S>
Vector<S> random_vector(Index n, Rng& rng) {
  Vector<S> v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.gaussian<S>();
  return v;
}

template <Field S>
void expect_matches_dense(const StructuredOperator<S>& op, const Matrix<S>& dense, Rng& rng, double tol = 1e-10) {
  ASSERT_EQ(op.rows(), dense.rows());
  ASSERT_EQ(op.cols(), dense.cols());
  const Vector<S> c = random_vector<S>(op.cols(), rng);
  const Vector<S> x = random_vector<S>(op.rows(), rng);
  const double scale = std::max(1.0, dense.norm());
  EXPECT_LE((op.apply(c) - dense * c).norm(), tol * scale * c.norm());
  EXPECT_LE((op.adjoint_apply(x) - dense.adjoint() * x).norm(), tol * scale * x.norm());
}

template <Field S>
void expect_adjoint_pair(const StructuredOperator<S>& op, Rng& rng) {
  const Vector<S> c = random_vector<S>(op.cols(), rng);
  const Vector<S> x = random_vector<S>(op.rows(), rng);
  const S lhs = op.apply(c).dot(x);          // <T c, x>
  const S rhs = c.dot(op.adjoint_apply(x));  // <c, T^H x>
  EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));
}

}  // namespace

TEST(Subsampler, PicksEntries) {
  const auto op = StructuredOperator<double>::subsampler(5, {1, 3});
  Vector<double> x(5);
  x << 10, 11, 12, 13, 14;
  const Vector<double> c = op.adjoint_apply(x);
  ASSERT_EQ(c.size(), 2);
  EXPECT_EQ(c(0), 11);
  EXPECT_EQ(c(1), 13);
  const Matrix<double> dense = op.to_dense();
  for (Index j = 0; j < 2; ++j) EXPECT_EQ(dense.col(j).sum(), 1.0);
  EXPECT_THROW(StructuredOperator<double>::subsampler(3, {3}), PreconditionError);
}

TEST(Circulant, IdentityFromE1) {
  for (Index d : {1, 4, 7}) {
    Vector<double> e1 = Vector<double>::Zero(d);
    e1(0) = 1;
    const auto op = StructuredOperator<double>::circulant(e1, d);
    Rng rng(d);
    const Vector<double> c = random_vector<double>(d, rng);
    EXPECT_LE((op.apply(c) - c).norm(), 1e-14);
    EXPECT_LE((op.adjoint_apply(c) - c).norm(), 1e-14);
  }
}

TEST(Circulant, ToDenseExample) {
  Vector<double> x(3);
  x << 1, 2, 3;
  Matrix<double> expected(3, 3);
  expected << 1, 3, 2, 2, 1, 3, 3, 2, 1;
  EXPECT_EQ(StructuredOperator<double>::circulant(x, 3).to_dense(), expected);
  EXPECT_EQ(StructuredOperator<double>::circulant(x, 2).to_dense(), expected.leftCols(2));
}

TEST(Circulant, ExhaustiveSmallSweepAgainstDefinition) {
  Rng rng(42);
  for (Index d = 2; d <= 16; ++d) {
    for (Index k = 1; k <= d; ++k) {
      const Vector<double> x = random_vector<double>(d, rng);
      const auto op = StructuredOperator<double>::circulant(x, k);
      expect_matches_dense<double>(op, oracle::circulant_block(x, k), rng);
      const Vector<Complex> xc = random_vector<Complex>(d, rng);
      const auto opc = StructuredOperator<Complex>::circulant(xc, k);
      expect_matches_dense<Complex>(opc, oracle::circulant_block(xc, k), rng);
    }
  }
}

TEST(Circulant, LargeBlockMatchesDense) {
  Rng rng(7);
  const Vector<double> x = random_vector<double>(64, rng);
  const auto op = StructuredOperator<double>::circulant(x, 16);
  expect_matches_dense<double>(op, oracle::circulant_block(x, 16), rng);
}

TEST(Circulant, GramFastPathMatchesDense) {
  Rng rng(8);
  for (Index k : {3, 9}) {
    const Vector<double> x = random_vector<double>(9, rng);
    const auto op = StructuredOperator<double>::circulant(x, k);
    const Matrix<double> t = oracle::circulant_block(x, k);
    EXPECT_LE((op.gram() - t * t.transpose()).norm(), 1e-10 * t.squaredNorm());
    EXPECT_NEAR(op.hs_norm_squared(), t.squaredNorm(), 1e-10 * t.squaredNorm());
  }
}

TEST(Gabor, SmallExampleRows) {
  ComplexVector g(2);
  g << 1, 1;
  const auto op = StructuredOperator<Complex>::gabor(g);
  const Matrix<Complex> t = op.to_dense();
  ASSERT_EQ(t.rows(), 4);
  ASSERT_EQ(t.cols(), 2);
  const double scale = 1.0 / std::sqrt(2.0 * g.squaredNorm());
  for (Index l = 0; l < 2; ++l) {
    for (Index k = 0; k < 2; ++k) {
      const ComplexVector v = oracle::modulated_shift(g, l, k);
      EXPECT_LE((t.row(l * 2 + k).transpose() - v.conjugate() * scale).norm(), 1e-14);
    }
  }
}

TEST(Gabor, ProjectorConventionAndFastApply) {
  Rng rng(9);
  for (Index m : {2, 3, 4, 5}) {
    const ComplexVector g = random_vector<Complex>(m, rng);
    const auto op = StructuredOperator<Complex>::gabor(g);
    const Matrix<Complex> t = op.to_dense();
    EXPECT_LE((t.adjoint() * t - Matrix<Complex>::Identity(m, m)).norm(), 1e-10);
    const Matrix<Complex> p = t * t.adjoint();
    EXPECT_LE((p * p - p).norm(), 1e-10);
    std::vector<ComplexVector> rows;
    Matrix<Complex> oracle_t(m * m, m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m) * g.squaredNorm());
    for (Index l = 0; l < m; ++l) {
      for (Index k = 0; k < m; ++k) oracle_t.row(l * m + k) = oracle::modulated_shift(g, l, k).adjoint() * scale;
    }
    expect_matches_dense<Complex>(op, oracle_t, rng);
    EXPECT_NEAR(op.hs_norm_squared(), static_cast<double>(m), 1e-10);
  }
  EXPECT_THROW(StructuredOperator<double>::gabor(Vector<double>::Ones(2)), PreconditionError);
}

TEST(GaborSystem, TightnessIdentity) {
  ComplexVector e1 = ComplexVector::Zero(2);
  e1(0) = 1;
  auto frame_op = [](const std::vector<ComplexVector>& sys) {
    Matrix<Complex> s = Matrix<Complex>::Zero(sys.front().size(), sys.front().size());
    for (const auto& v : sys) s += v * v.adjoint();
    return s;
  };
  const auto sys = gabor_system(e1);
  EXPECT_EQ(sys.size(), 4u);
  EXPECT_LE((frame_op(sys) - 2.0 * Matrix<Complex>::Identity(2, 2)).norm(), 1e-12);

  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexVector g = random_vector<Complex>(4, rng);
    g /= g.norm();
    EXPECT_LE((frame_op(gabor_system(g)) - 4.0 * Matrix<Complex>::Identity(4, 4)).norm(), 1e-9);
  }
  ComplexVector rad(3);
  for (Index i = 0; i < 3; ++i) rad(i) = rng.below(2) == 0 ? 1.0 : -1.0;
  EXPECT_LE((frame_op(gabor_system(rad)) - 9.0 * Matrix<Complex>::Identity(3, 3)).norm(), 1e-9);
  EXPECT_THROW(gabor_system(ComplexVector::Zero(3)), PreconditionError);
}

TEST(Projector, ChecksOrthonormality) {
  Matrix<double> q(3, 1);
  q << 1, 0, 0;
  const auto op = StructuredOperator<double>::projector(q);
  EXPECT_EQ(op.to_dense(), q);
  q(1, 0) = 0.5;
  EXPECT_THROW(StructuredOperator<double>::projector(q), PreconditionError);
}

TEST(Operators, AdjointnessAllKinds) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix<Complex> a = rng.gaussian_matrix<Complex>(6, 3);
    expect_adjoint_pair(StructuredOperator<Complex>::dense(a), rng);
    expect_adjoint_pair(StructuredOperator<Complex>::circulant(random_vector<Complex>(6, rng), 4), rng);
    expect_adjoint_pair(StructuredOperator<Complex>::gabor(random_vector<Complex>(3, rng)), rng);
    Eigen::HouseholderQR<Matrix<Complex>> qr(a);
    const Matrix<Complex> q = qr.householderQ() * Matrix<Complex>::Identity(6, 3);
    expect_adjoint_pair(StructuredOperator<Complex>::projector(q), rng);
    expect_adjoint_pair(StructuredOperator<Complex>::subsampler(6, {0, 5, 5}), rng);
    expect_adjoint_pair(StructuredOperator<Complex>::scaled(StructuredOperator<Complex>::dense(a), Complex(0.5, 2)), rng);
  }
}

TEST(Operators, ScaledMatchesDense) {
  Rng rng(13);
  const Matrix<double> a = rng.gaussian_matrix<double>(4, 2);
  const auto op = StructuredOperator<double>::scaled(StructuredOperator<double>::dense(a), -3.0);
  expect_matches_dense<double>(op, -3.0 * a, rng);
  EXPECT_NEAR(op.hs_norm_squared(), 9.0 * a.squaredNorm(), 1e-12);
}

TEST(Operators, ShapeMismatch) {
  const auto op = StructuredOperator<double>::dense(Matrix<double>::Identity(3, 2));
  EXPECT_THROW(op.apply(Vector<double>::Zero(3)), DimensionError);
  EXPECT_THROW(op.adjoint_apply(Vector<double>::Zero(2)), DimensionError);
}

TEST(Instrumentation, CountsStructuredToDenseOnly) {
  const auto before = instrumentation::dense_materializations();
  StructuredOperator<double>::dense(Matrix<double>::Identity(2, 2)).to_dense();
  EXPECT_EQ(instrumentation::dense_materializations(), before);
  StructuredOperator<double>::circulant(Vector<double>::Ones(4), 2).to_dense();
  EXPECT_EQ(instrumentation::dense_materializations(), before + 1);
  StructuredOperator<double>::circulant(Vector<double>::Ones(4), 2).gram();
  EXPECT_EQ(instrumentation::dense_materializations(), before + 1);
}

TEST(GammaApply, IdentityOperatorReturnsInput) {
  std::vector<StructuredOperator<double>> el{StructuredOperator<double>::subsampler(3, {0}),
                                             StructuredOperator<double>::subsampler(3, {1}),
                                             StructuredOperator<double>::subsampler(3, {2})};
  const std::vector<double> w{1.0, 1.0, 1.0};
  Vector<double> y(3);
  y << 1, -2, 3;
  EXPECT_LE((gamma_apply<double>(w, el, y) - y).norm(), 1e-12);
  EXPECT_EQ(gamma_apply<double>(w, el, Vector<double>::Zero(3)).norm(), 0.0);
}

TEST(GammaApply, MatchesDenseInverse) {
  Rng rng(14);
  std::vector<StructuredOperator<Complex>> el;
  std::vector<double> w;
  Matrix<Complex> a = Matrix<Complex>::Zero(8, 8);
  for (int j = 0; j < 6; ++j) {
    el.push_back(StructuredOperator<Complex>::circulant(random_vector<Complex>(8, rng), 2));
    w.push_back(0.5 + rng.uniform01());
    const Matrix<Complex> t = el.back().to_dense();
    a += w.back() * w.back() * t * t.adjoint();
  }
  const Vector<Complex> y = random_vector<Complex>(8, rng);
  SolverOptions opt;
  opt.tol = 1e-10;
  const Vector<Complex> z = gamma_apply<Complex>(w, el, y, opt);
  EXPECT_LE((a * z - y).norm(), opt.tol * y.norm() * 1.0001);
  const Eigen::SelfAdjointEigenSolver<Matrix<Complex>> es(a);
  const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  const Vector<Complex> dense = a.ldlt().solve(y);
  EXPECT_LE((z - dense).norm(), cond * opt.tol * dense.norm());
}

TEST(GammaApply, SingularSystemThrowsWithResidual) {
  std::vector<StructuredOperator<double>> el{StructuredOperator<double>::subsampler(3, {0})};
  const std::vector<double> w{1.0};
  Vector<double> y(3);
  y << 1, 1, 1;
  try {
    gamma_apply<double>(w, el, y);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.achieved_residual(), 1e-10);
  }
}
