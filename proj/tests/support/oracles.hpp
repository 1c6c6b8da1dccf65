#pragma once

// Independent reference computations for the unit and acceptance tests. They
// use textbook definitions and Eigen directly, never the library's kernels.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// O(d^2) unitary DFT straight from the definition.
inline CVec naive_dft(const CVec& x, bool inverse = false) {
  const auto d = x.size();
  const double sign = inverse ? 1.0 : -1.0;
  CVec out(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Complex acc = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) {
      acc += x(n) * std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k * n) / static_cast<double>(d));
    }
    out(k) = acc / std::sqrt(static_cast<double>(d));
  }
  return out;
}

/// Left d x k block of the circulant matrix with first column x: C(i, j) = x((i - j) mod d).
template <class Vec>
auto circulant_block(const Vec& x, Eigen::Index k) {
  using Scalar = typename Vec::Scalar;
  const auto d = x.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c(d, k);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) c(i, j) = x(((i - j) % d + d) % d);
  }
  return c;
}

/// (M^l C^k g)(t) = exp(2 pi i l t / m) g((t - k) mod m).
inline CVec modulated_shift(const CVec& g, Eigen::Index l, Eigen::Index k) {
  const auto m = g.size();
  CVec v(m);
  for (Eigen::Index t = 0; t < m; ++t) {
    v(t) = std::exp(Complex(0.0, 2.0 * std::numbers::pi * static_cast<double>(l * t) / static_cast<double>(m))) *
           g(((t - k) % m + m) % m);
  }
  return v;
}

template <class Mat>
Mat herm(const Mat& a) {
  return (a + a.adjoint()) / 2.0;
}

template <class Mat>
Mat sqrtm(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(a));
  return es.operatorSqrt();
}

template <class Mat>
Mat inv_sqrtm(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(a));
  return es.operatorInverseSqrt();
}

/// M(G) = (d/n) sum_j G^{1/2} T_j T_j^H G^{1/2} / trace(T_j^H G T_j), term by term.
template <class Mat>
Mat m_map(const std::vector<Mat>& elements, const Mat& g) {
  const auto d = g.rows();
  const double n = static_cast<double>(elements.size());
  const Mat root = sqrtm(g);
  Mat acc = Mat::Zero(d, d);
  for (const auto& t : elements) {
    const Mat rt = root * t;
    acc += rt * rt.adjoint() / std::real((t.adjoint() * g * t).trace());
  }
  return acc * (static_cast<double>(d) / n);
}

template <class Mat>
Mat frame_operator(const std::vector<Mat>& elements) {
  Mat s = Mat::Zero(elements.front().rows(), elements.front().rows());
  for (const auto& t : elements) s += t * t.adjoint();
  return s;
}

template <class Mat>
double opnorm_hermitian(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Nelder-Mead over (a, b) with Gamma = [[a, b], [b, 1 - a]], minimizing
/// ||M(Gamma) - I||_F for real 2 x 1 elements. A restart from the best point
/// repeats until the simplex collapses.
inline RMat brute_force_gamma_2x2(const std::vector<RMat>& elements) {
  auto gamma_of = [](const Eigen::Vector2d& p) {
    RMat g(2, 2);
    g << p(0), p(1), p(1), 1.0 - p(0);
    return g;
  };
  auto objective = [&](const Eigen::Vector2d& p) {
    if (!(p(0) > 0.0 && p(0) < 1.0) || p(1) * p(1) >= p(0) * (1.0 - p(0))) return 1e300;
    const RMat m = m_map(elements, gamma_of(p));
    return (m - RMat::Identity(2, 2)).norm();
  };

  // Coarse grid start.
  Eigen::Vector2d best(0.5, 0.0);
  double best_value = objective(best);
  for (int i = 1; i < 200; ++i) {
    for (int j = -199; j < 200; ++j) {
      const double a = i / 200.0;
      const Eigen::Vector2d p(a, j / 200.0 * std::sqrt(a * (1.0 - a)));
      const double v = objective(p);
      if (v < best_value) {
        best_value = v;
        best = p;
      }
    }
  }

  for (int restart = 0; restart < 20; ++restart) {
    std::vector<Eigen::Vector2d> simplex{best, best + Eigen::Vector2d(1e-3, 0), best + Eigen::Vector2d(0, 1e-3)};
    std::vector<double> values;
    for (const auto& p : simplex) values.push_back(objective(p));
    for (int iter = 0; iter < 4000; ++iter) {
      std::vector<int> order{0, 1, 2};
      std::sort(order.begin(), order.end(), [&](int x, int y) { return values[x] < values[y]; });
      const auto lo = order[0], mid = order[1], hi = order[2];
      const Eigen::Vector2d centroid = (simplex[lo] + simplex[mid]) / 2.0;
      const Eigen::Vector2d reflected = centroid + (centroid - simplex[hi]);
      const double fr = objective(reflected);
      if (fr < values[lo]) {
        const Eigen::Vector2d expanded = centroid + 2.0 * (centroid - simplex[hi]);
        const double fe = objective(expanded);
        if (fe < fr) {
          simplex[hi] = expanded;
          values[hi] = fe;
        } else {
          simplex[hi] = reflected;
          values[hi] = fr;
        }
      } else if (fr < values[mid]) {
        simplex[hi] = reflected;
        values[hi] = fr;
      } else {
        const Eigen::Vector2d contracted = centroid + 0.5 * (simplex[hi] - centroid);
        const double fc = objective(contracted);
        if (fc < values[hi]) {
          simplex[hi] = contracted;
          values[hi] = fc;
        } else {
          for (int s : {mid, hi}) {
            simplex[s] = simplex[lo] + 0.5 * (simplex[s] - simplex[lo]);
            values[s] = objective(simplex[s]);
          }
        }
      }
      if ((simplex[hi] - simplex[lo]).norm() < 1e-14) break;
    }
    const auto it = std::min_element(values.begin(), values.end());
    best = simplex[static_cast<size_t>(it - values.begin())];
    if (*it >= best_value - 1e-16 && restart > 2) break;
    best_value = *it;
  }
  return gamma_of(best);
}

/// Smallest sum_j ||U_theta s_j Y_j - T_j||^2 over theta on a uniform grid of
/// [-2pi/3, 2pi/3] and all sign patterns; Y_j at angles (0, pi/3, 2pi/3).
struct GridOptimum {
  double objective;
  double theta;
};

inline GridOptimum ex_some_grid(const std::vector<double>& angles, const std::vector<int>& signs, long points) {
  const double lim = 2.0 * std::numbers::pi / 3.0;
  GridOptimum best{1e300, 0.0};
  for (long i = 0; i < points; ++i) {
    const double theta = -lim + 2.0 * lim * static_cast<double>(i) / static_cast<double>(points - 1);
    double obj = 0.0;
    for (size_t j = 0; j < 3; ++j) {
      const double beta = static_cast<double>(j) * std::numbers::pi / 3.0;
      const double dx = signs[j] * std::cos(theta + beta) - std::cos(angles[j]);
      const double dy = signs[j] * std::sin(theta + beta) - std::sin(angles[j]);
      obj += dx * dx + dy * dy;
    }
    if (obj < best.objective) best = {obj, theta};
  }
  return best;
}

/// Random Parseval frame with n elements d x r, cut from a random n r x d isometry.
inline std::vector<RMat> random_parseval(Eigen::Index d, Eigen::Index r, Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  RMat a(n * r, d);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(gen);
  }
  Eigen::HouseholderQR<RMat> qr(a);
  const RMat q = qr.householderQ() * RMat::Identity(n * r, d);
  std::vector<RMat> out;
  for (Eigen::Index j = 0; j < n; ++j) out.push_back(q.middleRows(j * r, r).transpose());
  return out;
}

}  // namespace oracle
