#pragma once

#include <cmath>
#include <vector>

#include "frametight/ensembles.hpp"
#include "frametight/gframe.hpp"

namespace testing_support {

using frametight::Complex;
using frametight::GFrame;
using frametight::Index;
using frametight::Matrix;
using frametight::Vector;

inline Matrix<double> column(std::initializer_list<double> values) {
  Matrix<double> m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

inline GFrame<double> vectors(const std::vector<std::vector<double>>& cols) {
  std::vector<Matrix<double>> el;
  for (const auto& c : cols) {
    Matrix<double> m(static_cast<Index>(c.size()), 1);
    for (size_t i = 0; i < c.size(); ++i) m(static_cast<Index>(i), 0) = c[i];
    el.push_back(m);
  }
  return GFrame<double>::from_dense(el);
}

inline GFrame<double> unit_vectors_at(const std::vector<double>& angles) {
  std::vector<std::vector<double>> cols;
  for (double a : angles) cols.push_back({std::cos(a), std::sin(a)});
  return vectors(cols);
}

template <frametight::Field S>
GFrame<S> gaussian_frame(Index d, Index r, Index n, std::uint64_t seed) {
  frametight::EnsembleSpec spec;
  spec.kind = frametight::EnsembleKind::gaussian_iid;
  spec.d = d;
  spec.r = r;
  spec.n = n;
  spec.seed = seed;
  return frametight::sample<S>(spec);
}

template <frametight::Field S>
std::vector<Matrix<S>> dense_elements(const GFrame<S>& f) {
  std::vector<Matrix<S>> out;
  for (const auto& e : f.elements()) out.push_back(e.to_dense());
  return out;
}

}  // namespace testing_support
