#include "frametight/gframe.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "frametight/errors.hpp"
#include "frametight/random.hpp"

namespace frametight {

template <Field S>
GFrame<S>::GFrame(Index ambient_dim, std::vector<Element> elements) : dim_(ambient_dim), elements_(std::move(elements)) {
  if (dim_ < 1) throw PreconditionError("GFrame: ambient dimension must be positive");
  if (elements_.empty()) throw PreconditionError("GFrame: needs at least one element");
  for (size_t j = 0; j < elements_.size(); ++j) {
    if (elements_[j].rows() != dim_) {
      throw DimensionError("GFrame: element " + std::to_string(j) + " has " + std::to_string(elements_[j].rows()) +
                           " rows, expected " + std::to_string(dim_));
    }
    if (!(elements_[j].hs_norm_squared() > 0.0)) {
      throw PreconditionError("GFrame: element " + std::to_string(j) + " is zero");
    }
  }
}

template <Field S>
GFrame<S> GFrame<S>::from_dense(const std::vector<Matrix<S>>& elements) {
  if (elements.empty()) throw PreconditionError("GFrame: needs at least one element");
  std::vector<Element> ops;
  ops.reserve(elements.size());
  for (const auto& t : elements) ops.push_back(Element::dense(t));
  return GFrame(elements.front().rows(), std::move(ops));
}

template <Field S>
std::vector<Index> GFrame<S>::element_dims() const {
  std::vector<Index> out;
  out.reserve(elements_.size());
  for (const auto& t : elements_) out.push_back(t.cols());
  return out;
}

template <Field S>
std::vector<Matrix<S>> GFrame<S>::grams() const {
  std::vector<Matrix<S>> out;
  out.reserve(elements_.size());
  for (const auto& t : elements_) out.push_back(t.gram());
  return out;
}

template <Field S>
double GFrame<S>::total_hs_squared() const {
  double total = 0.0;
  for (const auto& t : elements_) total += t.hs_norm_squared();
  return total;
}

template <Field S>
Matrix<S> frame_operator(const GFrame<S>& frame) {
  const Index d = frame.ambient_dim();
  Matrix<S> s = Matrix<S>::Zero(d, d);
  for (const auto& t : frame.elements()) s += t.gram();
  return hermitian_part(s);
}

template <Field S>
FrameBounds frame_bounds(const GFrame<S>& frame) {
  const RealVector values = herm_eigenvalues<S>(frame_operator(frame));
  return {std::max(values(0), 0.0), values(values.size() - 1)};
}

template <Field S>
bool is_frame(const GFrame<S>& frame) {
  return psd_rank<S>(frame_operator(frame)) == frame.ambient_dim();
}

template <Field S>
HermitianPD<S> frame_operator_pd(const GFrame<S>& frame) {
  const Matrix<S> s = frame_operator(frame);
  const RealVector values = herm_eigenvalues<S>(s);
  const double top = values(values.size() - 1);
  if (!(values(0) > kRankTolerance * top)) {
    throw NotAFrameError("frame operator is singular: element ranges do not span", values(0));
  }
  return HermitianPD<S>(s);
}

template <Field S>
Coefficients<S> analysis(const GFrame<S>& frame, const Vector<S>& x) {
  if (x.size() != frame.ambient_dim()) throw DimensionError("analysis: vector length must equal d");
  Coefficients<S> out;
  out.reserve(static_cast<size_t>(frame.size()));
  for (const auto& t : frame.elements()) out.push_back(t.adjoint_apply(x));
  return out;
}

template <Field S>
Vector<S> synthesis(const GFrame<S>& frame, const Coefficients<S>& coeffs) {
  if (static_cast<Index>(coeffs.size()) != frame.size()) {
    throw DimensionError("synthesis: need one coefficient vector per element");
  }
  Vector<S> out = Vector<S>::Zero(frame.ambient_dim());
  for (Index j = 0; j < frame.size(); ++j) {
    const auto& c = coeffs[static_cast<size_t>(j)];
    if (c.size() != frame[j].cols()) {
      throw DimensionError("synthesis: coefficient " + std::to_string(j) + " has the wrong length");
    }
    out += frame[j].apply(c);
  }
  return out;
}

namespace {

template <Field S>
GFrame<S> left_multiplied(const GFrame<S>& frame, const Matrix<S>& a) {
  std::vector<Matrix<S>> out;
  out.reserve(static_cast<size_t>(frame.size()));
  for (const auto& t : frame.elements()) out.push_back(a * t.to_dense());
  return GFrame<S>::from_dense(out);
}

}  // namespace

template <Field S>
GFrame<S> canonical_dual(const GFrame<S>& frame) {
  const auto s = frame_operator_pd(frame);
  return left_multiplied(frame, pd_power(s, -1.0).matrix());
}

template <Field S>
GFrame<S> canonical_parseval(const GFrame<S>& frame) {
  const auto s = frame_operator_pd(frame);
  return left_multiplied(frame, pd_power(s, -0.5).matrix());
}

template <Field S>
RealVector alpha_terms(const GFrame<S>& frame) {
  const Matrix<S> s_inv = pd_power(frame_operator_pd(frame), -1.0).matrix();
  RealVector out(frame.size());
  for (Index j = 0; j < frame.size(); ++j) out(j) = trace_product<S>(s_inv, frame[j].gram());
  return out;
}

template <Field S>
double alpha(const GFrame<S>& frame) {
  return alpha_terms(frame).maxCoeff();
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::undecided: return "undecided";
  }
  return "undecided";
}

const char* to_string(CheckMode m) noexcept {
  return m == CheckMode::heuristic ? "heuristic" : "exhaustive";
}

bool ConditionReport::all_hold() const noexcept {
  return is_frame && cond_ii == Verdict::holds && cond_iii == Verdict::holds && cond_iv == Verdict::holds;
}

bool ConditionReport::any_violated() const noexcept {
  return !is_frame || cond_ii == Verdict::violated || cond_iii == Verdict::violated || cond_iv == Verdict::violated;
}

namespace {

constexpr double kContainTolerance = 1e-9;

template <Field S>
class SubspaceSearch {
 public:
  SubspaceSearch(const GFrame<S>& frame, double alpha, const CheckOptions& options, ConditionReport& report)
      : d_(frame.ambient_dim()), n_(frame.size()), alpha_(alpha), options_(options), report_(report) {
    ranges_.reserve(static_cast<size_t>(n_));
    for (const auto& t : frame.elements()) ranges_.push_back(range_basis(t.gram()));
  }

  // True when every candidate L was examined.
  bool exhaustive() {
    std::vector<Index> chosen;
    return descend(Matrix<S>(d_, 0), 0, chosen);
  }

  void heuristic() {
    Rng rng(options_.seed, 0x5eed);
    std::vector<Index> order(static_cast<size_t>(n_));
    while (report_.tests < options_.budget && !(iii_violated() && iv_violated())) {
      ++report_.tests;  // one draw, so that budgets bound frames with no proper spans
      std::iota(order.begin(), order.end(), Index{0});
      for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
      Matrix<S> basis(d_, 0);
      std::vector<Index> chosen;
      for (Index j : order) {
        if (contains(basis, j)) continue;
        Matrix<S> next = extend(basis, j);
        if (next.cols() >= d_) break;
        basis = std::move(next);
        chosen.push_back(j);
        evaluate(basis, chosen);
        if (report_.tests >= options_.budget) break;
      }
    }
  }

  bool iii_violated() const { return report_.iii_witness.has_value(); }
  bool iv_violated() const { return report_.iv_witness.has_value(); }

 private:
  static Matrix<S> range_basis(const Matrix<S>& gram) {
    const auto eig = herm_eig<S>(gram);
    const double top = eig.values(eig.values.size() - 1);
    std::vector<Index> keep;
    for (Index i = 0; i < eig.values.size(); ++i) {
      if (eig.values(i) > kRankTolerance * top) keep.push_back(i);
    }
    Matrix<S> q(gram.rows(), static_cast<Index>(keep.size()));
    for (size_t c = 0; c < keep.size(); ++c) q.col(static_cast<Index>(c)) = eig.vectors.col(keep[c]);
    return q;
  }

  bool contains(const Matrix<S>& basis, Index j) const {
    const Matrix<S>& q = ranges_[static_cast<size_t>(j)];
    if (basis.cols() == 0) return false;
    const Matrix<S> residual = q - basis * (basis.adjoint() * q);
    return residual.norm() <= kContainTolerance;
  }

  // Orthonormal basis of span(basis, range_j) by Gram-Schmidt with reorthogonalization.
  Matrix<S> extend(const Matrix<S>& basis, Index j) const {
    const Matrix<S>& q = ranges_[static_cast<size_t>(j)];
    Matrix<S> out(d_, basis.cols() + q.cols());
    out.leftCols(basis.cols()) = basis;
    Index k = basis.cols();
    for (Index c = 0; c < q.cols(); ++c) {
      Vector<S> v = q.col(c);
      for (int pass = 0; pass < 2; ++pass) v -= out.leftCols(k) * (out.leftCols(k).adjoint() * v);
      const double norm = v.norm();
      if (norm > 1e-8) out.col(k++) = v / norm;
    }
    return out.leftCols(k);
  }

  void evaluate(const Matrix<S>& basis, const std::vector<Index>& chosen) {
    ++report_.tests;
    std::vector<Index> inside;
    for (Index i = 0; i < n_; ++i) {
      if (contains(basis, i)) inside.push_back(i);
    }
    const auto count = static_cast<double>(inside.size());
    const auto dim = static_cast<double>(basis.cols());
    auto witness = [&] { return SubspaceWitness{chosen, basis.cols(), inside}; };
    if (!report_.iii_witness && count * static_cast<double>(d_) >= static_cast<double>(n_)) {
      report_.iii_witness = witness();
    }
    if (!report_.iv_witness && count * alpha_ >= dim * (1.0 - 1e-12)) report_.iv_witness = witness();
  }

  bool descend(const Matrix<S>& basis, Index start, std::vector<Index>& chosen) {
    for (Index j = start; j < n_; ++j) {
      if (contains(basis, j)) continue;
      const Matrix<S> next = extend(basis, j);
      if (next.cols() >= d_) continue;
      if (report_.tests >= options_.budget) return false;
      chosen.push_back(j);
      evaluate(next, chosen);
      const bool complete = descend(next, j + 1, chosen);
      chosen.pop_back();
      if (!complete) return false;
      if (iii_violated() && iv_violated()) return true;
    }
    return true;
  }

  Index d_;
  Index n_;
  double alpha_;
  const CheckOptions& options_;
  ConditionReport& report_;
  std::vector<Matrix<S>> ranges_;
};

template <Field S>
bool spans(const std::vector<Matrix<S>>& grams, std::uint64_t mask, bool in_mask, Index d) {
  Matrix<S> sum = Matrix<S>::Zero(d, d);
  bool any = false;
  for (size_t j = 0; j < grams.size(); ++j) {
    if (((mask >> j) & 1u) == static_cast<std::uint64_t>(in_mask)) {
      sum += grams[j];
      any = true;
    }
  }
  return any && psd_rank<S>(sum) == d;
}

template <Field S>
void check_partitions(const GFrame<S>& frame, const CheckOptions& options, ConditionReport& report) {
  const Index n = frame.size();
  const Index d = frame.ambient_dim();
  if (n > 20) return;
  const auto grams = frame.grams();
  // Element n-1 is pinned to the second half, so every split is seen once.
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (report.tests >= options.budget) return;
    ++report.tests;
    if (!spans(grams, mask, true, d) && !spans(grams, mask, false, d)) {
      PartitionWitness w;
      for (Index j = 0; j < n; ++j) ((mask >> j) & 1u ? w.first : w.second).push_back(j);
      report.ii_witness = std::move(w);
      report.cond_ii = Verdict::violated;
      return;
    }
  }
  report.cond_ii = Verdict::holds;
}

}  // namespace

template <Field S>
ConditionReport check_conditions(const GFrame<S>& frame, const CheckOptions& options) {
  ConditionReport report;
  report.method = options.mode;
  const Index d = frame.ambient_dim();
  const Index n = frame.size();
  report.is_frame = is_frame(frame);

  if (!report.is_frame) {
    report.alpha = std::numeric_limits<double>::infinity();
    std::vector<Index> all(static_cast<size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    const Index rank = psd_rank<S>(frame_operator(frame));
    report.iii_witness = SubspaceWitness{all, rank, all};
    report.iv_witness = report.iii_witness;
    report.ii_witness = PartitionWitness{all, {}};
    report.cond_ii = report.cond_iii = report.cond_iv = Verdict::violated;
    return report;
  }

  report.alpha = alpha(frame);
  SubspaceSearch<S> search(frame, report.alpha, options, report);
  bool complete = false;
  if (options.mode == CheckMode::exhaustive) {
    complete = search.exhaustive();
  } else {
    search.heuristic();
  }
  auto verdict = [&](bool violated) {
    if (violated) return Verdict::violated;
    return complete ? Verdict::holds : Verdict::undecided;
  };
  report.cond_iii = verdict(search.iii_violated());
  report.cond_iv = verdict(search.iv_violated());

  if (d == 1) {
    report.cond_ii = Verdict::holds;
  } else if (report.cond_iii == Verdict::holds) {
    report.cond_ii = Verdict::holds;
    report.ii_from_iii = true;
  } else if (options.mode == CheckMode::exhaustive) {
    check_partitions(frame, options, report);
  }
  return report;
}

#define FRAMETIGHT_INSTANTIATE_GFRAME(S)                                                 \
  template class GFrame<S>;                                                              \
  template Matrix<S> frame_operator<S>(const GFrame<S>&);                                \
  template FrameBounds frame_bounds<S>(const GFrame<S>&);                                \
  template bool is_frame<S>(const GFrame<S>&);                                           \
  template HermitianPD<S> frame_operator_pd<S>(const GFrame<S>&);                        \
  template Coefficients<S> analysis<S>(const GFrame<S>&, const Vector<S>&);              \
  template Vector<S> synthesis<S>(const GFrame<S>&, const Coefficients<S>&);             \
  template GFrame<S> canonical_dual<S>(const GFrame<S>&);                                \
  template GFrame<S> canonical_parseval<S>(const GFrame<S>&);                            \
  template RealVector alpha_terms<S>(const GFrame<S>&);                                  \
  template double alpha<S>(const GFrame<S>&);                                            \
  template ConditionReport check_conditions<S>(const GFrame<S>&, const CheckOptions&);

FRAMETIGHT_INSTANTIATE_GFRAME(double)
FRAMETIGHT_INSTANTIATE_GFRAME(Complex)

}  // namespace frametight
