#pragma once

// Generalized frames {T_j : K^{r_j} -> K^d}: frame operator, bounds,
// analysis/synthesis, canonical dual and Parseval frames, and the subspace
// conditions under which the tightening iteration converges.

#include <cstdint>
#include <optional>
#include <vector>

#include "frametight/linalg.hpp"
#include "frametight/operators.hpp"

namespace frametight {

template <Field S>
class GFrame {
 public:
  using Element = StructuredOperator<S>;

  /// Throws PreconditionError when empty, when an element has the wrong row
  /// count, or when an element is zero.
  GFrame(Index ambient_dim, std::vector<Element> elements);

  static GFrame from_dense(const std::vector<Matrix<S>>& elements);

  Index ambient_dim() const noexcept { return dim_; }
  Index size() const noexcept { return static_cast<Index>(elements_.size()); }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  const Element& operator[](Index j) const { return elements_[static_cast<size_t>(j)]; }
  std::vector<Index> element_dims() const;

  /// T_j T_j^H for every element, computed once per call.
  std::vector<Matrix<S>> grams() const;

  /// sum_j ||T_j||_HS^2
  double total_hs_squared() const;

 private:
  Index dim_;
  std::vector<Element> elements_;
};

template <Field S>
using Coefficients = std::vector<Vector<S>>;

/// S = sum_j T_j T_j^H (PSD, possibly singular).
template <Field S>
Matrix<S> frame_operator(const GFrame<S>& frame);

struct FrameBounds {
  double lower;
  double upper;
};

template <Field S>
FrameBounds frame_bounds(const GFrame<S>& frame);

template <Field S>
bool is_frame(const GFrame<S>& frame);

/// Frame operator as HermitianPD; throws NotAFrameError when singular.
template <Field S>
HermitianPD<S> frame_operator_pd(const GFrame<S>& frame);

template <Field S>
Coefficients<S> analysis(const GFrame<S>& frame, const Vector<S>& x);

template <Field S>
Vector<S> synthesis(const GFrame<S>& frame, const Coefficients<S>& coeffs);

/// {S^{-1} T_j}, dense.
template <Field S>
GFrame<S> canonical_dual(const GFrame<S>& frame);

/// {S^{-1/2} T_j}, dense.
template <Field S>
GFrame<S> canonical_parseval(const GFrame<S>& frame);

/// trace(T_j^H S^{-1} T_j) for every j; they sum to d.
template <Field S>
RealVector alpha_terms(const GFrame<S>& frame);

template <Field S>
double alpha(const GFrame<S>& frame);

enum class Verdict { holds, violated, undecided };
enum class CheckMode { exhaustive, heuristic };

const char* to_string(Verdict v) noexcept;
const char* to_string(CheckMode m) noexcept;

/// A subspace L given as the span of some element ranges, together with the
/// elements whose range lies in L.
struct SubspaceWitness {
  std::vector<Index> spanned_by;
  Index dim = 0;
  std::vector<Index> contained;
};

/// A split {1..n} = first u second where neither half spans K^d.
struct PartitionWitness {
  std::vector<Index> first;
  std::vector<Index> second;
};

struct CheckOptions {
  CheckMode mode = CheckMode::exhaustive;
  std::uint64_t budget = 1'000'000;  // subspace / partition tests
  std::uint64_t seed = 0;            // heuristic sampling only
};

struct ConditionReport {
  bool is_frame = false;
  Verdict cond_ii = Verdict::undecided;
  Verdict cond_iii = Verdict::undecided;
  Verdict cond_iv = Verdict::undecided;
  double alpha = 0.0;
  bool ii_from_iii = false;  // (ii) certified through (iii), d >= 2
  std::optional<PartitionWitness> ii_witness;
  std::optional<SubspaceWitness> iii_witness;
  std::optional<SubspaceWitness> iv_witness;
  CheckMode method = CheckMode::exhaustive;
  std::uint64_t tests = 0;

  bool all_hold() const noexcept;
  bool any_violated() const noexcept;
};

template <Field S>
ConditionReport check_conditions(const GFrame<S>& frame, const CheckOptions& options = {});

}  // namespace frametight
