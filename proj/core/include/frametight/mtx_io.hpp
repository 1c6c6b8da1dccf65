#pragma once

// "mtx-simple" matrix text format:
//
//   rows cols field          (field is "real" or "complex")
//   a11 a12 ...              (one matrix row per line)
//
// Complex entries are written as a+bi / a-bi. Real values use 17 significant
// digits so that write -> read is lossless.

#include <string>
#include <string_view>
#include <vector>

#include "frametight/linalg.hpp"

namespace frametight {

template <Field S>
std::string format_scalar(S value);

/// Parses "1.5", "-2e-3", "1+2i", "3-0.5i", "2i", "-i". A real-field parse
/// rejects a non-zero imaginary part.
template <Field S>
S parse_scalar(std::string_view token);

template <>
std::string format_scalar<double>(double value);
template <>
std::string format_scalar<Complex>(Complex value);
template <>
double parse_scalar<double>(std::string_view token);
template <>
Complex parse_scalar<Complex>(std::string_view token);

/// Field declared on the header line of an mtx-simple document.
FieldKind peek_mtx_field(std::string_view text);

template <Field S>
std::string write_mtx(const Matrix<S>& m);

/// Reads an mtx-simple document. A complex document is rejected for S = double;
/// a real document is accepted for S = Complex.
template <Field S>
Matrix<S> read_mtx(std::string_view text);

/// One whitespace-separated line per matrix row (the body of mtx-simple).
template <Field S>
std::vector<std::string> format_mtx_rows(const Matrix<S>& m);

template <Field S>
Matrix<S> parse_mtx_rows(Index rows, Index cols, const std::vector<std::string>& lines);

}  // namespace frametight
