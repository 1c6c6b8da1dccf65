#include "frametight/mtx_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "frametight/errors.hpp"

namespace frametight {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw ParseError("invalid number '" + std::string(token) + "'");
  }
  return value;
}

Complex parse_complex(std::string_view token) {
  if (token.empty()) throw ParseError("empty scalar token");
  if (token.back() != 'i') return {parse_double(token), 0.0};
  std::string_view body = token.substr(0, token.size() - 1);
  size_t split = std::string_view::npos;
  for (size_t pos = body.size(); pos-- > 1;) {
    const char c = body[pos];
    if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
      split = pos;
      break;
    }
  }
  auto imaginary = [](std::string_view part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_double(part);
  };
  if (split == std::string_view::npos) return {0.0, imaginary(body)};
  return {parse_double(body.substr(0, split)), imaginary(body.substr(split))};
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

}  // namespace

template <>
std::string format_scalar<double>(double value) {
  return format_double(value);
}

template <>
std::string format_scalar<Complex>(Complex value) {
  const double im = value.imag();
  return format_double(value.real()) + (std::signbit(im) ? "-" : "+") + format_double(std::abs(im)) + "i";
}

template <>
double parse_scalar<double>(std::string_view token) {
  const Complex z = parse_complex(token);
  if (z.imag() != 0.0) throw ParseError("complex value '" + std::string(token) + "' in a real field");
  return z.real();
}

template <>
Complex parse_scalar<Complex>(std::string_view token) {
  return parse_complex(token);
}

namespace {

struct Header {
  Index rows;
  Index cols;
  FieldKind field;
};

Header parse_header(const std::string& line) {
  const auto tokens = split_ws(line);
  if (tokens.size() != 3) throw ParseError("mtx-simple header must be 'rows cols field'");
  Header h{};
  try {
    h.rows = std::stol(tokens[0]);
    h.cols = std::stol(tokens[1]);
  } catch (const std::exception&) {
    throw ParseError("mtx-simple header has non-integer dimensions");
  }
  if (h.rows <= 0 || h.cols <= 0) throw ParseError("mtx-simple dimensions must be positive");
  h.field = parse_field_kind(tokens[2]);
  return h;
}

std::vector<std::string> nonblank_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  return lines;
}

}  // namespace

FieldKind peek_mtx_field(std::string_view text) {
  const auto lines = nonblank_lines(text);
  if (lines.empty()) throw ParseError("empty mtx-simple document");
  return parse_header(lines.front()).field;
}

template <Field S>
std::vector<std::string> format_mtx_rows(const Matrix<S>& m) {
  std::vector<std::string> rows;
  rows.reserve(static_cast<size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    std::string line;
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ' ';
      line += format_scalar<S>(m(i, j));
    }
    rows.push_back(std::move(line));
  }
  return rows;
}

template <Field S>
Matrix<S> parse_mtx_rows(Index rows, Index cols, const std::vector<std::string>& lines) {
  if (static_cast<Index>(lines.size()) != rows) {
    throw ParseError("expected " + std::to_string(rows) + " rows, found " + std::to_string(lines.size()));
  }
  Matrix<S> m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto tokens = split_ws(lines[static_cast<size_t>(i)]);
    if (static_cast<Index>(tokens.size()) != cols) {
      throw ParseError("row " + std::to_string(i) + " has " + std::to_string(tokens.size()) + " entries, expected " +
                       std::to_string(cols));
    }
    for (Index j = 0; j < cols; ++j) {
      const S value = parse_scalar<S>(tokens[static_cast<size_t>(j)]);
      if (!std::isfinite(std::abs(value))) throw ParseError("non-finite matrix entry");
      m(i, j) = value;
    }
  }
  return m;
}

template <Field S>
std::string write_mtx(const Matrix<S>& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " + to_string(field_kind_v<S>) + "\n";
  for (const auto& row : format_mtx_rows<S>(m)) out += row + "\n";
  return out;
}

template <Field S>
Matrix<S> read_mtx(std::string_view text) {
  auto lines = nonblank_lines(text);
  if (lines.empty()) throw ParseError("empty mtx-simple document");
  const Header h = parse_header(lines.front());
  if (h.field == FieldKind::complex && !is_complex_v<S>) {
    throw ParseError("complex matrix cannot be read into the real field");
  }
  lines.erase(lines.begin());
  return parse_mtx_rows<S>(h.rows, h.cols, lines);
}

template std::vector<std::string> format_mtx_rows<double>(const Matrix<double>&);
template std::vector<std::string> format_mtx_rows<Complex>(const Matrix<Complex>&);
template Matrix<double> parse_mtx_rows<double>(Index, Index, const std::vector<std::string>&);
template Matrix<Complex> parse_mtx_rows<Complex>(Index, Index, const std::vector<std::string>&);
template std::string write_mtx<double>(const Matrix<double>&);
template std::string write_mtx<Complex>(const Matrix<Complex>&);
template Matrix<double> read_mtx<double>(std::string_view);
template Matrix<Complex> read_mtx<Complex>(std::string_view);

}  // namespace frametight
