#include "frametight/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "frametight/errors.hpp"
#include "frametight/mtx_io.hpp"

namespace frametight {

using json = nlohmann::ordered_json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
}

template <class T>
T member(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("json: missing member '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("json: member '") + key + "' has the wrong type");
  }
}

template <Field S>
std::string format_row(const Vector<S>& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_scalar<S>(v(i));
  }
  return out;
}

template <Field S>
Vector<S> parse_row(const std::string& line) {
  std::istringstream in(line);
  std::vector<S> values;
  std::string token;
  while (in >> token) values.push_back(parse_scalar<S>(token));
  Vector<S> v(static_cast<Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) v(static_cast<Index>(i)) = values[i];
  return v;
}

template <Field S>
json matrix_json(const Matrix<S>& m, const char* kind) {
  return {{"kind", kind}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", format_mtx_rows<S>(m)}};
}

template <Field S>
Matrix<S> matrix_from(const json& e) {
  const auto rows = member<Index>(e, "rows");
  const auto cols = member<Index>(e, "cols");
  if (rows < 1 || cols < 1) throw ParseError("json: matrix shape must be positive");
  return parse_mtx_rows<S>(rows, cols, member<std::vector<std::string>>(e, "data"));
}

template <Field S>
json element_json(const StructuredOperator<S>& t) {
  switch (t.kind()) {
    case OperatorKind::dense:
      return matrix_json<S>(t.dense_matrix(), "dense");
    case OperatorKind::circulant_block:
      return {{"kind", "circulant"}, {"k", t.cols()}, {"generator", format_row<S>(t.generator())}};
    case OperatorKind::gabor_block:
      return {{"kind", "gabor"}, {"window", format_row<S>(t.window())}};
    case OperatorKind::projector_factor:
      return matrix_json<S>(t.factor_matrix(), "projector");
    case OperatorKind::subsampler:
      return {{"kind", "subsampler"}, {"rows", t.rows()}, {"indices", t.indices()}};
    case OperatorKind::scaled:
      return {{"kind", "scaled"}, {"factor", format_scalar<S>(t.scale_factor())}, {"inner", element_json<S>(t.inner())}};
  }
  throw PreconditionError("unknown operator kind");
}

template <Field S>
StructuredOperator<S> element_from(const json& e) {
  const auto kind = member<std::string>(e, "kind");
  if (kind == "dense") return StructuredOperator<S>::dense(matrix_from<S>(e));
  if (kind == "projector") return StructuredOperator<S>::projector(matrix_from<S>(e));
  if (kind == "circulant") {
    return StructuredOperator<S>::circulant(parse_row<S>(member<std::string>(e, "generator")), member<Index>(e, "k"));
  }
  if (kind == "gabor") {
    if constexpr (is_complex_v<S>) {
      return StructuredOperator<S>::gabor(parse_row<S>(member<std::string>(e, "window")));
    } else {
      throw ParseError("json: gabor elements need field complex");
    }
  }
  if (kind == "subsampler") {
    return StructuredOperator<S>::subsampler(member<Index>(e, "rows"), member<std::vector<Index>>(e, "indices"));
  }
  if (kind == "scaled") {
    return StructuredOperator<S>::scaled(element_from<S>(member<json>(e, "inner")),
                                         parse_scalar<S>(member<std::string>(e, "factor")));
  }
  throw ParseError("json: unknown element kind '" + kind + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinities or NaN; those become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json witness_json(const SubspaceWitness& w) {
  return {{"spanned_by", w.spanned_by}, {"dim", w.dim}, {"contained", w.contained}};
}

}  // namespace

template <Field S>
std::string gframe_to_json(const GFrame<S>& frame) {
  json doc{{"d", frame.ambient_dim()}, {"field", to_string(field_kind_v<S>)}, {"elements", json::array()}};
  for (const auto& t : frame.elements()) doc["elements"].push_back(element_json<S>(t));
  return doc.dump(2) + "\n";
}

template <Field S>
GFrame<S> gframe_from_json(const std::string& text) {
  const json doc = parse_json(text);
  const FieldKind field = parse_field_kind(member<std::string>(doc, "field"));
  if (field == FieldKind::complex && !is_complex_v<S>) throw ParseError("json: complex frame read as real");
  const auto d = member<Index>(doc, "d");
  const json& elements = doc.contains("elements") ? doc.at("elements") : json();
  if (!elements.is_array()) throw ParseError("json: 'elements' must be an array");
  std::vector<StructuredOperator<S>> ops;
  try {
    for (const auto& e : elements) ops.push_back(element_from<S>(e));
    return GFrame<S>(d, std::move(ops));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("json: invalid frame: ") + e.what());
  }
}

FieldKind peek_gframe_field(const std::string& text) {
  try {
    return parse_field_kind(member<std::string>(parse_json(text), "field"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

template <Field S>
std::string tighten_result_json(const TightenResult<S>& result) {
  json doc{{"status", to_string(result.status)},
           {"iterations", result.iterations},
           {"residual", number(result.residual)},
           {"residuals", json::array()},
           {"gamma", nullptr},
           {"weights", result.weights},
           {"message", result.message}};
  for (const auto& state : result.log) doc["residuals"].push_back(number(state.residual));
  if (result.gamma) doc["gamma"] = write_mtx<S>(result.gamma->matrix());
  return doc.dump(2) + "\n";
}

template <Field S>
std::string iteration_log_csv(const TightenResult<S>& result) {
  std::string out = "k,lambda_min,lambda_max,residual\n";
  for (const auto& s : result.log) {
    out += std::to_string(s.k) + "," + format_double(s.lambda_min) + "," + format_double(s.lambda_max) + "," +
           format_double(s.residual) + "\n";
  }
  return out;
}

std::string condition_report_json(const ConditionReport& report) {
  json doc{{"is_frame", report.is_frame},
           {"cond_ii", to_string(report.cond_ii)},
           {"cond_iii", to_string(report.cond_iii)},
           {"cond_iv", to_string(report.cond_iv)},
           {"alpha", number(report.alpha)},
           {"ii_from_iii", report.ii_from_iii},
           {"method", to_string(report.method)},
           {"tests", report.tests},
           {"all_hold", report.all_hold()},
           {"any_violated", report.any_violated()}};
  doc["ii_witness"] = report.ii_witness
                          ? json{{"first", report.ii_witness->first}, {"second", report.ii_witness->second}}
                          : json(nullptr);
  doc["iii_witness"] = report.iii_witness ? witness_json(*report.iii_witness) : json(nullptr);
  doc["iv_witness"] = report.iv_witness ? witness_json(*report.iv_witness) : json(nullptr);
  return doc.dump(2) + "\n";
}

EnsembleSpec ensemble_spec_from_json(const std::string& text, EnsembleSpec spec) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("json: ensemble config must be an object");
  if (doc.contains("kind")) spec.kind = parse_ensemble_kind(member<std::string>(doc, "kind"));
  if (doc.contains("d")) spec.d = member<Index>(doc, "d");
  if (doc.contains("r")) spec.r = member<Index>(doc, "r");
  if (doc.contains("n")) spec.n = member<Index>(doc, "n");
  if (doc.contains("window")) spec.window = parse_window_dist(member<std::string>(doc, "window"));
  if (doc.contains("seed")) spec.seed = member<std::uint64_t>(doc, "seed");
  if (doc.contains("sigma")) {
    const auto rows = member<std::vector<std::vector<double>>>(doc, "sigma");
    const auto dim = static_cast<Index>(rows.size());
    spec.sigma.resize(dim, dim);
    for (Index i = 0; i < dim; ++i) {
      if (static_cast<Index>(rows[static_cast<size_t>(i)].size()) != dim) throw ParseError("json: sigma must be square");
      for (Index j = 0; j < dim; ++j) spec.sigma(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  return spec;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

#define FRAMETIGHT_INSTANTIATE_IO(S)                                   \
  template std::string gframe_to_json<S>(const GFrame<S>&);            \
  template GFrame<S> gframe_from_json<S>(const std::string&);          \
  template std::string tighten_result_json<S>(const TightenResult<S>&); \
  template std::string iteration_log_csv<S>(const TightenResult<S>&);

FRAMETIGHT_INSTANTIATE_IO(double)
FRAMETIGHT_INSTANTIATE_IO(Complex)

}  // namespace frametight
