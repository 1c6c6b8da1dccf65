#pragma once

// JSON and CSV serialization of frames, tightening results, condition reports
// and ensemble specs.
//
// gframe-json:
//
//   {"d": 2, "field": "real", "elements": [
//     {"kind": "dense", "rows": 2, "cols": 1, "data": ["1", "0"]},
//     {"kind": "circulant", "k": 2, "generator": "1 0.5 0 0"},
//     {"kind": "gabor", "window": "1 1+i -1 i"},
//     {"kind": "projector", "rows": 3, "cols": 1, "data": [...]},
//     {"kind": "subsampler", "rows": 4, "indices": [0, 2]},
//     {"kind": "scaled", "factor": "0.5", "inner": {...}}]}
//
// "data" holds the body lines of an mtx-simple document; vectors are written
// as one whitespace-separated mtx-simple row.

#include <string>

#include "frametight/ensembles.hpp"
#include "frametight/gframe.hpp"
#include "frametight/tyler.hpp"

namespace frametight {

template <Field S>
std::string gframe_to_json(const GFrame<S>& frame);

/// Accepts a real document for S = Complex; rejects a complex one for S = double.
template <Field S>
GFrame<S> gframe_from_json(const std::string& text);

/// The "field" member of a gframe-json document.
FieldKind peek_gframe_field(const std::string& text);

/// {status, iterations, residual, residuals, gamma (mtx-simple or null), weights, message}.
template <Field S>
std::string tighten_result_json(const TightenResult<S>& result);

/// Header "k,lambda_min,lambda_max,residual" and one row per logged iteration.
template <Field S>
std::string iteration_log_csv(const TightenResult<S>& result);

std::string condition_report_json(const ConditionReport& report);

/// {"kind", "d", "r", "n", "window", "seed", "sigma" (nested row arrays)}; absent members keep their defaults.
EnsembleSpec ensemble_spec_from_json(const std::string& text, EnsembleSpec defaults = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace frametight
