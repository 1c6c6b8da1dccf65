#include "frametight/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "frametight/errors.hpp"
#include "frametight/parallel.hpp"
#include "frametight/random.hpp"

namespace frametight {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string join(const std::vector<Index>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

// sum_j ||A_j - B_j||_HS^2
double summed_distance(const GFrame<double>& a, const GFrame<double>& b, double scale_b = 1.0) {
  double total = 0.0;
  for (Index j = 0; j < a.size(); ++j) {
    total += (a[j].dense_matrix() - scale_b * b[j].dense_matrix()).squaredNorm();
  }
  return total;
}

}  // namespace

double ExperimentReport::scalar(const std::string& key) const {
  const auto it = scalars.find(key);
  if (it == scalars.end()) throw PreconditionError("report '" + name + "' has no scalar '" + key + "'");
  return it->second;
}

std::string report_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["metadata"] = report.metadata;
  j["scalars"] = nlohmann::json::object();
  for (const auto& [k, v] : report.scalars) j["scalars"][k] = v;
  j["series"] = nlohmann::json::object();
  for (const auto& [k, s] : report.series) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& [x, y] : s.points) points.push_back({x, y});
    j["series"][k] = {{"x_label", s.x_label}, {"y_label", s.y_label}, {"points", points}};
  }
  j["tables"] = nlohmann::json::object();
  for (const auto& [k, t] : report.tables) j["tables"][k] = {{"columns", t.columns}, {"rows", t.rows}};
  return j.dump(2) + "\n";
}

std::string series_csv(const Series& series) {
  std::string out = series.x_label + "," + series.y_label + "\n";
  for (const auto& [x, y] : series.points) out += fmt(x) + "," + fmt(y) + "\n";
  return out;
}

std::string table_csv(const Table& table) {
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + fmt(row[c]);
    out += "\n";
  }
  return out;
}

void write_report(const ExperimentReport& report, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto put = [&](const std::string& file, const std::string& text) {
    std::ofstream out(fs::path(directory) / file, std::ios::binary);
    if (!out) throw Error("cannot write " + (fs::path(directory) / file).string());
    out << text;
  };
  put("report.json", report_json(report));
  for (const auto& [k, s] : report.series) put(k + ".csv", series_csv(s));
  for (const auto& [k, t] : report.tables) put(k + ".csv", table_csv(t));
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !(step > 0.0) || stop < start) {
    throw PreconditionError("grid needs finite start <= stop and step > 0");
  }
  const auto count = static_cast<Index>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<size_t>(count));
  for (Index i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  if (std::abs(out.back() - stop) <= 1e-9 * step) out.back() = stop;
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& tok) {
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw ParseError("");
      return v;
    } catch (const std::exception&) {
      throw ParseError("invalid grid value '" + tok + "' in '" + text + "'");
    }
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, sep)) parts.push_back(tok);
  if (parts.empty()) throw ParseError("empty grid");
  if (sep == ':') {
    if (parts.size() != 3) throw ParseError("grid must be start:stop:step");
    try {
      return make_grid(number(parts[0]), number(parts[1]), number(parts[2]));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(number(p));
  return out;
}

// --- ex_some -------------------------------------------------------------------

namespace {

constexpr std::array<double, 3> kBeta{0.0, kPi / 3.0, 2.0 * kPi / 3.0};
constexpr double kMaxTheta = 2.0 * kPi / 3.0;

double line_distance(double a, double b) {
  const double g = std::abs(a - b);
  return std::min(g, kPi - g);
}

GFrame<double> unit_vectors(const std::vector<double>& angles) {
  std::vector<Matrix<double>> elements;
  for (double a : angles) {
    Matrix<double> t(2, 1);
    t << std::cos(a), std::sin(a);
    elements.push_back(t);
  }
  return GFrame<double>::from_dense(elements);
}

}  // namespace

double ex_some_objective(const std::vector<double>& angles, const std::vector<int>& signs, double theta) {
  double total = 0.0;
  for (size_t j = 0; j < 3; ++j) {
    const double s = signs[j];
    const double zx = s * std::cos(theta + kBeta[j]);
    const double zy = s * std::sin(theta + kBeta[j]);
    const double dx = zx - std::cos(angles[j]);
    const double dy = zy - std::sin(angles[j]);
    total += dx * dx + dy * dy;
  }
  return total;
}

ExSomeTrial ex_some_trial(std::uint64_t seed, std::uint64_t trial) {
  ExSomeTrial out;
  Rng rng(seed, trial);
  std::array<double, 3> lines{};
  for (;;) {
    out.angles.clear();
    for (int j = 0; j < 3; ++j) out.angles.push_back(2.0 * kPi * rng.uniform01());
    for (int j = 0; j < 3; ++j) lines[static_cast<size_t>(j)] = std::fmod(out.angles[static_cast<size_t>(j)], kPi);
    if (line_distance(lines[0], lines[1]) >= 1e-9 && line_distance(lines[0], lines[2]) >= 1e-9 &&
        line_distance(lines[1], lines[2]) >= 1e-9) {
      break;
    }
    ++out.resamples;
  }

  // Sign flips make every vector a line in [0, pi); a rotation putting the line
  // after the widest cyclic gap at 0 leaves all three in [0, pi - gap] within [0, 2pi/3].
  std::array<double, 3> sorted = lines;
  std::sort(sorted.begin(), sorted.end());
  size_t widest = 0;
  double widest_gap = -1.0;
  for (size_t k = 0; k < 3; ++k) {
    const double gap = k < 2 ? sorted[k + 1] - sorted[k] : sorted[0] + kPi - sorted[2];
    if (gap > widest_gap) {
      widest_gap = gap;
      widest = k;
    }
  }
  out.rotation = sorted[(widest + 1) % 3];
  for (double l : sorted) {
    double c = l - out.rotation;
    if (c < 0.0) c += kPi;
    out.canonical.push_back(c);
  }
  std::sort(out.canonical.begin(), out.canonical.end());

  const GFrame<double> frame = unit_vectors(out.canonical);
  const TightenResult<double> tight = tighten(frame);
  out.converged = tight.converged();
  if (!out.converged || !tight.tight_frame) return out;

  out.objective = std::numeric_limits<double>::infinity();
  for (int pattern = 0; pattern < 8; ++pattern) {
    std::vector<int> signs{(pattern & 1) ? -1 : 1, (pattern & 2) ? -1 : 1, (pattern & 4) ? -1 : 1};
    double sn = 0.0;
    double cs = 0.0;
    for (size_t j = 0; j < 3; ++j) {
      sn += signs[j] * std::sin(out.canonical[j] - kBeta[j]);
      cs += signs[j] * std::cos(out.canonical[j] - kBeta[j]);
    }
    const double theta = std::atan2(sn, cs);
    if (std::abs(theta) > kMaxTheta) continue;
    const double obj = ex_some_objective(out.canonical, signs, theta);
    if (obj < out.objective) {
      out.objective = obj;
      out.theta = theta;
      out.signs = signs;
    }
  }

  const GFrame<double>& r = *tight.tight_frame;
  out.error = 0.0;
  for (size_t j = 0; j < 3; ++j) {
    const double s = out.signs[j];
    const double dx = s * std::cos(out.theta + kBeta[j]) - r[static_cast<Index>(j)].dense_matrix()(0, 0);
    const double dy = s * std::sin(out.theta + kBeta[j]) - r[static_cast<Index>(j)].dense_matrix()(1, 0);
    out.error += dx * dx + dy * dy;
  }
  return out;
}

ExperimentReport ex_some(Index trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw PreconditionError("ex_some: trials must be positive");
  const auto start = Clock::now();
  std::vector<ExSomeTrial> results(static_cast<size_t>(trials));
  parallel_for(trials, threads, [&](Index t) {
    results[static_cast<size_t>(t)] = ex_some_trial(seed, static_cast<std::uint64_t>(t));
  });

  ExperimentReport report;
  report.name = "ex-some";
  report.metadata = {{"trials", std::to_string(trials)}, {"seed", std::to_string(seed)}};
  std::vector<double> errors;
  Index resamples = 0;
  Index excluded = 0;
  Series per_trial{"trial", "error", {}};
  for (Index t = 0; t < trials; ++t) {
    const auto& r = results[static_cast<size_t>(t)];
    resamples += r.resamples;
    if (!r.converged) {
      ++excluded;
      continue;
    }
    errors.push_back(r.error);
    per_trial.points.emplace_back(static_cast<double>(t), r.error);
  }
  report.scalars["avg_error"] = mean(errors);
  report.scalars["median_error"] = median(errors);
  report.scalars["resampled"] = static_cast<double>(resamples);
  report.scalars["excluded"] = static_cast<double>(excluded);
  report.series["trial_error"] = std::move(per_trial);
  report.runtime_seconds = seconds_since(start);
  return report;
}

// --- ex_theta ------------------------------------------------------------------

GFrame<double> ex_theta_frame(double t) {
  if (!(t >= 0.0 && t <= 0.5)) throw PreconditionError("ex_theta: t must lie in [0, 1/2]");
  Matrix<double> t1(2, 2);
  Matrix<double> t2(2, 2);
  Matrix<double> t3(2, 2);
  t1 << std::sqrt(1.0 - t), 0.0, 0.0, std::sqrt(t);
  t2 << std::sqrt(t), std::sqrt(t), 0.0, std::sqrt(1.0 - 2.0 * t);
  t3 << std::sqrt((1.0 - t) / 2.0), 0.0, 0.0, std::sqrt((1.0 + t) / 2.0);
  return GFrame<double>::from_dense({t1, t2, t3});
}

ExperimentReport ex_theta(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw PreconditionError("ex_theta: empty grid");
  const auto start = Clock::now();
  ExperimentReport report;
  report.name = "ex-theta";
  report.metadata = {{"grid", join(t_grid)}};
  Series tight_series{"t", "dist_tight", {}};
  Series parseval_series{"t", "dist_parseval", {}};
  Index excluded = 0;
  for (double t : t_grid) {
    const GFrame<double> frame = ex_theta_frame(t);
    const TightenResult<double> result = tighten(frame);
    const double scale = std::sqrt(static_cast<double>(frame.ambient_dim()) / static_cast<double>(frame.size()));
    const double parseval = summed_distance(frame, canonical_parseval(frame));
    parseval_series.points.emplace_back(t, parseval);
    if (!result.converged()) {
      ++excluded;
      continue;
    }
    const double tight = summed_distance(frame, *result.tight_frame, scale);
    tight_series.points.emplace_back(t, tight);
    if (t == 0.0) {
      report.scalars["at_zero"] = tight;
      report.scalars["parseval_at_zero"] = parseval;
      report.scalars["r0_deviation"] = summed_distance(frame, *result.tight_frame);
    }
  }
  report.scalars["excluded"] = static_cast<double>(excluded);
  report.series["dist_tight"] = std::move(tight_series);
  report.series["dist_parseval"] = std::move(parseval_series);
  report.runtime_seconds = seconds_since(start);
  return report;
}

// --- random unit-HS elements ---------------------------------------------------

ExperimentReport random_hs_unit(Index trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw PreconditionError("random_hs_unit: trials must be positive");
  const auto start = Clock::now();
  struct Outcome {
    bool converged = false;
    double parseval = 0.0;
    double equal_norm = 0.0;
  };
  std::vector<Outcome> outcomes(static_cast<size_t>(trials));
  parallel_for(trials, threads, [&](Index t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    std::vector<Matrix<double>> elements;
    for (int j = 0; j < 3; ++j) {
      Matrix<double> m(2, 2);
      for (Index c = 0; c < 2; ++c) {
        for (Index r = 0; r < 2; ++r) m(r, c) = rng.uniform01();
      }
      elements.push_back(m / m.norm());
    }
    const auto frame = GFrame<double>::from_dense(elements);
    const TightenResult<double> result = tighten(frame);
    Outcome& o = outcomes[static_cast<size_t>(t)];
    o.converged = result.converged();
    if (!o.converged) return;
    o.parseval = summed_distance(frame, canonical_parseval(frame));
    o.equal_norm = summed_distance(frame, *result.tight_frame, std::sqrt(2.0 / 3.0));
  });

  std::vector<double> parseval;
  std::vector<double> equal_norm;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    if (!o.converged) continue;
    parseval.push_back(o.parseval);
    equal_norm.push_back(o.equal_norm);
    min_gap = std::min(min_gap, o.equal_norm - o.parseval);
  }
  ExperimentReport report;
  report.name = "random-hs";
  report.metadata = {{"trials", std::to_string(trials)}, {"seed", std::to_string(seed)}};
  report.scalars["mean_parseval_dist"] = mean(parseval);
  report.scalars["mean_equal_norm_dist"] = mean(equal_norm);
  report.scalars["difference"] = mean(equal_norm) - mean(parseval);
  report.scalars["min_gap"] = min_gap;
  report.scalars["excluded"] = static_cast<double>(trials - static_cast<Index>(parseval.size()));
  report.runtime_seconds = seconds_since(start);
  return report;
}

// --- failure example -------------------------------------------------------------

GFrame<double> failure_frame(double t, bool row_form) {
  Matrix<double> t1 = Matrix<double>::Zero(2, 2);
  Matrix<double> t2 = Matrix<double>::Zero(2, 2);
  Matrix<double> t3 = Matrix<double>::Zero(2, 2);
  t1(0, 0) = 1.0;
  t2(0, 0) = 1.0;
  if (row_form) {
    t2(0, 1) = t;
  } else {
    t2(1, 0) = t;
  }
  t3(1, 1) = 1.0;
  return GFrame<double>::from_dense({t1, t2, t3});
}

ExperimentReport failure_case(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw PreconditionError("failure_case: empty grid");
  const auto start = Clock::now();
  ExperimentReport report;
  report.name = "failure";
  report.metadata = {{"grid", join(t_grid)}};
  Table table{{"t", "converged", "status", "iterations", "residual", "cond_iii_violated", "cond_iv_violated"}, {}};
  Series converged{"t", "converged", {}};
  for (double t : t_grid) {
    const GFrame<double> frame = failure_frame(t);
    const TightenResult<double> result = tighten(frame);
    const ConditionReport cond = check_conditions(frame);
    const double ok = result.converged() ? 1.0 : 0.0;
    table.rows.push_back({t, ok, static_cast<double>(static_cast<int>(result.status)),
                          static_cast<double>(result.iterations), result.residual,
                          cond.cond_iii == Verdict::violated ? 1.0 : 0.0,
                          cond.cond_iv == Verdict::violated ? 1.0 : 0.0});
    converged.points.emplace_back(t, ok);
    if (t == 0.0) {
      report.scalars["t0_converged"] = ok;
      report.scalars["t0_iii_violated"] = cond.cond_iii == Verdict::violated ? 1.0 : 0.0;
      report.metadata["t0_status"] = to_string(result.status);
    }
  }
  report.tables["status"] = std::move(table);
  report.series["converged"] = std::move(converged);
  report.metadata["status_codes"] = "0=converged,1=max_iterations,2=diverged,3=not_a_frame";
  report.runtime_seconds = seconds_since(start);
  return report;
}

// --- consistency ---------------------------------------------------------------

ExperimentReport consistency(const ConsistencyOptions& options) {
  const Index d = options.sigma.rows();
  if (d < 1 || options.sigma.cols() != d) throw PreconditionError("consistency: sigma must be square");
  if (options.n_grid.empty() || options.trials < 1) throw PreconditionError("consistency: need a grid and trials");
  const auto start = Clock::now();
  const HermitianPD<double> sigma(options.sigma);
  const Matrix<double> sigma_inv = pd_power(sigma, -1.0).matrix();
  const Matrix<double> limit = sigma_inv / sigma_inv.trace();

  ExperimentReport report;
  report.name = "consistency";
  std::ostringstream sig;
  sig << options.sigma.format(Eigen::IOFormat(Eigen::FullPrecision, Eigen::DontAlignCols, " ", ";"));
  report.metadata = {{"sigma", sig.str()},
                     {"r", std::to_string(options.r)},
                     {"n_grid", join(options.n_grid)},
                     {"trials", std::to_string(options.trials)},
                     {"seed", std::to_string(options.seed)}};
  Series medians{"n", "median_error", {}};
  Table table{{"n", "median_error", "mean_error", "excluded"}, {}};
  Index total_excluded = 0;
  double plug_in = std::nan("");

  for (Index n : options.n_grid) {
    std::vector<double> err(static_cast<size_t>(options.trials), std::nan(""));
    std::vector<double> plug(static_cast<size_t>(options.trials), std::nan(""));
    parallel_for(options.trials, options.threads, [&](Index t) {
      EnsembleSpec spec;
      spec.kind = EnsembleKind::elliptical_gaussian;
      spec.d = d;
      spec.r = options.r;
      spec.n = n;
      spec.sigma = options.sigma;
      spec.seed = derive_seed(options.seed, (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(t));
      const GFrame<double> frame = sample<double>(spec);
      const TightenResult<double> result = tighten(frame);
      if (!result.converged()) return;
      err[static_cast<size_t>(t)] = (result.gamma->matrix() - limit).norm();
      if (t == 0) {
        // || Sigma - d * mean_j T_j T_j^H / trace(T_j^H Sigma^{-1} T_j) ||_F / ||Sigma||_F
        Matrix<double> acc = Matrix<double>::Zero(d, d);
        for (const auto& e : frame.elements()) {
          const Matrix<double> p = e.gram();
          acc += p / trace_product<double>(sigma_inv, p);
        }
        acc *= static_cast<double>(d) / static_cast<double>(n);
        plug[0] = (options.sigma - acc).norm() / options.sigma.norm();
      }
    });
    std::vector<double> kept;
    for (double e : err) {
      if (!std::isnan(e)) kept.push_back(e);
    }
    const Index excluded = options.trials - static_cast<Index>(kept.size());
    total_excluded += excluded;
    const double med = median(kept);
    medians.points.emplace_back(static_cast<double>(n), med);
    table.rows.push_back({static_cast<double>(n), med, mean(kept), static_cast<double>(excluded)});
    plug_in = plug[0];
  }
  report.scalars["err_first"] = medians.points.front().second;
  report.scalars["err_last"] = medians.points.back().second;
  report.scalars["decreased"] = medians.points.back().second < medians.points.front().second ? 1.0 : 0.0;
  report.scalars["excluded"] = static_cast<double>(total_excluded);
  report.scalars["plug_in_residual"] = plug_in;
  report.series["median_error"] = std::move(medians);
  report.tables["errors"] = std::move(table);
  report.runtime_seconds = seconds_since(start);
  return report;
}

// --- concentration ---------------------------------------------------------------

ExperimentReport concentration(const ConcentrationOptions& options) {
  const auto start = Clock::now();
  const auto rows = options.field == FieldKind::complex
                        ? concentration_experiment<Complex>(options.spec, options.n_grid, options.eps, options.trials,
                                                            options.threads)
                        : concentration_experiment<double>(options.spec, options.n_grid, options.eps, options.trials,
                                                           options.threads);
  ExperimentReport report;
  report.name = "concentration";
  report.metadata = {{"ensemble", to_string(options.spec.kind)},
                     {"d", std::to_string(options.spec.d)},
                     {"r", std::to_string(options.spec.r)},
                     {"eps", fmt(options.eps)},
                     {"trials", std::to_string(options.trials)},
                     {"n_grid", join(options.n_grid)},
                     {"field", to_string(options.field)},
                     {"seed", std::to_string(options.spec.seed)}};
  Table table{{"n", "rate", "bound", "standard_error", "failures", "trials"}, {}};
  Series rate{"n", "rate", {}};
  Series bound{"n", "bound", {}};
  double max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    table.rows.push_back({static_cast<double>(row.n), row.rate, row.bound, row.standard_error,
                          static_cast<double>(row.failures), static_cast<double>(row.trials)});
    rate.points.emplace_back(static_cast<double>(row.n), row.rate);
    bound.points.emplace_back(static_cast<double>(row.n), row.bound);
    max_excess = std::max(max_excess, row.rate - row.bound - 3.0 * row.standard_error);
  }
  report.scalars["max_excess"] = max_excess;
  report.scalars["all_within"] = max_excess <= 0.0 ? 1.0 : 0.0;
  report.tables["concentration"] = std::move(table);
  report.series["rate"] = std::move(rate);
  report.series["bound"] = std::move(bound);
  report.runtime_seconds = seconds_since(start);
  return report;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"ex-some",  "ex-theta",     "random-hs",
                                              "failure",  "concentration", "consistency"};
  return names;
}

}  // namespace frametight
