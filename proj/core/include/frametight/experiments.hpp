#pragma once

// Scripted numerical experiments. Each returns an ExperimentReport of named
// scalars and (x, y) series, deterministic in its seed.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "frametight/ensembles.hpp"
#include "frametight/gframe.hpp"
#include "frametight/tyler.hpp"

namespace frametight {

struct Series {
  std::string x_label = "x";
  std::string y_label = "y";
  std::vector<std::pair<double, double>> points;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string name;
  std::map<std::string, double> scalars;
  std::map<std::string, Series> series;
  std::map<std::string, Table> tables;
  std::map<std::string, std::string> metadata;  // resolved configuration
  double runtime_seconds = 0.0;                 // not serialized

  double scalar(const std::string& key) const;
};

/// report.json (name, metadata, scalars, series) and one CSV per series and table.
std::string report_json(const ExperimentReport& report);
std::string series_csv(const Series& series);
std::string table_csv(const Table& table);
/// Writes report.json, <series>.csv and <table>.csv under `directory` (created if needed).
void write_report(const ExperimentReport& report, const std::string& directory);

/// Inclusive grid start, start+step, ..., stop (stop kept when within step*1e-9).
std::vector<double> make_grid(double start, double stop, double step);
/// Parses "start:stop:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

// --- Example with three random lines in R^2 ---------------------------------

struct ExSomeTrial {
  std::vector<double> angles;          // drawn angles
  std::vector<double> canonical;       // sorted canonical line angles in [0, 2pi/3]
  double rotation = 0.0;               // canonical = line angle - rotation (mod pi)
  std::vector<int> signs;              // best sign pattern for Y_j
  double theta = 0.0;                  // closed-form optimal rotation
  double objective = 0.0;              // sum_j ||U_theta s_j Y_j - T_j||^2
  double error = 0.0;                  // sum_j ||Z_j - R_j||^2
  bool converged = false;
  Index resamples = 0;
};

/// One trial on its own stream (seed, trial).
ExSomeTrial ex_some_trial(std::uint64_t seed, std::uint64_t trial);

/// sum_j ||U_theta s_j Y_j - T_j||^2 for unit vectors T_j at `angles`, Y_j at (0, pi/3, 2pi/3).
double ex_some_objective(const std::vector<double>& angles, const std::vector<int>& signs, double theta);

ExperimentReport ex_some(Index trials = 1000, std::uint64_t seed = 0, int threads = 1);

// --- Example with a one-parameter family of 2x2 elements ----------------------

GFrame<double> ex_theta_frame(double t);
ExperimentReport ex_theta(const std::vector<double>& t_grid);

// --- Three random unit-HS 2x2 elements ---------------------------------------

ExperimentReport random_hs_unit(Index trials = 10000, std::uint64_t seed = 0, int threads = 1);

// --- Non-converging example ----------------------------------------------------

/// T1 = e1 e1^T, T2 = [[1, 0], [t, 0]], T3 = e2 e2^T. With `row_form` the
/// second element is [[1, t], [0, 0]] instead, whose range is span(e1) for all t.
GFrame<double> failure_frame(double t, bool row_form = false);
ExperimentReport failure_case(const std::vector<double>& t_grid);

// --- Consistency of Gamma for elliptical samples ------------------------------

struct ConsistencyOptions {
  Eigen::MatrixXd sigma = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  Index r = 1;
  std::vector<Index> n_grid{50, 100, 200, 500, 1000, 2000};
  Index trials = 50;
  std::uint64_t seed = 0;
  int threads = 1;
};

ExperimentReport consistency(const ConsistencyOptions& options);

// --- Matrix Chernoff concentration -------------------------------------------

struct ConcentrationOptions {
  EnsembleSpec spec{EnsembleKind::haar_subspace, 8, 2, 1, WindowDist::rademacher, 0, {}};
  std::vector<Index> n_grid{80, 160, 400};
  double eps = 0.5;
  Index trials = 200;
  FieldKind field = FieldKind::real;  // gabor_random_window needs complex
  int threads = 1;
};

ExperimentReport concentration(const ConcentrationOptions& options);

/// Experiment names as spelled on the command line.
const std::vector<std::string>& experiment_names();

}  // namespace frametight
