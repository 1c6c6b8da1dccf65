#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "frametight/ensembles.hpp"
#include "frametight/errors.hpp"
#include "frametight/experiments.hpp"
#include "frametight/filterbank.hpp"
#include "frametight/gframe.hpp"
#include "frametight/io.hpp"
#include "frametight/mtx_io.hpp"
#include "frametight/parallel.hpp"
#include "frametight/pgm.hpp"
#include "frametight/random.hpp"
#include "frametight/tyler.hpp"

namespace frametight::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& values, const char* sep = ",") {
  std::ostringstream s;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s << sep;
    if constexpr (std::is_floating_point_v<T>) {
      s << fmt17(values[i]);
    } else {
      s << values[i];
    }
  }
  return s.str();
}

// Calls body.template operator()<S>() with S matching the document's field.
template <class Body>
auto with_field(FieldKind field, Body&& body) {
  if (field == FieldKind::complex) return body.template operator()<Complex>();
  return body.template operator()<double>();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir + "': " + ec.message());
}

std::string config_lines(const std::vector<std::pair<std::string, std::string>>& config) {
  std::string out;
  for (const auto& [k, v] : config) out += k + "=" + v + "\n";
  return out;
}

std::vector<Index> to_indices(const std::vector<double>& values, const char* what) {
  std::vector<Index> out;
  for (double v : values) {
    if (!(v >= 1.0) || v != std::floor(v)) throw ParseError(std::string(what) + " must hold positive integers");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

struct Global {
  bool json = false;
  int threads = 0;
};

// --- tighten -------------------------------------------------------------------

struct TightenArgs {
  std::string input;
  std::string out = "frametight-out/tighten";
  double tol = 1e-12;
  Index max_iter = 10000;
};

int cmd_tighten(const TightenArgs& a, const Global& g, std::ostream& out) {
  const std::string text = read_text_file(a.input);
  return with_field(peek_gframe_field(text), [&]<Field S>() {
    const GFrame<S> frame = gframe_from_json<S>(text);
    TightenOptions options;
    options.tol = a.tol;
    options.max_iterations = a.max_iter;
    const TightenResult<S> result = tighten(frame, options);

    ensure_dir(a.out);
    write_text_file(a.out + "/result.json", tighten_result_json(result));
    write_text_file(a.out + "/iterations.csv", iteration_log_csv(result));
    if (result.tight_frame && result.converged()) {
      write_text_file(a.out + "/tight_frame.json", gframe_to_json(*result.tight_frame));
    }
    write_text_file(a.out + "/config.txt", config_lines({{"command", "tighten"},
                                                          {"input", a.input},
                                                          {"tol", fmt17(a.tol)},
                                                          {"max_iter", std::to_string(a.max_iter)},
                                                          {"field", to_string(field_kind_v<S>)}}));
    if (g.json) {
      out << tighten_result_json(result);
    } else {
      out << "status " << to_string(result.status) << ", iterations " << result.iterations << ", residual "
          << fmt(result.residual) << "\n";
      if (!result.message.empty()) out << result.message << "\n";
      out << "wrote " << a.out << "\n";
    }
    if (result.converged()) return kOk;
    return result.status == TightenStatus::not_a_frame ? kNotAFrame : kNotConverged;
  });
}

// --- verify ----------------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  std::string mode = "exhaustive";
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
};

void print_witness(std::ostream& out, const char* label, const SubspaceWitness& w) {
  out << "  " << label << " witness: L = span of elements {" << join(w.spanned_by, " ") << "}, dim " << w.dim
      << ", contains {" << join(w.contained, " ") << "}\n";
}

int cmd_verify(const VerifyArgs& a, const Global& g, std::ostream& out) {
  const std::string text = read_text_file(a.input);
  CheckOptions options;
  if (a.mode == "exhaustive") {
    options.mode = CheckMode::exhaustive;
  } else if (a.mode == "heuristic") {
    options.mode = CheckMode::heuristic;
  } else {
    throw ParseError("--mode must be exhaustive or heuristic");
  }
  options.budget = a.budget;
  options.seed = a.seed;
  const ConditionReport report = with_field(peek_gframe_field(text), [&]<Field S>() {
    const ConditionReport r = check_conditions(gframe_from_json<S>(text), options);
    return r;
  });
  if (g.json) {
    out << condition_report_json(report);
  } else {
    out << "frame: " << (report.is_frame ? "yes" : "no") << "\n";
    out << "(ii)  " << to_string(report.cond_ii) << (report.ii_from_iii ? " (via iii)" : "") << "\n";
    out << "(iii) " << to_string(report.cond_iii) << "\n";
    out << "(iv)  " << to_string(report.cond_iv) << ", alpha " << fmt(report.alpha) << "\n";
    if (report.ii_witness) {
      out << "  (ii) witness: {" << join(report.ii_witness->first, " ") << "} | {"
          << join(report.ii_witness->second, " ") << "}\n";
    }
    if (report.iii_witness) print_witness(out, "(iii)", *report.iii_witness);
    if (report.iv_witness) print_witness(out, "(iv)", *report.iv_witness);
    out << "method " << to_string(report.method) << ", " << report.tests << " tests\n";
  }
  return report.any_violated() ? kViolated : kOk;
}

// --- sample ----------------------------------------------------------------------

struct SampleArgs {
  std::string config;
  std::string kind = "gaussian_iid";
  Index d = 2;
  Index r = 1;
  Index n = 1;
  std::string window = "rademacher";
  std::uint64_t seed = 0;
  std::string field = "real";
  std::string out;
};

int cmd_sample(const SampleArgs& a, const CLI::App& sub, const Global& g, std::ostream& out) {
  EnsembleSpec spec;
  spec.kind = parse_ensemble_kind(a.kind);
  spec.d = a.d;
  spec.r = a.r;
  spec.n = a.n;
  spec.window = parse_window_dist(a.window);
  spec.seed = a.seed;
  if (!a.config.empty()) {
    // Config values apply unless the flag was given explicitly.
    const EnsembleSpec file = ensemble_spec_from_json(read_text_file(a.config), spec);
    if (sub.count("--kind") == 0) spec.kind = file.kind;
    if (sub.count("--d") == 0) spec.d = file.d;
    if (sub.count("--r") == 0) spec.r = file.r;
    if (sub.count("--n") == 0) spec.n = file.n;
    if (sub.count("--window") == 0) spec.window = file.window;
    if (sub.count("--seed") == 0) spec.seed = file.seed;
    spec.sigma = file.sigma;
  }
  FieldKind field = parse_field_kind(a.field);
  if (spec.kind == EnsembleKind::gabor_random_window) field = FieldKind::complex;
  const std::string doc = with_field(field, [&]<Field S>() {
    const std::string text = gframe_to_json(sample<S>(spec));
    return text;
  });
  if (a.out.empty()) {
    out << doc;
  } else {
    write_text_file(a.out, doc);
    if (!g.json) {
      out << "sampled " << spec.n << " " << to_string(spec.kind) << " elements (d " << spec.d << ", r " << spec.r
          << ", seed " << spec.seed << ") to " << a.out << "\n";
    }
  }
  return kOk;
}

// --- pipeline ----------------------------------------------------------------------

struct PipelineArgs {
  std::string frame;
  std::string scheme = "canonical_dual_synthesis";
  std::string input;
  std::string out;
  std::optional<double> threshold;
};

int cmd_pipeline(const PipelineArgs& a, const Global& g, std::ostream& out) {
  const std::string text = read_text_file(a.frame);
  const Scheme scheme = parse_scheme(a.scheme);
  return with_field(peek_gframe_field(text), [&]<Field S>() {
    const GFrame<S> frame = gframe_from_json<S>(text);
    const Matrix<S> signals = read_mtx<S>(read_text_file(a.input));
    if (signals.rows() != frame.ambient_dim()) throw DimensionError("pipeline: input rows must equal the frame dimension");
    std::optional<TightenResult<S>> tightening;
    if (needs_tightening(scheme)) {
      tightening = tighten(frame);
      if (!tightening->converged()) {
        throw Error(std::string("tightening did not converge (") + to_string(tightening->status) + ")");
      }
    }
    const Pipeline<S> pipeline(scheme, frame, tightening ? &*tightening : nullptr);
    const Processor<S> proc = a.threshold ? soft_threshold_processor<S>(*a.threshold) : identity_processor<S>();
    Matrix<S> result(signals.rows(), signals.cols());
    parallel_for(signals.cols(), resolve_threads(g.threads),
                 [&](Index c) { result.col(c) = pipeline.run(signals.col(c), proc); });
    const double err = (result - signals).norm() / std::max(signals.norm(), std::numeric_limits<double>::min());
    if (!a.out.empty()) write_text_file(a.out, write_mtx<S>(result));
    if (g.json) {
      out << "{\"scheme\": \"" << to_string(scheme) << "\", \"signals\": " << signals.cols()
          << ", \"relative_change\": " << fmt17(err) << "}\n";
    } else if (a.out.empty()) {
      out << write_mtx<S>(result);
    } else {
      out << to_string(scheme) << ": " << signals.cols() << " signal(s), relative change " << fmt(err) << "\n";
    }
    return kOk;
  });
}

// --- denoise ------------------------------------------------------------------------

struct DenoiseArgs {
  std::string frame;
  std::string image;
  std::string signal;
  std::string snr = "10";
  std::string lambda = "0";
  std::string schemes = "all";
  std::uint64_t seed = 0;
  std::string out = "frametight-out/denoise";
};

std::vector<Scheme> parse_schemes(const std::string& text) {
  if (text == "all") return {std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::vector<Scheme> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(parse_scheme(tok));
  if (out.empty()) throw ParseError("--schemes is empty");
  return out;
}

int cmd_denoise(const DenoiseArgs& a, const Global& g, std::ostream& out) {
  if (a.image.empty() == a.signal.empty()) throw ParseError("denoise needs exactly one of --image and --signal");
  const std::string text = read_text_file(a.frame);
  DenoiseOptions options;
  options.snr_list = parse_grid(a.snr);
  options.lambda_grid = parse_grid(a.lambda);
  options.schemes = parse_schemes(a.schemes);
  options.seed = a.seed;
  options.threads = resolve_threads(g.threads);

  return with_field(peek_gframe_field(text), [&]<Field S>() {
    const GFrame<S> frame = gframe_from_json<S>(text);
    const Index d = frame.ambient_dim();
    std::optional<GrayImage> image;
    std::vector<Vector<S>> tiles;
    if (!a.image.empty()) {
      image = read_pgm(a.image);
      for (const auto& t : tile_rows(*image, d)) tiles.push_back(t.template cast<S>());
    } else {
      const Matrix<S> m = read_mtx<S>(read_text_file(a.signal));
      if (m.rows() != d) throw DimensionError("denoise: signal rows must equal the frame dimension");
      for (Index c = 0; c < m.cols(); ++c) tiles.push_back(m.col(c));
    }
    const auto reports = denoise_experiment(frame, tiles, options);

    ensure_dir(a.out);
    std::string summary = "scheme,snr,best_threshold,rmse,ok,error\n";
    std::string sweep = "scheme,snr,lambda,rmse\n";
    for (const auto& r : reports) {
      summary += std::string(to_string(r.scheme)) + "," + fmt17(r.snr) + "," + fmt17(r.best_threshold) + "," +
                 (r.ok ? fmt17(r.rmse) : std::string("nan")) + "," + (r.ok ? "1" : "0") + ",\"" + r.error + "\"\n";
      for (const auto& [lambda, rmse] : r.threshold_sweep) {
        sweep += std::string(to_string(r.scheme)) + "," + fmt17(r.snr) + "," + fmt17(lambda) + "," + fmt17(rmse) + "\n";
      }
    }
    write_text_file(a.out + "/denoise.csv", summary);
    write_text_file(a.out + "/sweep.csv", sweep);
    write_text_file(a.out + "/config.txt",
                    config_lines({{"command", "denoise"},
                                  {"frame", a.frame},
                                  {"input", a.image.empty() ? a.signal : a.image},
                                  {"snr", join(options.snr_list)},
                                  {"lambda", join(options.lambda_grid)},
                                  {"schemes", a.schemes},
                                  {"seed", std::to_string(a.seed)}}));

    // Denoised images at each scheme's best threshold.
    if (image) {
      std::optional<TightenResult<S>> tightening;
      for (size_t si = 0; si < options.snr_list.size(); ++si) {
        const auto noisy = add_noise(tiles, options.snr_list[si], derive_seed(options.seed, si));
        for (const auto& r : reports) {
          if (!r.ok || r.snr != options.snr_list[si]) continue;
          if (needs_tightening(r.scheme) && !tightening) tightening = tighten(frame);
          const Pipeline<S> pipeline(r.scheme, frame, tightening ? &*tightening : nullptr);
          const auto proc = soft_threshold_processor<S>(r.best_threshold);
          std::vector<RealVector> den(noisy.size());
          parallel_for(static_cast<Index>(noisy.size()), options.threads, [&](Index t) {
            den[static_cast<size_t>(t)] = pipeline.run(noisy[static_cast<size_t>(t)], proc).real();
          });
          write_pgm(a.out + "/" + to_string(r.scheme) + "_snr" + std::to_string(si) + ".pgm",
                    untile_rows(den, image->width, image->height, d));
        }
      }
    }

    if (g.json) {
      out << "[";
      for (size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        out << (i ? ", " : "") << "{\"scheme\": \"" << to_string(r.scheme) << "\", \"snr\": " << fmt17(r.snr)
            << ", \"ok\": " << (r.ok ? "true" : "false");
        if (r.ok) out << ", \"best_threshold\": " << fmt17(r.best_threshold) << ", \"rmse\": " << fmt17(r.rmse);
        out << "}";
      }
      out << "]\n";
    } else {
      for (const auto& r : reports) {
        out << to_string(r.scheme) << " snr " << fmt(r.snr) << ": ";
        if (r.ok) {
          out << "rmse " << fmt(r.rmse) << " at lambda " << fmt(r.best_threshold) << "\n";
        } else {
          out << "failed: " << r.error << "\n";
        }
      }
      out << "wrote " << a.out << "\n";
    }
    for (const auto& r : reports) {
      if (!r.ok) return kNotConverged;
    }
    return kOk;
  });
}

// --- experiment -----------------------------------------------------------------------

struct ExperimentArgs {
  std::string name;
  std::string out;
  std::string grid;
  std::string n_grid;
  std::optional<Index> trials;
  std::uint64_t seed = 0;
  std::optional<Index> d;
  std::optional<Index> r;
  std::optional<double> eps;
  std::string kind;
};

std::string available_names() {
  std::string s;
  for (const auto& n : experiment_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

ExperimentReport run_experiment(const ExperimentArgs& a, int threads) {
  auto grid_or = [&](const char* fallback) { return parse_grid(a.grid.empty() ? fallback : a.grid); };
  if (a.name == "ex-some") return ex_some(a.trials.value_or(1000), a.seed, threads);
  if (a.name == "ex-theta") return ex_theta(grid_or("0:0.5:0.01"));
  if (a.name == "random-hs") return random_hs_unit(a.trials.value_or(10000), a.seed, threads);
  if (a.name == "failure") return failure_case(grid_or("0,0.01,0.05,0.1,0.2,0.3,0.5"));
  if (a.name == "consistency") {
    ConsistencyOptions o;
    if (a.d && *a.d != 2) {
      o.sigma = Eigen::MatrixXd::Identity(*a.d, *a.d);
      for (Index i = 0; i < *a.d; ++i) o.sigma(i, i) = static_cast<double>(*a.d - i);
    }
    if (a.r) o.r = *a.r;
    if (!a.n_grid.empty()) o.n_grid = to_indices(parse_grid(a.n_grid), "--n-grid");
    if (a.trials) o.trials = *a.trials;
    o.seed = a.seed;
    o.threads = threads;
    return consistency(o);
  }
  if (a.name == "concentration") {
    ConcentrationOptions o;
    if (!a.kind.empty()) o.spec.kind = parse_ensemble_kind(a.kind);
    if (a.d) o.spec.d = *a.d;
    if (a.r) o.spec.r = *a.r;
    if (a.eps) o.eps = *a.eps;
    if (a.trials) o.trials = *a.trials;
    if (!a.n_grid.empty()) o.n_grid = to_indices(parse_grid(a.n_grid), "--n-grid");
    o.spec.seed = a.seed;
    if (o.spec.kind == EnsembleKind::gabor_random_window) o.field = FieldKind::complex;
    o.threads = threads;
    return concentration(o);
  }
  throw ParseError("unknown experiment '" + a.name + "'; available: " + available_names());
}

int cmd_experiment(const ExperimentArgs& a, const Global& g, std::ostream& out) {
  const int threads = resolve_threads(g.threads);
  ExperimentReport report = run_experiment(a, threads);
  report.metadata["threads"] = std::to_string(threads);
  const std::string dir = a.out.empty() ? "frametight-out/" + a.name : a.out;
  write_report(report, dir);
  if (g.json) {
    out << report_json(report);
    return kOk;
  }
  out << report.name << " (" << fmt(report.runtime_seconds) << " s)\n";
  for (const auto& [k, v] : report.scalars) out << "  " << k << " = " << fmt(v) << "\n";
  out << "wrote " << dir << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tight g-frames by preconditioning: tightening, condition checks, sampling, filter banks."};
  app.name("frametight");
  app.require_subcommand(1);
  Global g;
  app.add_flag("--json", g.json, "Machine-readable JSON on stdout");
  app.add_option("--threads", g.threads, "Worker threads (0: FRAME_TIGHTEN_THREADS, else hardware)")
      ->check(CLI::NonNegativeNumber);

  auto* tighten_cmd = app.add_subcommand("tighten", "Compute the preconditioner and the unit-norm tight frame");
  TightenArgs ta;
  tighten_cmd->add_option("input", ta.input, "gframe-json file")->required();
  tighten_cmd->add_option("-o,--out", ta.out, "Output directory")->capture_default_str();
  tighten_cmd->add_option("--tol", ta.tol, "Tolerance on ||M(Gamma) - I||_2")->capture_default_str();
  tighten_cmd->add_option("--max-iter", ta.max_iter, "Iteration cap")->capture_default_str()->check(CLI::PositiveNumber);

  auto* verify_cmd = app.add_subcommand("verify", "Check the spanning conditions for a frame");
  VerifyArgs va;
  verify_cmd->add_option("input", va.input, "gframe-json file")->required();
  verify_cmd->add_option("--mode", va.mode, "exhaustive or heuristic")->capture_default_str();
  verify_cmd->add_option("--budget", va.budget, "Maximum number of subspace tests")->capture_default_str();
  verify_cmd->add_option("--seed", va.seed, "Seed for heuristic sampling")->capture_default_str();

  auto* sample_cmd = app.add_subcommand("sample", "Draw a random frame from an ensemble");
  SampleArgs sa;
  sample_cmd->add_option("--config", sa.config, "JSON ensemble config");
  sample_cmd->add_option("--kind", sa.kind, "Ensemble kind")->capture_default_str();
  sample_cmd->add_option("--d", sa.d, "Ambient dimension")->capture_default_str();
  sample_cmd->add_option("--r", sa.r, "Element rank")->capture_default_str();
  sample_cmd->add_option("--n", sa.n, "Number of elements")->capture_default_str();
  sample_cmd->add_option("--window", sa.window, "Gabor window law")->capture_default_str();
  sample_cmd->add_option("--seed", sa.seed, "Seed")->capture_default_str();
  sample_cmd->add_option("--field", sa.field, "real or complex")->capture_default_str();
  sample_cmd->add_option("-o,--out", sa.out, "Output file (stdout if absent)");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run signals through an analysis-synthesis filter bank");
  PipelineArgs pa;
  pipeline_cmd->add_option("frame", pa.frame, "gframe-json file")->required();
  pipeline_cmd->add_option("--scheme", pa.scheme, "Reconstruction scheme")->capture_default_str();
  pipeline_cmd->add_option("--input", pa.input, "mtx-simple file, one signal per column")->required();
  pipeline_cmd->add_option("-o,--out", pa.out, "Output mtx-simple file");
  pipeline_cmd->add_option("--threshold", pa.threshold, "Soft-threshold coefficients at this level");

  auto* denoise_cmd = app.add_subcommand("denoise", "Soft-threshold denoising sweep");
  DenoiseArgs da;
  denoise_cmd->add_option("frame", da.frame, "gframe-json file")->required();
  denoise_cmd->add_option("--image", da.image, "8-bit binary PGM, cut into row tiles of length d");
  denoise_cmd->add_option("--signal", da.signal, "mtx-simple file, one tile per column");
  denoise_cmd->add_option("--snr", da.snr, "SNR list or grid (inf: noiseless)")->capture_default_str();
  denoise_cmd->add_option("--lambda", da.lambda, "Threshold list or grid")->capture_default_str();
  denoise_cmd->add_option("--schemes", da.schemes, "Comma-separated schemes or 'all'")->capture_default_str();
  denoise_cmd->add_option("--seed", da.seed, "Noise seed")->capture_default_str();
  denoise_cmd->add_option("-o,--out", da.out, "Output directory")->capture_default_str();

  auto* exp_cmd = app.add_subcommand("experiment", "Run a numerical experiment: " + available_names());
  ExperimentArgs ea;
  exp_cmd->add_option("name", ea.name, "Experiment name")->required();
  exp_cmd->add_option("-o,--out", ea.out, "Output directory (default frametight-out/<name>)");
  exp_cmd->add_option("--grid", ea.grid, "Parameter grid start:stop:step or list");
  exp_cmd->add_option("--n-grid", ea.n_grid, "Sample sizes (list or grid)");
  exp_cmd->add_option("--trials", ea.trials, "Number of trials")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--seed", ea.seed, "Seed")->capture_default_str();
  exp_cmd->add_option("--d", ea.d, "Ambient dimension")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--r", ea.r, "Element rank")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--eps", ea.eps, "Deviation level");
  exp_cmd->add_option("--kind", ea.kind, "Ensemble kind");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "frametight: " << e.what() << "\n";
    if (e.get_name() == "RequiredError" && app.get_subcommands().empty()) {
      err << "subcommands: tighten, verify, sample, pipeline, denoise, experiment\n";
    }
    return kError;
  }

  try {
    if (tighten_cmd->parsed()) return cmd_tighten(ta, g, out);
    if (verify_cmd->parsed()) return cmd_verify(va, g, out);
    if (sample_cmd->parsed()) return cmd_sample(sa, *sample_cmd, g, out);
    if (pipeline_cmd->parsed()) return cmd_pipeline(pa, g, out);
    if (denoise_cmd->parsed()) return cmd_denoise(da, g, out);
    if (exp_cmd->parsed()) return cmd_experiment(ea, g, out);
  } catch (const std::exception& e) {
    err << "frametight: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace frametight::cli
