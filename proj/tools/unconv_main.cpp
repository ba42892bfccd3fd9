// Command-line front end. Each subcommand parses flags, calls one library
// entry point, and writes a JSON envelope {toolVersion, argv, seed,
// timestampUtc, result} or a data-only CSV table. Identical invocations
// produce byte-identical JSON except for timestampUtc.
//
// Exit codes:
//   0  success
//   2  invalid arguments or malformed input (machine-readable error object)
//   3  budget exceeded before the requested result was reached
//   4  evidence of a precondition failure (steering an absolutely convergent
//      series, vectors that do not form a frame)

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unconv/diagnostics.hpp"
#include "unconv/errors.hpp"
#include "unconv/frames.hpp"
#include "unconv/json_io.hpp"
#include "unconv/rearrange.hpp"
#include "unconv/rng.hpp"
#include "unconv/sgd.hpp"
#include "unconv/summation.hpp"

namespace {

using unconv::Json;

constexpr const char* kToolVersion = "0.1.0";

struct ExitWith {
  int code;
  std::string kind;
  std::string message;
};

// --- shared option blocks ----------------------------------------------------

struct SeriesOptions {
  std::string family;
  double alpha = 1.0;
  std::uint64_t sign_seed = 1;
  std::string file;

  void attach(CLI::App* sub) {
    sub->add_option("--series", family,
                    "series family: alternating-harmonic | harmonic | coordinate-decay | "
                    "signed-coordinate | file")
        ->required();
    sub->add_option("--alpha", alpha, "decay exponent for the coordinate families");
    sub->add_option("--sign-seed", sign_seed, "seed for signed-coordinate sign draws");
    sub->add_option("--series-file", file, "term list for --series file");
  }

  unconv::SeriesSpec build() const {
    if (family == "alternating-harmonic") return unconv::SeriesSpec::alternating_harmonic();
    if (family == "harmonic") return unconv::SeriesSpec::harmonic();
    if (family == "coordinate-decay") return unconv::SeriesSpec::coordinate_decay(alpha);
    if (family == "signed-coordinate")
      return unconv::SeriesSpec::signed_coordinate(alpha, unconv::SignSpec::seeded(sign_seed));
    if (family == "file") {
      if (file.empty())
        throw ExitWith{2, "invalid-arguments", "--series file requires --series-file"};
      return unconv::SeriesSpec::from_file(file);
    }
    throw ExitWith{2, "unknown-series-family", "unknown series family: " + family};
  }
};

struct OutputOptions {
  std::string format = "json";
  std::string path;

  void attach(CLI::App* sub) {
    sub->add_option("--format", format, "output format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", path, "output file (default: stdout)");
  }
};

struct WindowOptions {
  std::int64_t start = 0;
  std::int64_t width = 1;

  void attach(CLI::App* sub) {
    sub->add_option("--window-start", start, "exclusive lower index N of the window (N, N+K]")
        ->required();
    sub->add_option("--window-width", width, "window width K")->required();
  }

  unconv::TailWindow build() const { return unconv::TailWindow{start, width}; }
};

// Budgets are entered as doubles so 1e6 works on the command line; the
// environment variable supplies the default when the flag is absent.
std::int64_t resolve_budget(const std::optional<double>& flag) {
  double value = 1e6;
  if (flag) {
    value = *flag;
  } else if (const char* env = std::getenv("UNCONV_BUDGET")) {
    try {
      value = std::stod(env);
    } catch (const std::exception&) {
      throw ExitWith{2, "invalid-arguments",
                     std::string("UNCONV_BUDGET is not a number: ") + env};
    }
  }
  if (!std::isfinite(value) || value < 1.0 || value > 9e18)
    throw ExitWith{2, "invalid-arguments", "budget must be a finite count >= 1"};
  return static_cast<std::int64_t>(value);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExitWith{2, "invalid-arguments", "cannot open output file: " + path};
  out << text;
}

void emit(const OutputOptions& output, const std::vector<std::string>& argv, std::uint64_t seed,
          Json result, const std::string& csv) {
  if (output.format == "csv") {
    write_output(output.path, csv);
    return;
  }
  const Json envelope = unconv::report_envelope(kToolVersion, argv, seed, std::move(result));
  write_output(output.path, envelope.dump(2) + "\n");
}

std::string csv_scalar_table(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "key,value\n";
  char buf[64];
  for (const auto& [key, value] : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out += key;
    out += ',';
    out += buf;
    out += '\n';
  }
  return out;
}

// --- subcommand runners --------------------------------------------------------

int run_classify(const SeriesOptions& series, const std::optional<double>& budget_flag,
                 std::uint64_t seed, const OutputOptions& output,
                 const std::vector<std::string>& argv) {
  const auto spec = series.build();
  const auto report = unconv::classify(spec, resolve_budget(budget_flag), seed);
  emit(output, argv, seed, unconv::to_json(report), unconv::report_checkpoints_csv(report));
  return 0;
}

int run_rearrange(const SeriesOptions& series, double target, double tol,
                  const std::optional<double>& budget_flag, std::uint64_t seed,
                  const OutputOptions& output, const std::vector<std::string>& argv) {
  const auto spec = series.build();
  const auto trace = unconv::riemann_rearrange(spec, target, tol, resolve_budget(budget_flag));

  std::string csv = "step,termIndex,partialSum\n";
  char buf[64];
  for (std::size_t k = 0; k < trace.permutation_prefix.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%lld,%.17g", k + 1,
                  static_cast<long long>(trace.permutation_prefix[k]), trace.partial_sums[k]);
    csv += buf;
    csv += '\n';
  }
  emit(output, argv, seed, unconv::to_json(trace), csv);

  switch (trace.status) {
    case unconv::RearrangeStatus::Success:
      return 0;
    case unconv::RearrangeStatus::BudgetExceeded:
      return 3;
    case unconv::RearrangeStatus::PrecheckFailed:
      return 4;
  }
  return 2;
}

int run_net_sup(const SeriesOptions& series, const WindowOptions& window,
                const std::string& method, std::uint64_t seed, const OutputOptions& output,
                const std::vector<std::string>& argv) {
  unconv::NetSupMethod m;
  if (method == "exhaustive")
    m = unconv::NetSupMethod::Exhaustive;
  else if (method == "greedy")
    m = unconv::NetSupMethod::GreedySignAlign;
  else if (method == "closed-form")
    m = unconv::NetSupMethod::ClosedFormCoordinate;
  else
    throw ExitWith{2, "invalid-arguments", "unknown net-sup method: " + method};

  const double statistic = unconv::net_cauchy_sup(series.build(), window.build(), m);
  Json result;
  result["statistic"] = statistic;
  result["windowStart"] = window.start;
  result["windowWidth"] = window.width;
  result["method"] = method;
  emit(output, argv, seed, result, csv_scalar_table({{"statistic", statistic}}));
  return 0;
}

int run_sign_stress(const SeriesOptions& series, std::int64_t terms, const std::string& mode,
                    std::int64_t count, std::uint64_t seed, const OutputOptions& output,
                    const std::vector<std::string>& argv) {
  unconv::SignStressMode m;
  if (mode == "exhaustive")
    m = unconv::SignStressMode::Exhaustive;
  else if (mode == "sampled")
    m = unconv::SignStressMode::Sampled;
  else
    throw ExitWith{2, "invalid-arguments", "unknown sign-stress mode: " + mode};

  const auto result = unconv::sign_stress(series.build(), terms, m, count, seed);
  Json body;
  body["statistic"] = result.statistic;
  body["minStatistic"] = result.min_statistic;
  body["patternsTried"] = result.patterns_tried;
  body["argmaxSigns"] = result.argmax_signs;
  emit(output, argv, seed, body,
       csv_scalar_table({{"statistic", result.statistic},
                         {"minStatistic", result.min_statistic},
                         {"patternsTried", static_cast<double>(result.patterns_tried)}}));
  return 0;
}

int run_multiplier_stress(const SeriesOptions& series, const std::string& multiplier,
                          double constant, double bound,
                          const std::optional<double>& budget_flag, std::uint64_t seed,
                          const OutputOptions& output, const std::vector<std::string>& argv) {
  unconv::Multiplier mult = unconv::Multiplier::alternating_log();
  if (multiplier == "alternating-log")
    mult = unconv::Multiplier::alternating_log();
  else if (multiplier == "constant")
    mult = unconv::Multiplier::constant(constant);
  else if (multiplier == "random-bounded")
    mult = unconv::Multiplier::random_bounded(bound, seed);
  else
    throw ExitWith{2, "invalid-arguments", "unknown multiplier: " + multiplier};

  const auto record =
      unconv::multiplier_stress(series.build(), mult, resolve_budget(budget_flag));
  emit(output, argv, seed, unconv::to_json(record), unconv::checkpoints_csv(record.checkpoints));
  return 0;
}

int run_weak_tail(const SeriesOptions& series, const WindowOptions& window,
                  const std::string& method, int iterations, std::uint64_t seed,
                  const OutputOptions& output, const std::vector<std::string>& argv) {
  unconv::WeakTailMethod m;
  if (method == "closed-form")
    m = unconv::WeakTailMethod::ClosedFormCoordinate;
  else if (method == "sphere-search")
    m = unconv::WeakTailMethod::SphereSearch;
  else
    throw ExitWith{2, "invalid-arguments", "unknown weak-tail method: " + method};

  const auto result = unconv::weak_uniform_tail(series.build(), window.build(), m, iterations, seed);
  Json body;
  body["statistic"] = result.statistic;
  body["lowerBoundEstimate"] = result.lower_bound_estimate;
  body["iterations"] = result.iterations;
  body["method"] = method;
  emit(output, argv, seed, body, csv_scalar_table({{"statistic", result.statistic}}));
  return 0;
}

int run_subseries(const SeriesOptions& series, const std::optional<double>& budget_flag,
                  int count, std::uint64_t seed, const OutputOptions& output,
                  const std::vector<std::string>& argv) {
  const auto result =
      unconv::subseries_sample(series.build(), resolve_budget(budget_flag), count, seed);
  Json body;
  body["worstOscillation"] = result.worst_oscillation;
  Json patterns = Json::array();
  std::vector<std::pair<std::string, double>> rows;
  for (const auto& pattern : result.patterns) {
    Json row;
    row["name"] = pattern.name;
    row["oscillation"] = pattern.oscillation;
    patterns.push_back(std::move(row));
    rows.emplace_back(pattern.name, pattern.oscillation);
  }
  body["patterns"] = std::move(patterns);
  emit(output, argv, seed, body, csv_scalar_table(rows));
  return 0;
}

int run_sgd_sensitivity(const std::string& stream_kind, const std::string& stream_file, int dim,
                        std::int64_t steps, std::uint64_t stream_seed,
                        const std::string& schedule, double eta, std::int64_t num_perms,
                        const std::vector<std::string>& strategy_names, std::uint64_t seed,
                        const OutputOptions& output, const std::vector<std::string>& argv) {
  unconv::GradientStream stream = [&] {
    if (stream_kind == "quadratic") return unconv::GradientStream::quadratic(dim, steps, stream_seed);
    if (stream_kind == "ill-conditioned")
      return unconv::GradientStream::ill_conditioned(dim, steps, stream_seed);
    if (stream_kind == "file") {
      if (stream_file.empty())
        throw ExitWith{2, "invalid-arguments", "--stream file requires --stream-file"};
      return unconv::GradientStream::from_file(stream_file);
    }
    throw ExitWith{2, "invalid-arguments", "unknown stream kind: " + stream_kind};
  }();

  const unconv::LrSchedule sched = [&] {
    if (schedule == "constant") return unconv::LrSchedule::constant(eta);
    if (schedule == "inverse-sqrt") return unconv::LrSchedule::inverse_sqrt(eta);
    throw ExitWith{2, "invalid-arguments", "unknown schedule: " + schedule};
  }();

  std::vector<unconv::Strategy> strategies;
  for (const auto& name : strategy_names) {
    if (name == "naive")
      strategies.push_back(unconv::Strategy::Naive);
    else if (name == "compensated")
      strategies.push_back(unconv::Strategy::Compensated);
    else if (name == "pairwise")
      strategies.push_back(unconv::Strategy::Pairwise);
    else if (name == "exact-rational")
      strategies.push_back(unconv::Strategy::ExactRational);
    else
      throw ExitWith{2, "invalid-arguments", "unknown strategy: " + name};
  }

  const auto report = unconv::permutation_sensitivity(stream, sched, num_perms, seed, strategies);

  std::string csv = "strategy,maxPairwiseDeviation,referenceDeviation,relativeToNaive\n";
  char buf[160];
  for (const auto& [name, dev] : report.per_strategy) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g", name.c_str(),
                  dev.max_pairwise_deviation, dev.reference_deviation, dev.relative_to_naive);
    csv += buf;
    csv += '\n';
  }
  emit(output, argv, seed, unconv::to_json(report), csv);
  return 0;
}

int run_frame_threshold(const std::string& frame_kind, const std::string& frame_file, int dim,
                        std::int64_t count, double angle, int levels, std::uint64_t frame_seed,
                        std::vector<double> signal, std::uint64_t signal_seed,
                        const std::string& rule_kind, double tau, std::vector<double> mask,
                        std::uint64_t seed, const OutputOptions& output,
                        const std::vector<std::string>& argv) {
  const unconv::Frame frame = [&] {
    if (frame_kind == "mercedes-benz") return unconv::Frame::mercedes_benz();
    if (frame_kind == "orthonormal") return unconv::Frame::orthonormal(dim);
    if (frame_kind == "rotated-union") return unconv::Frame::rotated_union(angle);
    if (frame_kind == "random-unit") return unconv::Frame::random_unit(dim, count, frame_seed);
    if (frame_kind == "haar") return unconv::Frame::haar(levels);
    if (frame_kind == "file") {
      if (frame_file.empty())
        throw ExitWith{2, "invalid-arguments", "--frame file requires --frame-file"};
      return unconv::Frame::from_file(frame_file);
    }
    throw ExitWith{2, "invalid-arguments", "unknown frame kind: " + frame_kind};
  }();

  if (signal.empty()) {
    unconv::SplitMix64 rng(signal_seed);
    signal.resize(static_cast<std::size_t>(frame.dim()));
    for (auto& x : signal) x = rng.normal();
  }

  const unconv::ThresholdRule rule = [&] {
    if (rule_kind == "hard") return unconv::ThresholdRule::hard(tau);
    if (rule_kind == "soft") return unconv::ThresholdRule::soft(tau);
    if (rule_kind == "mask") {
      if (mask.empty())
        throw ExitWith{2, "invalid-arguments", "--rule mask requires --mask weights"};
      return unconv::ThresholdRule::mask(mask);
    }
    throw ExitWith{2, "invalid-arguments", "unknown threshold rule: " + rule_kind};
  }();

  const auto coefficients = unconv::analyze(frame, signal);
  const auto reconstruction = unconv::reconstruct(frame, coefficients, rule, signal);

  Json body;
  body["frame"] = frame.describe();
  body["lowerBound"] = frame.lower_bound();
  body["upperBound"] = frame.upper_bound();
  body["tight"] = frame.is_tight();
  body["rule"] = rule.describe();
  body["signal"] = signal;
  body["coefficients"] = coefficients;
  body["reconstruction"] = unconv::to_json(reconstruction);

  std::string csv = "table,index,value\n";
  char buf[96];
  const auto rows = [&](const char* table, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%.17g", table, i + 1, values[i]);
      csv += buf;
      csv += '\n';
    }
  };
  rows("coefficient", coefficients);
  rows("mask", reconstruction.mask);
  rows("reconstructed", reconstruction.reconstructed);
  emit(output, argv, seed, body, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> argv_record(argv, argv + argc);

  CLI::App app{"Finite diagnostics for series convergence, summation order "
               "sensitivity, and frame thresholding"};
  app.require_subcommand(1);

  // Shared state; each subcommand binds only the flags it documents.
  SeriesOptions series;
  OutputOptions output;
  WindowOptions window;
  std::optional<double> budget;
  std::uint64_t seed = unconv::kDefaultDiagnosticSeed;

  double target = 0.0, tol = 1e-6;
  std::string method = "exhaustive";
  std::int64_t terms = 10;
  std::string mode = "exhaustive";
  std::int64_t pattern_count = 256;
  std::string multiplier = "alternating-log";
  double mult_constant = 1.0, mult_bound = 1.0;
  int iterations = 200;
  int subseries_count = 12;

  std::string stream_kind = "quadratic", stream_file;
  int dim = 10;
  std::int64_t steps = 1000;
  std::uint64_t stream_seed = 2026;
  std::string schedule = "constant";
  double eta = 0.01;
  std::int64_t num_perms = 20;
  std::vector<std::string> strategy_names = {"naive", "compensated", "pairwise",
                                             "exact-rational"};

  std::string frame_kind, frame_file;
  std::int64_t frame_count = 8;
  double angle = 0.4;
  int levels = 3;
  std::uint64_t frame_seed = 1;
  std::vector<double> signal_values, mask_values;
  std::uint64_t signal_seed = 1;
  std::string rule_kind;
  double tau = 0.0;

  const auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", budget,
                    "term budget (default: UNCONV_BUDGET environment variable, else 1e6)");
  };
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "seed recorded in the output envelope");
  };

  CLI::App* classify = app.add_subcommand("classify", "run every convergence probe and aggregate");
  series.attach(classify);
  add_budget(classify);
  add_seed(classify);
  output.attach(classify);

  CLI::App* rearrange =
      app.add_subcommand("rearrange", "steer a conditionally convergent series to a target");
  series.attach(rearrange);
  rearrange->add_option("--target", target, "target partial-sum value")->required();
  rearrange->add_option("--tol", tol, "landing tolerance");
  add_budget(rearrange);
  add_seed(rearrange);
  output.attach(rearrange);

  CLI::App* net_sup =
      app.add_subcommand("net-sup", "largest |subset sum| over a tail window (N, N+K]");
  series.attach(net_sup);
  window.attach(net_sup);
  net_sup->add_option("--method", method, "exhaustive | greedy | closed-form");
  add_seed(net_sup);
  output.attach(net_sup);

  CLI::App* sign_stress =
      app.add_subcommand("sign-stress", "norm extremes of signed partial sums");
  series.attach(sign_stress);
  sign_stress->add_option("--terms", terms, "number of leading terms")->required();
  sign_stress->add_option("--mode", mode, "exhaustive | sampled");
  sign_stress->add_option("--count", pattern_count, "patterns drawn in sampled mode");
  add_seed(sign_stress);
  output.attach(sign_stress);

  CLI::App* mult_stress = app.add_subcommand(
      "multiplier-stress", "growth of partial sums under a bounded multiplier sequence");
  series.attach(mult_stress);
  mult_stress->add_option("--multiplier", multiplier, "alternating-log | constant | random-bounded");
  mult_stress->add_option("--constant", mult_constant, "value for --multiplier constant");
  mult_stress->add_option("--bound", mult_bound, "bound for --multiplier random-bounded");
  add_budget(mult_stress);
  add_seed(mult_stress);
  output.attach(mult_stress);

  CLI::App* weak_tail =
      app.add_subcommand("weak-tail", "sup over unit functionals of the windowed |<x_n, u>| sum");
  series.attach(weak_tail);
  window.attach(weak_tail);
  weak_tail->add_option("--method", method, "closed-form | sphere-search")
      ->default_val("closed-form");
  weak_tail->add_option("--iterations", iterations, "ascent iterations for sphere-search");
  add_seed(weak_tail);
  output.attach(weak_tail);

  CLI::App* subseries =
      app.add_subcommand("subseries", "oscillation of parity and random subseries");
  series.attach(subseries);
  subseries->add_option("--count", subseries_count, "random patterns in addition to parity");
  add_budget(subseries);
  add_seed(subseries);
  output.attach(subseries);

  CLI::App* sgd = app.add_subcommand(
      "sgd-sensitivity", "order sensitivity of accumulated gradient updates");
  sgd->add_option("--stream", stream_kind, "quadratic | ill-conditioned | file");
  sgd->add_option("--stream-file", stream_file, "gradient list for --stream file");
  sgd->add_option("--dim", dim, "model dimension for the synthetic streams");
  sgd->add_option("--steps", steps, "stream length");
  sgd->add_option("--stream-seed", stream_seed, "seed for the synthetic streams");
  sgd->add_option("--schedule", schedule, "constant | inverse-sqrt");
  sgd->add_option("--eta", eta, "learning rate (or its scale for inverse-sqrt)");
  sgd->add_option("--num-perms", num_perms, "permutations per strategy");
  sgd->add_option("--strategies", strategy_names,
                  "comma-separated: naive,compensated,pairwise,exact-rational")
      ->delimiter(',');
  add_seed(sgd);
  output.attach(sgd);

  CLI::App* frame_threshold = app.add_subcommand(
      "frame-threshold", "analyze a signal, apply a threshold rule, reconstruct via the dual");
  frame_threshold
      ->add_option("--frame", frame_kind,
                   "mercedes-benz | orthonormal | rotated-union | random-unit | haar | file")
      ->required();
  frame_threshold->add_option("--frame-file", frame_file, "vector table for --frame file");
  frame_threshold->add_option("--dim", dim, "dimension for orthonormal / random-unit");
  frame_threshold->add_option("--count", frame_count, "vector count for random-unit");
  frame_threshold->add_option("--angle", angle, "rotation angle for rotated-union");
  frame_threshold->add_option("--levels", levels, "levels for the haar frame (2^levels points)");
  frame_threshold->add_option("--frame-seed", frame_seed, "seed for random-unit");
  frame_threshold->add_option("--signal", signal_values, "signal coordinates")->delimiter(',');
  frame_threshold->add_option("--signal-seed", signal_seed,
                              "seed for a random unit-normal signal when --signal is absent");
  frame_threshold->add_option("--rule", rule_kind, "hard | soft | mask")->required();
  frame_threshold->add_option("--tau", tau, "cutoff for hard/soft rules");
  frame_threshold->add_option("--mask", mask_values, "weights for --rule mask")->delimiter(',');
  add_seed(frame_threshold);
  output.attach(frame_threshold);

  const auto fail = [&](int code, const std::string& kind, const std::string& message) {
    Json error;
    error["error"]["kind"] = kind;
    error["error"]["message"] = message;
    const Json envelope = unconv::report_envelope(kToolVersion, argv_record, seed, error);
    std::fputs((envelope.dump(2) + "\n").c_str(), stdout);
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fputs((std::string(e.what()) + "\n").c_str(), stderr);
    return fail(2, "invalid-arguments", e.what());
  }

  try {
    if (classify->parsed()) return run_classify(series, budget, seed, output, argv_record);
    if (rearrange->parsed())
      return run_rearrange(series, target, tol, budget, seed, output, argv_record);
    if (net_sup->parsed())
      return run_net_sup(series, window, method, seed, output, argv_record);
    if (sign_stress->parsed())
      return run_sign_stress(series, terms, mode, pattern_count, seed, output, argv_record);
    if (mult_stress->parsed())
      return run_multiplier_stress(series, multiplier, mult_constant, mult_bound, budget, seed,
                                   output, argv_record);
    if (weak_tail->parsed())
      return run_weak_tail(series, window, method, iterations, seed, output, argv_record);
    if (subseries->parsed())
      return run_subseries(series, budget, subseries_count, seed, output, argv_record);
    if (sgd->parsed())
      return run_sgd_sensitivity(stream_kind, stream_file, dim, steps, stream_seed, schedule,
                                 eta, num_perms, strategy_names, seed, output, argv_record);
    if (frame_threshold->parsed())
      return run_frame_threshold(frame_kind, frame_file, dim, frame_count, angle, levels,
                                 frame_seed, signal_values, signal_seed, rule_kind, tau,
                                 mask_values, seed, output, argv_record);
    return fail(2, "invalid-arguments", "no subcommand given");
  } catch (const ExitWith& e) {
    return fail(e.code, e.kind, e.message);
  } catch (const unconv::NotAFrame& e) {
    return fail(4, "not-a-frame", e.what());
  } catch (const unconv::ParseError& e) {
    return fail(2, "parse-error", e.what());
  } catch (const unconv::UnsupportedMethod& e) {
    return fail(2, "unsupported-method", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "invalid-arguments", e.what());
  } catch (const std::out_of_range& e) {
    return fail(2, "invalid-arguments", e.what());
  } catch (const std::exception& e) {
    return fail(2, "error", e.what());
  }
}
