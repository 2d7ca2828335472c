#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relgrowth/complexity.hpp"
#include "relgrowth/datasets.hpp"
#include "relgrowth/errors.hpp"
#include "relgrowth/growth.hpp"
#include "relgrowth/nhpp.hpp"
#include "relgrowth/rundomain.hpp"
#include "relgrowth/seeding.hpp"
#include "relgrowth/selection.hpp"
#include "relgrowth/simulate.hpp"

namespace {

using nlohmann::ordered_json;
using namespace relgrowth;

constexpr const char* kVersion = "0.1.0";

struct CommonFlags {
  bool no_timestamp = false;
  std::uint64_t seed = 1;
};

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

ordered_json make_report(const std::string& command, const CommonFlags& flags) {
  ordered_json report;
  report["schema_version"] = 1;
  report["tool"] = "relgrowth";
  report["version"] = kVersion;
  report["command"] = command;
  if (!flags.no_timestamp) report["timestamp"] = iso_timestamp();
  report["input"] = ordered_json::object();
  report["results"] = ordered_json::object();
  report["warnings"] = ordered_json::array();
  report["notes"] = ordered_json::array();
  return report;
}

void emit(const ordered_json& report) { std::cout << report.dump(2) << "\n"; }

std::map<std::string, double> parse_assignments(const std::string& text) {
  std::map<std::string, double> out;
  if (text.empty()) return out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("expected name=value, got '" + item + "'");
    }
    try {
      std::size_t used = 0;
      const double value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      out[item.substr(0, eq)] = value;
    } catch (const std::exception&) {
      throw ValidationError("bad numeric value in '" + item + "'");
    }
  }
  return out;
}

std::vector<std::uint64_t> parse_counts(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw ValidationError("bad count '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_bits(const std::string& text) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item == "0" || item == "1") {
      out.push_back(item == "1");
    } else {
      throw ValidationError("trace entries must be 0 or 1, got '" + item + "'");
    }
  }
  return out;
}

FailureLog load_log(const std::string& path, const std::string& format) {
  const LogFormat fmt = format == "json" ? LogFormat::Json : LogFormat::Csv;
  if (path == "-") return read_failure_log(std::cin, fmt);
  return load_failure_log(path, fmt);
}

ordered_json describe_log(const std::string& path, const FailureLog& log) {
  ordered_json digest;
  digest["data"] = path;
  digest["kind"] =
      log.kind() == LogKind::EventTimes ? "event-times" : "grouped-counts";
  digest["events"] = log.error_count();
  if (log.kind() == LogKind::GroupedCounts) {
    digest["bins"] = log.bins().size();
  }
  digest["horizon"] = log.total_time();
  return digest;
}

ordered_json params_json(const std::map<std::string, double>& params) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, value] : params) {
    if (key == "printed_exponent") {
      out[key] = value != 0.0;
    } else {
      out[key] = value;
    }
  }
  return out;
}

bool is_nhpp_model(const std::string& name) {
  try {
    nhpp::model_from_name(name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// --- fit ---

struct FitArgs {
  std::string model;
  std::string data = "-";
  std::string format = "csv";
  std::string start;
  std::string constants;
  std::string stages;
  std::string curve_out;
  bool grouped = false;
  bool fit_hyperbolic = false;
  bool xui_positive = false;
  int restarts = 8;
};

void fill_nhpp_fit_results(ordered_json& results, const nhpp::NhppFit& fit) {
  results["family"] = "nhpp";
  results["model"] = nhpp::model_name(fit.model);
  results["params"] = params_json(fit.params);
  results["log_lik"] = fit.log_lik;
  results["n_free_params"] = fit.n_free_params;
  results["converged"] = fit.converged;
  results["iterations"] = fit.iterations;
  results["data_horizon"] = fit.data_horizon;
  results["events"] = fit.events;
  const auto limit = nhpp::asymptote(fit.model, fit.params);
  results["asymptote"] = limit ? ordered_json(*limit) : ordered_json(nullptr);
  const auto criteria = selection::information_criteria(
      fit.log_lik, fit.n_free_params, fit.events);
  results["aic"] = criteria.aic;
  results["bic"] = criteria.bic;
}

ordered_json growth_params_json(const growth::HazardParams& p) {
  ordered_json out;
  out["n0"] = p.n0;
  out["phi"] = p.phi;
  for (const auto& [key, value] : p.extra) out[key] = value;
  return out;
}

void fill_growth_fit_results(ordered_json& results, const growth::GrowthFit& fit,
                             std::uint64_t events) {
  results["family"] = "growth";
  results["model"] = growth::model_name(fit.model);
  results["params"] = growth_params_json(fit.params);
  if (!fit.params.stage_counts.empty()) {
    results["stage_counts"] = fit.params.stage_counts;
  }
  results["xui_positive_exponent"] = fit.params.xui_positive_exponent;
  results["log_lik"] = fit.log_lik;
  results["converged"] = fit.converged;
  results["iterations"] = fit.iterations;
  results["events"] = events;
  results["integer"] = {{"n0", fit.integer.n0},
                        {"log_lik", fit.integer.log_lik},
                        {"params", growth_params_json(fit.integer.params)}};
  results["remaining"] = growth::predict_remaining(fit, events);
}

int run_fit(const FitArgs& args, const CommonFlags& flags) {
  ordered_json report = make_report("fit", flags);
  const FailureLog log = load_log(args.data, args.format);
  report["input"] = describe_log(args.data, log);
  report["input"]["model"] = args.model;
  report["input"]["seed"] = flags.seed;
  if (args.grouped && log.kind() != LogKind::GroupedCounts) {
    throw ValidationError("--grouped given but the log holds event times");
  }

  int exit_code = 0;
  if (is_nhpp_model(args.model)) {
    const nhpp::NhppModelId model = nhpp::model_from_name(args.model);
    nhpp::NhppFitOptions options;
    options.seed = flags.seed;
    options.restarts = args.restarts;
    if (!args.start.empty()) options.start = parse_assignments(args.start);
    try {
      const nhpp::NhppFit fit = nhpp::fit(model, log, options);
      fill_nhpp_fit_results(report["results"], fit);
      if (!args.curve_out.empty()) {
        std::ofstream curve(args.curve_out);
        if (!curve) throw ParseError("cannot write " + args.curve_out);
        std::vector<double> grid;
        for (int j = 0; j <= 100; ++j) {
          grid.push_back(log.total_time() * j / 100.0);
        }
        nhpp::write_fitted_curve(model, fit.params, log, grid, curve);
        report["results"]["curve_out"] = args.curve_out;
      }
    } catch (const NonConvergence& failure) {
      report["results"]["error"] = {{"code", failure.code()},
                                    {"message", failure.what()}};
      report["warnings"].push_back(failure.what());
      std::cerr << "error " << failure.code() << ": " << failure.what()
                << "\n";
      exit_code = 2;
    }
  } else {
    const growth::HazardModelId model = growth::growth_model_from_name(args.model);
    growth::FitOptions options;
    options.seed = flags.seed;
    options.restarts = args.restarts;
    options.stage_counts = parse_counts(args.stages);
    options.constants = parse_assignments(args.constants);
    options.fit_hyperbolic_constants = args.fit_hyperbolic;
    options.xui_positive_exponent = args.xui_positive;
    try {
      const growth::GrowthFit fit = growth::fit(model, log, options);
      fill_growth_fit_results(report["results"], fit, log.error_count());
    } catch (const NonConvergence& failure) {
      report["results"]["error"] = {{"code", failure.code()},
                                    {"message", failure.what()}};
      report["warnings"].push_back(failure.what());
      std::cerr << "error " << failure.code() << ": " << failure.what()
                << "\n";
      exit_code = 2;
    }
  }
  emit(report);
  return exit_code;
}

// --- predict ---

struct PredictArgs {
  std::string report_path;
  double horizon = 0.0;
  double at = -1.0;  // negative: use the fitted data horizon
};

int run_predict(const PredictArgs& args, const CommonFlags& flags) {
  ordered_json report = make_report("predict", flags);
  ordered_json fit_report;
  try {
    if (args.report_path == "-") {
      fit_report = ordered_json::parse(std::cin);
    } else {
      std::ifstream in(args.report_path);
      if (!in) throw ParseError("cannot open " + args.report_path);
      fit_report = ordered_json::parse(in);
    }
  } catch (const nlohmann::json::exception& failure) {
    throw ParseError(std::string("malformed fit report: ") + failure.what());
  }
  if (!fit_report.contains("results") ||
      !fit_report["results"].contains("family")) {
    throw ParseError("fit report lacks results.family");
  }
  const ordered_json& results = fit_report["results"];
  report["input"]["report"] = args.report_path;
  report["input"]["horizon"] = args.horizon;

  if (results["family"] == "nhpp") {
    const nhpp::NhppModelId model =
        nhpp::model_from_name(results["model"].get<std::string>());
    nhpp::NhppParams params;
    for (const auto& [key, value] : results["params"].items()) {
      params[key] = value.is_boolean() ? (value.get<bool>() ? 1.0 : 0.0)
                                       : value.get<double>();
    }
    const double at = args.at >= 0.0
                          ? args.at
                          : results["data_horizon"].get<double>();
    report["input"]["at"] = at;
    const nhpp::Prediction prediction =
        nhpp::predict(model, params, args.horizon, at);
    report["results"]["expected_new"] = prediction.expected_new;
    report["results"]["p_no_failure"] = prediction.p_no_failure;
    report["results"]["remaining"] = prediction.remaining
                                         ? ordered_json(*prediction.remaining)
                                         : ordered_json(nullptr);
  } else if (results["family"] == "growth") {
    growth::GrowthFit fit;
    fit.model =
        growth::growth_model_from_name(results["model"].get<std::string>());
    for (const auto& [key, value] : results["params"].items()) {
      if (key == "n0") {
        fit.params.n0 = value.get<double>();
      } else if (key == "phi") {
        fit.params.phi = value.get<double>();
      } else {
        fit.params.extra[key] = value.get<double>();
      }
    }
    if (results.contains("stage_counts")) {
      fit.params.stage_counts =
          results["stage_counts"].get<std::vector<std::uint64_t>>();
    }
    fit.params.xui_positive_exponent =
        results.value("xui_positive_exponent", false);
    const auto events = results["events"].get<std::uint64_t>();
    report["results"]["remaining"] = growth::predict_remaining(fit, events);
    try {
      report["results"]["mean_time_to_next"] =
          growth::mean_time_to_next(fit, events + 1);
    } catch (const ExhaustedPopulation& done) {
      report["results"]["mean_time_to_next"] = nullptr;
      report["warnings"].push_back(done.what());
    }
  } else {
    throw ParseError("unknown fit family in report");
  }
  emit(report);
  return 0;
}

// --- estimate-seeding ---

struct SeedingArgs {
  bool mills = false;
  bool partition = false;
  bool fo = false;
  bool groups = false;
  std::uint64_t seeded = 0;
  std::uint64_t seeded_found = 0;
  std::uint64_t own_found = 0;
  std::int64_t claim = -1;
  std::string trace;
  std::uint64_t n_max = 0;
  std::uint64_t total_fo = 0;
  std::uint64_t sampled_fo = 0;
  double control_pct = 0.0;
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::uint64_t n12 = 0;
  bool v_given = false;
};

void fill_estimate(ordered_json& results,
                   const seeding::PopulationEstimate& estimate,
                   const std::string& method) {
  results["method"] = method;
  results["n_hat"] = estimate.n_hat;
  results["n_hat_rounded"] = estimate.n_hat_rounded;
  for (const auto& [key, value] : estimate.auxiliary) results[key] = value;
}

int run_estimate_seeding(const SeedingArgs& args, const CommonFlags& flags) {
  ordered_json report = make_report("estimate-seeding", flags);
  ordered_json& results = report["results"];
  if (args.claim >= 0) {
    report["input"] = {{"seeded", args.seeded},
                       {"seeded_found", args.seeded_found},
                       {"own_found", args.own_found},
                       {"claim", args.claim}};
    const auto claim = static_cast<std::uint64_t>(args.claim);
    const double confidence =
        args.v_given && args.seeded_found != args.seeded
            ? seeding::mills_confidence_partial(args.seeded, args.seeded_found,
                                                args.own_found, claim)
            : seeding::mills_confidence_full(args.seeded, args.own_found,
                                             claim);
    results["method"] = "mills-confidence";
    results["confidence"] = confidence;
  } else if (args.mills) {
    report["input"] = {{"seeded", args.seeded},
                       {"seeded_found", args.seeded_found},
                       {"own_found", args.own_found}};
    SeedingTally tally;
    tally.seeded = args.seeded;
    tally.seeded_found = args.seeded_found;
    tally.own_found = args.own_found;
    fill_estimate(results, seeding::mills_estimate(tally), "mills");
  } else if (args.partition) {
    report["input"] = {{"trace", args.trace}, {"n_max", args.n_max}};
    PartitionTrace trace;
    trace.found_in_part2 = parse_bits(args.trace);
    seeding::PartitionOptions options;
    options.n_max = args.n_max;
    fill_estimate(results, seeding::partition_estimate(trace, options),
                  "partition");
  } else if (args.fo) {
    report["input"] = {{"seeded", args.seeded},
                       {"seeded_found", args.seeded_found},
                       {"own_found", args.own_found},
                       {"total_fo", args.total_fo},
                       {"sampled_fo", args.sampled_fo},
                       {"control_pct", args.control_pct}};
    SeedingTally tally;
    tally.seeded = args.seeded;
    tally.seeded_found = args.seeded_found;
    tally.own_found = args.own_found;
    tally.total_fo = args.total_fo;
    tally.sampled_fo = args.sampled_fo;
    tally.control_pct = args.control_pct;
    fill_estimate(results, seeding::functional_objects_estimate(tally),
                  "functional-objects");
  } else if (args.groups) {
    report["input"] = {
        {"n1", args.n1}, {"n2", args.n2}, {"n12", args.n12}};
    GroupTally tally{args.n1, args.n2, args.n12};
    fill_estimate(results, seeding::groups_estimate(tally), "groups");
  } else {
    throw ValidationError(
        "choose a method: --mills, --partition, --fo, --groups, or --claim");
  }
  emit(report);
  return 0;
}

// --- complexity ---

struct ComplexityArgs {
  bool halstead = false;
  bool trw = false;
  bool trw_fit = false;
  std::uint64_t eta1 = 0, eta2 = 0, n1 = 0, n2 = 0;
  double divisor = 3000.0;
  double logical = 0, interlink = 0, calc = 0, io = 0, readability = 0;
  std::string data;
};

int run_complexity(const ComplexityArgs& args, const CommonFlags& flags) {
  ordered_json report = make_report("complexity", flags);
  ordered_json& results = report["results"];
  if (args.halstead) {
    report["input"] = {{"eta1", args.eta1},
                       {"eta2", args.eta2},
                       {"n1", args.n1},
                       {"n2", args.n2}};
    complexity::HalsteadCounts counts{args.eta1, args.eta2, args.n1, args.n2};
    complexity::HalsteadOptions options;
    options.defect_volume_divisor = args.divisor;
    const complexity::HalsteadReport metrics =
        complexity::halstead_report(counts, options);
    results["method"] = "halstead";
    results["vocabulary"] = metrics.vocabulary;
    results["length"] = metrics.length;
    results["theoretical_length"] = metrics.theoretical_length;
    results["volume"] = metrics.volume;
    results["level"] = metrics.level;
    results["effort"] = metrics.effort;
    results["predicted_defects"] = metrics.predicted_defects;
  } else if (args.trw) {
    complexity::TrwFactors factors{args.logical, args.interlink, args.calc,
                                   args.io, args.readability};
    report["input"] = {{"l_tot", args.logical},
                       {"c_inf", args.interlink},
                       {"c_c", args.calc},
                       {"c_io", args.io},
                       {"u_read", args.readability}};
    results["method"] = "trw";
    results["complexity"] = complexity::trw_complexity(factors);
  } else if (args.trw_fit) {
    report["input"] = {{"data", args.data}};
    const std::vector<complexity::TrwSample> samples =
        complexity::load_trw_samples(args.data);
    const complexity::TrwModel model = complexity::trw_fit(samples);
    results["method"] = "trw-fit";
    ordered_json kappas = ordered_json::object();
    for (std::size_t j = 0; j < model.kappas.size(); ++j) {
      kappas[complexity::kTrwFactorNames[j]] = model.kappas[j];
    }
    results["kappas"] = kappas;
    results["residual_sse"] = model.residual_sse;
    results["samples"] = samples.size();
  } else {
    throw ValidationError("choose a method: --halstead, --trw, or --trw-fit");
  }
  emit(report);
  return 0;
}

// --- select ---

struct SelectArgs {
  std::string models;
  std::string criterion = "aic";
  std::string data = "-";
  std::string format = "csv";
};

int run_select(const SelectArgs& args, const CommonFlags& flags) {
  ordered_json report = make_report("select", flags);
  const FailureLog log = load_log(args.data, args.format);
  report["input"] = describe_log(args.data, log);
  report["input"]["seed"] = flags.seed;

  std::vector<std::string> names;
  std::stringstream stream(args.models);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) names.push_back(item);
  }
  if (names.empty()) throw ValidationError("--models needs at least one id");

  const selection::Criterion by = args.criterion == "sse"
                                      ? selection::Criterion::OneStepSse
                                      : selection::criterion_from_name(args.criterion);

  std::vector<selection::ModelScore> scores;
  report["results"]["candidates"] = ordered_json::array();
  for (const std::string& name : names) {
    const nhpp::NhppModelId model = nhpp::model_from_name(name);
    ordered_json candidate;
    candidate["model"] = name;
    try {
      nhpp::NhppFitOptions options;
      options.seed = flags.seed;
      const nhpp::NhppFit fit = nhpp::fit(model, log, options);
      double sse = 0.0;
      candidate["params"] = params_json(fit.params);
      candidate["log_lik"] = fit.log_lik;
      try {
        const selection::PrequentialResult prequential =
            selection::one_step_prediction_error(model, log, flags.seed);
        sse = prequential.sse;
        candidate["one_step_sse"] = sse;
        for (std::size_t window : prequential.skipped) {
          report["warnings"].push_back(name + ": prequential window " +
                                       std::to_string(window) + " skipped");
        }
      } catch (const Error& failure) {
        candidate["one_step_sse"] = nullptr;
        report["warnings"].push_back(name + ": " + failure.what());
      }
      const selection::ModelScore score = selection::score_fit(fit, sse);
      candidate["aic"] = score.aic;
      candidate["bic"] = score.bic;
      scores.push_back(score);
    } catch (const NonConvergence& failure) {
      candidate["error"] = {{"code", failure.code()},
                            {"message", failure.what()}};
      report["warnings"].push_back(name + ": " + failure.what());
    }
    report["results"]["candidates"].push_back(candidate);
  }
  if (scores.empty()) {
    throw NonConvergence("no candidate model could be fitted");
  }
  report["results"]["ranking"] = ordered_json::array();
  for (const selection::ModelScore& score : selection::rank_models(scores, by)) {
    report["results"]["ranking"].push_back(score.model);
  }
  report["results"]["criterion"] = args.criterion;
  report["notes"].push_back(
      "aic = 2k - 2 log L; bic = k ln n - 2 log L; sse is the prequential "
      "one-step squared error from half the data onward");
  emit(report);
  return 0;
}

// --- simulate ---

struct SimulateArgs {
  std::string model;
  std::uint64_t n0 = 0;
  double phi = 0.0;
  double horizon = -1.0;
  std::string params;
  std::string out = "-";
};

int run_simulate(const SimulateArgs& args, const CommonFlags& flags) {
  FailureLog log = [&] {
    if (args.model == "jm" || args.model == "sw") {
      const double horizon = args.horizon < 0.0
                                 ? std::numeric_limits<double>::infinity()
                                 : args.horizon;
      return args.model == "jm"
                 ? simulate::simulate_jm(args.n0, args.phi, flags.seed, horizon)
                 : simulate::simulate_sw(args.n0, args.phi, flags.seed,
                                         horizon);
    }
    const nhpp::NhppModelId model = nhpp::model_from_name(args.model);
    if (args.horizon < 0.0) {
      throw ValidationError("NHPP simulation needs --horizon");
    }
    return simulate::simulate_nhpp(model, parse_assignments(args.params),
                                   args.horizon, flags.seed);
  }();
  if (args.out == "-") {
    write_failure_log(log, std::cout, LogFormat::Csv);
  } else {
    save_failure_log(log, args.out, LogFormat::Csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Software reliability estimation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  FitArgs fit_args;
  PredictArgs predict_args;
  SeedingArgs seeding_args;
  ComplexityArgs complexity_args;
  SelectArgs select_args;
  SimulateArgs simulate_args;

  const auto add_common = [&](CLI::App* sub, bool with_seed) {
    sub->add_flag("--no-timestamp", flags.no_timestamp,
                  "omit the timestamp from the report");
    if (with_seed) {
      sub->add_option("--seed", flags.seed, "random seed")
          ->envname("RELGROWTH_SEED");
    }
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a reliability model");
  fit_cmd->add_option("--model", fit_args.model, "model id")->required();
  fit_cmd->add_option("--data", fit_args.data, "failure log path or -");
  fit_cmd->add_option("--format", fit_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  fit_cmd->add_flag("--grouped", fit_args.grouped,
                    "require grouped-counts data");
  fit_cmd->add_option("--start", fit_args.start,
                      "starting parameters, e.g. a=5,g=0.1");
  fit_cmd->add_option("--constants", fit_args.constants,
                      "fixed model constants, e.g. k=0.5");
  fit_cmd->add_option("--stages", fit_args.stages,
                      "per-stage error counts, e.g. 3,2,4");
  fit_cmd->add_flag("--fit-hyperbolic-constants", fit_args.fit_hyperbolic,
                    "fit the hyperbolic a,b,c instead of fixing them");
  fit_cmd->add_flag("--xui-positive-exponent", fit_args.xui_positive,
                    "use exponent +k(N-i+1) in the xui hazard");
  fit_cmd->add_option("--restarts", fit_args.restarts, "simplex restarts");
  fit_cmd->add_option("--curve-out", fit_args.curve_out,
                      "write the fitted curve CSV here");
  add_common(fit_cmd, true);

  CLI::App* predict_cmd =
      app.add_subcommand("predict", "predict from a fit report");
  predict_cmd->add_option("--report", predict_args.report_path,
                          "fit report path or -")
      ->required();
  predict_cmd->add_option("--horizon", predict_args.horizon,
                          "prediction window length")
      ->required();
  predict_cmd->add_option("--at", predict_args.at,
                          "evaluation time (default: fitted horizon)");
  add_common(predict_cmd, false);

  CLI::App* seeding_cmd =
      app.add_subcommand("estimate-seeding", "error-seeding estimators");
  seeding_cmd->add_flag("--mills", seeding_args.mills, "seeded-ratio estimate");
  seeding_cmd->add_flag("--partition", seeding_args.partition,
                        "two-part partition estimate");
  seeding_cmd->add_flag("--fo", seeding_args.fo,
                        "functional-objects estimate");
  seeding_cmd->add_flag("--groups", seeding_args.groups,
                        "two-group capture-recapture estimate");
  seeding_cmd->add_option("-S,--seeded", seeding_args.seeded,
                          "planted error count");
  CLI::Option* v_opt = seeding_cmd->add_option(
      "-v,--seeded-found", seeding_args.seeded_found, "planted errors found");
  seeding_cmd->add_option("-n,--own-found", seeding_args.own_found,
                          "own errors found");
  seeding_cmd->add_option("--claim", seeding_args.claim,
                          "confidence that at most this many errors remain");
  seeding_cmd->add_option("--trace", seeding_args.trace,
                          "partition trace, e.g. 0,1,0,1");
  seeding_cmd->add_option("--n-max", seeding_args.n_max,
                          "partition grid upper edge (0: 10x trace length)");
  seeding_cmd->add_option("--total-fo", seeding_args.total_fo,
                          "total functional objects");
  seeding_cmd->add_option("--sampled-fo", seeding_args.sampled_fo,
                          "functional objects seeded");
  seeding_cmd->add_option("--control-pct", seeding_args.control_pct,
                          "controlled percentage of objects");
  seeding_cmd->add_option("--n1", seeding_args.n1, "group 1 findings");
  seeding_cmd->add_option("--n2", seeding_args.n2, "group 2 findings");
  seeding_cmd->add_option("--n12", seeding_args.n12, "common findings");
  add_common(seeding_cmd, false);

  CLI::App* complexity_cmd =
      app.add_subcommand("complexity", "complexity-based defect prediction");
  complexity_cmd->add_flag("--halstead", complexity_args.halstead,
                           "Halstead metrics");
  complexity_cmd->add_flag("--trw", complexity_args.trw,
                           "weighted five-factor complexity");
  complexity_cmd->add_flag("--trw-fit", complexity_args.trw_fit,
                           "least-squares defect coefficients");
  complexity_cmd->add_option("--eta1", complexity_args.eta1,
                             "distinct operators");
  complexity_cmd->add_option("--eta2", complexity_args.eta2,
                             "distinct operands");
  complexity_cmd->add_option("--n1", complexity_args.n1, "operator total");
  complexity_cmd->add_option("--n2", complexity_args.n2, "operand total");
  complexity_cmd->add_option("--defect-divisor", complexity_args.divisor,
                             "volume per expected defect");
  complexity_cmd->add_option("--logical", complexity_args.logical,
                             "logical complexity L_tot");
  complexity_cmd->add_option("--interlink", complexity_args.interlink,
                             "interlink complexity C_inf");
  complexity_cmd->add_option("--calc", complexity_args.calc,
                             "calculation complexity C_c");
  complexity_cmd->add_option("--io", complexity_args.io,
                             "input-output complexity C_io");
  complexity_cmd->add_option("--readability", complexity_args.readability,
                             "readability U_read");
  complexity_cmd->add_option("--data", complexity_args.data,
                             "TRW sample CSV for --trw-fit");
  add_common(complexity_cmd, false);

  CLI::App* select_cmd =
      app.add_subcommand("select", "fit and rank candidate models");
  select_cmd->add_option("--models", select_args.models,
                         "comma-separated model ids")
      ->required();
  select_cmd
      ->add_option("--criterion", select_args.criterion, "aic, bic, or sse")
      ->check(CLI::IsMember({"aic", "bic", "sse"}));
  select_cmd->add_option("--data", select_args.data, "failure log path or -");
  select_cmd->add_option("--format", select_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  add_common(select_cmd, true);

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "generate synthetic failure logs");
  simulate_cmd->add_option("--model", simulate_args.model, "jm, sw, or nhpp id")
      ->required();
  simulate_cmd->add_option("-N,--n0", simulate_args.n0,
                           "initial error count (jm/sw)");
  simulate_cmd->add_option("--phi", simulate_args.phi,
                           "detection-rate factor (jm/sw)");
  simulate_cmd->add_option("-T,--horizon", simulate_args.horizon,
                           "observation horizon");
  simulate_cmd->add_option("--params", simulate_args.params,
                           "NHPP parameters, e.g. a=100,g=0.1");
  simulate_cmd->add_option("--out", simulate_args.out, "output path or -");
  add_common(simulate_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    seeding_args.v_given = v_opt->count() > 0;
    if (*fit_cmd) return run_fit(fit_args, flags);
    if (*predict_cmd) return run_predict(predict_args, flags);
    if (*seeding_cmd) return run_estimate_seeding(seeding_args, flags);
    if (*complexity_cmd) return run_complexity(complexity_args, flags);
    if (*select_cmd) return run_select(select_args, flags);
    if (*simulate_cmd) return run_simulate(simulate_args, flags);
  } catch (const NonConvergence& failure) {
    std::cerr << "error " << failure.code() << ": " << failure.what() << "\n";
    return 2;
  } catch (const Error& failure) {
    std::cerr << "error " << failure.code() << ": " << failure.what() << "\n";
    return 1;
  } catch (const std::exception& failure) {
    std::cerr << "error internal: " << failure.what() << "\n";
    return 1;
  }
  return 0;
}
