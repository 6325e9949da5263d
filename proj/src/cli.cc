//
// Copyright 2026 The noisy-cfmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "ncfmm/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncfmm/curve.h"
#include "ncfmm/errors.h"
#include "ncfmm/fee.h"
#include "ncfmm/harness.h"
#include "ncfmm/lp_noise.h"
#include "ncfmm/market.h"
#include "ncfmm/privacy.h"
#include "ncfmm/rng.h"
#include "ncfmm/serialization.h"

namespace ncfmm {
namespace {

[[noreturn]] void Usage(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

double ParseNumber(std::string_view text, std::string_view what) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    Usage(std::string(what) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> ParseList(const std::string& text, std::string_view what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(ParseNumber(item, what));
  if (values.empty()) Usage(std::string(what) + ": empty list");
  return values;
}

PrivacySpec ParseSpec(const std::string& tau, const std::string& epsilon) {
  const std::vector<double> bounds = ParseList(tau, "--tau");
  if (bounds.size() != 2) Usage("--tau: expected l,u");
  PrivacySpec spec{bounds[0], bounds[1], ParseNumber(epsilon, "--epsilon")};
  spec.Validate();
  return spec;
}

Json LoadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) Usage("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& error) {
    Usage("config file '" + path + "': " + error.what());
  }
}

std::string Fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

std::string Verdict(bool passed) { return passed ? "PASS" : "FAIL"; }

// What a subcommand produced. The driver picks one rendering.
struct CommandResult {
  Json document;
  std::string csv;
  std::string table;
  std::string summary;
  bool passed = true;
};

struct CurveFlags {
  std::string family;
  double level = 0.0;
  double slope = 0.0;
  double x = 0.0;

  void Register(CLI::App* command, bool required) {
    auto* curve = command->add_option("--curve", family,
                                      "constant_product|lmsr|constant_sum "
                                      "(aliases cp, lmsr, cs)");
    auto* lvl = command->add_option("--level", level, "level-curve parameter");
    auto* x_opt = command->add_option("--x", x, "reserve of X");
    if (required) {
      curve->required();
      lvl->required();
      x_opt->required();
    }
    command->add_option("--r", slope, "constant-sum slope");
  }

  CurveConfig Config() const {
    CurveConfig config;
    const auto parsed = ParseCurveFamily(family);
    if (!parsed) Usage("--curve: unknown family '" + family + "'");
    config.family = *parsed;
    config.level = level;
    config.slope = slope;
    return config;
  }
};

// One trade against one pool, from flags with a config file underneath.
struct TradeFlags {
  std::string config_path;
  CurveFlags curve;
  std::optional<double> delta;
  std::string tau;
  std::string epsilon;

  void Register(CLI::App* command) {
    command->add_option("--config", config_path, "JSON config file");
    curve.Register(command, false);
    command->add_option("--delta", delta, "trade size");
    command->add_option("--tau", tau, "masking interval l,u");
    command->add_option("--epsilon", epsilon, "privacy level or inf");
  }
};

struct Trade {
  CurveConfig curve;
  double x = 0.0;
  double delta = 0.0;
  std::optional<PrivacySpec> spec;
  Json config = Json::object();
};

Trade ResolveTrade(const TradeFlags& flags,
                   std::initializer_list<std::string_view> allowed,
                   std::string_view context) {
  Trade trade;
  if (!flags.config_path.empty()) {
    trade.config = LoadJson(flags.config_path);
    RejectUnknownFields(trade.config, allowed, context);
  }
  const Json& config = trade.config;
  if (!flags.curve.family.empty()) {
    trade.curve = flags.curve.Config();
    trade.x = flags.curve.x;
  } else if (config.contains("curve") && config.contains("x")) {
    trade.curve = CurveConfigFromJson(config.at("curve"));
    trade.x = config.at("x").get<double>();
  } else {
    Usage("--curve, --level and --x (or config curve and x) are required");
  }
  if (flags.delta) {
    trade.delta = *flags.delta;
  } else if (config.contains("delta")) {
    trade.delta = config.at("delta").get<double>();
  } else {
    Usage("--delta (or config delta) is required");
  }
  if (!flags.tau.empty()) {
    trade.spec = ParseSpec(flags.tau, flags.epsilon.empty() ? "inf" : flags.epsilon);
  } else if (!flags.epsilon.empty()) {
    Usage("--epsilon needs --tau");
  } else if (config.contains("privacy")) {
    trade.spec = PrivacySpecFromJson(config.at("privacy"));
  }
  return trade;
}

// quote-fee ---------------------------------------------------------------

struct QuoteFeeArgs {
  TradeFlags trade;
  std::string method;
};

CommandResult QuoteFee(const QuoteFeeArgs& args) {
  const Trade trade =
      ResolveTrade(args.trade, {"curve", "x", "delta", "privacy", "method"},
                   "quote-fee config");
  if (!trade.spec) Usage("--tau and --epsilon (or config privacy) are required");
  const CurveConfig& config = trade.curve;
  const TradingCurve curve = config.Build();
  const PrivacySpec spec = *trade.spec;
  const double x = trade.x;
  const double delta = trade.delta;
  const std::string method =
      !args.method.empty() ? args.method
                           : trade.config.value("method", std::string("auto"));
  if (method != "auto" && method != "closed_form" && method != "generic") {
    Usage("method must be auto, closed_form or generic");
  }
  if (!spec.Contains(delta)) Usage("--delta must lie inside --tau");
  const NoiseDistribution noise = BinaryMechanism(delta, spec);
  bool closed_form = false;
  if (method == "closed_form") {
    closed_form = true;
  } else if (method == "auto") {
    closed_form = curve.family() == CurveFamily::kConstantProduct &&
                  noise.size() == 2;
  }
  const FeeQuote quote =
      closed_form ? NoiseFeeConstantProduct(curve.level(), x, delta, noise)
                  : NoiseFee(curve, x, delta, noise);

  CommandResult result;
  result.document = Json{{"command", "quote-fee"},
                         {"curve", ToJson(config)},
                         {"privacy", ToJson(spec)},
                         {"quote", ToJson(quote)},
                         {"display", FormatDisplay(quote.gamma)}};
  result.csv = "family,level,x,delta,l,u,epsilon,method,gamma,display\n" +
               std::string(CurveFamilyName(config.family)) + "," +
               FormatDouble(config.level) + "," + FormatDouble(x) +
               "," + FormatDouble(delta) + "," +
               FormatDouble(spec.lower) + "," + FormatDouble(spec.upper) +
               "," + FormatDouble(spec.epsilon) + "," +
               std::string(FeeMethodName(quote.method)) + "," +
               FormatDouble(quote.gamma) + "," + FormatDisplay(quote.gamma) +
               "\n";
  std::ostringstream table;
  table << "noise fee   " << FormatDouble(quote.gamma) << "\n"
        << "display     " << FormatDisplay(quote.gamma) << "\n"
        << "method      " << FeeMethodName(quote.method) << "\n";
  for (const NoiseAtom& atom : quote.distribution.atoms()) {
    table << "atom        eta=" << FormatDouble(atom.eta)
          << " p=" << FormatDouble(atom.probability) << "\n";
  }
  result.table = table.str();
  return result;
}

// attack-demo -------------------------------------------------------------

struct AttackArgs {
  TradeFlags trade;
  std::optional<int> grid;
};

CommandResult AttackDemo(const AttackArgs& args,
                         std::optional<std::uint64_t> seed) {
  const Trade trade =
      ResolveTrade(args.trade,
                   {"curve", "x", "delta", "privacy", "grid_size", "seed"},
                   "attack-demo config");
  const CurveConfig& config = trade.curve;
  const TradingCurve curve = config.Build();
  const double x = trade.x;
  const double delta = trade.delta;
  const PrivacySpec spec = trade.spec.value_or(PrivacySpec::NonPrivate(delta));
  const int grid = args.grid.value_or(trade.config.value("grid_size", 101));
  if (!seed && trade.config.contains("seed")) {
    seed = trade.config.at("seed").get<std::uint64_t>();
  }
  const bool private_trade = !spec.IsNonPrivate();
  if (private_trade && !seed) Usage("attack-demo with privacy requires --seed");
  if (!spec.Contains(delta)) Usage("--delta must lie inside --tau");

  const ExperimentConfig defaults;
  const MarketState initial(curve, x, defaults.hidden_x,
                            defaults.hidden_y, MarketRules{});
  const double pre_price = initial.spot_price();
  Rng rng(seed.value_or(0));

  auto [plain_state, plain_record] = ExecuteTrade(
      initial, delta, PrivacySpec::NonPrivate(delta), rng);
  const double plain_inferred =
      EavesdropInfer(pre_price, plain_state.spot_price(), curve);

  auto [noisy_state, noisy_record] =
      ExecuteTrade(initial, delta, spec, rng);
  const double noisy_inferred =
      EavesdropInfer(pre_price, noisy_state.spot_price(), curve);
  const double shifted = delta + noisy_record.eta;

  const PldpReport report = VerifyPldp(
      [spec](double v) { return BinaryMechanism(v, spec); }, spec, grid);

  const double plain_error = std::abs(plain_inferred - delta);
  const double noisy_error = std::abs(noisy_inferred - shifted);
  const bool passed =
      plain_error <= 1e-10 * std::max(1.0, std::abs(delta)) &&
      noisy_error <= 1e-10 * std::max(1.0, std::abs(shifted)) &&
      report.satisfied;

  CommandResult result;
  result.passed = passed;
  result.document = Json{
      {"command", "attack-demo"},
      {"curve", ToJson(config)},
      {"x", x},
      {"delta", delta},
      {"privacy", ToJson(spec)},
      {"noiseless", {{"inferred", plain_inferred}, {"abs_error", plain_error}}},
      {"noisy",
       {{"inferred", noisy_inferred},
        {"eta", noisy_record.eta},
        {"delta_plus_eta", shifted},
        {"abs_error", noisy_error}}},
      {"pldp",
       {{"max_ratio", report.max_ratio},
        {"bound", std::exp(spec.epsilon)},
        {"satisfied", report.satisfied}}}};
  if (!private_trade) result.document["note"] = "no privacy requested";
  result.csv = "path,inferred,eta,actual\nnoiseless," +
               FormatDouble(plain_inferred) + ",0," +
               FormatDouble(delta) + "\nnoisy," +
               FormatDouble(noisy_inferred) + "," +
               FormatDouble(noisy_record.eta) + "," + FormatDouble(shifted) +
               "\n";
  std::ostringstream table;
  table << "path        inferred        actual trade\n"
        << "noiseless   " << Fixed6(plain_inferred) << "    "
        << Fixed6(delta) << "\n"
        << "noisy       " << Fixed6(noisy_inferred) << "    "
        << Fixed6(delta) << " + eta " << Fixed6(noisy_record.eta) << "\n"
        << "pldp        max ratio " << Fixed6(report.max_ratio)
        << ", bound " << Fixed6(std::exp(spec.epsilon)) << "\n";
  if (!private_trade) table << "note        no privacy requested\n";
  result.table = table.str();
  result.summary = "eavesdropper infers delta exactly without noise and "
                   "delta + eta with noise: " +
                   Verdict(passed);
  return result;
}

// verify-pldp -------------------------------------------------------------

struct VerifyArgs {
  std::string config_path;
  std::string tau;
  std::string epsilon;
  std::string mechanism;
  std::optional<double> bias;
  std::optional<int> grid;
};

CommandResult VerifyCommand(const VerifyArgs& args) {
  Json config = Json::object();
  if (!args.config_path.empty()) {
    config = LoadJson(args.config_path);
    RejectUnknownFields(config,
                        {"privacy", "mechanism", "bias", "grid_size", "expect"},
                        "verify-pldp config");
  }
  PrivacySpec spec;
  if (!args.tau.empty() || !args.epsilon.empty()) {
    if (args.tau.empty() || args.epsilon.empty()) {
      Usage("verify-pldp needs both --tau and --epsilon");
    }
    spec = ParseSpec(args.tau, args.epsilon);
  } else if (config.contains("privacy")) {
    spec = PrivacySpecFromJson(config.at("privacy"));
  } else {
    Usage("verify-pldp needs --tau/--epsilon or a config privacy block");
  }
  std::string mechanism = config.value("mechanism", std::string("binary"));
  if (!args.mechanism.empty()) mechanism = args.mechanism;
  double bias = config.value("bias", 0.0);
  if (args.bias) bias = *args.bias;
  int grid = config.value("grid_size", 101);
  if (args.grid) grid = *args.grid;
  const std::string expect = config.value("expect", std::string("satisfied"));
  if (expect != "satisfied" && expect != "violated") {
    Usage("verify-pldp config.expect: expected satisfied or violated");
  }

  Mechanism fn;
  if (mechanism == "binary") {
    fn = [spec](double v) { return BinaryMechanism(v, spec); };
  } else if (mechanism == "biased_binary") {
    fn = [spec, bias](double v) { return BiasedBinary(v, spec, bias); };
  } else {
    Usage("unknown mechanism '" + mechanism + "'");
  }
  const PldpReport report = VerifyPldp(fn, spec, grid);
  const double bound = std::exp(spec.epsilon);
  const bool passed = report.satisfied == (expect == "satisfied");

  CommandResult result;
  result.passed = passed;
  result.document = Json{{"command", "verify-pldp"},
                         {"privacy", ToJson(spec)},
                         {"mechanism", mechanism},
                         {"bias", bias},
                         {"grid_size", grid},
                         {"max_ratio", report.max_ratio},
                         {"bound", bound},
                         {"satisfied", report.satisfied},
                         {"inputs", report.inputs},
                         {"outputs", report.outputs},
                         {"expect", expect},
                         {"pass", passed}};
  result.csv = "mechanism,l,u,epsilon,max_ratio,bound,satisfied\n" +
               mechanism + "," + FormatDouble(spec.lower) + "," +
               FormatDouble(spec.upper) + "," + FormatDouble(spec.epsilon) +
               "," + FormatDouble(report.max_ratio) + "," +
               FormatDouble(bound) + "," +
               (report.satisfied ? "true" : "false") + "\n";
  result.summary = "max ratio " + Fixed6(report.max_ratio) +
                   (report.satisfied ? " ≤ " : " > ") + "e^ε";
  if (std::isfinite(bound)) result.summary += " = " + Fixed6(bound);
  result.summary += ": " + Verdict(passed);
  result.table = "inputs      " + std::to_string(report.inputs) +
                 "\noutputs     " + std::to_string(report.outputs) + "\n";
  return result;
}

// scaling-study -----------------------------------------------------------

struct ScalingArgs {
  std::string config_path;
  std::optional<double> level;
  std::string multipliers;
  std::optional<double> price;
  std::optional<double> delta;
  std::string tau;
  std::string epsilon;
  std::optional<double> tolerance;
};

CommandResult ScalingCommand(const ScalingArgs& args) {
  Json config = Json::object();
  if (!args.config_path.empty()) {
    config = LoadJson(args.config_path);
    RejectUnknownFields(config,
                        {"base_level", "multipliers", "price", "delta",
                         "privacy", "tolerance"},
                        "scaling-study config");
  }
  const double level = args.level.value_or(config.value("base_level", 1e4));
  std::vector<double> multipliers =
      config.value("multipliers", std::vector<double>{1.0, 4.0});
  if (!args.multipliers.empty()) {
    multipliers = ParseList(args.multipliers, "--multipliers");
  }
  const double price = args.price.value_or(config.value("price", 1.0));
  const double delta = args.delta.value_or(config.value("delta", 1.0));
  PrivacySpec spec{0.0, 2.0, 2.0};
  if (!args.tau.empty() || !args.epsilon.empty()) {
    spec = ParseSpec(args.tau.empty() ? "0,2" : args.tau,
                     args.epsilon.empty() ? "2" : args.epsilon);
  } else if (config.contains("privacy")) {
    spec = PrivacySpecFromJson(config.at("privacy"));
  }
  const double tolerance =
      args.tolerance.value_or(config.value("tolerance", 0.02));

  const std::vector<ScalingRow> rows =
      LiquidityScalingStudy(level, multipliers, price, delta, spec);
  const double deviation = MaxProductDeviation(rows);
  const bool passed = deviation <= tolerance;

  CommandResult result;
  result.passed = passed;
  Json json_rows = Json::array();
  std::string csv =
      "multiplier,level,reserve_x,gamma,liquidity,gamma_times_abs_liquidity\n";
  std::ostringstream table;
  table << "multiplier  noise fee      |L(p)|        fee*|L(p)|\n";
  for (const ScalingRow& row : rows) {
    json_rows.push_back(ToJson(row));
    csv += FormatDouble(row.multiplier) + "," + FormatDouble(row.level) + "," +
           FormatDouble(row.reserve_x) + "," + FormatDouble(row.gamma) + "," +
           FormatDouble(row.liquidity) + "," +
           FormatDouble(row.gamma_times_liquidity) + "\n";
    table << Fixed6(row.multiplier) << "  " << FormatDisplay(row.gamma)
          << "  " << Fixed6(std::abs(row.liquidity)) << "  "
          << Fixed6(row.gamma_times_liquidity) << "\n";
  }
  result.document = Json{{"command", "scaling-study"},
                         {"base_level", level},
                         {"price", price},
                         {"delta", delta},
                         {"privacy", ToJson(spec)},
                         {"rows", json_rows},
                         {"max_product_deviation", deviation},
                         {"tolerance", tolerance},
                         {"pass", passed}};
  if (rows.size() >= 2 && rows[0].gamma > 0.0) {
    result.document["fee_ratio_last_to_first"] =
        rows.back().gamma / rows.front().gamma;
  }
  result.csv = csv;
  result.table = table.str();
  result.summary = "max fee*|L| deviation " + Fixed6(deviation) + " ≤ " +
                   Fixed6(tolerance) + ": " + Verdict(passed);
  return result;
}

// optimize-noise ----------------------------------------------------------

struct OptimizeArgs {
  std::string config_path;
  CurveFlags curve;
  std::string tau;
  std::string epsilon;
  std::optional<int> inputs;
  std::optional<int> outputs;
  std::optional<double> report_input;
};

CommandResult OptimizeCommand(const OptimizeArgs& args,
                              std::optional<std::uint64_t> seed) {
  Json config = Json::object();
  if (!args.config_path.empty()) {
    config = LoadJson(args.config_path);
    RejectUnknownFields(config,
                        {"curve", "reference_x", "privacy", "inputs",
                         "outputs", "input_weights", "report_input"},
                        "optimize-noise config");
  }
  CurveConfig curve_config;
  double reference_x = 100.0;
  curve_config.level = 1e4;
  if (config.contains("curve")) {
    curve_config = CurveConfigFromJson(config.at("curve"));
  }
  if (config.contains("reference_x")) {
    reference_x = config.at("reference_x").get<double>();
  }
  if (!args.curve.family.empty()) {
    curve_config = args.curve.Config();
    reference_x = args.curve.x;
  }
  PrivacySpec spec{0.0, 2.0, 2.0};
  if (!args.tau.empty() || !args.epsilon.empty()) {
    spec = ParseSpec(args.tau.empty() ? "0,2" : args.tau,
                     args.epsilon.empty() ? "2" : args.epsilon);
  } else if (config.contains("privacy")) {
    spec = PrivacySpecFromJson(config.at("privacy"));
  }
  if (!std::isfinite(spec.epsilon)) Usage("optimize-noise needs finite epsilon");

  LpNoiseProblem problem;
  problem.curve = curve_config.Build();
  problem.reference_x = reference_x;
  problem.epsilon = spec.epsilon;
  const Json inputs_json = config.value("inputs", Json(21));
  if (args.inputs) {
    problem.inputs = UniformGrid(spec.lower, spec.upper, *args.inputs);
  } else if (inputs_json.is_array()) {
    problem.inputs = inputs_json.get<std::vector<double>>();
  } else {
    problem.inputs = UniformGrid(spec.lower, spec.upper, inputs_json.get<int>());
  }
  const Json outputs_json = config.value("outputs", Json(41));
  if (args.outputs) {
    problem.outputs = LandmarkOutputGrid(problem.inputs, spec, *args.outputs);
  } else if (outputs_json.is_array()) {
    problem.outputs = outputs_json.get<std::vector<double>>();
  } else {
    problem.outputs =
        LandmarkOutputGrid(problem.inputs, spec, outputs_json.get<int>());
  }
  if (config.contains("input_weights")) {
    problem.input_weights =
        config.at("input_weights").get<std::vector<double>>();
  }
  const double report_input = args.report_input.value_or(
      config.value("report_input", 0.5 * (spec.lower + spec.upper)));

  SimplexOptions options;
  if (seed) options.permutation_seed = *seed;
  const LpNoiseSolution solution = OptimizeNoiseLp(problem, options);

  CommandResult result;
  result.document = Json{{"command", "optimize-noise"},
                         {"curve", ToJson(curve_config)},
                         {"reference_x", reference_x},
                         {"privacy", ToJson(spec)},
                         {"inputs", problem.inputs},
                         {"outputs", problem.outputs},
                         {"solution", ToJson(solution)}};
  if (solution.status != LpStatus::kOptimal) {
    result.passed = false;
    result.summary = "LP " + std::string(LpStatusName(solution.status));
    if (!solution.infeasible_constraint.empty()) {
      result.summary += " (violated: " + solution.infeasible_constraint + ")";
    }
    result.summary += ": FAIL";
    result.csv = "status\n" + std::string(LpStatusName(solution.status)) + "\n";
    result.table = result.summary + "\n";
    return result;
  }

  std::size_t index = 0;
  for (std::size_t i = 1; i < problem.inputs.size(); ++i) {
    if (std::abs(problem.inputs[i] - report_input) <
        std::abs(problem.inputs[index] - report_input)) {
      index = i;
    }
  }
  if (std::abs(problem.inputs[index] - report_input) > 1e-9) {
    Usage("report_input must be one of the LP inputs");
  }
  const double input = problem.inputs[index];
  const double binary_fee =
      NoiseFee(problem.curve, reference_x, input, BinaryMechanism(input, spec))
          .gamma;
  const double lp_fee = solution.fees[index];
  const bool fee_ok = lp_fee <= binary_fee * (1.0 + 1e-9) + 1e-15;
  const bool valid = solution.max_row_sum_error <= 1e-8 &&
                     solution.max_abs_mean <= 1e-8 &&
                     solution.max_ratio <= std::exp(spec.epsilon) * (1.0 + 1e-8);
  result.passed = fee_ok && valid;
  result.document["report"] = Json{{"input", input},
                                   {"lp_fee", lp_fee},
                                   {"binary_fee", binary_fee},
                                   {"pass", result.passed}};

  std::string csv = "input,eta,p,fee\n";
  std::ostringstream table;
  table << "input       fee            atoms\n";
  for (std::size_t i = 0; i < problem.inputs.size(); ++i) {
    for (const NoiseAtom& atom : solution.distributions[i].atoms()) {
      csv += FormatDouble(problem.inputs[i]) + "," + FormatDouble(atom.eta) +
             "," + FormatDouble(atom.probability) + "," +
             FormatDouble(solution.fees[i]) + "\n";
    }
    table << Fixed6(problem.inputs[i]) << "  " << FormatDisplay(solution.fees[i])
          << "  " << solution.distributions[i].size() << "\n";
  }
  result.csv = csv;
  result.table = table.str();
  result.summary = "optimal fee at input " + Fixed6(input) + ": " +
                   FormatDisplay(lp_fee) + " ≤ binary " +
                   FormatDisplay(binary_fee) + ", constraints hold to 1e-8: " +
                   Verdict(result.passed);
  return result;
}

// simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string config_path;
};

std::string Interval(double lower, double upper) {
  return "[" + Fixed6(lower) + ", " + Fixed6(upper) + "]";
}

CommandResult SimulateCommand(const SimulateArgs& args,
                              std::optional<std::uint64_t> seed) {
  const Json json = LoadJson(args.config_path);
  ExperimentConfig config =
      ExperimentConfigFromJson(json, {"experiment", "deviation_case", "expect"});
  if (seed) {
    config.seed = *seed;
  } else if (!json.contains("seed")) {
    Usage("simulate requires --seed or a config seed");
  }
  config.Validate();
  const std::string experiment =
      json.value("experiment", std::string("excess_profit"));

  CommandResult result;
  Json document{{"command", "simulate"},
                {"experiment", experiment},
                {"config", ToJson(config)},
                {"metadata",
                 {{"common_random_numbers", true},
                  {"noise_stream", "replica i uses stream (seed, i)"}}}};

  if (experiment == "excess_profit") {
    std::string expect;
    if (config.fee.kind == FeePolicy::Kind::kNoiseFee) expect = "not_above_zero";
    if (config.fee.kind == FeePolicy::Kind::kZero) expect = "above_zero";
    if (json.contains("expect")) expect = json.at("expect").get<std::string>();
    const ExcessEstimate estimate = EstimateExcessProfit(config);
    const double lo = estimate.ci99_lower;
    const double hi = estimate.ci99_upper;
    const std::string ci = "excess CI " + Interval(lo, hi);
    if (expect.empty()) {
      result.summary = ci;
    } else if (expect == "contains_zero") {
      result.passed = lo <= 0.0 && 0.0 <= hi;
      result.summary = ci + " contains 0: " + Verdict(result.passed);
    } else if (expect == "not_above_zero") {
      result.passed = lo <= 0.0;
      result.summary = ci + (hi < 0.0 ? " below 0" : " contains 0") + ": " +
                       Verdict(result.passed);
      if (!result.passed) result.summary = ci + " above 0: FAIL";
    } else if (expect == "above_zero") {
      result.passed = lo > 0.0;
      result.summary =
          ci + (result.passed ? " above 0: additional arbitrage confirmed"
                              : " not above 0: FAIL");
    } else if (expect == "below_zero") {
      result.passed = hi < 0.0;
      result.summary = ci + (result.passed ? " below 0: PASS"
                                           : " not below 0: FAIL");
    } else {
      Usage("expect: unknown value '" + expect + "' for excess_profit");
    }
    document["result"] = ToJson(estimate);
    if (!expect.empty()) document["expect"] = expect;
    std::string csv = "replica,excess\n";
    for (std::size_t i = 0; i < estimate.excess.size(); ++i) {
      csv += std::to_string(i) + "," + FormatDouble(estimate.excess[i]) + "\n";
    }
    result.csv = csv;
    result.table = "mean excess  " + FormatDouble(estimate.mean) +
                   "\nstd error    " + FormatDouble(estimate.std_error) +
                   "\nci99         " + Interval(lo, hi) + "\nreplicas     " +
                   std::to_string(estimate.replicas) + "\n";
  } else if (experiment == "deviation_witness") {
    DeviationCase deviation = config.noise_bias < 0.0
                                  ? DeviationCase::kNegativeMean
                                  : DeviationCase::kPositiveMean;
    if (json.contains("deviation_case")) {
      const std::string name = json.at("deviation_case").get<std::string>();
      if (name == "positive_mean") {
        deviation = DeviationCase::kPositiveMean;
      } else if (name == "negative_mean") {
        deviation = DeviationCase::kNegativeMean;
      } else {
        Usage("deviation_case: expected positive_mean or negative_mean");
      }
    }
    std::string expect = config.noise_bias != 0.0 ? "witness" : "no_witness";
    if (json.contains("expect")) expect = json.at("expect").get<std::string>();
    if (expect != "witness" && expect != "no_witness") {
      Usage("expect: expected witness or no_witness for deviation_witness");
    }
    const WitnessSearch search = SearchDeviationWitness(deviation, config);
    result.passed = search.found == (expect == "witness");
    document["deviation_case"] = std::string(DeviationCaseName(deviation));
    document["result"] = ToJson(search);
    document["expect"] = expect;
    if (search.found) {
      result.summary = "witness at true price " + Fixed6(search.true_price);
      if (search.push_price) {
        result.summary += ", push price " + Fixed6(*search.push_price);
      }
      result.summary += " with excess lower bound " +
                        Fixed6(search.lower_bound) + " > 0";
    } else {
      result.summary = "no witness among " +
                       std::to_string(search.points_scanned) + " points";
    }
    result.summary += ": " + Verdict(result.passed);
    result.csv = "found,true_price,push_price,mean_excess,lower_bound\n" +
                 std::string(search.found ? "true" : "false") + "," +
                 FormatDouble(search.true_price) + "," +
                 (search.push_price ? FormatDouble(*search.push_price) : "") +
                 "," + FormatDouble(search.mean_excess) + "," +
                 FormatDouble(search.lower_bound) + "\n";
    result.table = "points scanned      " +
                   std::to_string(search.points_scanned) +
                   "\npoints unsupported  " +
                   std::to_string(search.points_unsupported) + "\n";
  } else {
    Usage("experiment: expected excess_profit or deviation_witness");
  }
  document["pass"] = result.passed;
  result.document = std::move(document);
  return result;
}

void Emit(const CommandResult& result, const std::string& format,
          const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::string body;
  if (format == "json") {
    body = result.document.dump(2) + "\n";
  } else if (format == "csv") {
    body = result.csv;
  } else {
    body = result.table;
  }
  const bool document_on_stdout = out_path.empty();
  if (!document_on_stdout) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) Usage("cannot write --out file '" + out_path + "'");
    file << body;
  } else {
    out << body;
  }
  if (result.summary.empty()) return;
  if (document_on_stdout && format != "table") {
    err << result.summary << "\n";
  } else {
    out << result.summary << "\n";
  }
}

}  // namespace

std::string FormatDisplay(double value) {
  if (value == 0.0) return "0";
  if (!std::isfinite(value)) return FormatDouble(value);
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2e", value);
  // "1.67e-02" -> "1.67e-2"
  std::string text(buffer);
  const std::size_t e = text.find('e');
  const int exponent = std::stoi(text.substr(e + 1));
  return text.substr(0, e) + "e" + std::to_string(exponent);
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Noisy CFMM toolkit: privacy fees, simulations, LP noise design",
               "ncfmm");
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "table";
  std::string out_path;
  std::uint64_t seed_value = 0;
  app.add_option("--output", format, "json|csv|table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--out", out_path, "write the document to this file");
  auto* seed_option = app.add_option("--seed", seed_value, "64-bit RNG seed");

  QuoteFeeArgs quote;
  auto* quote_cmd = app.add_subcommand("quote-fee", "noise fee of one trade");
  quote.trade.Register(quote_cmd);
  quote_cmd->add_option("--method", quote.method, "auto|closed_form|generic")
      ->check(CLI::IsMember({"auto", "closed_form", "generic"}));

  AttackArgs attack;
  auto* attack_cmd =
      app.add_subcommand("attack-demo", "eavesdropper inference comparison");
  attack.trade.Register(attack_cmd);
  attack_cmd->add_option("--grid", attack.grid, "PLDP check grid size");

  VerifyArgs verify;
  auto* verify_cmd =
      app.add_subcommand("verify-pldp", "check a mechanism against its spec");
  verify_cmd->add_option("--config", verify.config_path, "JSON config file");
  verify_cmd->add_option("--tau", verify.tau, "masking interval l,u");
  verify_cmd->add_option("--epsilon", verify.epsilon, "privacy level or inf");
  verify_cmd->add_option("--mechanism", verify.mechanism,
                         "binary|biased_binary");
  verify_cmd->add_option("--bias", verify.bias, "noise mean (biased_binary)");
  verify_cmd->add_option("--grid", verify.grid, "number of grid inputs");

  ScalingArgs scaling;
  auto* scaling_cmd = app.add_subcommand(
      "scaling-study", "fee versus liquidity on constant-product pools");
  scaling_cmd->add_option("--config", scaling.config_path, "JSON config file");
  scaling_cmd->add_option("--level", scaling.level, "base K");
  scaling_cmd->add_option("--multipliers", scaling.multipliers,
                          "comma-separated K multipliers");
  scaling_cmd->add_option("--price", scaling.price, "spot price");
  scaling_cmd->add_option("--delta", scaling.delta, "trade size");
  scaling_cmd->add_option("--tau", scaling.tau, "masking interval l,u");
  scaling_cmd->add_option("--epsilon", scaling.epsilon, "privacy level");
  scaling_cmd->add_option("--tolerance", scaling.tolerance,
                          "allowed relative deviation of fee*|L|");

  OptimizeArgs optimize;
  auto* optimize_cmd = app.add_subcommand(
      "optimize-noise", "cheapest PLDP noise on a fixed output grid");
  optimize_cmd->add_option("--config", optimize.config_path,
                           "JSON config file");
  optimize.curve.Register(optimize_cmd, false);
  optimize_cmd->add_option("--tau", optimize.tau, "masking interval l,u");
  optimize_cmd->add_option("--epsilon", optimize.epsilon, "privacy level");
  optimize_cmd->add_option("--inputs", optimize.inputs, "input grid size");
  optimize_cmd->add_option("--outputs", optimize.outputs, "output grid size");
  optimize_cmd->add_option("--report-input", optimize.report_input,
                           "input whose fee is compared to the binary one");

  SimulateArgs simulate;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo experiment from a config");
  simulate_cmd->add_option("--config", simulate.config_path, "JSON config file")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::optional<std::uint64_t> seed;
  if (seed_option->count() > 0) seed = seed_value;

  try {
    CommandResult result;
    if (*quote_cmd) {
      result = QuoteFee(quote);
    } else if (*attack_cmd) {
      result = AttackDemo(attack, seed);
    } else if (*verify_cmd) {
      result = VerifyCommand(verify);
    } else if (*scaling_cmd) {
      result = ScalingCommand(scaling);
    } else if (*optimize_cmd) {
      result = OptimizeCommand(optimize, seed);
    } else {
      result = SimulateCommand(simulate, seed);
    }
    Emit(result, format, out_path, out, err);
    return result.passed ? kExitOk : kExitFalsified;
  } catch (const Error& error) {
    err << "error: " << error.what() << "\n";
  } catch (const Json::exception& error) {
    err << "error: config error: " << error.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace ncfmm
