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

#include "ncfmm/serialization.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "ncfmm/errors.h"

namespace ncfmm {
namespace {

[[noreturn]] void Fail(std::string_view context, const std::string& message) {
  throw Error(ErrorCode::kConfig, std::string(context) + ": " + message);
}

const Json& Field(const Json& object, const char* key,
                  std::string_view context) {
  if (!object.is_object() || !object.contains(key)) {
    Fail(context, std::string("missing field '") + key + "'");
  }
  return object.at(key);
}

double Number(const Json& value, std::string_view context) {
  if (!value.is_number()) Fail(context, "expected a number");
  return value.get<double>();
}

double NumberField(const Json& object, const char* key,
                   std::string_view context) {
  return Number(Field(object, key, std::string(context) + "." + key), key);
}

double NumberOr(const Json& object, const char* key, double fallback,
                std::string_view context) {
  if (!object.contains(key)) return fallback;
  return Number(object.at(key), std::string(context) + "." + key);
}

std::uint64_t UnsignedField(const Json& value, std::string_view context) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() &&
                                       value.get<std::int64_t>() >= 0)) {
    Fail(context, "expected a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

int IntOr(const Json& object, const char* key, int fallback,
          std::string_view context) {
  if (!object.contains(key)) return fallback;
  const Json& value = object.at(key);
  if (!value.is_number_integer()) {
    Fail(std::string(context) + "." + key, "expected an integer");
  }
  return value.get<int>();
}

std::string StringField(const Json& object, const char* key,
                        std::string_view context) {
  const Json& value = Field(object, key, context);
  if (!value.is_string()) {
    Fail(std::string(context) + "." + key, "expected a string");
  }
  return value.get<std::string>();
}

std::pair<double, double> PairField(const Json& object, const char* key,
                                    std::string_view context) {
  const Json& value = Field(object, key, context);
  const std::string where = std::string(context) + "." + key;
  if (!value.is_array() || value.size() != 2) Fail(where, "expected [a, b]");
  return {Number(value[0], where), Number(value[1], where)};
}

}  // namespace

std::string FormatDouble(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

Json EpsilonToJson(double epsilon) {
  if (std::isinf(epsilon)) return "inf";
  return epsilon;
}

double EpsilonFromJson(const Json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    Fail("epsilon", "expected a number or \"inf\"");
  }
  return Number(value, "epsilon");
}

void RejectUnknownFields(const Json& object,
                         std::initializer_list<std::string_view> allowed,
                         std::string_view context) {
  if (!object.is_object()) Fail(context, "expected an object");
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (std::string_view name : allowed) known = known || name == key;
    if (!known) Fail(context, "unknown field '" + key + "'");
  }
}

Json ToJson(const PrivacySpec& spec) {
  return Json{{"tau", {spec.lower, spec.upper}},
              {"epsilon", EpsilonToJson(spec.epsilon)}};
}

PrivacySpec PrivacySpecFromJson(const Json& json) {
  RejectUnknownFields(json, {"tau", "epsilon"}, "privacy");
  const auto [lower, upper] = PairField(json, "tau", "privacy");
  PrivacySpec spec{lower, upper, EpsilonFromJson(Field(json, "epsilon", "privacy"))};
  try {
    spec.Validate();
  } catch (const Error& error) {
    Fail("privacy", error.what());
  }
  return spec;
}

Json ToJson(const NoiseDistribution& distribution) {
  Json atoms = Json::array();
  for (const NoiseAtom& atom : distribution.atoms()) {
    atoms.push_back(Json{{"eta", atom.eta}, {"p", atom.probability}});
  }
  return atoms;
}

NoiseDistribution NoiseDistributionFromJson(const Json& json) {
  if (!json.is_array()) Fail("distribution", "expected an array of atoms");
  std::vector<NoiseAtom> atoms;
  for (const Json& atom : json) {
    RejectUnknownFields(atom, {"eta", "p"}, "distribution atom");
    atoms.push_back({NumberField(atom, "eta", "distribution atom"),
                     NumberField(atom, "p", "distribution atom")});
  }
  try {
    return NoiseDistribution(std::move(atoms));
  } catch (const Error& error) {
    Fail("distribution", error.what());
  }
}

Json ToJson(const FeeQuote& quote) {
  return Json{{"gamma", quote.gamma},
              {"state_x", quote.state_x},
              {"delta", quote.delta},
              {"distribution", ToJson(quote.distribution)},
              {"method", std::string(FeeMethodName(quote.method))}};
}

FeeQuote FeeQuoteFromJson(const Json& json) {
  RejectUnknownFields(json, {"gamma", "state_x", "delta", "distribution", "method"},
                      "fee quote");
  FeeQuote quote;
  quote.gamma = NumberField(json, "gamma", "fee quote");
  quote.state_x = NumberField(json, "state_x", "fee quote");
  quote.delta = NumberField(json, "delta", "fee quote");
  quote.distribution =
      NoiseDistributionFromJson(Field(json, "distribution", "fee quote"));
  const std::string method = StringField(json, "method", "fee quote");
  if (method == "closed_form") {
    quote.method = FeeMethod::kClosedForm;
  } else if (method == "generic") {
    quote.method = FeeMethod::kGeneric;
  } else {
    Fail("fee quote.method", "unknown method '" + method + "'");
  }
  return quote;
}

Json ToJson(const CurveConfig& curve) {
  Json json{{"family", std::string(CurveFamilyName(curve.family))},
            {"level", curve.level}};
  if (curve.family == CurveFamily::kConstantSum) json["r"] = curve.slope;
  json["domain"] = {curve.bounds.lo, curve.bounds.hi};
  return json;
}

CurveConfig CurveConfigFromJson(const Json& json) {
  RejectUnknownFields(json, {"family", "level", "r", "domain"}, "curve");
  CurveConfig curve;
  const std::string family = StringField(json, "family", "curve");
  const auto parsed = ParseCurveFamily(family);
  if (!parsed) Fail("curve.family", "unknown family '" + family + "'");
  curve.family = *parsed;
  curve.level = NumberField(json, "level", "curve");
  if (curve.family == CurveFamily::kConstantSum) {
    curve.slope = NumberField(json, "r", "curve");
  } else if (json.contains("r")) {
    Fail("curve.r", "only constant_sum curves take a slope");
  }
  if (json.contains("domain")) {
    const auto [lo, hi] = PairField(json, "domain", "curve");
    curve.bounds = {lo, hi};
  }
  try {
    curve.Build();
  } catch (const Error& error) {
    Fail("curve", error.what());
  }
  return curve;
}

Json ToJson(const FeePolicy& policy) {
  Json json{{"kind", std::string(FeePolicyKindName(policy.kind))}};
  if (policy.kind == FeePolicy::Kind::kFixed ||
      policy.kind == FeePolicy::Kind::kScaled) {
    json["value"] = policy.value;
  }
  return json;
}

FeePolicy FeePolicyFromJson(const Json& json) {
  RejectUnknownFields(json, {"kind", "value"}, "fee_policy");
  const std::string kind = StringField(json, "kind", "fee_policy");
  if (kind == "noise_fee") return FeePolicy::NoiseFee();
  if (kind == "zero") return FeePolicy::Zero();
  if (kind == "fixed") {
    return FeePolicy::Fixed(NumberField(json, "value", "fee_policy"));
  }
  if (kind == "scaled") {
    return FeePolicy::Scaled(NumberField(json, "value", "fee_policy"));
  }
  Fail("fee_policy.kind", "unknown kind '" + kind + "'");
}

Json ToJson(const StrategyConfig& strategy) {
  Json json{{"kind", std::string(StrategyKindName(strategy.kind))}};
  switch (strategy.kind) {
    case StrategyKind::kNoiseChasing:
      json["max_rounds"] = strategy.max_rounds;
      break;
    case StrategyKind::kCase1:
      json["delta"] = strategy.delta;
      break;
    case StrategyKind::kCase2:
      json["delta"] = strategy.delta;
      json["push_price"] = strategy.push_price;
      break;
    case StrategyKind::kRandomAdaptive:
      json["policy_seed"] = strategy.policy_seed;
      json["bound"] = strategy.bound;
      break;
    case StrategyKind::kTruthful:
      break;
  }
  return json;
}

StrategyConfig StrategyConfigFromJson(const Json& json) {
  RejectUnknownFields(
      json, {"kind", "max_rounds", "delta", "push_price", "policy_seed", "bound"},
      "strategy");
  StrategyConfig strategy;
  const std::string kind = StringField(json, "kind", "strategy");
  const auto parsed = ParseStrategyKind(kind);
  if (!parsed) Fail("strategy.kind", "unknown strategy '" + kind + "'");
  strategy.kind = *parsed;
  strategy.max_rounds = IntOr(json, "max_rounds", strategy.max_rounds, "strategy");
  strategy.delta = NumberOr(json, "delta", strategy.delta, "strategy");
  strategy.push_price =
      NumberOr(json, "push_price", strategy.push_price, "strategy");
  if (json.contains("policy_seed")) {
    strategy.policy_seed =
        UnsignedField(json.at("policy_seed"), "strategy.policy_seed");
  }
  strategy.bound = IntOr(json, "bound", strategy.bound, "strategy");
  return strategy;
}

Json ToJson(const ExperimentConfig& config) {
  Json json;
  json["curve"] = ToJson(config.curve);
  json["initial_x"] = config.initial_x;
  json["hidden"] = {{"x", config.hidden_x}, {"y", config.hidden_y}};
  json["true_price"] = config.true_price;
  if (!config.price_grid.empty()) json["price_grid"] = config.price_grid;
  json["privacy"] = ToJson(config.privacy);
  json["fee_policy"] = ToJson(config.fee);
  json["trading_fee"] = config.trading_fee;
  json["noise_bias"] = config.noise_bias;
  json["replicas"] = config.replicas;
  json["seed"] = config.seed;
  json["strategy"] = ToJson(config.strategy);
  json["threads"] = config.threads;
  return json;
}

ExperimentConfig ExperimentConfigFromJson(
    const Json& json, std::initializer_list<std::string_view> extra) {
  if (!json.is_object()) Fail("config", "expected an object");
  for (const auto& [key, value] : json.items()) {
    bool known = false;
    for (std::string_view name :
         {"curve", "initial_x", "hidden", "true_price", "price_grid", "privacy",
          "fee_policy", "trading_fee", "noise_bias", "replicas", "seed",
          "strategy", "threads"}) {
      known = known || name == key;
    }
    for (std::string_view name : extra) known = known || name == key;
    if (!known) Fail("config", "unknown field '" + key + "'");
  }
  ExperimentConfig config;
  config.curve = CurveConfigFromJson(Field(json, "curve", "config"));
  config.initial_x = NumberField(json, "initial_x", "config");
  if (json.contains("hidden")) {
    const Json& hidden = json.at("hidden");
    RejectUnknownFields(hidden, {"x", "y"}, "hidden");
    config.hidden_x = NumberOr(hidden, "x", config.hidden_x, "hidden");
    config.hidden_y = NumberOr(hidden, "y", config.hidden_y, "hidden");
  }
  config.true_price = NumberOr(json, "true_price", config.true_price, "config");
  if (json.contains("price_grid")) {
    const Json& grid = json.at("price_grid");
    if (!grid.is_array()) Fail("config.price_grid", "expected an array");
    for (const Json& p : grid) config.price_grid.push_back(Number(p, "price_grid"));
  }
  config.privacy = PrivacySpecFromJson(Field(json, "privacy", "config"));
  if (json.contains("fee_policy")) {
    config.fee = FeePolicyFromJson(json.at("fee_policy"));
  }
  config.trading_fee = NumberOr(json, "trading_fee", 0.0, "config");
  config.noise_bias = NumberOr(json, "noise_bias", 0.0, "config");
  config.replicas = IntOr(json, "replicas", config.replicas, "config");
  if (json.contains("seed")) {
    config.seed = UnsignedField(json.at("seed"), "config.seed");
  }
  if (json.contains("strategy")) {
    config.strategy = StrategyConfigFromJson(json.at("strategy"));
  }
  config.threads = IntOr(json, "threads", 0, "config");
  return config;
}

Json ToJson(const ExcessEstimate& estimate) {
  return Json{{"mean", estimate.mean},
              {"std_error", estimate.std_error},
              {"ci99", {estimate.ci99_lower, estimate.ci99_upper}},
              {"replicas", estimate.replicas},
              {"rejected", estimate.rejected},
              {"truthful_profit", estimate.truthful_profit}};
}

Json ToJson(const WitnessSearch& search) {
  Json json{{"found", search.found}};
  if (search.found) {
    json["true_price"] = search.true_price;
    json["push_price"] =
        search.push_price ? Json(*search.push_price) : Json(nullptr);
    json["mean_excess"] = search.mean_excess;
    json["lower_bound"] = search.lower_bound;
  }
  json["points_scanned"] = search.points_scanned;
  json["points_unsupported"] = search.points_unsupported;
  json["points_total"] = search.points_total;
  json["z"] = search.z;
  return json;
}

Json ToJson(const ScalingRow& row) {
  return Json{{"multiplier", row.multiplier},
              {"level", row.level},
              {"reserve_x", row.reserve_x},
              {"gamma", row.gamma},
              {"liquidity", row.liquidity},
              {"gamma_times_abs_liquidity", row.gamma_times_liquidity}};
}

Json ToJson(const LpNoiseSolution& solution) {
  Json json{{"status", std::string(LpStatusName(solution.status))}};
  if (!solution.infeasible_constraint.empty()) {
    json["infeasible_constraint"] = solution.infeasible_constraint;
  }
  json["objective"] = solution.objective;
  json["iterations"] = solution.iterations;
  json["fees"] = solution.fees;
  Json distributions = Json::array();
  for (const NoiseDistribution& d : solution.distributions) {
    distributions.push_back(ToJson(d));
  }
  json["distributions"] = std::move(distributions);
  json["max_row_sum_error"] = solution.max_row_sum_error;
  json["max_abs_mean"] = solution.max_abs_mean;
  json["max_ratio"] = solution.max_ratio;
  return json;
}

Json ToJson(const TradeRecord& record) {
  return Json{{"seq", record.seq},
              {"delta", record.delta},
              {"l", record.spec.lower},
              {"u", record.spec.upper},
              {"epsilon", EpsilonToJson(record.spec.epsilon)},
              {"y_out", record.y_out},
              {"gamma", record.privacy_fee},
              {"eta", record.eta},
              {"pre_x", record.pre_x},
              {"post_x", record.post_x}};
}

void WriteTradeLogCsv(std::ostream& out, std::span<const TradeRecord> log) {
  out << "seq,delta,l,u,epsilon,y_out,gamma,eta,pre_x,post_x\n";
  for (const TradeRecord& r : log) {
    out << r.seq << ',' << FormatDouble(r.delta) << ','
        << FormatDouble(r.spec.lower) << ',' << FormatDouble(r.spec.upper)
        << ',' << FormatDouble(r.spec.epsilon) << ','
        << FormatDouble(r.y_out) << ',' << FormatDouble(r.privacy_fee) << ','
        << FormatDouble(r.eta) << ',' << FormatDouble(r.pre_x) << ','
        << FormatDouble(r.post_x) << '\n';
  }
}

void WriteTradeLogJsonLines(std::ostream& out,
                            std::span<const TradeRecord> log) {
  for (const TradeRecord& r : log) out << ToJson(r).dump() << '\n';
}

}  // namespace ncfmm
