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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncfmm/cli.h"
#include "ncfmm/curve.h"
#include "ncfmm/fee.h"
#include "ncfmm/harness.h"
#include "ncfmm/lp_noise.h"
#include "ncfmm/market.h"
#include "ncfmm/privacy.h"
#include "ncfmm/rng.h"
#include "oracles.h"

namespace ncfmm {
namespace {

using Json = nlohmann::ordered_json;
using ::ncfmm::testing::BruteForceCpFee;
using ::ncfmm::testing::RelativeError;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Num(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun Cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str()};
}

const PrivacySpec kSpec{0.0, 2.0, 2.0};

ExperimentConfig BaseConfig() {
  ExperimentConfig config;
  config.curve.family = CurveFamily::kConstantProduct;
  config.curve.level = 1e4;
  config.initial_x = 100.0;
  config.privacy = kSpec;
  config.seed = 20260401;
  return config;
}

// 1. Appendix B golden fees through the CLI.
Outcome GoldenFees() {
  Outcome o;
  struct Case {
    const char* level;
    const char* x;
    double k;
    double xv;
    double published;  // rounded published figure
    double literal;  // four-digit figure quoted alongside it
  };
  const NoiseDistribution noise = BinaryMechanism(1.0, kSpec);
  for (const Case& c : {Case{"10000", "100", 1e4, 100.0, 1.67e-2, 1.6735e-2},
                        Case{"40000", "200", 4e4, 200.0, 0.849e-2, 0.8492e-2}}) {
    const CliRun run = Cli({"quote-fee", "--curve", "cp", "--level", c.level,
                            "--x", c.x, "--delta", "1", "--tau", "0,2",
                            "--epsilon", "2", "--output", "json"});
    if (run.code != 0) return {false, "quote-fee exited " + std::to_string(run.code)};
    const Json doc = Json::parse(run.out);
    const double gamma = doc["quote"]["gamma"].get<double>();
    const double display = std::stod(doc["display"].get<std::string>());
    const double oracle = BruteForceCpFee(c.k, c.xv, 1.0, noise);
    const double display_err = RelativeError(display, c.published);
    const double oracle_err = RelativeError(gamma, oracle);
    o.pass = o.pass && display_err <= 0.01 && oracle_err <= 1e-9;
    o.detail += "K=" + std::string(c.level) + ": full " + Num(gamma) +
                " display " + doc["display"].get<std::string>() +
                " (vs published " + Num(c.published) + ": " + Num(display_err) +
                "), oracle rel err " + Num(oracle_err) + ", vs " +
                Num(c.literal) + " rel " + Num(RelativeError(gamma, c.literal)) +
                "; ";
  }
  return o;
}

// 2. Closed form against the generic engine on random pools.
Outcome ClosedFormAgreement() {
  Rng rng(2);
  double worst = 0.0;
  int checked = 0;
  while (checked < 10000) {
    const double k = std::exp(rng.Uniform(0.0, 18.0));
    const double x = std::sqrt(k) * std::exp(rng.Uniform(-1.0, 1.0));
    const double lower = rng.Uniform(-0.02, 0.0) * x;
    const PrivacySpec spec{lower, lower + rng.Uniform(1e-4, 0.05) * x,
                           rng.Uniform(0.5, 5.0)};
    const double delta = rng.Uniform(spec.lower, spec.upper);
    const NoiseDistribution noise = BinaryMechanism(delta, spec);
    if (x + delta + noise.MinEta() <= 0.0) continue;
    const double generic =
        NoiseFee(TradingCurve::ConstantProduct(k), x, delta, noise).gamma;
    const double closed = NoiseFeeConstantProduct(k, x, delta, noise).gamma;
    worst = std::max(worst, RelativeError(closed, generic));
    ++checked;
  }
  return {worst <= 1e-9, "10000 instances, max rel diff " + Num(worst)};
}

// 3. Binary mechanism: zero mean and tight PLDP ratio.
Outcome BinaryProperties() {
  Rng rng(3);
  double worst_mean = 0.0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double lower = rng.Uniform(-10.0, 10.0);
    const PrivacySpec spec{lower, lower + std::exp(rng.Uniform(-4.0, 3.0)),
                           std::exp(rng.Uniform(-3.0, 2.5))};
    const double delta = rng.Uniform(spec.lower, spec.upper);
    const NoiseDistribution noise = BinaryMechanism(delta, spec);
    const double scale = std::max(1.0, noise.MaxEta() - noise.MinEta());
    worst_mean = std::max(worst_mean, std::abs(noise.Mean()) / scale);
    const PldpReport report = VerifyPldp(
        [&](double v) { return BinaryMechanism(v, spec); }, spec, 21);
    worst_ratio = std::max(
        worst_ratio, RelativeError(report.max_ratio, std::exp(spec.epsilon)));
  }
  return {worst_mean <= 1e-12 && worst_ratio <= 1e-6,
          "1000 specs, max |mean|/support " + Num(worst_mean) +
              ", max |ratio - e^eps|/e^eps " + Num(worst_ratio)};
}

// 4. Truthfulness under the noise fee; additional arbitrage without it.
Outcome Truthfulness() {
  Outcome o;
  ExperimentConfig config = BaseConfig();
  config.replicas = 100000;
  config.true_price = 1.2;
  auto check = [&](const std::string& name, const ExperimentConfig& c) {
    const ExcessEstimate e = EstimateExcessProfit(c);
    const bool ok = e.ci99_lower <= 0.0;
    if (!ok) o.detail += name + " CI [" + Num(e.ci99_lower) + ", " +
                         Num(e.ci99_upper) + "] above 0; ";
    o.pass = o.pass && ok;
    return e;
  };
  config.strategy.kind = StrategyKind::kNoiseChasing;
  config.strategy.max_rounds = 16;
  const ExcessEstimate chase = check("noise_chasing", config);
  o.detail += "noise_chasing CI [" + Num(chase.ci99_lower) + ", " +
              Num(chase.ci99_upper) + "]; ";

  config.strategy.kind = StrategyKind::kCase1;
  config.strategy.delta = 1.0;
  const ExcessEstimate case1 = check("case1", config);
  o.detail += "case1 CI [" + Num(case1.ci99_lower) + ", " +
              Num(case1.ci99_upper) + "]; ";

  ExperimentConfig down = config;
  down.strategy.kind = StrategyKind::kCase2;
  down.true_price = 0.8;
  down.strategy.push_price = 1.2;
  const ExcessEstimate case2 = check("case2", down);
  o.detail += "case2 CI [" + Num(case2.ci99_lower) + ", " +
              Num(case2.ci99_upper) + "]; ";

  int random_ok = 0;
  double highest_upper = -1e300;
  config.strategy.kind = StrategyKind::kRandomAdaptive;
  config.strategy.bound = 8;
  for (std::uint64_t policy = 1; policy <= 100; ++policy) {
    config.strategy.policy_seed = policy;
    const ExcessEstimate e = check("policy " + std::to_string(policy), config);
    random_ok += e.ci99_lower <= 0.0;
    highest_upper = std::max(highest_upper, e.ci99_upper);
  }
  o.detail += std::to_string(random_ok) +
              "/100 random policies not above 0 (max upper " +
              Num(highest_upper) + "); ";

  ExperimentConfig zero = BaseConfig();
  zero.replicas = 100000;
  zero.true_price = 1.2;
  zero.fee = FeePolicy::Zero();
  zero.strategy.kind = StrategyKind::kNoiseChasing;
  zero.strategy.max_rounds = 16;
  const ExcessEstimate z = EstimateExcessProfit(zero);
  o.pass = o.pass && z.ci99_lower > 0.0;
  o.detail += "zero fee noise_chasing CI [" + Num(z.ci99_lower) + ", " +
              Num(z.ci99_upper) + "]";
  return o;
}

// 5. Biased noise is exploitable for any fixed fee; unbiased noise is not.
Outcome BiasedNoiseWitness() {
  Outcome o;
  const double half_width = BinaryHalfWidth(kSpec);
  const double gamma = NoiseFee(TradingCurve::ConstantProduct(1e4), 100.0, 1.0,
                                BinaryMechanism(1.0, kSpec))
                           .gamma;
  for (double fee : {gamma, 10.0 * gamma}) {
    for (double sign : {1.0, -1.0}) {
      ExperimentConfig config = BaseConfig();
      config.replicas = 10000;
      config.fee = FeePolicy::Fixed(fee);
      config.noise_bias = sign * 0.1 * half_width;
      config.strategy.delta = 1.0;
      const DeviationCase which =
          sign > 0 ? DeviationCase::kPositiveMean : DeviationCase::kNegativeMean;
      const WitnessSearch s = SearchDeviationWitness(which, config);
      o.pass = o.pass && s.found;
      o.detail += std::string(sign > 0 ? "mu>0" : "mu<0") + " fee " + Num(fee) +
                  (s.found ? ": p^=" + Num(s.true_price) +
                                 (s.push_price ? " p'=" + Num(*s.push_price) : "") +
                                 " lower bound " + Num(s.lower_bound)
                           : ": no witness") +
                  "; ";
    }
  }
  for (DeviationCase which :
       {DeviationCase::kPositiveMean, DeviationCase::kNegativeMean}) {
    ExperimentConfig config = BaseConfig();
    config.replicas = 10000;
    config.strategy.delta = 1.0;
    const WitnessSearch s = SearchDeviationWitness(which, config);
    o.pass = o.pass && !s.found;
    o.detail += std::string("mu=0 ") + std::string(DeviationCaseName(which)) +
                (s.found ? ": unexpected witness; "
                         : ": none in " + std::to_string(s.points_scanned) +
                               " points; ");
  }
  return o;
}

// 6. Fee times liquidity is nearly constant.
Outcome LiquidityScaling() {
  const std::vector<ScalingRow> base =
      LiquidityScalingStudy(1e4, {1.0, 4.0}, 1.0, 1.0, kSpec);
  const std::vector<ScalingRow> deep =
      LiquidityScalingStudy(1e8, {1.0, 4.0}, 1.0, 1.0, kSpec);
  const double base_dev = MaxProductDeviation(base);
  const double deep_dev = MaxProductDeviation(deep);
  const double ratio = base[1].gamma / base[0].gamma;
  return {base_dev <= 0.02 && deep_dev <= 1e-3 && std::abs(ratio - 0.5075) <= 0.003,
          "deviation " + Num(base_dev) + " at x=100, " + Num(deep_dev) +
              " at x=10000, fee ratio " + Num(ratio)};
}

// 7. LP noise design on the reference problem.
Outcome LpOptimizer() {
  const auto start = std::chrono::steady_clock::now();
  LpNoiseProblem problem;
  problem.curve = TradingCurve::ConstantProduct(1e4);
  problem.reference_x = 100.0;
  problem.inputs = UniformGrid(0.0, 2.0, 21);
  problem.outputs = LandmarkOutputGrid(problem.inputs, kSpec, 41);
  problem.epsilon = 2.0;
  const LpNoiseSolution solution = OptimizeNoiseLp(problem);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (solution.status != LpStatus::kOptimal) return {false, "LP not optimal"};
  const double lp_fee = solution.fees[10];
  const double binary = NoiseFee(problem.curve, 100.0, 1.0,
                                 BinaryMechanism(1.0, kSpec))
                            .gamma;
  const PldpReport report = VerifyPldpOnInputs(
      [&](double v) {
        for (std::size_t i = 0; i < problem.inputs.size(); ++i) {
          if (problem.inputs[i] == v) return solution.distributions[i];
        }
        return NoiseDistribution::Zero();
      },
      problem.inputs, 2.0);
  double worst_mean = 0.0;
  for (const NoiseDistribution& d : solution.distributions) {
    worst_mean = std::max(worst_mean, std::abs(d.Mean()));
  }
  const bool ok = lp_fee <= binary * (1.0 + 1e-9) &&
                  report.max_ratio <= std::exp(2.0) * (1.0 + 1e-8) &&
                  worst_mean <= 1e-8 && solution.max_row_sum_error <= 1e-8 &&
                  seconds < 10.0;
  return {ok, "fee at input 1 " + Num(lp_fee) + " vs binary " + Num(binary) +
                  " (vs 1.6735e-2 rel " + Num(RelativeError(lp_fee, 1.6735e-2)) +
                  "), max ratio " + Num(report.max_ratio) + ", max |mean| " +
                  Num(worst_mean) + ", " + Num(seconds) + " s"};
}

// 8. The eavesdropper's inference.
Outcome Eavesdropper() {
  double plain_err = 0.0;
  double noisy_err = 0.0;
  for (int seed = 0; seed < 200; ++seed) {
    const CliRun run =
        Cli({"attack-demo", "--curve", "cp", "--level", "10000", "--x", "100",
             "--delta", "1", "--tau", "0,2", "--epsilon", "2", "--seed",
             std::to_string(seed), "--output", "json"});
    if (run.code != 0) return {false, "attack-demo exited " + std::to_string(run.code)};
    const Json doc = Json::parse(run.out);
    plain_err = std::max(
        plain_err, std::abs(doc["noiseless"]["inferred"].get<double>() - 1.0));
    noisy_err = std::max(
        noisy_err, std::abs(doc["noisy"]["inferred"].get<double>() -
                            doc["noisy"]["delta_plus_eta"].get<double>()));
  }
  return {plain_err <= 1e-10 && noisy_err <= 1e-10,
          "200 seeds, noiseless max err " + Num(plain_err) +
              ", noisy max |inferred - (delta + eta)| " + Num(noisy_err)};
}

// 9. Byte-identical JSON across runs.
Outcome Determinism() {
  const std::string config_path =
      (std::filesystem::temp_directory_path() / "ncfmm_acceptance_sim.json")
          .string();
  std::ofstream(config_path) << R"({
    "curve": {"family": "constant_product", "level": 10000},
    "initial_x": 100, "true_price": 1.2,
    "privacy": {"tau": [0, 2], "epsilon": 2},
    "strategy": {"kind": "random_adaptive", "policy_seed": 4, "bound": 8},
    "replicas": 20000, "seed": 77})";
  const std::vector<std::vector<std::string>> commands{
      {"quote-fee", "--curve", "lmsr", "--level", "1", "--x", "1", "--delta",
       "0.05", "--tau", "0,0.1", "--epsilon", "1"},
      {"attack-demo", "--curve", "cp", "--level", "10000", "--x", "100",
       "--delta", "1", "--tau", "0,2", "--epsilon", "2", "--seed", "5"},
      {"verify-pldp", "--tau", "0,2", "--epsilon", "2"},
      {"scaling-study", "--multipliers", "1,4,16"},
      {"optimize-noise", "--inputs", "11", "--outputs", "25", "--seed", "3"},
      {"simulate", "--config", config_path}};
  int identical = 0;
  std::string detail;
  for (auto args : commands) {
    args.insert(args.end(), {"--output", "json"});
    const CliRun a = Cli(args);
    const CliRun b = Cli(args);
    const bool same = a.code == b.code && a.out == b.out && !a.out.empty();
    identical += same;
    if (!same) detail += args[0] + " differs; ";
  }
  std::remove(config_path.c_str());
  return {identical == static_cast<int>(commands.size()),
          detail + std::to_string(identical) + "/" +
              std::to_string(commands.size()) + " commands byte-identical"};
}

}  // namespace
}  // namespace ncfmm

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<ncfmm::Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Appendix B golden fees", ncfmm::GoldenFees},
      {2, "closed form matches generic engine", ncfmm::ClosedFormAgreement},
      {3, "binary mechanism zero mean and tight PLDP", ncfmm::BinaryProperties},
      {4, "truthfulness under the noise fee", ncfmm::Truthfulness},
      {5, "biased noise admits deviation witnesses", ncfmm::BiasedNoiseWitness},
      {6, "fee scales inversely with liquidity", ncfmm::LiquidityScaling},
      {7, "LP noise optimizer", ncfmm::LpOptimizer},
      {8, "eavesdropper inference", ncfmm::Eavesdropper},
      {9, "deterministic JSON output", ncfmm::Determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    ncfmm::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    failures += !outcome.pass;
    std::printf("criterion %d (%s): %s [%.2fs] %s\n", c.id, c.name,
                outcome.pass ? "PASS" : "FAIL", seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
