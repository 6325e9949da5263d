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

#ifndef NCFMM_HARNESS_H_
#define NCFMM_HARNESS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ncfmm/curve.h"
#include "ncfmm/market.h"
#include "ncfmm/privacy.h"
#include "ncfmm/strategies.h"

namespace ncfmm {

struct CurveConfig {
  CurveFamily family = CurveFamily::kConstantProduct;
  double level = 1.0;
  double slope = 0.0;  // ConstantSum only
  ReserveBounds bounds;

  TradingCurve Build() const;
};

enum class StrategyKind {
  kTruthful,
  kNoiseChasing,
  kCase1,
  kCase2,
  kRandomAdaptive,
};

std::string_view StrategyKindName(StrategyKind kind);
std::optional<StrategyKind> ParseStrategyKind(std::string_view name);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::kNoiseChasing;
  int max_rounds = 64;             // noise chasing
  double delta = 1.0;              // case 1 / case 2 private trade
  double push_price = 0.0;         // case 2 intermediate spot price
  std::uint64_t policy_seed = 0;   // random adaptive
  int bound = 8;                   // random adaptive
};

struct ExperimentConfig {
  CurveConfig curve;
  double initial_x = 1.0;
  double hidden_x = 1e12;
  double hidden_y = 1e12;
  double true_price = 1.0;
  // Prices to scan in counterexample searches. Empty selects factor-2 steps
  // over [1e-6, 1e6].
  std::vector<double> price_grid;
  PrivacySpec privacy;
  FeePolicy fee = FeePolicy::NoiseFee();
  double trading_fee = 0.0;
  // Mean of the (biased) binary noise; 0 keeps the zero-mean mechanism.
  double noise_bias = 0.0;
  int replicas = 1000;
  std::uint64_t seed = 0;
  StrategyConfig strategy;
  // Worker threads; 0 uses the hardware concurrency.
  int threads = 0;

  // Throws kConfig with the offending field named.
  void Validate() const;
  MarketState InitialState() const;
};

struct ExcessEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci99_lower = 0.0;
  double ci99_upper = 0.0;
  int replicas = 0;
  int rejected = 0;
  double truthful_profit = 0.0;
  // Strategy profit minus truthful profit, per replica.
  std::vector<double> excess;
};

// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

// Summary statistics over `samples` using pairwise summation, so the result
// does not depend on how the samples were produced.
ExcessEstimate Summarize(std::vector<double> samples);

// Runs the configured strategy on `replicas` independent copies of the
// initial state. Replica i draws its noise from Rng::ForStream(seed, i), so
// two configs differing only in fee policy see the same noise.
ExcessEstimate EstimateExcessProfit(const ExperimentConfig& config);

// Profit of one replica of the configured strategy.
StrategyTrace RunReplica(const ExperimentConfig& config, std::uint64_t replica);

enum class DeviationCase { kPositiveMean, kNegativeMean };

std::string_view DeviationCaseName(DeviationCase deviation);

struct WitnessSearch {
  bool found = false;
  double true_price = 0.0;
  std::optional<double> push_price;
  double mean_excess = 0.0;
  // One-sided lower confidence bound at the Bonferroni-corrected level.
  double lower_bound = 0.0;
  int points_scanned = 0;
  int points_unsupported = 0;
  int points_total = 0;
  double z = 0.0;
};

// Scans true prices (and, for negative-mean noise, the intermediate push
// price) for a configuration where deviating from the truthful strategy
// earns a positive expected excess with 99% family-wise confidence.
//   kPositiveMean: Case1Deviation with true prices above the spot price.
//   kNegativeMean: Case2Deviation with true prices below min(spot, 1/|bias|)
//                  and push prices above the spot price.
// Uses config.noise_bias as the noise mean; its sign must agree with the
// case (zero is allowed and should produce no witness under the noise fee).
WitnessSearch SearchDeviationWitness(DeviationCase deviation,
                                     const ExperimentConfig& config);

struct ScalingRow {
  double multiplier = 1.0;
  double level = 0.0;
  double reserve_x = 0.0;
  double gamma = 0.0;
  double liquidity = 0.0;
  double gamma_times_liquidity = 0.0;  // Gamma * |L(p)|
};

// Constant-product pools with K = base_level * multiplier, each quoted for
// the same binary-mechanism trade at spot price p.
std::vector<ScalingRow> LiquidityScalingStudy(
    double base_level, const std::vector<double>& multipliers, double price,
    double delta, const PrivacySpec& spec);

// max_i |row_i.product - row_0.product| / row_0.product
double MaxProductDeviation(const std::vector<ScalingRow>& rows);

// Calls fn(i) for i in [0, count) on `threads` workers (0: hardware
// concurrency). The first exception thrown by any call is rethrown.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace ncfmm

#endif  // NCFMM_HARNESS_H_
