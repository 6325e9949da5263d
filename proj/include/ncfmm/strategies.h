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

#ifndef NCFMM_STRATEGIES_H_
#define NCFMM_STRATEGIES_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncfmm/curve.h"
#include "ncfmm/market.h"
#include "ncfmm/privacy.h"
#include "ncfmm/rng.h"

namespace ncfmm {

struct ExternalFlow {
  double x_amount = 0.0;  // X sold on the external market
  double y_cash = 0.0;
};

// Why a strategy run ended.
enum class StopReason {
  kCompleted,
  kZeroNoise,
  kMaxRounds,
  kPolicyStop,
  kBoundReached,
  kRejected,
};

const char* StopReasonName(StopReason reason);

// Everything an arbitrageur did during one run. Every pool trade is offset
// on the external market right away, so the arbitrageur always ends flat
// in X and total_profit is measured in Y alone.
struct StrategyTrace {
  std::vector<TradeRecord> steps;
  std::vector<ExternalFlow> external_flows;
  double total_profit = 0.0;
  double terminal_spot = 0.0;
  StopReason stop_reason = StopReason::kCompleted;
};

// Profit of one non-private trade moving the spot price from P(x0) to the
// true price: integral_{x0}^{P^-1(true_price)} (P(a) - true_price) da.
double TruthfulProfit(const TradingCurve& curve, double x0, double true_price);

// The truthful strategy: one non-private trade to the true price.
StrategyTrace TruthfulStrategy(MarketState& state, double true_price);

// Same-sized masking interval moved onto `delta` when `templ` does not
// already cover it.
PrivacySpec CoverTrade(const PrivacySpec& templ, double delta);

// Repeatedly trade the spot price back to the true price under `spec` (moved
// to cover each trade) until a zero noise trade is drawn, max_rounds trades
// were made, or the pool rejects a trade.
StrategyTrace NoiseChasingStrategy(MarketState& state, double true_price,
                                   const PrivacySpec& spec, int max_rounds,
                                   Rng& rng);

// Private trade of `delta`, then a non-private correction to the true price.
// Requires true_price > current spot price.
StrategyTrace Case1Deviation(MarketState& state, double true_price,
                             double delta, const PrivacySpec& spec, Rng& rng);

// Non-private trade to `push_price`, private trade of `delta`, then a
// non-private correction to the true price. Requires true_price < spot price
// and push_price >= spot price.
StrategyTrace Case2Deviation(MarketState& state, double true_price,
                             double push_price, double delta,
                             const PrivacySpec& spec, Rng& rng);

struct Order {
  double delta = 0.0;
  PrivacySpec spec;
};

// What a policy sees before each decision. `rng` is the policy's own source
// of randomness, independent of the noise draws.
struct Observation {
  const MarketState& state;
  double true_price;
  int step;
  Rng& rng;
};

using AdaptivePolicy = std::function<std::optional<Order>(const Observation&)>;

// Drives `policy` for at most `bound` trades. Trades the pool rejects end
// the run.
StrategyTrace RunAdaptive(const AdaptivePolicy& policy, MarketState& state,
                          double true_price, int bound, Rng& rng);

// Stops immediately.
AdaptivePolicy StopPolicy();
// One non-private trade to the true price, then stop.
AdaptivePolicy TruthfulPolicy();
// Randomized policy whose behavior (stopping rate, how often it trades
// privately, how far it strays from the true price, masking widths and
// privacy levels) is fixed by `policy_seed`.
AdaptivePolicy MakeRandomPolicy(std::uint64_t policy_seed);

// Excess over the truthful strategy split as
//   -sum(fees) + sum_i integral_{s_i + eta_i}^{s_i} (P(a) - p) da + gap,
// where s_i is the reserve after trade i and before its noise, p the true
// price, and gap = integral_{P^-1(p)}^{x_end} (P(a) - p) da <= 0 the value
// left on the table when the pool does not end at the true price.
struct ExcessDecomposition {
  double fees = 0.0;
  double reversal_sum = 0.0;
  double terminal_gap = 0.0;

  double total() const { return -fees + reversal_sum + terminal_gap; }
};

ExcessDecomposition DecomposeExcess(const StrategyTrace& trace,
                                    const TradingCurve& curve,
                                    double initial_x, double true_price);

}  // namespace ncfmm

#endif  // NCFMM_STRATEGIES_H_
