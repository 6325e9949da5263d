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

#include "ncfmm/strategies.h"

#include <cmath>

#include "gtest/gtest.h"
#include "ncfmm/errors.h"
#include "ncfmm/rng.h"

namespace ncfmm {
namespace {

const PrivacySpec kSpec{0.0, 2.0, 2.0};
constexpr double kK = 1e4;

MarketState Pool(double x = 100.0, double hidden = 1e9,
                 FeePolicy fee = FeePolicy::NoiseFee()) {
  MarketRules rules;
  rules.fee = fee;
  return MarketState(TradingCurve::ConstantProduct(kK), x, hidden, hidden,
                     rules);
}

// Arbitrage profit of moving a constant-product pool from x0 to the reserve
// priced at p, written directly from Y = K / x.
double CpTruthfulOracle(double x0, double p) {
  const double target = std::sqrt(kK / p);
  return (kK / x0 - kK / target) - p * (target - x0);
}

TEST(StrategiesTest, TruthfulProfitMatchesOracle) {
  Rng rng(51);
  for (int i = 0; i < 500; ++i) {
    const double x0 = rng.Uniform(20.0, 500.0);
    const double p = std::exp(rng.Uniform(-2.0, 2.0));
    const double oracle = CpTruthfulOracle(x0, p);
    EXPECT_NEAR(TruthfulProfit(TradingCurve::ConstantProduct(kK), x0, p),
                oracle, 1e-9 * std::max(1.0, std::abs(oracle)));
    MarketState state = Pool(x0);
    const StrategyTrace trace = TruthfulStrategy(state, p);
    EXPECT_NEAR(trace.total_profit, oracle,
                1e-9 * std::max(1.0, std::abs(oracle)));
    EXPECT_NEAR(trace.terminal_spot, p, 1e-12 * p);
  }
}

TEST(StrategiesTest, TruthfulTradeIsTheBestSingleNonPrivateTrade) {
  Rng rng(52);
  for (int i = 0; i < 200; ++i) {
    const double p = std::exp(rng.Uniform(-1.0, 1.0));
    const double best = TruthfulProfit(TradingCurve::ConstantProduct(kK), 100.0, p);
    const double delta = rng.Uniform(-50.0, 100.0);
    MarketState state = Pool();
    state.Execute(delta, PrivacySpec::NonPrivate(delta), rng);
    const double profit =
        state.trade_log()[0].y_out - p * delta;
    EXPECT_LE(profit, best + 1e-9);
  }
}

TEST(StrategiesTest, ProfitDecomposesIntoFeesReversalsAndTerminalGap) {
  const TradingCurve curve = TradingCurve::ConstantProduct(kK);
  Rng rng(53);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const double p = std::exp(rng.Uniform(-0.5, 0.5));
    MarketState state = Pool();
    const StrategyTrace trace =
        RunAdaptive(MakeRandomPolicy(seed), state, p, 8, rng);
    const ExcessDecomposition parts = DecomposeExcess(trace, curve, 100.0, p);
    const double excess = trace.total_profit - TruthfulProfit(curve, 100.0, p);
    EXPECT_NEAR(parts.total(), excess, 1e-8 * std::max(1.0, std::abs(excess)));
    EXPECT_LE(parts.terminal_gap, 1e-12);
  }
}

TEST(StrategiesTest, NoiseChasingRunsUntilItsRoundLimit) {
  MarketState state = Pool();
  Rng rng(54);
  const StrategyTrace trace = NoiseChasingStrategy(state, 1.2, kSpec, 10, rng);
  EXPECT_EQ(trace.stop_reason, StopReason::kMaxRounds);
  EXPECT_EQ(trace.steps.size(), 10u);
  for (const TradeRecord& step : trace.steps) {
    EXPECT_TRUE(step.spec.Contains(step.delta));
  }
}

TEST(StrategiesTest, NoiseChasingWithoutPrivacyIsTruthful) {
  MarketState state = Pool();
  Rng rng(55);
  const PrivacySpec none{0.0, 2.0, std::numeric_limits<double>::infinity()};
  const StrategyTrace trace = NoiseChasingStrategy(state, 1.2, none, 10, rng);
  EXPECT_EQ(trace.stop_reason, StopReason::kZeroNoise);
  EXPECT_EQ(trace.steps.size(), 1u);
  EXPECT_NEAR(trace.total_profit, CpTruthfulOracle(100.0, 1.2), 1e-9);
}

TEST(StrategiesTest, CoverTradeRecentersOnlyWhenNeeded) {
  EXPECT_EQ(CoverTrade(kSpec, 1.5), kSpec);
  const PrivacySpec moved = CoverTrade(kSpec, 5.0);
  EXPECT_DOUBLE_EQ(moved.lower, 4.0);
  EXPECT_DOUBLE_EQ(moved.upper, 6.0);
  EXPECT_DOUBLE_EQ(moved.epsilon, 2.0);
}

TEST(StrategiesTest, DeviationPreconditions) {
  Rng rng(56);
  MarketState state = Pool();
  try {
    Case1Deviation(state, 0.9, 1.0, kSpec, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpecViolation);
  }
  EXPECT_THROW(Case2Deviation(state, 1.1, 1.2, 1.0, kSpec, rng), Error);
  EXPECT_THROW(Case2Deviation(state, 0.9, 0.95, 1.0, kSpec, rng), Error);
}

TEST(StrategiesTest, DeviationsEndAtTheTruePrice) {
  Rng rng(57);
  MarketState one = Pool();
  const StrategyTrace case1 = Case1Deviation(one, 1.5, 1.0, kSpec, rng);
  EXPECT_EQ(case1.steps.size(), 2u);
  EXPECT_NEAR(case1.terminal_spot, 1.5, 1e-12);
  MarketState two = Pool();
  const StrategyTrace case2 = Case2Deviation(two, 0.5, 1.3, 1.0, kSpec, rng);
  EXPECT_EQ(case2.steps.size(), 3u);
  EXPECT_NEAR(case2.terminal_spot, 0.5, 1e-12);
}

TEST(StrategiesTest, AdaptiveBaselines) {
  Rng rng(58);
  MarketState idle = Pool();
  const StrategyTrace none = RunAdaptive(StopPolicy(), idle, 1.3, 5, rng);
  EXPECT_EQ(none.total_profit, 0.0);
  EXPECT_EQ(none.stop_reason, StopReason::kPolicyStop);
  MarketState state = Pool();
  const StrategyTrace truthful = RunAdaptive(TruthfulPolicy(), state, 1.3, 5, rng);
  EXPECT_NEAR(truthful.total_profit, CpTruthfulOracle(100.0, 1.3), 1e-9);
}

TEST(StrategiesTest, RandomPolicyIsReproducible) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng a(99);
    Rng b(99);
    MarketState sa = Pool();
    MarketState sb = Pool();
    const StrategyTrace ta = RunAdaptive(MakeRandomPolicy(seed), sa, 1.1, 8, a);
    const StrategyTrace tb = RunAdaptive(MakeRandomPolicy(seed), sb, 1.1, 8, b);
    EXPECT_EQ(ta.total_profit, tb.total_profit);
    EXPECT_EQ(ta.steps.size(), tb.steps.size());
  }
}

TEST(StrategiesTest, RejectionStopsTheStrategy) {
  MarketState state = Pool(100.0, 0.1);
  Rng rng(59);
  const StrategyTrace trace = NoiseChasingStrategy(state, 1.2, kSpec, 5, rng);
  EXPECT_EQ(trace.stop_reason, StopReason::kRejected);
  EXPECT_TRUE(trace.steps.empty());
  EXPECT_EQ(trace.total_profit, 0.0);
}

}  // namespace
}  // namespace ncfmm
