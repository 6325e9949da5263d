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

#include <algorithm>
#include <cmath>
#include <utility>

#include "ncfmm/errors.h"

namespace ncfmm {
namespace {

// Accumulates pool trades and their external offsets into a trace.
class TraceRecorder {
 public:
  TraceRecorder(MarketState& state, double true_price)
      : state_(state), market_{true_price} {}

  // Returns false when the pool rejected the trade.
  bool Trade(double delta, const PrivacySpec& spec, Rng& rng) {
    try {
      const TradeRecord& record = state_.Execute(delta, spec, rng);
      trace_.steps.push_back(record);
      trace_.external_flows.push_back({-delta, market_.Settle(-delta)});
      return true;
    } catch (const Error& error) {
      if (error.code() != ErrorCode::kTradeRejected) throw;
      trace_.stop_reason = StopReason::kRejected;
      return false;
    }
  }

  bool TradeNonPrivate(double delta, Rng& rng) {
    return Trade(delta, PrivacySpec::NonPrivate(delta), rng);
  }

  // Trade that moves the spot price to `price` without privacy.
  bool TradeToPrice(double price, Rng& rng) {
    const double delta = state_.curve().XOfPrice(price) - state_.x();
    if (delta == 0.0) return true;
    return TradeNonPrivate(delta, rng);
  }

  const MarketState& state() const { return state_; }
  StrategyTrace& trace() { return trace_; }

  StrategyTrace Finish() {
    double profit = 0.0;
    for (const TradeRecord& step : trace_.steps) {
      profit += step.y_out - step.privacy_fee - step.trading_fee;
    }
    for (const ExternalFlow& flow : trace_.external_flows) {
      profit += flow.y_cash;
    }
    trace_.total_profit = profit;
    trace_.terminal_spot = state_.spot_price();
    return std::move(trace_);
  }

 private:
  MarketState& state_;
  ExternalMarket market_;
  StrategyTrace trace_;
};

// Execute() needs a generator even for trades that never draw noise.
Rng& UnusedRng() {
  thread_local Rng rng(0);
  return rng;
}

}  // namespace

const char* StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kCompleted:
      return "completed";
    case StopReason::kZeroNoise:
      return "zero_noise";
    case StopReason::kMaxRounds:
      return "max_rounds";
    case StopReason::kPolicyStop:
      return "policy_stop";
    case StopReason::kBoundReached:
      return "bound_reached";
    case StopReason::kRejected:
      return "rejected";
  }
  return "unknown";
}

double TruthfulProfit(const TradingCurve& curve, double x0, double true_price) {
  const double target = curve.XOfPrice(true_price);
  return curve.IntegralPrice(x0, target) - true_price * (target - x0);
}

StrategyTrace TruthfulStrategy(MarketState& state, double true_price) {
  TraceRecorder recorder(state, true_price);
  recorder.TradeToPrice(true_price, UnusedRng());
  return recorder.Finish();
}

PrivacySpec CoverTrade(const PrivacySpec& templ, double delta) {
  if (templ.Contains(delta)) return templ;
  const double half = 0.5 * (templ.upper - templ.lower);
  return {delta - half, delta + half, templ.epsilon};
}

StrategyTrace NoiseChasingStrategy(MarketState& state, double true_price,
                                   const PrivacySpec& spec, int max_rounds,
                                   Rng& rng) {
  if (max_rounds < 1) {
    throw Error(ErrorCode::kSpecViolation, "max_rounds must be positive");
  }
  const double target = state.curve().XOfPrice(true_price);
  TraceRecorder recorder(state, true_price);
  recorder.trace().stop_reason = StopReason::kMaxRounds;
  for (int round = 0; round < max_rounds; ++round) {
    const double delta = target - state.x();
    if (!recorder.Trade(delta, CoverTrade(spec, delta), rng)) break;
    if (recorder.trace().steps.back().eta == 0.0) {
      recorder.trace().stop_reason = StopReason::kZeroNoise;
      break;
    }
  }
  return recorder.Finish();
}

StrategyTrace Case1Deviation(MarketState& state, double true_price,
                             double delta, const PrivacySpec& spec, Rng& rng) {
  if (!(true_price > state.spot_price())) {
    throw Error(ErrorCode::kSpecViolation,
                "case 1 needs a true price above the spot price");
  }
  TraceRecorder recorder(state, true_price);
  if (recorder.Trade(delta, spec, rng)) {
    recorder.TradeToPrice(true_price, rng);
  }
  return recorder.Finish();
}

StrategyTrace Case2Deviation(MarketState& state, double true_price,
                             double push_price, double delta,
                             const PrivacySpec& spec, Rng& rng) {
  const double spot = state.spot_price();
  if (!(true_price < spot) || !(push_price >= spot)) {
    throw Error(ErrorCode::kSpecViolation,
                "case 2 needs true price < spot price <= push price");
  }
  TraceRecorder recorder(state, true_price);
  if (recorder.TradeToPrice(push_price, rng) &&
      recorder.Trade(delta, spec, rng)) {
    recorder.TradeToPrice(true_price, rng);
  }
  return recorder.Finish();
}

StrategyTrace RunAdaptive(const AdaptivePolicy& policy, MarketState& state,
                          double true_price, int bound, Rng& rng) {
  if (bound < 0) {
    throw Error(ErrorCode::kSpecViolation, "bound must be non-negative");
  }
  Rng policy_rng(rng.Next());
  TraceRecorder recorder(state, true_price);
  recorder.trace().stop_reason = StopReason::kBoundReached;
  for (int step = 0; step < bound; ++step) {
    const std::optional<Order> order =
        policy(Observation{state, true_price, step, policy_rng});
    if (!order.has_value()) {
      recorder.trace().stop_reason = StopReason::kPolicyStop;
      break;
    }
    if (!recorder.Trade(order->delta, order->spec, rng)) break;
  }
  return recorder.Finish();
}

AdaptivePolicy StopPolicy() {
  return [](const Observation&) -> std::optional<Order> {
    return std::nullopt;
  };
}

AdaptivePolicy TruthfulPolicy() {
  return [](const Observation& obs) -> std::optional<Order> {
    if (obs.step > 0) return std::nullopt;
    const double delta =
        obs.state.curve().XOfPrice(obs.true_price) - obs.state.x();
    return Order{delta, PrivacySpec::NonPrivate(delta)};
  };
}

AdaptivePolicy MakeRandomPolicy(std::uint64_t policy_seed) {
  Rng setup(policy_seed);
  struct Params {
    double stop_probability;
    double private_probability;
    double chase_probability;
    double price_spread;
    double max_width;
    double min_epsilon;
    double max_epsilon;
  };
  const Params params{
      setup.Uniform(0.05, 0.5), setup.Uniform(0.3, 1.0),
      setup.Uniform(0.0, 1.0),  setup.Uniform(0.0, 0.7),
      setup.Uniform(0.5, 4.0),  setup.Uniform(0.5, 1.5),
      setup.Uniform(1.5, 5.0),
  };
  return [params](const Observation& obs) -> std::optional<Order> {
    Rng& rng = obs.rng;
    if (obs.step > 0 && rng.Uniform01() < params.stop_probability) {
      return std::nullopt;
    }
    double target_price = obs.true_price;
    if (rng.Uniform01() >= params.chase_probability) {
      const double z = std::clamp(rng.Normal(), -3.0, 3.0);
      target_price *= std::exp(params.price_spread * z);
    }
    const double delta =
        obs.state.curve().XOfPrice(target_price) - obs.state.x();
    if (rng.Uniform01() >= params.private_probability) {
      return Order{delta, PrivacySpec::NonPrivate(delta)};
    }
    const double width = rng.Uniform(0.1, params.max_width);
    const double offset = rng.Uniform01() * width;
    const double epsilon = rng.Uniform(params.min_epsilon, params.max_epsilon);
    const double lower = delta - offset;
    return Order{delta, {lower, std::max(lower + width, delta), epsilon}};
  };
}

ExcessDecomposition DecomposeExcess(const StrategyTrace& trace,
                                    const TradingCurve& curve,
                                    double initial_x, double true_price) {
  ExcessDecomposition parts;
  double final_x = initial_x;
  for (const TradeRecord& step : trace.steps) {
    parts.fees += step.privacy_fee + step.trading_fee;
    const double s = step.post_trade_x();
    parts.reversal_sum +=
        curve.IntegralPrice(step.post_x, s) + true_price * step.eta;
    final_x = step.post_x;
  }
  const double target = curve.XOfPrice(true_price);
  parts.terminal_gap = curve.IntegralPrice(target, final_x) -
                       true_price * (final_x - target);
  return parts;
}

}  // namespace ncfmm
