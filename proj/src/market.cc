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

#include "ncfmm/market.h"

#include <cmath>
#include <string>

#include "ncfmm/errors.h"
#include "ncfmm/fee.h"

namespace ncfmm {

double FeePolicy::Charge(double noise_fee, bool private_trade) const {
  if (!private_trade) return 0.0;
  switch (kind) {
    case Kind::kNoiseFee:
      return noise_fee;
    case Kind::kZero:
      return 0.0;
    case Kind::kFixed:
      return value;
    case Kind::kScaled:
      return value * noise_fee;
  }
  return noise_fee;
}

std::string_view FeePolicyKindName(FeePolicy::Kind kind) {
  switch (kind) {
    case FeePolicy::Kind::kNoiseFee:
      return "noise_fee";
    case FeePolicy::Kind::kZero:
      return "zero";
    case FeePolicy::Kind::kFixed:
      return "fixed";
    case FeePolicy::Kind::kScaled:
      return "scaled";
  }
  return "unknown";
}

NoiseModel BinaryNoiseModel() {
  return [](double delta, const PrivacySpec& spec) {
    return BinaryMechanism(delta, spec);
  };
}

NoiseModel BiasedNoiseModel(double bias) {
  return [bias](double delta, const PrivacySpec& spec) {
    return BiasedBinary(delta, spec, bias);
  };
}

MarketState::MarketState(TradingCurve curve, double x, double hidden_x,
                         double hidden_y, MarketRules rules)
    : curve_(std::move(curve)),
      x_(x),
      hidden_x_(hidden_x),
      hidden_y_(hidden_y),
      rules_(std::move(rules)) {
  if (!curve_.Contains(x_)) {
    throw Error(ErrorCode::kDomain, "initial reserve outside curve domain");
  }
  if (!(hidden_x_ >= 0.0) || !(hidden_y_ >= 0.0)) {
    throw Error(ErrorCode::kDomain, "hidden account balances must be >= 0");
  }
  if (!(rules_.trading_fee >= 0.0 && rules_.trading_fee < 1.0)) {
    throw Error(ErrorCode::kConfig, "trading fee must lie in [0, 1)");
  }
}

bool MarketState::SupportCheck(double delta,
                               const NoiseDistribution& noise) const {
  const double post_trade = x_ + delta;
  if (!curve_.Contains(post_trade)) return false;
  for (const NoiseAtom& atom : noise.atoms()) {
    if (atom.probability == 0.0 || atom.eta == 0.0) continue;
    const double noised = post_trade + atom.eta;
    if (!curve_.Contains(noised)) return false;
    if (atom.eta > 0.0) {
      // The hidden account sells eta X into the reserves.
      if (hidden_x_ < atom.eta) return false;
    } else if (hidden_y_ < curve_.IntegralPrice(noised, post_trade)) {
      // It buys |eta| X, paying Y(s + eta) - Y(s).
      return false;
    }
  }
  return true;
}

NoiseDistribution MarketState::NoiseFor(double delta,
                                        const PrivacySpec& spec) const {
  if (spec.IsNonPrivate()) return NoiseDistribution::Zero();
  return rules_.noise(delta, spec);
}

const TradeRecord& MarketState::Execute(double delta, const PrivacySpec& spec,
                                        Rng& rng) {
  spec.Validate();
  if (!std::isfinite(delta) || !spec.Contains(delta)) {
    throw Error(ErrorCode::kSpecViolation,
                "trade must lie inside its masking interval");
  }
  const double post_trade = x_ + delta;
  if (!curve_.Contains(post_trade)) {
    throw Error(ErrorCode::kDomain, "trade moves reserves outside the curve");
  }
  const bool private_trade = !spec.IsNonPrivate();
  const NoiseDistribution noise = NoiseFor(delta, spec);
  const double noise_fee = NoiseFee(curve_, x_, delta, noise).gamma;
  if (!SupportCheck(delta, noise)) {
    throw Error(ErrorCode::kTradeRejected,
                "hidden account cannot support the maximum noise");
  }

  TradeRecord record;
  record.seq = trade_log_.size();
  record.delta = delta;
  record.spec = spec;
  record.pre_x = x_;
  record.y_out = curve_.IntegralPrice(x_, post_trade);
  record.noise_fee = noise_fee;
  record.privacy_fee = rules_.fee.Charge(noise_fee, private_trade);
  record.trading_fee = rules_.trading_fee * std::fabs(record.y_out);
  record.eta = private_trade ? noise.Sample(rng) : 0.0;
  record.post_x = post_trade + record.eta;

  // Nothing below can throw: the noised reserve was validated above.
  hidden_x_ -= record.eta;
  hidden_y_ += curve_.IntegralPrice(post_trade, record.post_x);
  fee_ledger_ += record.privacy_fee + record.trading_fee;
  x_ = record.post_x;
  trade_log_.push_back(record);
  return trade_log_.back();
}

void MarketState::TopUpHidden(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw Error(ErrorCode::kDomain, "top-ups must be non-negative");
  }
  hidden_x_ += x;
  hidden_y_ += y;
  top_ups_.push_back({static_cast<std::uint64_t>(trade_log_.size()), x, y});
}

std::pair<MarketState, TradeRecord> ExecuteTrade(MarketState state,
                                                 double delta,
                                                 const PrivacySpec& spec,
                                                 Rng& rng) {
  TradeRecord record = state.Execute(delta, spec, rng);
  return {std::move(state), record};
}

double EavesdropInfer(double pre_price, double post_price,
                      const TradingCurve& curve) {
  if (pre_price == post_price) return 0.0;
  return curve.XOfPrice(post_price) - curve.XOfPrice(pre_price);
}

}  // namespace ncfmm
