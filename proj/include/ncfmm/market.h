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

#ifndef NCFMM_MARKET_H_
#define NCFMM_MARKET_H_

#include <cstdint>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "ncfmm/curve.h"
#include "ncfmm/privacy.h"
#include "ncfmm/rng.h"

namespace ncfmm {

// How the privacy fee charged on a private trade relates to its noise fee.
// Non-private trades never pay a privacy fee.
struct FeePolicy {
  enum class Kind { kNoiseFee, kZero, kFixed, kScaled };

  Kind kind = Kind::kNoiseFee;
  // kFixed: the fee in units of Y. kScaled: the multiplier on the noise fee.
  double value = 0.0;

  static FeePolicy NoiseFee() { return {Kind::kNoiseFee, 0.0}; }
  static FeePolicy Zero() { return {Kind::kZero, 0.0}; }
  static FeePolicy Fixed(double fee) { return {Kind::kFixed, fee}; }
  static FeePolicy Scaled(double multiplier) {
    return {Kind::kScaled, multiplier};
  }

  double Charge(double noise_fee, bool private_trade) const;

  friend bool operator==(const FeePolicy&, const FeePolicy&) = default;
};

std::string_view FeePolicyKindName(FeePolicy::Kind kind);

// Picks the noise distribution for a (trade, privacy spec) pair. Only
// consulted for private trades.
using NoiseModel =
    std::function<NoiseDistribution(double delta, const PrivacySpec& spec)>;

NoiseModel BinaryNoiseModel();
// BiasedBinary with the given mean on every private trade.
NoiseModel BiasedNoiseModel(double bias);

struct MarketRules {
  NoiseModel noise = BinaryNoiseModel();
  FeePolicy fee = FeePolicy::NoiseFee();
  // Proportional trading fee on |Y paid out|. Kept at zero for every
  // truthfulness experiment.
  double trading_fee = 0.0;
};

struct TradeRecord {
  std::uint64_t seq = 0;
  double delta = 0.0;  // X sold to the pool; negative means bought
  PrivacySpec spec;
  double y_out = 0.0;        // Y paid to the trader; negative means paid in
  double privacy_fee = 0.0;  // gamma actually charged
  double noise_fee = 0.0;    // Gamma of the noise distribution used
  double trading_fee = 0.0;
  double eta = 0.0;  // noise trade, X moved into the reserves
  double pre_x = 0.0;
  double post_x = 0.0;

  // Reserve right after the trade, before the noise trade.
  double post_trade_x() const { return pre_x + delta; }
};

// Operator funding of the hidden account. Not part of anyone's profit.
struct TopUp {
  std::uint64_t after_seq = 0;
  double x = 0.0;
  double y = 0.0;
};

// Noisy CFMM: a reserve point on a fixed level curve, the hidden account
// that trades against it after every private trade, and the fee ledger.
// Single owner; copy to branch.
class MarketState {
 public:
  MarketState(TradingCurve curve, double x, double hidden_x, double hidden_y,
              MarketRules rules = {});

  const TradingCurve& curve() const { return curve_; }
  double x() const { return x_; }
  double y() const { return curve_.YOfX(x_); }
  double spot_price() const { return curve_.SpotPrice(x_); }
  double hidden_x() const { return hidden_x_; }
  double hidden_y() const { return hidden_y_; }
  double fee_ledger() const { return fee_ledger_; }
  const std::vector<TradeRecord>& trade_log() const { return trade_log_; }
  const std::vector<TopUp>& top_ups() const { return top_ups_; }
  const MarketRules& rules() const { return rules_; }
  void set_rules(MarketRules rules) { rules_ = std::move(rules); }

  // Whether the hidden account can fund every possible noise trade of
  // `noise` after a trade of `delta`: X for positive noise, Y for negative.
  bool SupportCheck(double delta, const NoiseDistribution& noise) const;

  // The noise distribution a trade of `delta` under `spec` would receive.
  NoiseDistribution NoiseFor(double delta, const PrivacySpec& spec) const;

  // Runs one trade followed by its noise trade. The trader receives
  // Y(x) - Y(x + delta) and pays the privacy fee; the hidden account then
  // moves the reserves to x + delta + eta.
  //
  // Throws kSpecViolation or kDomain for invalid requests and kTradeRejected
  // when the hidden account cannot back the worst-case noise. On any throw
  // the state is left untouched.
  const TradeRecord& Execute(double delta, const PrivacySpec& spec, Rng& rng);

  void TopUpHidden(double x, double y);

 private:
  TradingCurve curve_;
  double x_;
  double hidden_x_;
  double hidden_y_;
  double fee_ledger_ = 0.0;
  MarketRules rules_;
  std::vector<TradeRecord> trade_log_;
  std::vector<TopUp> top_ups_;
};

// Value-returning form of MarketState::Execute.
std::pair<MarketState, TradeRecord> ExecuteTrade(MarketState state,
                                                 double delta,
                                                 const PrivacySpec& spec,
                                                 Rng& rng);

// Infinitely deep venue quoting the true price.
struct ExternalMarket {
  double true_price = 1.0;

  // Y received for selling x_amount of X (negative amount buys).
  double Settle(double x_amount) const { return true_price * x_amount; }
};

// What an observer who only sees spot prices learns about a trade: the net
// reserve movement P^-1(post) - P^-1(pre).
double EavesdropInfer(double pre_price, double post_price,
                      const TradingCurve& curve);

}  // namespace ncfmm

#endif  // NCFMM_MARKET_H_
