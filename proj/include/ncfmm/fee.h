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

#ifndef NCFMM_FEE_H_
#define NCFMM_FEE_H_

#include <optional>
#include <string_view>

#include "ncfmm/curve.h"
#include "ncfmm/privacy.h"

namespace ncfmm {

enum class FeeMethod { kClosedForm, kGeneric };

std::string_view FeeMethodName(FeeMethod method);

// Noise fee for one trade: the expected value, at the post-trade price, of
// reversing the noise trade that follows it.
struct FeeQuote {
  double gamma = 0.0;    // units Y
  double state_x = 0.0;  // pre-trade reserve of X
  double delta = 0.0;    // trade, X sold to the pool
  NoiseDistribution distribution = NoiseDistribution::Zero();
  FeeMethod method = FeeMethod::kGeneric;
};

// Gamma = sum_eta D(eta) * integral_{s + eta}^{s} (P(a) - P(s)) da with
// s = state_x + delta. Works for any finite distribution, zero-mean or not.
// Throws kDomain if s or any noised reserve s + eta leaves the curve domain.
FeeQuote NoiseFee(const TradingCurve& curve, double state_x, double delta,
                  const NoiseDistribution& distribution);

// Constant-product shortcut for a zero-mean two-point distribution:
//   Gamma = -K eta1 eta2 / (s (s + eta1) (s + eta2)).
// Throws kShape unless there are exactly two atoms and kNotZeroMean unless
// p1 eta1 + p2 eta2 vanishes (1e-12, scaled by the atom magnitude).
FeeQuote NoiseFeeConstantProduct(double k, double state_x, double delta,
                                 const NoiseDistribution& distribution);

// Gamma_b / Gamma_a for the same binary-mechanism trade placed at each
// curve's reserve P^-1(p). std::nullopt when either curve has undefined
// liquidity at p.
std::optional<double> FeeLiquidityRatio(const TradingCurve& curve_a,
                                        const TradingCurve& curve_b, double p,
                                        double delta, const PrivacySpec& spec);

}  // namespace ncfmm

#endif  // NCFMM_FEE_H_
