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

#include "ncfmm/fee.h"

#include <algorithm>
#include <cmath>

#include "ncfmm/errors.h"

namespace ncfmm {

std::string_view FeeMethodName(FeeMethod method) {
  return method == FeeMethod::kClosedForm ? "closed_form" : "generic";
}

FeeQuote NoiseFee(const TradingCurve& curve, double state_x, double delta,
                  const NoiseDistribution& distribution) {
  const double post_trade = state_x + delta;
  if (!curve.Contains(post_trade)) {
    throw Error(ErrorCode::kDomain, "post-trade reserve outside curve domain");
  }
  double gamma = 0.0;
  for (const NoiseAtom& atom : distribution.atoms()) {
    // Atoms are checked even at probability zero: the pool must be able to
    // execute any noise the mechanism can name.
    const double value = curve.ReversalValue(post_trade, atom.eta);
    gamma += atom.probability * value;
  }
  return {gamma, state_x, delta, distribution, FeeMethod::kGeneric};
}

FeeQuote NoiseFeeConstantProduct(double k, double state_x, double delta,
                                 const NoiseDistribution& distribution) {
  if (distribution.size() != 2) {
    throw Error(ErrorCode::kShape, "closed form needs exactly two atoms");
  }
  const NoiseAtom& first = distribution.atoms()[0];
  const NoiseAtom& second = distribution.atoms()[1];
  const double scale =
      std::max({1.0, std::fabs(first.eta), std::fabs(second.eta)});
  if (std::fabs(distribution.Mean()) > 1e-12 * scale) {
    throw Error(ErrorCode::kNotZeroMean,
                "closed form assumes p1 eta1 + p2 eta2 = 0");
  }
  const double s = state_x + delta;
  if (!(k > 0.0) || !(s > 0.0) || !(s + first.eta > 0.0) ||
      !(s + second.eta > 0.0)) {
    throw Error(ErrorCode::kDomain, "reserves must stay positive");
  }
  const double gamma =
      -k * first.eta * second.eta / (s * (s + first.eta) * (s + second.eta));
  return {gamma, state_x, delta, distribution, FeeMethod::kClosedForm};
}

std::optional<double> FeeLiquidityRatio(const TradingCurve& curve_a,
                                        const TradingCurve& curve_b, double p,
                                        double delta, const PrivacySpec& spec) {
  if (!curve_a.Liquidity(p).has_value() || !curve_b.Liquidity(p).has_value()) {
    return std::nullopt;
  }
  const NoiseDistribution noise = BinaryMechanism(delta, spec);
  const double fee_a = NoiseFee(curve_a, curve_a.XOfPrice(p), delta, noise).gamma;
  const double fee_b = NoiseFee(curve_b, curve_b.XOfPrice(p), delta, noise).gamma;
  if (fee_a == 0.0 && fee_b == 0.0) return 1.0;
  return fee_b / fee_a;
}

}  // namespace ncfmm
