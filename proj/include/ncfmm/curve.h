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

#ifndef NCFMM_CURVE_H_
#define NCFMM_CURVE_H_

#include <optional>
#include <string_view>

namespace ncfmm {

enum class CurveFamily { kConstantProduct, kLmsr, kConstantSum };

std::string_view CurveFamilyName(CurveFamily family);
// Accepts the canonical names plus the short aliases "cp", "lmsr", "cs".
std::optional<CurveFamily> ParseCurveFamily(std::string_view name);

// Closed interval of reserve amounts x the simulator is willing to visit.
// Keeping reserves strictly inside it stands in for "the pool never runs out
// of an asset".
struct ReserveBounds {
  double lo = 1e-9;
  double hi = 1e12;
};

// One level curve of a trading function f(x, y). The reserve of Y is always
// derived from x; fees are never reinvested so a pool stays on its curve.
//
//   ConstantProduct  f = x * y            level = K
//   Lmsr             f = 2 - e^-x - e^-y  level in (0, 2)
//   ConstantSum      f = r * x + y        level = c, slope = r
//
// Immutable after construction.
class TradingCurve {
 public:
  static TradingCurve ConstantProduct(double k, ReserveBounds bounds = {});
  static TradingCurve Lmsr(double level, ReserveBounds bounds = {});
  static TradingCurve ConstantSum(double level, double slope,
                                  ReserveBounds bounds = {});

  CurveFamily family() const { return family_; }
  double level() const { return level_; }
  // Only meaningful for ConstantSum; 0 otherwise.
  double slope() const { return slope_; }
  const ReserveBounds& bounds() const { return bounds_; }

  // True iff x lies in the represented bounds and the family's natural
  // domain (where the derived Y reserve is finite and positive).
  bool Contains(double x) const;

  // f(x, y) for arbitrary reserves.
  double Invariant(double x, double y) const;

  // Y(x): the Y reserve paired with x on this curve.
  double YOfX(double x) const;
  // P(x) = (df/dx) / (df/dy) at (x, Y(x)).
  double SpotPrice(double x) const;
  // dP/dx at x.
  double PriceSlope(double x) const;
  // P^-1(p): the largest x with spot price p.
  double XOfPrice(double p) const;

  // Integral of P over [a, b] (negative when b < a). Equals Y(a) - Y(b).
  double IntegralPrice(double a, double b) const;

  // Value of reversing a displacement of eta away from s at the price P(s):
  //   integral_{s + eta}^{s} (P(a) - P(s)) da.
  // Non-negative for non-increasing P; evaluated in a cancellation-free
  // closed form per family.
  double ReversalValue(double s, double eta) const;

  // L(p) = 1 / (dP/dx) at P^-1(p). std::nullopt marks the undefined case
  // dP/dx = 0 (ConstantSum).
  std::optional<double> Liquidity(double p) const;

 private:
  TradingCurve(CurveFamily family, double level, double slope,
               ReserveBounds bounds);

  void RequireContains(double x, const char* what) const;

  CurveFamily family_;
  double level_;
  double slope_;
  ReserveBounds bounds_;
  // Open natural domain of the family on this level.
  double natural_lo_;
  double natural_hi_;
  // LMSR: k = 2 - level, so e^-y = k - e^-x.
  double lmsr_k_ = 0.0;
};

}  // namespace ncfmm

#endif  // NCFMM_CURVE_H_
