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

#include "ncfmm/curve.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "ncfmm/errors.h"

namespace ncfmm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Describe(double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

void ValidateBounds(const ReserveBounds& bounds) {
  if (!(bounds.lo > 0.0) || !(bounds.hi > bounds.lo) || !std::isfinite(bounds.hi)) {
    throw Error(ErrorCode::kDomain,
                "reserve bounds must satisfy 0 < lo < hi < inf");
  }
}

}  // namespace

std::string_view CurveFamilyName(CurveFamily family) {
  switch (family) {
    case CurveFamily::kConstantProduct:
      return "constant_product";
    case CurveFamily::kLmsr:
      return "lmsr";
    case CurveFamily::kConstantSum:
      return "constant_sum";
  }
  return "unknown";
}

std::optional<CurveFamily> ParseCurveFamily(std::string_view name) {
  if (name == "constant_product" || name == "cp") {
    return CurveFamily::kConstantProduct;
  }
  if (name == "lmsr") return CurveFamily::kLmsr;
  if (name == "constant_sum" || name == "cs") return CurveFamily::kConstantSum;
  return std::nullopt;
}

TradingCurve::TradingCurve(CurveFamily family, double level, double slope,
                           ReserveBounds bounds)
    : family_(family),
      level_(level),
      slope_(slope),
      bounds_(bounds),
      natural_lo_(0.0),
      natural_hi_(kInf) {}

TradingCurve TradingCurve::ConstantProduct(double k, ReserveBounds bounds) {
  ValidateBounds(bounds);
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::kDomain, "constant product level must be positive");
  }
  return TradingCurve(CurveFamily::kConstantProduct, k, 0.0, bounds);
}

TradingCurve TradingCurve::Lmsr(double level, ReserveBounds bounds) {
  ValidateBounds(bounds);
  if (!(level > 0.0 && level < 2.0)) {
    throw Error(ErrorCode::kDomain, "LMSR level must lie in (0, 2)");
  }
  TradingCurve curve(CurveFamily::kLmsr, level, 0.0, bounds);
  curve.lmsr_k_ = 2.0 - level;
  // y = -log(k - e^-x) needs e^-x < k, and y > 0 needs k - e^-x < 1.
  curve.natural_lo_ = std::max(0.0, -std::log(curve.lmsr_k_));
  curve.natural_hi_ = curve.lmsr_k_ > 1.0 ? -std::log(curve.lmsr_k_ - 1.0) : kInf;
  return curve;
}

TradingCurve TradingCurve::ConstantSum(double level, double slope,
                                       ReserveBounds bounds) {
  ValidateBounds(bounds);
  if (!(level > 0.0) || !(slope > 0.0) || !std::isfinite(level) ||
      !std::isfinite(slope)) {
    throw Error(ErrorCode::kDomain,
                "constant sum level and slope must be positive");
  }
  TradingCurve curve(CurveFamily::kConstantSum, level, slope, bounds);
  curve.natural_hi_ = level / slope;
  return curve;
}

bool TradingCurve::Contains(double x) const {
  return std::isfinite(x) && x >= bounds_.lo && x <= bounds_.hi &&
         x > natural_lo_ && x < natural_hi_;
}

void TradingCurve::RequireContains(double x, const char* what) const {
  if (!Contains(x)) {
    throw Error(ErrorCode::kDomain, std::string(what) + " x=" + Describe(x) +
                                        " is outside the curve domain");
  }
}

double TradingCurve::Invariant(double x, double y) const {
  switch (family_) {
    case CurveFamily::kConstantProduct:
      return x * y;
    case CurveFamily::kLmsr:
      return 2.0 - std::exp(-x) - std::exp(-y);
    case CurveFamily::kConstantSum:
      return slope_ * x + y;
  }
  return 0.0;
}

double TradingCurve::YOfX(double x) const {
  RequireContains(x, "reserve");
  switch (family_) {
    case CurveFamily::kConstantProduct:
      return level_ / x;
    case CurveFamily::kLmsr:
      return -std::log(lmsr_k_ - std::exp(-x));
    case CurveFamily::kConstantSum:
      return level_ - slope_ * x;
  }
  return 0.0;
}

double TradingCurve::SpotPrice(double x) const {
  RequireContains(x, "reserve");
  switch (family_) {
    case CurveFamily::kConstantProduct:
      return level_ / (x * x);
    case CurveFamily::kLmsr: {
      // e^(y - x) = e^-x / (k - e^-x)
      const double t = std::exp(-x);
      return t / (lmsr_k_ - t);
    }
    case CurveFamily::kConstantSum:
      return slope_;
  }
  return 0.0;
}

double TradingCurve::PriceSlope(double x) const {
  RequireContains(x, "reserve");
  switch (family_) {
    case CurveFamily::kConstantProduct:
      return -2.0 * level_ / (x * x * x);
    case CurveFamily::kLmsr: {
      const double t = std::exp(-x);
      const double gap = lmsr_k_ - t;
      return -t * lmsr_k_ / (gap * gap);
    }
    case CurveFamily::kConstantSum:
      return 0.0;
  }
  return 0.0;
}

double TradingCurve::XOfPrice(double p) const {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::kDomain, "price must be positive, got " + Describe(p));
  }
  double x = 0.0;
  switch (family_) {
    case CurveFamily::kConstantProduct:
      x = std::sqrt(level_ / p);
      break;
    case CurveFamily::kLmsr:
      // p = t / (k - t) with t = e^-x.
      x = -std::log(p * lmsr_k_ / (1.0 + p));
      break;
    case CurveFamily::kConstantSum:
      if (std::fabs(p - slope_) > 1e-12 * slope_) {
        throw Error(ErrorCode::kNoSolution,
                    "constant sum curve only quotes price " + Describe(slope_));
      }
      // Every interior x quotes the same price; the largest one is the upper
      // bound, which exists only when it cuts the curve before Y hits zero.
      if (bounds_.hi < natural_hi_) return bounds_.hi;
      throw Error(ErrorCode::kDomain,
                  "constant sum price level has no largest interior reserve");
  }
  if (!Contains(x)) {
    throw Error(ErrorCode::kDomain, "price " + Describe(p) +
                                        " maps to reserve x=" + Describe(x) +
                                        " outside the curve domain");
  }
  return x;
}

double TradingCurve::IntegralPrice(double a, double b) const {
  RequireContains(a, "integration bound");
  RequireContains(b, "integration bound");
  if (a == b) return 0.0;
  switch (family_) {
    case CurveFamily::kConstantProduct:
      return level_ * (b - a) / (a * b);
    case CurveFamily::kLmsr:
      // Y(a) - Y(b) = -log1p(-P(b) * expm1(b - a))
      return -std::log1p(-SpotPrice(b) * std::expm1(b - a));
    case CurveFamily::kConstantSum:
      return slope_ * (b - a);
  }
  return 0.0;
}

double TradingCurve::ReversalValue(double s, double eta) const {
  const double displaced = s + eta;
  RequireContains(s, "post-trade reserve");
  RequireContains(displaced, "noised reserve");
  if (eta == 0.0) return 0.0;
  double value = 0.0;
  switch (family_) {
    case CurveFamily::kConstantProduct:
      value = level_ * eta * eta / (displaced * s * s);
      break;
    case CurveFamily::kLmsr: {
      const double price = SpotPrice(s);
      value = -std::log1p(-price * std::expm1(-eta)) + price * eta;
      break;
    }
    case CurveFamily::kConstantSum:
      return 0.0;
  }
  // The exact value is non-negative; only rounding can push it below zero.
  return value > 0.0 ? value : 0.0;
}

std::optional<double> TradingCurve::Liquidity(double p) const {
  if (family_ == CurveFamily::kConstantSum) {
    if (std::fabs(p - slope_) > 1e-12 * slope_) {
      throw Error(ErrorCode::kNoSolution,
                  "constant sum curve only quotes price " + Describe(slope_));
    }
    return std::nullopt;
  }
  const double slope = PriceSlope(XOfPrice(p));
  if (slope == 0.0) return std::nullopt;
  return 1.0 / slope;
}

}  // namespace ncfmm
