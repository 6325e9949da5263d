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
#include <vector>

#include "gtest/gtest.h"
#include "ncfmm/errors.h"
#include "ncfmm/rng.h"
#include "oracles.h"

namespace ncfmm {
namespace {

using ::ncfmm::testing::AdaptiveSimpson;
using ::ncfmm::testing::Bisect;
using ::ncfmm::testing::RelativeError;

// Random curves with a reserve well inside the domain.
struct Instance {
  TradingCurve curve;
  double x;
};

std::vector<Instance> RandomInstances(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    switch (i % 3) {
      case 0: {
        const double k = std::exp(rng.Uniform(0.0, 20.0));
        const double x = std::sqrt(k) * std::exp(rng.Uniform(-2.0, 2.0));
        out.push_back({TradingCurve::ConstantProduct(k), x});
        break;
      }
      case 1: {
        const double level = rng.Uniform(0.2, 1.6);
        const TradingCurve curve = TradingCurve::Lmsr(level);
        const double k = 2.0 - level;
        const double lo = std::max(0.0, -std::log(k));
        const double hi = k > 1.0 ? -std::log(k - 1.0) : lo + 8.0;
        out.push_back({curve, lo + (hi - lo) * rng.Uniform(0.1, 0.9)});
        break;
      }
      default: {
        const double c = rng.Uniform(1.0, 1e4);
        const double r = rng.Uniform(0.1, 10.0);
        out.push_back({TradingCurve::ConstantSum(c, r),
                       c / r * rng.Uniform(0.05, 0.95)});
      }
    }
  }
  return out;
}

TEST(CurveTest, YOfXStaysOnTheLevelCurve) {
  for (const Instance& inst : RandomInstances(1, 300)) {
    const TradingCurve& c = inst.curve;
    const double y = c.YOfX(inst.x);
    EXPECT_LT(RelativeError(c.Invariant(inst.x, y), c.level()), 1e-12)
        << CurveFamilyName(c.family()) << " x=" << inst.x;
  }
}

TEST(CurveTest, SpotPriceIsMinusDerivativeOfY) {
  for (const Instance& inst : RandomInstances(2, 300)) {
    const TradingCurve& c = inst.curve;
    const double h = 1e-5 * std::max(1.0, inst.x);
    const double numeric =
        -(c.YOfX(inst.x + h) - c.YOfX(inst.x - h)) / (2.0 * h);
    EXPECT_LT(RelativeError(c.SpotPrice(inst.x), numeric), 1e-6)
        << CurveFamilyName(c.family()) << " x=" << inst.x;
  }
}

TEST(CurveTest, PriceSlopeMatchesFiniteDifference) {
  for (const Instance& inst : RandomInstances(3, 300)) {
    const TradingCurve& c = inst.curve;
    const double h = 1e-5 * std::max(1.0, inst.x);
    const double numeric =
        (c.SpotPrice(inst.x + h) - c.SpotPrice(inst.x - h)) / (2.0 * h);
    if (c.family() == CurveFamily::kConstantSum) {
      EXPECT_EQ(c.PriceSlope(inst.x), 0.0);
    } else {
      EXPECT_LT(RelativeError(c.PriceSlope(inst.x), numeric), 1e-5);
    }
  }
}

TEST(CurveTest, InversePriceRoundTrips) {
  for (const Instance& inst : RandomInstances(4, 300)) {
    const TradingCurve& c = inst.curve;
    if (c.family() == CurveFamily::kConstantSum) continue;
    const double p = c.SpotPrice(inst.x);
    EXPECT_LT(RelativeError(c.XOfPrice(p), inst.x), 1e-12);
  }
}

TEST(CurveTest, LmsrInverseMatchesBisection) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double level = rng.Uniform(0.2, 1.6);
    const TradingCurve c = TradingCurve::Lmsr(level);
    const double k = 2.0 - level;
    const double lo = std::max(0.0, -std::log(k)) + 1e-9;
    const double hi = k > 1.0 ? -std::log(k - 1.0) - 1e-9 : 40.0;
    const double x = lo + (hi - lo) * rng.Uniform(0.05, 0.95);
    const double p = c.SpotPrice(x);
    // Spot price from its definition e^-x / e^-y with y on the level curve.
    const auto price_at = [k](double a) {
      return std::exp(-a) / (k - std::exp(-a));
    };
    const double root = Bisect([&](double a) { return price_at(a) - p; }, lo, hi);
    EXPECT_NEAR(c.XOfPrice(p), root, 1e-9 * std::max(1.0, root));
  }
}

TEST(CurveTest, IntegralPriceMatchesQuadrature) {
  Rng rng(6);
  for (const Instance& inst : RandomInstances(7, 300)) {
    const TradingCurve& c = inst.curve;
    const double b = inst.x * rng.Uniform(0.9, 1.1);
    if (!c.Contains(b)) continue;
    const double oracle = AdaptiveSimpson(
        [&](double a) { return c.SpotPrice(a); }, inst.x, b, 1e-13);
    EXPECT_NEAR(c.IntegralPrice(inst.x, b), oracle,
                1e-10 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(CurveTest, ReversalValueMatchesQuadratureAndIsNonNegative) {
  Rng rng(8);
  for (const Instance& inst : RandomInstances(9, 300)) {
    const TradingCurve& c = inst.curve;
    const double s = inst.x;
    const double eta = s * rng.Uniform(-0.05, 0.05);
    if (!c.Contains(s + eta)) continue;
    const double ps = c.SpotPrice(s);
    const double oracle = AdaptiveSimpson(
        [&](double a) { return c.SpotPrice(a) - ps; }, s + eta, s, 1e-14);
    const double value = c.ReversalValue(s, eta);
    EXPECT_GE(value, 0.0);
    EXPECT_NEAR(value, oracle, 1e-10 * std::max(1e-6, std::abs(ps * eta)))
        << CurveFamilyName(c.family()) << " s=" << s << " eta=" << eta;
  }
}

TEST(CurveTest, ConstantProductClosedForms) {
  const TradingCurve c = TradingCurve::ConstantProduct(1e4);
  EXPECT_DOUBLE_EQ(c.YOfX(100.0), 100.0);
  EXPECT_DOUBLE_EQ(c.SpotPrice(100.0), 1.0);
  EXPECT_DOUBLE_EQ(c.XOfPrice(1.0), 100.0);
  EXPECT_DOUBLE_EQ(c.PriceSlope(100.0), -0.02);
  ASSERT_TRUE(c.Liquidity(1.0).has_value());
  EXPECT_DOUBLE_EQ(*c.Liquidity(1.0), -50.0);
}

TEST(CurveTest, LiquidityIsReciprocalOfPriceSlope) {
  for (const Instance& inst : RandomInstances(10, 120)) {
    const TradingCurve& c = inst.curve;
    const double p = c.SpotPrice(inst.x);
    const auto liquidity = c.Liquidity(p);
    if (c.family() == CurveFamily::kConstantSum) {
      EXPECT_FALSE(liquidity.has_value());
      continue;
    }
    ASSERT_TRUE(liquidity.has_value());
    EXPECT_LT(RelativeError(*liquidity, 1.0 / c.PriceSlope(inst.x)), 1e-9);
  }
}

TEST(CurveTest, ConstantSumHasFlatPriceAndNoGenericInverse) {
  const TradingCurve c = TradingCurve::ConstantSum(100.0, 2.0);
  EXPECT_DOUBLE_EQ(c.SpotPrice(10.0), 2.0);
  EXPECT_DOUBLE_EQ(c.YOfX(10.0), 80.0);
  EXPECT_DOUBLE_EQ(c.ReversalValue(10.0, 3.0), 0.0);
  try {
    c.XOfPrice(1.5);
    FAIL() << "expected kNoSolution";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSolution);
  }
}

TEST(CurveTest, RejectsReservesOutsideDomain) {
  const TradingCurve cp = TradingCurve::ConstantProduct(1.0);
  for (double x : {0.0, -1.0, 1e13, std::nan("")}) {
    try {
      cp.YOfX(x);
      FAIL() << "x=" << x;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDomain);
    }
  }
  const TradingCurve lmsr = TradingCurve::Lmsr(0.5);  // k = 1.5
  EXPECT_FALSE(lmsr.Contains(-std::log(1.5)));
  EXPECT_FALSE(lmsr.Contains(-std::log(0.5)));
  EXPECT_TRUE(lmsr.Contains(0.3));
}

TEST(CurveTest, RejectsInvalidParameters) {
  EXPECT_THROW(TradingCurve::ConstantProduct(0.0), Error);
  EXPECT_THROW(TradingCurve::Lmsr(2.0), Error);
  EXPECT_THROW(TradingCurve::Lmsr(0.0), Error);
  EXPECT_THROW(TradingCurve::ConstantSum(1.0, 0.0), Error);
  EXPECT_THROW(TradingCurve::ConstantProduct(1.0, {2.0, 1.0}), Error);
}

TEST(CurveTest, FamilyNamesParse) {
  for (CurveFamily f : {CurveFamily::kConstantProduct, CurveFamily::kLmsr,
                        CurveFamily::kConstantSum}) {
    EXPECT_EQ(ParseCurveFamily(CurveFamilyName(f)), f);
  }
  EXPECT_EQ(ParseCurveFamily("cp"), CurveFamily::kConstantProduct);
  EXPECT_EQ(ParseCurveFamily("cs"), CurveFamily::kConstantSum);
  EXPECT_FALSE(ParseCurveFamily("uniswap").has_value());
}

}  // namespace
}  // namespace ncfmm
