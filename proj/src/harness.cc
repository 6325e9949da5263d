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

#include "ncfmm/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "ncfmm/errors.h"
#include "ncfmm/fee.h"

namespace ncfmm {
namespace {

double PairwiseSum(std::span<const double> values) {
  if (values.size() <= 8) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
  }
  const std::size_t half = values.size() / 2;
  return PairwiseSum(values.first(half)) + PairwiseSum(values.subspan(half));
}

void Require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kConfig, message);
}

std::vector<double> DefaultPriceGrid() {
  std::vector<double> grid;
  for (double p = 1e-6; p <= 1e6; p *= 2.0) grid.push_back(p);
  return grid;
}

}  // namespace

TradingCurve CurveConfig::Build() const {
  switch (family) {
    case CurveFamily::kConstantProduct:
      return TradingCurve::ConstantProduct(level, bounds);
    case CurveFamily::kLmsr:
      return TradingCurve::Lmsr(level, bounds);
    case CurveFamily::kConstantSum:
      return TradingCurve::ConstantSum(level, slope, bounds);
  }
  return TradingCurve::ConstantProduct(level, bounds);
}

std::string_view StrategyKindName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kTruthful:
      return "truthful";
    case StrategyKind::kNoiseChasing:
      return "noise_chasing";
    case StrategyKind::kCase1:
      return "case1_deviation";
    case StrategyKind::kCase2:
      return "case2_deviation";
    case StrategyKind::kRandomAdaptive:
      return "random_adaptive";
  }
  return "unknown";
}

std::optional<StrategyKind> ParseStrategyKind(std::string_view name) {
  for (StrategyKind kind :
       {StrategyKind::kTruthful, StrategyKind::kNoiseChasing,
        StrategyKind::kCase1, StrategyKind::kCase2,
        StrategyKind::kRandomAdaptive}) {
    if (StrategyKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view DeviationCaseName(DeviationCase deviation) {
  return deviation == DeviationCase::kPositiveMean ? "positive_mean"
                                                   : "negative_mean";
}

void ExperimentConfig::Validate() const {
  Require(replicas >= 1, "replicas must be >= 1");
  Require(threads >= 0, "threads must be >= 0");
  Require(true_price > 0.0 && std::isfinite(true_price),
          "true_price must be positive");
  Require(hidden_x >= 0.0 && hidden_y >= 0.0,
          "hidden account balances must be >= 0");
  Require(trading_fee >= 0.0 && trading_fee < 1.0,
          "trading_fee must lie in [0, 1)");
  Require(std::isfinite(fee.value) && fee.value >= 0.0,
          "fee_policy value must be finite and >= 0");
  Require(std::isfinite(noise_bias), "noise_bias must be finite");
  for (double p : price_grid) {
    Require(p > 0.0 && std::isfinite(p), "price_grid entries must be positive");
  }
  try {
    privacy.Validate();
    const TradingCurve built = curve.Build();
    Require(built.Contains(initial_x), "initial_x outside the curve domain");
  } catch (const Error& error) {
    if (error.code() == ErrorCode::kConfig) throw;
    throw Error(ErrorCode::kConfig, error.what());
  }
  switch (strategy.kind) {
    case StrategyKind::kNoiseChasing:
      Require(strategy.max_rounds >= 1, "strategy.max_rounds must be >= 1");
      break;
    case StrategyKind::kCase1:
    case StrategyKind::kCase2:
      Require(privacy.Contains(strategy.delta),
              "strategy.delta must lie inside the masking interval");
      break;
    case StrategyKind::kRandomAdaptive:
      Require(strategy.bound >= 0, "strategy.bound must be >= 0");
      break;
    case StrategyKind::kTruthful:
      break;
  }
}

MarketState ExperimentConfig::InitialState() const {
  MarketRules rules;
  if (noise_bias != 0.0) rules.noise = BiasedNoiseModel(noise_bias);
  rules.fee = fee;
  rules.trading_fee = trading_fee;
  return MarketState(curve.Build(), initial_x, hidden_x, hidden_y,
                     std::move(rules));
}

StrategyTrace RunReplica(const ExperimentConfig& config, std::uint64_t replica) {
  MarketState state = config.InitialState();
  Rng rng = Rng::ForStream(config.seed, replica);
  const StrategyConfig& strategy = config.strategy;
  switch (strategy.kind) {
    case StrategyKind::kTruthful:
      return TruthfulStrategy(state, config.true_price);
    case StrategyKind::kNoiseChasing:
      return NoiseChasingStrategy(state, config.true_price, config.privacy,
                                  strategy.max_rounds, rng);
    case StrategyKind::kCase1:
      return Case1Deviation(state, config.true_price, strategy.delta,
                            config.privacy, rng);
    case StrategyKind::kCase2:
      return Case2Deviation(state, config.true_price, strategy.push_price,
                            strategy.delta, config.privacy, rng);
    case StrategyKind::kRandomAdaptive:
      return RunAdaptive(MakeRandomPolicy(strategy.policy_seed), state,
                         config.true_price, strategy.bound, rng);
  }
  return {};
}

ExcessEstimate Summarize(std::vector<double> samples) {
  ExcessEstimate estimate;
  const std::size_t n = samples.size();
  estimate.replicas = static_cast<int>(n);
  if (n == 0) return estimate;
  estimate.mean = PairwiseSum(samples) / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> squares(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = samples[i] - estimate.mean;
      squares[i] = d * d;
    }
    const double variance = PairwiseSum(squares) / static_cast<double>(n - 1);
    estimate.std_error = std::sqrt(variance / static_cast<double>(n));
  }
  estimate.ci99_lower = estimate.mean - kZ99 * estimate.std_error;
  estimate.ci99_upper = estimate.mean + kZ99 * estimate.std_error;
  estimate.excess = std::move(samples);
  return estimate;
}

ExcessEstimate EstimateExcessProfit(const ExperimentConfig& config) {
  config.Validate();
  const TradingCurve curve = config.curve.Build();
  const double truthful =
      TruthfulProfit(curve, config.initial_x, config.true_price);
  const auto n = static_cast<std::size_t>(config.replicas);
  std::vector<double> excess(n);
  std::vector<char> rejected(n, 0);
  ParallelFor(n, config.threads, [&](std::size_t i) {
    const StrategyTrace trace = RunReplica(config, i);
    excess[i] = trace.total_profit - truthful;
    rejected[i] = trace.stop_reason == StopReason::kRejected;
  });
  ExcessEstimate estimate = Summarize(std::move(excess));
  estimate.truthful_profit = truthful;
  estimate.rejected =
      static_cast<int>(std::count(rejected.begin(), rejected.end(), 1));
  return estimate;
}

WitnessSearch SearchDeviationWitness(DeviationCase deviation,
                                     const ExperimentConfig& config) {
  const double bias = config.noise_bias;
  if (deviation == DeviationCase::kPositiveMean) {
    Require(bias >= 0.0, "positive-mean case needs noise_bias >= 0");
  } else {
    Require(bias <= 0.0, "negative-mean case needs noise_bias <= 0");
  }
  const TradingCurve curve = config.curve.Build();
  const double spot = curve.SpotPrice(config.initial_x);
  const std::vector<double> grid =
      config.price_grid.empty() ? DefaultPriceGrid() : config.price_grid;

  struct Point {
    double true_price;
    std::optional<double> push_price;
  };
  std::vector<Point> points;
  if (deviation == DeviationCase::kPositiveMean) {
    for (double p : grid) {
      if (p > spot) points.push_back({p, std::nullopt});
    }
  } else {
    double ceiling = spot;
    if (bias != 0.0) ceiling = std::min(ceiling, 1.0 / std::fabs(bias));
    std::vector<double> truths;
    std::vector<double> pushes;
    for (double p : grid) {
      if (p < ceiling) truths.push_back(p);
      if (p > spot) pushes.push_back(p);
    }
    std::sort(truths.rbegin(), truths.rend());
    std::sort(pushes.begin(), pushes.end());
    for (double truth : truths) {
      for (double push : pushes) points.push_back({truth, push});
    }
  }

  WitnessSearch search;
  search.points_total = static_cast<int>(points.size());
  if (points.empty()) return search;
  const boost::math::normal standard_normal;
  search.z = boost::math::quantile(standard_normal,
                                   1.0 - 0.01 / static_cast<double>(points.size()));

  ExperimentConfig point_config = config;
  point_config.strategy.kind = deviation == DeviationCase::kPositiveMean
                                   ? StrategyKind::kCase1
                                   : StrategyKind::kCase2;
  for (const Point& point : points) {
    point_config.true_price = point.true_price;
    if (point.push_price) point_config.strategy.push_price = *point.push_price;
    ++search.points_scanned;
    ExcessEstimate estimate;
    try {
      estimate = EstimateExcessProfit(point_config);
    } catch (const Error& error) {
      if (error.code() != ErrorCode::kDomain &&
          error.code() != ErrorCode::kTradeRejected) {
        throw;
      }
      ++search.points_unsupported;
      continue;
    }
    if (estimate.rejected > 0) {
      ++search.points_unsupported;
      continue;
    }
    const double lower = estimate.mean - search.z * estimate.std_error;
    if (lower > 0.0) {
      search.found = true;
      search.true_price = point.true_price;
      search.push_price = point.push_price;
      search.mean_excess = estimate.mean;
      search.lower_bound = lower;
      return search;
    }
  }
  return search;
}

std::vector<ScalingRow> LiquidityScalingStudy(
    double base_level, const std::vector<double>& multipliers, double price,
    double delta, const PrivacySpec& spec) {
  const NoiseDistribution noise = BinaryMechanism(delta, spec);
  std::vector<ScalingRow> rows;
  for (double multiplier : multipliers) {
    const TradingCurve curve =
        TradingCurve::ConstantProduct(base_level * multiplier);
    ScalingRow row;
    row.multiplier = multiplier;
    row.level = curve.level();
    row.reserve_x = curve.XOfPrice(price);
    row.gamma = NoiseFee(curve, row.reserve_x, delta, noise).gamma;
    row.liquidity = *curve.Liquidity(price);
    row.gamma_times_liquidity = row.gamma * std::fabs(row.liquidity);
    rows.push_back(row);
  }
  return rows;
}

double MaxProductDeviation(const std::vector<ScalingRow>& rows) {
  if (rows.empty()) return 0.0;
  const double base = rows.front().gamma_times_liquidity;
  double worst = 0.0;
  for (const ScalingRow& row : rows) {
    worst = std::max(worst, std::fabs(row.gamma_times_liquidity - base) / base);
  }
  return worst;
}

void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& fn) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ncfmm
