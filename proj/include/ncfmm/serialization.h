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

#ifndef NCFMM_SERIALIZATION_H_
#define NCFMM_SERIALIZATION_H_

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ncfmm/curve.h"
#include "ncfmm/fee.h"
#include "ncfmm/harness.h"
#include "ncfmm/lp_noise.h"
#include "ncfmm/market.h"
#include "ncfmm/privacy.h"
#include "ncfmm/strategies.h"

namespace ncfmm {

using Json = nlohmann::ordered_json;

// JSON has no infinity: epsilon = inf is written as the string "inf".
Json EpsilonToJson(double epsilon);
double EpsilonFromJson(const Json& value);

// Throws kConfig naming the first key of `object` not in `allowed`.
void RejectUnknownFields(const Json& object,
                         std::initializer_list<std::string_view> allowed,
                         std::string_view context);

// {"tau": [l, u], "epsilon": e}
Json ToJson(const PrivacySpec& spec);
PrivacySpec PrivacySpecFromJson(const Json& json);

// [{"eta": ..., "p": ...}, ...]
Json ToJson(const NoiseDistribution& distribution);
NoiseDistribution NoiseDistributionFromJson(const Json& json);

Json ToJson(const FeeQuote& quote);
FeeQuote FeeQuoteFromJson(const Json& json);

// {"family": ..., "level": ..., "r": ..., "domain": [lo, hi]}
Json ToJson(const CurveConfig& curve);
CurveConfig CurveConfigFromJson(const Json& json);

Json ToJson(const FeePolicy& policy);
FeePolicy FeePolicyFromJson(const Json& json);

Json ToJson(const StrategyConfig& strategy);
StrategyConfig StrategyConfigFromJson(const Json& json);

Json ToJson(const ExperimentConfig& config);
// Strict: unknown fields anywhere in the document are rejected. `extra`
// lists additional top-level keys the caller handles itself.
ExperimentConfig ExperimentConfigFromJson(
    const Json& json, std::initializer_list<std::string_view> extra = {});

Json ToJson(const ExcessEstimate& estimate);
Json ToJson(const WitnessSearch& search);
Json ToJson(const ScalingRow& row);
Json ToJson(const LpNoiseSolution& solution);
Json ToJson(const TradeRecord& record);

// Columns: seq,delta,l,u,epsilon,y_out,gamma,eta,pre_x,post_x
void WriteTradeLogCsv(std::ostream& out, std::span<const TradeRecord> log);
// One JSON object per line.
void WriteTradeLogJsonLines(std::ostream& out,
                            std::span<const TradeRecord> log);

// Shortest round-trip decimal representation.
std::string FormatDouble(double value);

}  // namespace ncfmm

#endif  // NCFMM_SERIALIZATION_H_
