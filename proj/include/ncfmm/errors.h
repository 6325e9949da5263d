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

#ifndef NCFMM_ERRORS_H_
#define NCFMM_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncfmm {

enum class ErrorCode {
  kDomain,
  kNoSolution,
  kSpecViolation,
  kInvalidDistribution,
  kInfeasibleBias,
  kMisalignedSupport,
  kShape,
  kNotZeroMean,
  kTradeRejected,
  kInfeasible,
  kConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported with this exception; callers branch on
// code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain:
      return "domain error";
    case ErrorCode::kNoSolution:
      return "no solution";
    case ErrorCode::kSpecViolation:
      return "spec violation";
    case ErrorCode::kInvalidDistribution:
      return "invalid distribution";
    case ErrorCode::kInfeasibleBias:
      return "infeasible bias";
    case ErrorCode::kMisalignedSupport:
      return "misaligned support";
    case ErrorCode::kShape:
      return "shape error";
    case ErrorCode::kNotZeroMean:
      return "not zero-mean";
    case ErrorCode::kTradeRejected:
      return "trade rejected";
    case ErrorCode::kInfeasible:
      return "infeasible";
    case ErrorCode::kConfig:
      return "config error";
  }
  return "error";
}

}  // namespace ncfmm

#endif  // NCFMM_ERRORS_H_
