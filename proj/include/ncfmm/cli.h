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

#ifndef NCFMM_CLI_H_
#define NCFMM_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ncfmm {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitUsage = 2;

// Runs the command line `args` (without the program name). Documents go to
// --out when given, otherwise to `out`; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Three significant figures in mantissa-exponent form, e.g. "1.67e-2".
std::string FormatDisplay(double value);

}  // namespace ncfmm

#endif  // NCFMM_CLI_H_
