// Copyright 2026 The qbus Authors
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

#ifndef QBUS_TOOLS_CLI_H
#define QBUS_TOOLS_CLI_H

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qbus/permutation.h"
#include "qbus/state.h"

namespace qbus::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFidelity = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// One operator token: q1..q3 / r1..r3 (d = 2), y<n><m> (= V^n H^m), x, h, v,
/// each with an optional ^k power, or explicit cycle notation.
Permutation parse_operator(std::string_view token, size_t d, size_t m);

/// A family name (hv, hv-inverse, shift, shift-inverse) or operator tokens.
/// Sets are separated by ';'; without ';' the comma-separated tokens are
/// grouped d-1 per set. The identity member is implicit.
std::vector<OperatorSet> parse_set_spec(std::string_view text, size_t d, size_t m);

/// random (uses seed), uniform, basis:K, or JSON: an array of reals, an array
/// of [re, im] pairs, or {"amplitudes": [...]}.
StateVector parse_input(std::string_view text, size_t d, size_t m, uint64_t seed);

/// Runs the tool on argv-style arguments (without the program name). Records
/// go to `out` (or the --out file); errors are a JSON object on `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qbus::cli

#endif
