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

#include "qbus/interaction.h"

namespace qbus {

const char *direction_name(Direction direction) {
    return direction == Direction::transfer ? "transfer" : "teleport";
}

namespace {

void require_valid(const std::vector<OperatorSet> &sets, size_t d, size_t m, const char *side) {
    auto report = validate_interaction_sets(sets, d, m);
    if (!report.valid) {
        std::string what = std::string(side) + " sets violate the orthogonality requirement";
        if (report.violating_pair) {
            what += " (combinations " + std::to_string(report.violating_pair->first) + " and " +
                    std::to_string(report.violating_pair->second) + " overlap)";
        }
        throw InvalidSpecError(what, std::move(report));
    }
}

}  // namespace

InteractionSpec::InteractionSpec(size_t d, size_t m, std::vector<OperatorSet> alice, std::vector<OperatorSet> bob)
    : d_(d), m_(m), bus_dim_(0), alice_(std::move(alice)), bob_(std::move(bob)) {
    if (d < 2 || m < 1) {
        throw std::invalid_argument("interaction spec needs d >= 2 and m >= 1");
    }
    bus_dim_ = checked_pow(d, m, kDefaultMaxBusSize);
    require_valid(alice_, d, m, "Alice's");
    require_valid(bob_, d, m, "Bob's");
}

std::vector<OperatorSet> inverse_ordered(const std::vector<OperatorSet> &sets) {
    std::vector<OperatorSet> out;
    out.reserve(sets.size());
    for (const auto &set : sets) {
        out.push_back(set.inverted());
    }
    return out;
}

}  // namespace qbus
