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

#ifndef QBUS_INTERACTION_H
#define QBUS_INTERACTION_H

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbus/permutation.h"

namespace qbus {

enum class Direction { transfer, teleport };

const char *direction_name(Direction direction);

/// Raised when a set family fails the orthogonality requirement.
class InvalidSpecError : public std::invalid_argument {
   public:
    InvalidSpecError(const std::string &what, ValidityReport report)
        : std::invalid_argument(what), report_(std::move(report)) {
    }
    const ValidityReport &report() const noexcept {
        return report_;
    }

   private:
    ValidityReport report_;
};

/// Alice's and Bob's conditional-permutation sets for m subsystems of
/// dimension d over a bus of D = d^m levels. Set j couples subsystem j;
/// subsystem 0 couples first on both sides.
class InteractionSpec {
   public:
    /// Throws InvalidSpecError when either family fails
    /// validate_interaction_sets, std::invalid_argument on shape errors.
    InteractionSpec(size_t d, size_t m, std::vector<OperatorSet> alice, std::vector<OperatorSet> bob);

    size_t d() const noexcept {
        return d_;
    }
    size_t m() const noexcept {
        return m_;
    }
    size_t bus_dim() const noexcept {
        return bus_dim_;
    }
    const std::vector<OperatorSet> &alice() const noexcept {
        return alice_;
    }
    const std::vector<OperatorSet> &bob() const noexcept {
        return bob_;
    }

   private:
    size_t d_;
    size_t m_;
    size_t bus_dim_;
    std::vector<OperatorSet> alice_;
    std::vector<OperatorSet> bob_;
};

/// Bob's sets ordered as member-wise inverses of `sets` (the H/V and shift
/// "inverse" choices).
std::vector<OperatorSet> inverse_ordered(const std::vector<OperatorSet> &sets);

}  // namespace qbus

#endif
