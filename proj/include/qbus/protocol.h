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

#ifndef QBUS_PROTOCOL_H
#define QBUS_PROTOCOL_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qbus/interaction.h"
#include "qbus/kernels.h"
#include "qbus/mapping.h"
#include "qbus/state.h"

namespace qbus {

/// Feed-forward applied by Bob. Bob's register is permuted by `permutation`,
/// then basis label r is multiplied by w^{sum_j phase_powers[j] * c_j} where
/// (c_1..c_m) are the digits of frame^{-1}(r). `frame` is the gate left on
/// the register after correction (identity when the input is restored).
struct Correction {
    Permutation permutation;
    std::vector<int64_t> phase_powers;
    Permutation frame;
};

enum class FeedForwardMode {
    /// Undo only the locally factorizable part of the outcome permutation.
    local,
    /// Undo the whole outcome permutation; the target is always the identity.
    restore,
};

/// Full inverse of the outcome permutation for `bus_outcome`, phases undoing
/// Alice's conjugate outcomes. Throws NotLatinError.
Correction derive_feedforward(
    const PreMeasurementMatrix &matrix, uint32_t bus_outcome, std::span<const size_t> phase_outcomes);

/// Correction for the given mode: restore gives derive_feedforward, local
/// gives the inverse local factor with frame = residual gate.
Correction derive_feedforward(
    const PreMeasurementMatrix &matrix, uint32_t bus_outcome, std::span<const size_t> phase_outcomes,
    FeedForwardMode mode);

StateVector apply_correction(
    const StateVector &state, const Correction &correction, size_t d,
    kernels::Execution exec = kernels::Execution::parallel);

struct ProtocolTrace {
    Direction direction = Direction::transfer;
    std::vector<MeasurementRecord> records;
    std::vector<size_t> alice_outcomes;
    uint32_t bus_outcome = 0;
    Permutation outcome_permutation;
    Correction correction;
    /// Gate realized on the input: identity, or the residual entangling permutation.
    Permutation target_gate;
    OutcomeKind outcome_kind = OutcomeKind::local;
    double probability = 0;
    double fidelity = 0;
    StateVector output;
};

/// "identity" or the cycle notation of the gate.
std::string target_gate_label(const Permutation &gate);

struct SamplePolicy {
    uint64_t seed = 0;
};
struct ForcedPolicy {
    std::vector<size_t> alice_outcomes;
    uint32_t bus_outcome = 0;
};
struct EnumerateAllPolicy {};
using OutcomePolicy = std::variant<SamplePolicy, ForcedPolicy, EnumerateAllPolicy>;

struct RunOptions {
    FeedForwardMode mode = FeedForwardMode::local;
    kernels::Execution exec = kernels::Execution::parallel;
};

/// Transfer: Alice couples her m qudits to a bus in |0>, measures them in the
/// conjugate basis; Bob couples m blanks, measures the bus, corrects.
/// Sample and forced policies return one trace; enumerate_all returns d^m x D
/// traces ordered by Alice's outcomes (odometer), then bus outcome.
/// Throws std::invalid_argument on shape errors or zero-probability forced outcomes.
std::vector<ProtocolTrace> run_transfer(
    const StateVector &input, const InteractionSpec &spec, const OutcomePolicy &policy, const RunOptions &options = {});

/// Teleport: Bob couples his blanks to the bus first; Alice couples her
/// input, then measures her qudits and the bus.
std::vector<ProtocolTrace> run_teleport(
    const StateVector &input, const InteractionSpec &spec, const OutcomePolicy &policy, const RunOptions &options = {});

std::vector<ProtocolTrace> run_protocol(
    Direction direction, const StateVector &input, const InteractionSpec &spec, const OutcomePolicy &policy,
    const RunOptions &options = {});

/// One sampled branch drawing from a caller-owned generator.
ProtocolTrace run_sampled(
    Direction direction, const StateVector &input, const InteractionSpec &spec, Rng &rng,
    const RunOptions &options = {});

struct RepeatStatistics {
    std::vector<size_t> rounds;
    std::vector<bool> success;
    /// Smallest fidelity seen in any round of any trial.
    double min_fidelity = 1;
    double mean_rounds() const;
};

/// Transfers a random input repeatedly, feeding each locally corrected
/// output back in, until an entangling branch occurs or max_rounds is hit.
/// Throws std::invalid_argument when the spec's mapping is local.
RepeatStatistics repeat_until_entangled(
    const InteractionSpec &spec, uint64_t seed, size_t max_rounds, size_t trials);

}  // namespace qbus

#endif
