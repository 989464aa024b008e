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

#include "qbus/protocol.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

namespace qbus {

namespace {

Amplitude phase(int64_t power, size_t d) {
    int64_t dd = static_cast<int64_t>(d);
    int64_t k = ((power % dd) + dd) % dd;
    return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
}

// Correction phases indexed by the output basis label.
std::vector<Amplitude> correction_phases(const Correction &correction, size_t d) {
    const size_t dim = correction.permutation.size();
    const size_t m = correction.phase_powers.size();
    Permutation frame_inverse = correction.frame.inverse();
    std::vector<Amplitude> phases(dim);
    for (size_t r = 0; r < dim; r++) {
        auto digits = combination_digits(frame_inverse(r), d, m);
        int64_t power = 0;
        for (size_t j = 0; j < m; j++) {
            power += correction.phase_powers[j] * static_cast<int64_t>(digits[j]);
        }
        phases[r] = phase(power, d);
    }
    return phases;
}

std::vector<int64_t> phase_powers_for(std::span<const size_t> phase_outcomes) {
    return std::vector<int64_t>(phase_outcomes.begin(), phase_outcomes.end());
}

}  // namespace

Correction derive_feedforward(
    const PreMeasurementMatrix &matrix, uint32_t bus_outcome, std::span<const size_t> phase_outcomes) {
    return derive_feedforward(matrix, bus_outcome, phase_outcomes, FeedForwardMode::restore);
}

Correction derive_feedforward(
    const PreMeasurementMatrix &matrix, uint32_t bus_outcome, std::span<const size_t> phase_outcomes,
    FeedForwardMode mode) {
    if (phase_outcomes.size() != matrix.m()) {
        throw std::invalid_argument("derive_feedforward: need one phase outcome per subsystem");
    }
    for (size_t a : phase_outcomes) {
        if (a >= matrix.d()) {
            throw std::invalid_argument("derive_feedforward: phase outcome out of range");
        }
    }
    Permutation sigma = outcome_permutation(matrix, bus_outcome);
    if (mode == FeedForwardMode::restore) {
        return Correction{sigma.inverse(), phase_powers_for(phase_outcomes), Permutation::identity(sigma.size())};
    }
    LocalSplit split = strip_local_factor(sigma, matrix.d(), matrix.m());
    return Correction{split.local.inverse(), phase_powers_for(phase_outcomes), split.residual};
}

StateVector apply_correction(const StateVector &state, const Correction &correction, size_t d, kernels::Execution exec) {
    auto phases = correction_phases(correction, d);
    return permute_register(state, correction.permutation, phases, exec);
}

std::string target_gate_label(const Permutation &gate) {
    return gate.is_identity() ? "identity" : format_cycles(gate);
}

namespace {

struct Chooser {
    Rng *rng = nullptr;
    const ForcedPolicy *forced = nullptr;
};

std::pair<MeasurementRecord, StateVector> take(
    const StateVector &state, size_t subsystem, Basis basis, Chooser chooser, size_t forced_outcome) {
    if (chooser.rng) {
        return measure(state, subsystem, basis, *chooser.rng);
    }
    return measure(state, subsystem, basis, forced_outcome);
}

void check_input(const StateVector &input, const InteractionSpec &spec) {
    if (input.subsystem_count() != spec.m()) {
        throw std::invalid_argument("input must have one subsystem per interaction set");
    }
    for (size_t dim : input.dims()) {
        if (dim != spec.d()) {
            throw std::invalid_argument("input subsystem dimension does not match the spec");
        }
    }
}

ProtocolTrace run_branch(
    Direction direction, const StateVector &input, const InteractionSpec &spec, const PreMeasurementMatrix &matrix,
    Chooser chooser, const RunOptions &options) {
    const size_t d = spec.d();
    const size_t m = spec.m();
    const size_t dim = spec.bus_dim();
    const std::vector<size_t> qudits(m, d);
    StateVector bus = StateVector::basis({dim}, 0);
    std::vector<MeasurementRecord> records;
    std::vector<size_t> alice_outcomes;
    size_t forced_bus = chooser.forced ? chooser.forced->bus_outcome : 0;
    auto forced_alice = [&](size_t j) { return chooser.forced ? chooser.forced->alice_outcomes[j] : 0; };

    StateVector bob_register = StateVector::uniform(qudits);
    std::optional<MeasurementRecord> bus_record;
    if (direction == Direction::transfer) {
        StateVector joint = tensor(input, bus);
        for (size_t j = 0; j < m; j++) {
            joint = apply_conditional(joint, j, spec.alice()[j], options.exec);
        }
        for (size_t j = 0; j < m; j++) {
            auto [record, rest] = take(joint, 0, Basis::conjugate, chooser, forced_alice(j));
            record.subsystem = j;
            records.push_back(record);
            alice_outcomes.push_back(record.outcome);
            joint = std::move(rest);
        }
        joint = tensor(bob_register, joint);
        for (size_t j = 0; j < m; j++) {
            joint = apply_conditional(joint, j, spec.bob()[j], options.exec);
        }
        auto [record, rest] = take(joint, m, Basis::computational, chooser, forced_bus);
        bus_record = record;
        bob_register = std::move(rest);
    } else {
        StateVector joint = tensor(bob_register, bus);
        for (size_t j = 0; j < m; j++) {
            joint = apply_conditional(joint, j, spec.bob()[j], options.exec);
        }
        // Subsystems: Alice's m, Bob's m, bus.
        joint = tensor(input, joint);
        for (size_t j = 0; j < m; j++) {
            joint = apply_conditional(joint, j, spec.alice()[j], options.exec);
        }
        for (size_t j = 0; j < m; j++) {
            auto [record, rest] = take(joint, 0, Basis::conjugate, chooser, forced_alice(j));
            record.subsystem = j;
            records.push_back(record);
            alice_outcomes.push_back(record.outcome);
            joint = std::move(rest);
        }
        auto [record, rest] = take(joint, m, Basis::computational, chooser, forced_bus);
        bus_record = record;
        bob_register = std::move(rest);
    }
    bus_record->subsystem = 2 * m;
    records.push_back(*bus_record);
    const auto bus_outcome = static_cast<uint32_t>(bus_record->outcome);

    Permutation sigma = outcome_permutation(matrix, bus_outcome);
    Correction correction = derive_feedforward(matrix, bus_outcome, alice_outcomes, options.mode);
    StateVector output = apply_correction(bob_register, correction, d, options.exec);
    std::vector<Amplitude> ones(dim, Amplitude(1));
    StateVector expected = permute_register(input, correction.frame, ones, options.exec);
    double probability = 1;
    for (const auto &r : records) {
        probability *= r.probability;
    }
    bool local = local_factors(sigma, d, m).has_value();
    Permutation gate = correction.frame;
    return ProtocolTrace{
        .direction = direction,
        .records = std::move(records),
        .alice_outcomes = std::move(alice_outcomes),
        .bus_outcome = bus_outcome,
        .outcome_permutation = std::move(sigma),
        .correction = std::move(correction),
        .target_gate = std::move(gate),
        .outcome_kind = local ? OutcomeKind::local : OutcomeKind::entangling,
        .probability = probability,
        .fidelity = fidelity(expected, output),
        .output = std::move(output),
    };
}

}  // namespace

std::vector<ProtocolTrace> run_protocol(
    Direction direction, const StateVector &input, const InteractionSpec &spec, const OutcomePolicy &policy,
    const RunOptions &options) {
    check_input(input, spec);
    const PreMeasurementMatrix matrix = premeasurement_matrix(spec, direction);
    if (const auto *sample = std::get_if<SamplePolicy>(&policy)) {
        Rng rng(sample->seed);
        return {run_branch(direction, input, spec, matrix, Chooser{&rng, nullptr}, options)};
    }
    if (const auto *forced = std::get_if<ForcedPolicy>(&policy)) {
        if (forced->alice_outcomes.size() != spec.m()) {
            throw std::invalid_argument("forced outcomes need one Alice outcome per subsystem");
        }
        for (size_t a : forced->alice_outcomes) {
            if (a >= spec.d()) {
                throw std::invalid_argument("forced Alice outcome out of range");
            }
        }
        if (forced->bus_outcome >= spec.bus_dim()) {
            throw std::invalid_argument("forced bus outcome out of range");
        }
        return {run_branch(direction, input, spec, matrix, Chooser{nullptr, forced}, options)};
    }

    const size_t alice_count = checked_pow(spec.d(), spec.m(), kDefaultMaxBusSize);
    const size_t total = alice_count * spec.bus_dim();
    std::vector<std::optional<ProtocolTrace>> slots(total);
    RunOptions inner = options;
    inner.exec = kernels::Execution::serial;
    auto one = [&](size_t k) {
        ForcedPolicy branch{combination_digits(k / spec.bus_dim(), spec.d(), spec.m()),
                            static_cast<uint32_t>(k % spec.bus_dim())};
        slots[k] = run_branch(direction, input, spec, matrix, Chooser{nullptr, &branch}, inner);
    };
    const auto n = static_cast<std::ptrdiff_t>(total);
    if (options.exec == kernels::Execution::parallel) {
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t k = 0; k < n; k++) {
            try {
                one(static_cast<size_t>(k));
            } catch (...) {
#pragma omp critical
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    } else {
        for (std::ptrdiff_t k = 0; k < n; k++) {
            one(static_cast<size_t>(k));
        }
    }
    std::vector<ProtocolTrace> traces;
    traces.reserve(total);
    for (auto &slot : slots) {
        traces.push_back(std::move(*slot));
    }
    return traces;
}

std::vector<ProtocolTrace> run_transfer(
    const StateVector &input, const InteractionSpec &spec, const OutcomePolicy &policy, const RunOptions &options) {
    return run_protocol(Direction::transfer, input, spec, policy, options);
}

std::vector<ProtocolTrace> run_teleport(
    const StateVector &input, const InteractionSpec &spec, const OutcomePolicy &policy, const RunOptions &options) {
    return run_protocol(Direction::teleport, input, spec, policy, options);
}

ProtocolTrace run_sampled(
    Direction direction, const StateVector &input, const InteractionSpec &spec, Rng &rng, const RunOptions &options) {
    check_input(input, spec);
    return run_branch(direction, input, spec, premeasurement_matrix(spec, direction), Chooser{&rng, nullptr}, options);
}

double RepeatStatistics::mean_rounds() const {
    if (rounds.empty()) {
        return 0;
    }
    return static_cast<double>(std::accumulate(rounds.begin(), rounds.end(), size_t{0})) /
           static_cast<double>(rounds.size());
}

RepeatStatistics repeat_until_entangled(const InteractionSpec &spec, uint64_t seed, size_t max_rounds, size_t trials) {
    if (classify_mapping(premeasurement_matrix(spec)).kind == MappingKind::local) {
        throw std::invalid_argument("repeat_until_entangled: the spec's mapping is local, no branch entangles");
    }
    if (max_rounds == 0) {
        throw std::invalid_argument("repeat_until_entangled: max_rounds must be positive");
    }
    RepeatStatistics stats;
    Rng rng(seed);
    RunOptions options{FeedForwardMode::local, kernels::Execution::serial};
    const std::vector<size_t> dims(spec.m(), spec.d());
    for (size_t t = 0; t < trials; t++) {
        StateVector state = random_state(dims, seed + 1 + t);
        size_t round = 0;
        bool done = false;
        while (round < max_rounds && !done) {
            round++;
            ProtocolTrace trace = run_sampled(Direction::transfer, state, spec, rng, options);
            stats.min_fidelity = std::min(stats.min_fidelity, trace.fidelity);
            done = trace.outcome_kind == OutcomeKind::entangling;
            state = std::move(trace.output);
        }
        stats.rounds.push_back(round);
        stats.success.push_back(done);
    }
    return stats;
}

}  // namespace qbus
