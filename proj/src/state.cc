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

#include "qbus/state.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qbus {

namespace {

size_t product(std::span<const size_t> dims) {
    size_t n = 1;
    for (size_t d : dims) {
        if (d != 0 && n > kDefaultMaxAmplitudes / d) {
            throw std::invalid_argument("state exceeds the amplitude cap");
        }
        n *= d;
    }
    return n;
}

void check_subsystem(const StateVector &state, size_t subsystem) {
    if (subsystem >= state.subsystem_count()) {
        throw std::invalid_argument("subsystem index " + std::to_string(subsystem) + " out of range");
    }
}

int64_t mod(int64_t a, int64_t d) {
    int64_t r = a % d;
    return r < 0 ? r + d : r;
}

Amplitude root_of_unity(int64_t power, size_t d) {
    double angle = 2 * std::numbers::pi * static_cast<double>(mod(power, static_cast<int64_t>(d))) /
                   static_cast<double>(d);
    return std::polar(1.0, angle);
}

}  // namespace

double Rng::uniform() {
    // 53 random mantissa bits in [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    return normal_(engine_);
}

StateVector::StateVector(std::vector<size_t> dims, std::vector<Amplitude> amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    for (size_t d : dims_) {
        if (d < 2) {
            throw std::invalid_argument("subsystem dimensions must be >= 2");
        }
    }
    if (product(dims_) != amplitudes_.size()) {
        throw std::invalid_argument(
            "amplitude count " + std::to_string(amplitudes_.size()) + " does not match dims product " +
            std::to_string(product(dims_)));
    }
    double n2 = norm_squared();
    if (!(n2 > 0) || !std::isfinite(n2)) {
        throw std::invalid_argument("state has zero or non-finite norm");
    }
    double scale = 1 / std::sqrt(n2);
    for (auto &a : amplitudes_) {
        a *= scale;
    }
}

StateVector StateVector::basis(std::vector<size_t> dims, size_t index) {
    size_t n = product(dims);
    if (index >= n) {
        throw std::invalid_argument("basis index out of range");
    }
    std::vector<Amplitude> amps(n);
    amps[index] = 1;
    return StateVector(std::move(dims), std::move(amps));
}

StateVector StateVector::uniform(std::vector<size_t> dims) {
    size_t n = product(dims);
    return StateVector(std::move(dims), std::vector<Amplitude>(n, Amplitude(1)));
}

size_t StateVector::outer_size(size_t subsystem) const {
    size_t n = 1;
    for (size_t j = 0; j < subsystem; j++) {
        n *= dims_[j];
    }
    return n;
}

size_t StateVector::inner_size(size_t subsystem) const {
    size_t n = 1;
    for (size_t j = subsystem + 1; j < dims_.size(); j++) {
        n *= dims_[j];
    }
    return n;
}

double StateVector::norm_squared() const {
    double n = 0;
    for (const auto &a : amplitudes_) {
        n += std::norm(a);
    }
    return n;
}

StateVector make_state(std::vector<size_t> dims, std::vector<Amplitude> amplitudes) {
    return StateVector(std::move(dims), std::move(amplitudes));
}

StateVector random_state(std::vector<size_t> dims, uint64_t seed) {
    Rng rng(seed);
    std::vector<Amplitude> amps(product(dims));
    for (auto &a : amps) {
        double re = rng.normal();
        double im = rng.normal();
        a = Amplitude(re, im);
    }
    return StateVector(std::move(dims), std::move(amps));
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<size_t> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    std::vector<Amplitude> amps(a.size() * b.size());
    for (size_t i = 0; i < a.size(); i++) {
        for (size_t j = 0; j < b.size(); j++) {
            amps[i * b.size() + j] = a[i] * b[j];
        }
    }
    return StateVector(std::move(dims), std::move(amps));
}

StateVector apply_conditional(
    const StateVector &state, size_t control, const OperatorSet &set, kernels::Execution exec) {
    check_subsystem(state, control);
    size_t bus_index = state.subsystem_count() - 1;
    if (control == bus_index) {
        throw std::invalid_argument("apply_conditional: the bus cannot control itself");
    }
    if (state.dims()[control] != set.subsystem_dim()) {
        throw std::invalid_argument("apply_conditional: control dimension does not match the operator set");
    }
    size_t bus = state.dims()[bus_index];
    if (bus != set.bus_dim()) {
        throw std::invalid_argument("apply_conditional: bus dimension does not match the operator set");
    }
    std::vector<uint32_t> maps;
    maps.reserve(set.subsystem_dim() * bus);
    for (const auto &p : set.members()) {
        maps.insert(maps.end(), p.map().begin(), p.map().end());
    }
    kernels::ConditionalShape shape{
        state.outer_size(control), state.dims()[control], state.inner_size(control) / bus, bus};
    std::vector<Amplitude> out(state.size());
    if (exec == kernels::Execution::parallel && kernels::choose(state.size()) == kernels::Execution::parallel) {
        kernels::conditional_permute_omp(state.amplitudes(), out, shape, maps);
    } else {
        kernels::conditional_permute_serial(state.amplitudes(), out, shape, maps);
    }
    return StateVector(state.dims(), std::move(out));
}

std::vector<Amplitude> conjugate_ket(size_t d, size_t a) {
    std::vector<Amplitude> ket(d);
    double scale = 1 / std::sqrt(static_cast<double>(d));
    for (size_t s = 0; s < d; s++) {
        ket[s] = scale * root_of_unity(static_cast<int64_t>(a * s), d);
    }
    return ket;
}

namespace {

std::vector<Amplitude> bra_for(Basis basis, size_t d, size_t outcome) {
    std::vector<Amplitude> bra(d);
    if (basis == Basis::computational) {
        bra[outcome] = 1;
    } else {
        auto ket = conjugate_ket(d, outcome);
        for (size_t s = 0; s < d; s++) {
            bra[s] = std::conj(ket[s]);
        }
    }
    return bra;
}

std::vector<Amplitude> project(const StateVector &state, size_t subsystem, Basis basis, size_t outcome) {
    size_t d = state.dims()[subsystem];
    auto bra = bra_for(basis, d, outcome);
    kernels::ProjectShape shape{state.outer_size(subsystem), d, state.inner_size(subsystem)};
    std::vector<Amplitude> out(shape.outer * shape.inner);
    if (kernels::choose(state.size()) == kernels::Execution::parallel) {
        kernels::project_omp(state.amplitudes(), out, shape, bra);
    } else {
        kernels::project_serial(state.amplitudes(), out, shape, bra);
    }
    return out;
}

double norm_squared(std::span<const Amplitude> v) {
    double n = 0;
    for (const auto &a : v) {
        n += std::norm(a);
    }
    return n;
}

std::vector<size_t> dims_without(const std::vector<size_t> &dims, size_t subsystem) {
    std::vector<size_t> rest = dims;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(subsystem));
    return rest;
}

// Probabilities below this are treated as impossible branches.
constexpr double kZeroProbability = 1e-24;

std::pair<MeasurementRecord, StateVector> collapse(
    const StateVector &state, size_t subsystem, Basis basis, size_t outcome) {
    auto projected = project(state, subsystem, basis, outcome);
    double p = norm_squared(projected);
    if (p <= kZeroProbability) {
        throw std::invalid_argument("measurement outcome " + std::to_string(outcome) + " has zero probability");
    }
    MeasurementRecord record{subsystem, basis, outcome, p};
    return {record, StateVector(dims_without(state.dims(), subsystem), std::move(projected))};
}

}  // namespace

std::vector<double> outcome_probabilities(const StateVector &state, size_t subsystem, Basis basis) {
    check_subsystem(state, subsystem);
    size_t d = state.dims()[subsystem];
    std::vector<double> probs(d);
    for (size_t a = 0; a < d; a++) {
        probs[a] = norm_squared(project(state, subsystem, basis, a));
    }
    return probs;
}

std::pair<MeasurementRecord, StateVector> measure(
    const StateVector &state, size_t subsystem, Basis basis, size_t forced_outcome) {
    check_subsystem(state, subsystem);
    if (forced_outcome >= state.dims()[subsystem]) {
        throw std::invalid_argument("forced outcome out of range");
    }
    return collapse(state, subsystem, basis, forced_outcome);
}

std::pair<MeasurementRecord, StateVector> measure(const StateVector &state, size_t subsystem, Basis basis, Rng &rng) {
    auto probs = outcome_probabilities(state, subsystem, basis);
    double u = rng.uniform() * std::accumulate(probs.begin(), probs.end(), 0.0);
    size_t chosen = probs.size();
    double cumulative = 0;
    for (size_t a = 0; a < probs.size(); a++) {
        if (probs[a] <= kZeroProbability) {
            continue;
        }
        chosen = a;
        cumulative += probs[a];
        if (u < cumulative) {
            break;
        }
    }
    return collapse(state, subsystem, basis, chosen);
}

StateVector apply_local(const StateVector &state, size_t subsystem, const LocalOp &op) {
    check_subsystem(state, subsystem);
    size_t d = state.dims()[subsystem];
    std::vector<Amplitude> matrix(d * d);
    if (const auto *shift = std::get_if<ShiftPower>(&op)) {
        for (size_t s = 0; s < d; s++) {
            size_t t = static_cast<size_t>(mod(static_cast<int64_t>(s) + shift->power, static_cast<int64_t>(d)));
            matrix[t * d + s] = 1;
        }
    } else if (const auto *phase = std::get_if<PhasePower>(&op)) {
        for (size_t s = 0; s < d; s++) {
            matrix[s * d + s] = root_of_unity(phase->power * static_cast<int64_t>(s), d);
        }
    } else if (const auto *perm = std::get_if<Permutation>(&op)) {
        if (perm->size() != d) {
            throw std::invalid_argument("apply_local: permutation size does not match the subsystem");
        }
        for (size_t s = 0; s < d; s++) {
            matrix[(*perm)(s) * d + s] = 1;
        }
    } else {
        const auto &table = std::get<UnitaryTable>(op);
        if (table.entries.size() != d * d) {
            throw std::invalid_argument("apply_local: unitary table has the wrong size");
        }
        for (size_t a = 0; a < d; a++) {
            for (size_t b = 0; b < d; b++) {
                Amplitude dot = 0;
                for (size_t r = 0; r < d; r++) {
                    dot += std::conj(table.entries[r * d + a]) * table.entries[r * d + b];
                }
                if (std::abs(dot - Amplitude(a == b ? 1.0 : 0.0)) > kUnitaryTolerance) {
                    throw std::invalid_argument("apply_local: table is not unitary");
                }
            }
        }
        matrix = table.entries;
    }
    kernels::ProjectShape shape{state.outer_size(subsystem), d, state.inner_size(subsystem)};
    std::vector<Amplitude> out(state.size());
    if (kernels::choose(state.size()) == kernels::Execution::parallel) {
        kernels::apply_matrix_omp(state.amplitudes(), out, shape, matrix);
    } else {
        kernels::apply_matrix_serial(state.amplitudes(), out, shape, matrix);
    }
    return StateVector(state.dims(), std::move(out));
}

StateVector permute_register(
    const StateVector &state, const Permutation &perm, std::span<const Amplitude> phases, kernels::Execution exec) {
    if (perm.size() != state.size() || phases.size() != state.size()) {
        throw std::invalid_argument("permute_register: size mismatch");
    }
    std::vector<Amplitude> out(state.size());
    if (exec == kernels::Execution::parallel && kernels::choose(state.size()) == kernels::Execution::parallel) {
        kernels::permute_then_phase_omp(state.amplitudes(), out, perm.map(), phases);
    } else {
        kernels::permute_then_phase_serial(state.amplitudes(), out, perm.map(), phases);
    }
    return StateVector(state.dims(), std::move(out));
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.dims() != b.dims()) {
        throw std::invalid_argument("fidelity: dims mismatch");
    }
    Amplitude overlap = 0;
    for (size_t i = 0; i < a.size(); i++) {
        overlap += std::conj(a[i]) * b[i];
    }
    return std::norm(overlap);
}

double reduced_purity(const StateVector &state, size_t subsystem) {
    check_subsystem(state, subsystem);
    size_t d = state.dims()[subsystem];
    size_t outer = state.outer_size(subsystem);
    size_t inner = state.inner_size(subsystem);
    std::vector<Amplitude> rho(d * d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            Amplitude acc = 0;
            for (size_t o = 0; o < outer; o++) {
                for (size_t r = 0; r < inner; r++) {
                    acc += state[(o * d + i) * inner + r] * std::conj(state[(o * d + j) * inner + r]);
                }
            }
            rho[i * d + j] = acc;
        }
    }
    double purity = 0;
    for (const auto &x : rho) {
        purity += std::norm(x);
    }
    return purity;
}

std::pair<size_t, size_t> bus_register_pair(size_t s, size_t d) {
    return {s % d, s / d};
}

size_t bus_label_from_pair(size_t first, size_t second, size_t d) {
    return second * d + first;
}

}  // namespace qbus
