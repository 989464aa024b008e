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

#ifndef QBUS_STATE_H
#define QBUS_STATE_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "qbus/kernels.h"
#include "qbus/permutation.h"

namespace qbus {

/// Cap on the total number of amplitudes of any simulated state.
inline constexpr size_t kDefaultMaxAmplitudes = size_t{1} << 20;

/// Tolerance for norm and fidelity checks on permutation-built circuits.
inline constexpr double kExactTolerance = 1e-12;
/// Tolerance for unitarity of user-supplied tables.
inline constexpr double kUnitaryTolerance = 1e-10;

/// Seeded generator used for every random draw in a run. Owned per run.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {
    }
    double uniform();
    double normal();

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Dense pure state of a register of subsystems. Basis index is row-major
/// in `dims` (first subsystem most significant). Protocol code keeps the bus
/// as the last subsystem.
class StateVector {
   public:
    /// Normalizes. Throws std::invalid_argument on a length mismatch, a zero
    /// vector, a dimension < 2, or more than kDefaultMaxAmplitudes amplitudes.
    StateVector(std::vector<size_t> dims, std::vector<Amplitude> amplitudes);

    static StateVector basis(std::vector<size_t> dims, size_t index);
    /// Equal-weight superposition with all-positive amplitudes.
    static StateVector uniform(std::vector<size_t> dims);

    const std::vector<size_t> &dims() const noexcept {
        return dims_;
    }
    std::span<const Amplitude> amplitudes() const noexcept {
        return amplitudes_;
    }
    size_t size() const noexcept {
        return amplitudes_.size();
    }
    const Amplitude &operator[](size_t index) const {
        return amplitudes_[index];
    }
    size_t subsystem_count() const noexcept {
        return dims_.size();
    }
    /// Product of the dimensions before / after `subsystem`.
    size_t outer_size(size_t subsystem) const;
    size_t inner_size(size_t subsystem) const;
    double norm_squared() const;

   private:
    std::vector<size_t> dims_;
    std::vector<Amplitude> amplitudes_;
};

StateVector make_state(std::vector<size_t> dims, std::vector<Amplitude> amplitudes);
/// Complex-Gaussian amplitudes, normalized. Same seed -> same amplitudes.
StateVector random_state(std::vector<size_t> dims, uint64_t seed);
StateVector tensor(const StateVector &a, const StateVector &b);

/// C = sum_i |i><i| (x) U_i with control `control` and the bus as the last
/// subsystem; U_i is the permutation operator of set[i].
StateVector apply_conditional(
    const StateVector &state, size_t control, const OperatorSet &set,
    kernels::Execution exec = kernels::Execution::parallel);

enum class Basis { computational, conjugate };

struct MeasurementRecord {
    size_t subsystem = 0;
    Basis basis = Basis::computational;
    size_t outcome = 0;
    double probability = 0;
};

/// The conjugate-basis ket for outcome a: (1/sqrt d) sum_s w^(a s) |s>,
/// w = exp(2 pi i / d).
std::vector<Amplitude> conjugate_ket(size_t d, size_t a);

/// Probability of each outcome when measuring `subsystem` in `basis`.
std::vector<double> outcome_probabilities(const StateVector &state, size_t subsystem, Basis basis);

/// Measures and removes `subsystem`, returning the renormalized rest.
/// The forced overload selects the branch and throws std::invalid_argument
/// when it has zero probability.
std::pair<MeasurementRecord, StateVector> measure(
    const StateVector &state, size_t subsystem, Basis basis, size_t forced_outcome);
std::pair<MeasurementRecord, StateVector> measure(
    const StateVector &state, size_t subsystem, Basis basis, Rng &rng);

/// Generalized Pauli X^power: |s> -> |s + power mod d>.
struct ShiftPower {
    int64_t power = 1;
};
/// Generalized Pauli Z^power: |s> -> w^(power s) |s>.
struct PhasePower {
    int64_t power = 1;
};
/// Explicit d x d matrix, row-major.
struct UnitaryTable {
    std::vector<Amplitude> entries;
};
using LocalOp = std::variant<ShiftPower, PhasePower, Permutation, UnitaryTable>;

/// Throws std::invalid_argument for a dimension mismatch or a table whose
/// columns are not orthonormal within kUnitaryTolerance.
StateVector apply_local(const StateVector &state, size_t subsystem, const LocalOp &op);

/// Permutes the whole register by `perm` then multiplies amplitude r by phases[r].
StateVector permute_register(
    const StateVector &state, const Permutation &perm, std::span<const Amplitude> phases,
    kernels::Execution exec = kernels::Execution::parallel);

double fidelity(const StateVector &a, const StateVector &b);

/// Tr(rho^2) of the reduced state of one subsystem.
double reduced_purity(const StateVector &state, size_t subsystem);

/// The two-register reading (s mod d, floor(s / d)) of a bus label on d^2 levels.
std::pair<size_t, size_t> bus_register_pair(size_t s, size_t d);
size_t bus_label_from_pair(size_t first, size_t second, size_t d);

}  // namespace qbus

#endif
