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

#ifndef QBUS_MAPPING_H
#define QBUS_MAPPING_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbus/interaction.h"
#include "qbus/kernels.h"
#include "qbus/permutation.h"

namespace qbus {

/// D x D table of bus labels just before the bus measurement. Row r is
/// Bob's composite basis index, column c Alice's; entry[r][c] is the bus
/// label that accompanies amplitude x_c in Bob's branch r.
class PreMeasurementMatrix {
   public:
    /// Throws std::invalid_argument when the entry count is not (d^m)^2 or
    /// an entry is not a bus label.
    PreMeasurementMatrix(size_t d, size_t m, std::vector<uint32_t> entries);

    size_t d() const noexcept {
        return d_;
    }
    size_t m() const noexcept {
        return m_;
    }
    size_t dim() const noexcept {
        return dim_;
    }
    uint32_t at(size_t row, size_t col) const {
        return entries_[row * dim_ + col];
    }
    std::span<const uint32_t> row(size_t r) const {
        return std::span<const uint32_t>(entries_).subspan(r * dim_, dim_);
    }
    std::span<const uint32_t> entries() const noexcept {
        return entries_;
    }
    bool is_latin() const;

    bool operator==(const PreMeasurementMatrix &other) const = default;

   private:
    size_t d_;
    size_t m_;
    size_t dim_;
    std::vector<uint32_t> entries_;
};

/// Thrown by operations that need a Latin pre-measurement matrix.
class NotLatinError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Symbolic construction with no validity check. Transfer:
/// entry[r][c] = B_r(A_c(0)); teleport: entry[r][c] = A_c(B_r(0)), where
/// A_c, B_r are the composite combinations in odometer order.
PreMeasurementMatrix build_premeasurement_matrix(
    std::span<const OperatorSet> alice, std::span<const OperatorSet> bob, Direction direction = Direction::transfer);

PreMeasurementMatrix premeasurement_matrix(const InteractionSpec &spec, Direction direction = Direction::transfer);

/// sigma with sigma(c) = r where entry[r][c] = label: the permutation Bob's
/// register undergoes for this bus outcome. Throws NotLatinError.
Permutation outcome_permutation(const PreMeasurementMatrix &matrix, uint32_t label);

/// a_1 (x) ... (x) a_m acting on composite labels (first factor most significant).
Permutation tensor_permutation(std::span<const Permutation> factors);

/// Factors p = a_1 (x) ... (x) a_m when possible.
std::optional<std::vector<Permutation>> local_factors(const Permutation &p, size_t d, size_t m);

struct LocalFactorPair {
    Permutation first;
    Permutation second;
};

/// p(i d + j) = a(i) d + b(j) for some a, b. Throws std::invalid_argument
/// unless p.size() == d^2.
std::optional<LocalFactorPair> is_locally_factorizable(const Permutation &p, size_t d);

/// The four block conditions on the d^2 x d^2 permutation matrix: one
/// nonzero per d x d block, all blocks distinct, distinct subcolumns along a
/// block-row, distinct subrows along a block-column.
bool satisfies_block_criteria(const Permutation &p, size_t d);

/// L * p is a CNOT (either control) for one of the four local permutation pairs L.
bool is_cnot_equivalent(const Permutation &p);

/// d >= 3: satisfies_block_criteria. d == 2: no permutation satisfies the block
/// criteria, so CNOT-equivalence is used instead.
bool is_maximally_entangling(const Permutation &p, size_t d);

/// sigma = local * residual, residual chosen with the most fixed points and
/// then the smallest map. residual is the identity iff sigma is local.
struct LocalSplit {
    std::vector<Permutation> factors;
    Permutation local;
    Permutation residual;
};
LocalSplit strip_local_factor(const Permutation &sigma, size_t d, size_t m);

enum class MappingKind { local, entangling, combined };
enum class OutcomeKind { local, entangling };

const char *mapping_kind_name(MappingKind kind);

struct MappingClass {
    MappingKind kind = MappingKind::local;
    std::vector<OutcomeKind> per_outcome;
    /// Every outcome permutation is maximally entangling (m = 2 only).
    bool maximal = false;
};

/// Throws NotLatinError.
MappingClass classify_mapping(const PreMeasurementMatrix &matrix);

/// Plain: rows newline-separated, entries space-separated. Pretty: lambda
/// labels with the d-block ruling.
std::string render_matrix(const PreMeasurementMatrix &matrix, bool pretty = false);

enum class SearchFamily { pairwise_cyclic, hv_products, shift_powers, exhaustive };
enum class Objective { any_valid, local, entangling, combined, maximal };

struct SearchOptions {
    size_t d = 2;
    SearchFamily family = SearchFamily::pairwise_cyclic;
    Objective objective = Objective::any_valid;
    /// Cap on set-pair validity checks plus spec classifications.
    uint64_t budget = 20'000'000;
    kernels::Execution exec = kernels::Execution::parallel;
};

struct SearchHit {
    std::vector<OperatorSet> alice;
    std::vector<OperatorSet> bob;
    MappingClass mapping;
};

struct SearchResult {
    std::vector<SearchHit> hits;
    /// Valid (set, set) families found on one side.
    size_t valid_families = 0;
    /// Alice/Bob family pairs classified.
    uint64_t specs_classified = 0;
    bool budget_exceeded = false;
};

/// Operators a family draws set members from (identity excluded).
std::vector<Permutation> family_pool(size_t d, SearchFamily family);

/// Enumerates two-subsystem Alice/Bob set families drawn from the pool,
/// keeps the valid ones, classifies every Alice/Bob pairing and returns the
/// ones matching the objective. Order: Alice family, then Bob family, each in
/// lexicographic order of member indices into the pool.
SearchResult search_sets(const SearchOptions &options);

bool matches_objective(const MappingClass &mapping, Objective objective);

}  // namespace qbus

#endif
