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

#ifndef QBUS_PERMUTATION_H
#define QBUS_PERMUTATION_H

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qbus {

/// Largest bus dimension D accepted by the set builders.
inline constexpr size_t kDefaultMaxBusSize = size_t{1} << 16;

/// Default upper bound on n for enumerate_derangements.
inline constexpr unsigned kDefaultDerangementLimit = 9;

/// A bijection on the bus labels {0, ..., D-1}. Stored as its action map,
/// map[s] = p(s). The matching operator is P = sum_s |p(s)><s|.
///
/// Labels are zero-based. Cycle strings written with one-based labels (as is
/// common in the literature) parse fine but then act on D+1 labels with 0
/// left fixed.
class Permutation {
   public:
    /// Throws std::invalid_argument unless `map` is a bijection on
    /// {0, ..., map.size()-1}.
    explicit Permutation(std::vector<uint32_t> map);

    static Permutation identity(size_t size);
    /// The single D-cycle (0, 1, ..., D-1), i.e. the generalized Pauli X on D levels.
    static Permutation full_cycle(size_t size);

    size_t size() const noexcept {
        return map_.size();
    }
    uint32_t operator()(size_t s) const {
        return map_[s];
    }
    std::span<const uint32_t> map() const noexcept {
        return map_;
    }

    Permutation inverse() const;
    /// p^k for any integer k; negative powers use the inverse.
    Permutation pow(int64_t k) const;
    bool is_identity() const noexcept;
    size_t fixed_point_count() const noexcept;

    bool operator==(const Permutation &other) const = default;
    /// Lexicographic on the action map (shorter maps first).
    std::strong_ordering operator<=>(const Permutation &other) const;

   private:
    std::vector<uint32_t> map_;
};

/// compose(p, q)(s) = p(q(s)): the right factor acts first, so that the
/// operator product PQ matches the permutation product.
Permutation compose(const Permutation &p, const Permutation &q);
inline Permutation operator*(const Permutation &p, const Permutation &q) {
    return compose(p, q);
}

/// Parses cycle notation such as "(1,2,3)(4,5)". Grammar:
///   text  := cycle*
///   cycle := "(" int ("," int)+ ")"
///   int   := decimal non-negative integer
/// ASCII whitespace is allowed between tokens. Labels not mentioned are fixed.
/// Throws std::invalid_argument on malformed text, labels >= size, or
/// repeated labels.
Permutation parse_cycles(std::string_view text, size_t size);

/// Canonical cycle notation: each cycle starts at its smallest element,
/// cycles ordered by that element, fixed points omitted. Identity -> "".
std::string format_cycles(const Permutation &p);

bool is_derangement(const Permutation &p) noexcept;

/// Tr(P Q^dagger) for permutation operators: the number of labels where p and
/// q agree.
size_t hs_inner(const Permutation &p, const Permutation &q);

/// The d operators controlled by one subsystem, members[i] acting on the bus
/// when the subsystem is in |i>. members[0] is always the identity.
class OperatorSet {
   public:
    /// Throws std::invalid_argument if the member count is not d >= 2,
    /// sizes differ, or members[0] is not the identity.
    explicit OperatorSet(std::vector<Permutation> members);

    size_t subsystem_dim() const noexcept {
        return members_.size();
    }
    size_t bus_dim() const noexcept {
        return members_.front().size();
    }
    const Permutation &operator[](size_t i) const {
        return members_[i];
    }
    std::span<const Permutation> members() const noexcept {
        return members_;
    }

    /// The set with every member replaced by its inverse (same order).
    OperatorSet inverted() const;

    bool operator==(const OperatorSet &other) const = default;

   private:
    std::vector<Permutation> members_;
};

/// Composite (odometer) index of a member choice, first subsystem most significant.
size_t combination_index(std::span<const size_t> choice, size_t d);
std::vector<size_t> combination_digits(size_t index, size_t d, size_t m);

/// P^{(m)}_{k_m} ... P^{(1)}_{k_1}: set 0 acts on the bus first.
Permutation combination(std::span<const OperatorSet> sets, std::span<const size_t> choice);

/// All d^m combinations in odometer order.
std::vector<Permutation> all_combinations(std::span<const OperatorSet> sets);

struct ValidityReport {
    bool valid = false;
    /// First pair of distinct combination indices (odometer order) whose
    /// composites agree on some label.
    std::optional<std::pair<size_t, size_t>> violating_pair;
    /// fixed_point_counts[a][b] = hs_inner(combination a, combination b).
    std::vector<std::vector<size_t>> fixed_point_counts;
};

/// Checks the Hilbert-Schmidt orthogonality requirement on all ordered
/// combinations (one member per set). Throws std::invalid_argument when the
/// sets do not match the declared (d, m).
ValidityReport validate_interaction_sets(std::span<const OperatorSet> sets, size_t d, size_t m);

/// Row cycle h and column cycle v on a d x d lattice of D = d^2 labels.
Permutation hv_row_cycle(size_t d);
Permutation hv_column_cycle(size_t d);

/// ({H^k}, {V^l}) for k, l = 0..d-1.
std::pair<OperatorSet, OperatorSet> build_hv_sets(size_t d);

/// Set j (zero-based) holds X^(k d^j), k = 0..d-1, with X the D-cycle, D = d^m.
/// Throws std::invalid_argument when D exceeds max_bus_size.
std::vector<OperatorSet> build_shift_sets(size_t d, size_t m, size_t max_bus_size = kDefaultMaxBusSize);

/// Subfactorial !n, exact. Throws std::overflow_error for n > 20.
uint64_t derangement_count(unsigned n);

/// All derangements of n labels in lexicographic order of their maps.
/// Throws std::invalid_argument when n > limit.
std::vector<Permutation> enumerate_derangements(unsigned n, unsigned limit = kDefaultDerangementLimit);

/// Integer power with overflow check; throws std::invalid_argument.
size_t checked_pow(size_t base, size_t exponent, size_t max_value);

}  // namespace qbus

#endif
