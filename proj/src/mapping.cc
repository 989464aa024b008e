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

#include "qbus/mapping.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qbus {

PreMeasurementMatrix::PreMeasurementMatrix(size_t d, size_t m, std::vector<uint32_t> entries)
    : d_(d), m_(m), dim_(checked_pow(d, m, kDefaultMaxBusSize)), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
        throw std::invalid_argument("pre-measurement matrix must have (d^m)^2 entries");
    }
    for (uint32_t e : entries_) {
        if (e >= dim_) {
            throw std::invalid_argument("pre-measurement matrix entry is not a bus label");
        }
    }
}

bool PreMeasurementMatrix::is_latin() const {
    std::vector<uint8_t> seen(dim_);
    for (size_t r = 0; r < dim_; r++) {
        std::fill(seen.begin(), seen.end(), 0);
        for (size_t c = 0; c < dim_; c++) {
            if (seen[at(r, c)]++) {
                return false;
            }
        }
    }
    for (size_t c = 0; c < dim_; c++) {
        std::fill(seen.begin(), seen.end(), 0);
        for (size_t r = 0; r < dim_; r++) {
            if (seen[at(r, c)]++) {
                return false;
            }
        }
    }
    return true;
}

PreMeasurementMatrix build_premeasurement_matrix(
    std::span<const OperatorSet> alice, std::span<const OperatorSet> bob, Direction direction) {
    if (alice.empty() || alice.size() != bob.size()) {
        throw std::invalid_argument("pre-measurement matrix needs the same number of Alice and Bob sets");
    }
    size_t d = alice.front().subsystem_dim();
    size_t m = alice.size();
    auto a = all_combinations(alice);
    auto b = all_combinations(bob);
    size_t dim = a.size();
    if (b.size() != dim || a.front().size() != dim || b.front().size() != dim) {
        throw std::invalid_argument("pre-measurement matrix: bus dimension must equal d^m");
    }
    std::vector<uint32_t> entries(dim * dim);
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            entries[r * dim + c] = direction == Direction::transfer ? b[r](a[c](0)) : a[c](b[r](0));
        }
    }
    return PreMeasurementMatrix(d, m, std::move(entries));
}

PreMeasurementMatrix premeasurement_matrix(const InteractionSpec &spec, Direction direction) {
    return build_premeasurement_matrix(spec.alice(), spec.bob(), direction);
}

Permutation outcome_permutation(const PreMeasurementMatrix &matrix, uint32_t label) {
    if (!matrix.is_latin()) {
        throw NotLatinError("pre-measurement matrix is not a Latin square");
    }
    if (label >= matrix.dim()) {
        throw std::invalid_argument("bus label out of range");
    }
    std::vector<uint32_t> sigma(matrix.dim());
    for (size_t r = 0; r < matrix.dim(); r++) {
        for (size_t c = 0; c < matrix.dim(); c++) {
            if (matrix.at(r, c) == label) {
                sigma[c] = static_cast<uint32_t>(r);
            }
        }
    }
    return Permutation(std::move(sigma));
}

Permutation tensor_permutation(std::span<const Permutation> factors) {
    if (factors.empty()) {
        throw std::invalid_argument("tensor_permutation: no factors");
    }
    size_t d = factors.front().size();
    size_t m = factors.size();
    size_t dim = checked_pow(d, m, kDefaultMaxBusSize);
    std::vector<uint32_t> map(dim);
    for (size_t c = 0; c < dim; c++) {
        auto digits = combination_digits(c, d, m);
        for (size_t j = 0; j < m; j++) {
            digits[j] = factors[j](digits[j]);
        }
        map[c] = static_cast<uint32_t>(combination_index(digits, d));
    }
    return Permutation(std::move(map));
}

std::optional<std::vector<Permutation>> local_factors(const Permutation &p, size_t d, size_t m) {
    size_t dim = checked_pow(d, m, kDefaultMaxBusSize);
    if (p.size() != dim) {
        throw std::invalid_argument("local_factors: permutation size is not d^m");
    }
    // Read factor j off the line where every other digit is 0.
    std::vector<Permutation> factors;
    for (size_t j = 0; j < m; j++) {
        size_t stride = checked_pow(d, m - 1 - j, dim);
        std::vector<uint32_t> map(d);
        std::vector<bool> seen(d, false);
        for (size_t x = 0; x < d; x++) {
            auto digits = combination_digits(p(x * stride), d, m);
            map[x] = static_cast<uint32_t>(digits[j]);
            if (seen[map[x]]) {
                return std::nullopt;
            }
            seen[map[x]] = true;
        }
        factors.emplace_back(std::move(map));
    }
    if (tensor_permutation(factors) != p) {
        return std::nullopt;
    }
    return factors;
}

std::optional<LocalFactorPair> is_locally_factorizable(const Permutation &p, size_t d) {
    if (d < 2 || p.size() != d * d) {
        throw std::invalid_argument("is_locally_factorizable: size must be d^2");
    }
    auto factors = local_factors(p, d, 2);
    if (!factors) {
        return std::nullopt;
    }
    return LocalFactorPair{(*factors)[0], (*factors)[1]};
}

bool satisfies_block_criteria(const Permutation &p, size_t d) {
    if (d < 2 || p.size() != d * d) {
        throw std::invalid_argument("satisfies_block_criteria: size must be d^2");
    }
    const size_t blocks = d * d;
    // Nonzero entries sit at (row p(c), column c).
    std::vector<int> sub_row(blocks, -1);
    std::vector<int> sub_col(blocks, -1);
    for (size_t c = 0; c < p.size(); c++) {
        size_t r = p(c);
        size_t block = (r / d) * d + c / d;
        if (sub_row[block] != -1) {
            return false;
        }
        sub_row[block] = static_cast<int>(r % d);
        sub_col[block] = static_cast<int>(c % d);
    }
    for (size_t b = 0; b < blocks; b++) {
        if (sub_row[b] == -1) {
            return false;
        }
    }
    for (size_t a = 0; a < blocks; a++) {
        for (size_t b = a + 1; b < blocks; b++) {
            if (sub_row[a] == sub_row[b] && sub_col[a] == sub_col[b]) {
                return false;
            }
        }
    }
    std::vector<bool> seen(d);
    for (size_t block_row = 0; block_row < d; block_row++) {
        std::fill(seen.begin(), seen.end(), false);
        for (size_t block_col = 0; block_col < d; block_col++) {
            int sc = sub_col[block_row * d + block_col];
            if (seen[static_cast<size_t>(sc)]) {
                return false;
            }
            seen[static_cast<size_t>(sc)] = true;
        }
    }
    for (size_t block_col = 0; block_col < d; block_col++) {
        std::fill(seen.begin(), seen.end(), false);
        for (size_t block_row = 0; block_row < d; block_row++) {
            int sr = sub_row[block_row * d + block_col];
            if (seen[static_cast<size_t>(sr)]) {
                return false;
            }
            seen[static_cast<size_t>(sr)] = true;
        }
    }
    return true;
}

bool is_cnot_equivalent(const Permutation &p) {
    if (p.size() != 4) {
        throw std::invalid_argument("is_cnot_equivalent: needs a two-qubit permutation");
    }
    static const Permutation cnot_first(std::vector<uint32_t>{0, 1, 3, 2});
    static const Permutation cnot_second(std::vector<uint32_t>{0, 3, 2, 1});
    const Permutation x = Permutation::full_cycle(2);
    const Permutation e = Permutation::identity(2);
    for (const auto &a : {e, x}) {
        for (const auto &b : {e, x}) {
            std::vector<Permutation> pair{a, b};
            Permutation candidate = compose(tensor_permutation(pair), p);
            if (candidate == cnot_first || candidate == cnot_second) {
                return true;
            }
        }
    }
    return false;
}

bool is_maximally_entangling(const Permutation &p, size_t d) {
    if (d == 2) {
        if (p.size() != 4) {
            throw std::invalid_argument("is_maximally_entangling: size must be d^2");
        }
        return is_cnot_equivalent(p);
    }
    return satisfies_block_criteria(p, d);
}

namespace {

std::vector<Permutation> all_permutations(size_t n) {
    std::vector<Permutation> out;
    std::vector<uint32_t> map(n);
    std::iota(map.begin(), map.end(), 0u);
    do {
        out.emplace_back(map);
    } while (std::next_permutation(map.begin(), map.end()));
    return out;
}

}  // namespace

LocalSplit strip_local_factor(const Permutation &sigma, size_t d, size_t m) {
    if (auto factors = local_factors(sigma, d, m)) {
        return LocalSplit{*factors, sigma, Permutation::identity(sigma.size())};
    }
    auto singles = all_permutations(d);
    size_t count = checked_pow(singles.size(), m, size_t{1} << 24);
    std::optional<LocalSplit> best;
    std::vector<Permutation> factors(m, Permutation::identity(d));
    for (size_t code = 0; code < count; code++) {
        auto digits = combination_digits(code, singles.size(), m);
        for (size_t j = 0; j < m; j++) {
            factors[j] = singles[digits[j]];
        }
        Permutation local = tensor_permutation(factors);
        Permutation residual = compose(local.inverse(), sigma);
        if (!best || residual.fixed_point_count() > best->residual.fixed_point_count() ||
            (residual.fixed_point_count() == best->residual.fixed_point_count() && residual < best->residual)) {
            best = LocalSplit{factors, local, residual};
        }
    }
    return *best;
}

const char *mapping_kind_name(MappingKind kind) {
    switch (kind) {
        case MappingKind::local:
            return "local";
        case MappingKind::entangling:
            return "entangling";
        case MappingKind::combined:
            return "combined";
    }
    return "unknown";
}

MappingClass classify_mapping(const PreMeasurementMatrix &matrix) {
    if (!matrix.is_latin()) {
        throw NotLatinError("pre-measurement matrix is not a Latin square");
    }
    MappingClass result;
    size_t local_count = 0;
    bool all_maximal = matrix.m() == 2;
    for (uint32_t label = 0; label < matrix.dim(); label++) {
        Permutation sigma = outcome_permutation(matrix, label);
        bool local = local_factors(sigma, matrix.d(), matrix.m()).has_value();
        result.per_outcome.push_back(local ? OutcomeKind::local : OutcomeKind::entangling);
        local_count += local;
        if (all_maximal) {
            all_maximal = is_maximally_entangling(sigma, matrix.d());
        }
    }
    if (local_count == matrix.dim()) {
        result.kind = MappingKind::local;
    } else if (local_count == 0) {
        result.kind = MappingKind::entangling;
    } else {
        result.kind = MappingKind::combined;
    }
    result.maximal = all_maximal;
    return result;
}

std::string render_matrix(const PreMeasurementMatrix &matrix, bool pretty) {
    std::ostringstream out;
    const size_t dim = matrix.dim();
    if (!pretty) {
        for (size_t r = 0; r < dim; r++) {
            for (size_t c = 0; c < dim; c++) {
                out << (c ? " " : "") << matrix.at(r, c);
            }
            out << '\n';
        }
        return out.str();
    }
    const size_t block = matrix.d();
    const size_t width = std::to_string(dim - 1).size();
    auto cell = [&](uint32_t label) {
        std::string s = std::to_string(label);
        return "λ" + s + std::string(width - s.size(), ' ');
    };
    const size_t cell_width = width + 1;
    const size_t group_width = block * cell_width + (block - 1);
    for (size_t r = 0; r < dim; r++) {
        if (r && r % block == 0) {
            for (size_t g = 0; g < dim / block; g++) {
                out << (g ? "-+-" : "") << std::string(group_width, '-');
            }
            out << '\n';
        }
        for (size_t c = 0; c < dim; c++) {
            if (c) {
                out << (c % block == 0 ? " | " : " ");
            }
            out << cell(matrix.at(r, c));
        }
        out << '\n';
    }
    return out.str();
}

std::vector<Permutation> family_pool(size_t d, SearchFamily family) {
    std::vector<Permutation> pool;
    const size_t dim = checked_pow(d, 2, kDefaultMaxBusSize);
    switch (family) {
        case SearchFamily::pairwise_cyclic:
            if (d != 2) {
                throw std::invalid_argument("pairwise+cyclic family is defined for d = 2 only");
            }
            return enumerate_derangements(4);
        case SearchFamily::exhaustive:
            return enumerate_derangements(static_cast<unsigned>(dim));
        case SearchFamily::hv_products: {
            Permutation h = hv_row_cycle(d);
            Permutation v = hv_column_cycle(d);
            for (size_t n = 0; n < d; n++) {
                for (size_t k = 0; k < d; k++) {
                    if (n || k) {
                        pool.push_back(compose(v.pow(static_cast<int64_t>(n)), h.pow(static_cast<int64_t>(k))));
                    }
                }
            }
            return pool;
        }
        case SearchFamily::shift_powers: {
            Permutation x = Permutation::full_cycle(dim);
            for (size_t k = 1; k < dim; k++) {
                pool.push_back(x.pow(static_cast<int64_t>(k)));
            }
            return pool;
        }
    }
    return pool;
}

bool matches_objective(const MappingClass &mapping, Objective objective) {
    switch (objective) {
        case Objective::any_valid:
            return true;
        case Objective::local:
            return mapping.kind == MappingKind::local;
        case Objective::entangling:
            return mapping.kind == MappingKind::entangling;
        case Objective::combined:
            return mapping.kind == MappingKind::combined;
        case Objective::maximal:
            return mapping.maximal;
    }
    return false;
}

namespace {

// Ordered tuples of `k` distinct pool indices, decoded from a flat index in
// lexicographic order.
struct TupleSpace {
    size_t n;
    size_t k;
    uint64_t count;

    TupleSpace(size_t n_, size_t k_) : n(n_), k(k_), count(1) {
        for (size_t i = 0; i < k; i++) {
            if (n < i + 1) {
                count = 0;
                return;
            }
            uint64_t factor = n - i;
            count = count > UINT64_MAX / factor ? UINT64_MAX : count * factor;
        }
    }

    std::vector<size_t> decode(uint64_t index) const {
        std::vector<size_t> radices(k);
        for (size_t i = 0; i < k; i++) {
            radices[i] = n - i;
        }
        std::vector<size_t> ranks(k);
        for (size_t i = k; i-- > 0;) {
            ranks[i] = static_cast<size_t>(index % radices[i]);
            index /= radices[i];
        }
        // Rank i selects among indices not yet used.
        std::vector<size_t> out(k);
        std::vector<bool> used(n, false);
        for (size_t i = 0; i < k; i++) {
            size_t r = ranks[i];
            for (size_t x = 0; x < n; x++) {
                if (used[x]) {
                    continue;
                }
                if (r == 0) {
                    out[i] = x;
                    used[x] = true;
                    break;
                }
                r--;
            }
        }
        return out;
    }
};

OperatorSet make_set(const std::vector<Permutation> &pool, const std::vector<size_t> &tuple) {
    std::vector<Permutation> members{Permutation::identity(pool.front().size())};
    for (size_t i : tuple) {
        members.push_back(pool[i]);
    }
    return OperatorSet(std::move(members));
}

// Every label must be sent to distinct images by the d^2 combinations.
bool family_is_valid(const Permutation &first_a, const Permutation &first_b, const std::vector<Permutation> &first,
                     const std::vector<Permutation> &second) {
    (void)first_a;
    (void)first_b;
    const size_t dim = first.front().size();
    std::vector<uint8_t> seen(dim);
    for (size_t s = 0; s < dim; s++) {
        std::fill(seen.begin(), seen.end(), 0);
        for (const auto &p : first) {
            uint32_t t = p(s);
            for (const auto &q : second) {
                if (seen[q(t)]++) {
                    return false;
                }
            }
        }
    }
    return true;
}

struct Family {
    std::vector<OperatorSet> sets;
};

}  // namespace

SearchResult search_sets(const SearchOptions &options) {
    const size_t d = options.d;
    if (d < 2) {
        throw std::invalid_argument("search_sets: d must be >= 2");
    }
    auto pool = family_pool(d, options.family);
    TupleSpace tuples(pool.size(), d - 1);
    SearchResult result;
    uint64_t budget = options.budget;

    // Phase 1: valid single-side families (set 0, set 1).
    uint64_t family_space =
        tuples.count > UINT64_MAX / std::max<uint64_t>(tuples.count, 1) ? UINT64_MAX : tuples.count * tuples.count;
    uint64_t checks = std::min(family_space, budget);
    if (checks < family_space) {
        result.budget_exceeded = true;
    }
    budget -= checks;
    const Permutation identity = Permutation::identity(pool.front().size());
    auto member_list = [&](const std::vector<size_t> &tuple) {
        std::vector<Permutation> members{identity};
        for (size_t i : tuple) {
            members.push_back(pool[i]);
        }
        return members;
    };
    std::vector<uint8_t> valid(checks, 0);
    const auto n_checks = static_cast<std::ptrdiff_t>(checks);
    if (options.exec == kernels::Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (std::ptrdiff_t f = 0; f < n_checks; f++) {
            auto first = member_list(tuples.decode(static_cast<uint64_t>(f) / tuples.count));
            auto second = member_list(tuples.decode(static_cast<uint64_t>(f) % tuples.count));
            valid[static_cast<size_t>(f)] = family_is_valid(identity, identity, first, second);
        }
    } else {
        for (std::ptrdiff_t f = 0; f < n_checks; f++) {
            auto first = member_list(tuples.decode(static_cast<uint64_t>(f) / tuples.count));
            auto second = member_list(tuples.decode(static_cast<uint64_t>(f) % tuples.count));
            valid[static_cast<size_t>(f)] = family_is_valid(identity, identity, first, second);
        }
    }
    std::vector<Family> families;
    for (uint64_t f = 0; f < checks; f++) {
        if (valid[f]) {
            families.push_back(Family{{make_set(pool, tuples.decode(f / tuples.count)),
                                       make_set(pool, tuples.decode(f % tuples.count))}});
        }
    }
    result.valid_families = families.size();

    // Phase 2: classify every Alice/Bob pairing, in order, up to the budget.
    const uint64_t pair_space = static_cast<uint64_t>(families.size()) * families.size();
    const uint64_t pairs = std::min(pair_space, budget);
    if (pairs < pair_space) {
        result.budget_exceeded = true;
    }
    result.specs_classified = pairs;
    std::vector<std::optional<MappingClass>> classes(pairs);
    const auto n_pairs = static_cast<std::ptrdiff_t>(pairs);
    auto classify_one = [&](std::ptrdiff_t k) {
        const auto &alice = families[static_cast<size_t>(k) / families.size()];
        const auto &bob = families[static_cast<size_t>(k) % families.size()];
        auto matrix = build_premeasurement_matrix(alice.sets, bob.sets);
        auto mapping = classify_mapping(matrix);
        if (matches_objective(mapping, options.objective)) {
            classes[static_cast<size_t>(k)] = std::move(mapping);
        }
    };
    if (options.exec == kernels::Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t k = 0; k < n_pairs; k++) {
            classify_one(k);
        }
    } else {
        for (std::ptrdiff_t k = 0; k < n_pairs; k++) {
            classify_one(k);
        }
    }
    for (uint64_t k = 0; k < pairs; k++) {
        if (classes[k]) {
            result.hits.push_back(SearchHit{
                families[k / families.size()].sets, families[k % families.size()].sets, std::move(*classes[k])});
        }
    }
    return result;
}

}  // namespace qbus
