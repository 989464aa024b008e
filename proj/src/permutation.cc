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

#include "qbus/permutation.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qbus {

Permutation::Permutation(std::vector<uint32_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (uint32_t v : map_) {
        if (v >= map_.size()) {
            throw std::invalid_argument("permutation image " + std::to_string(v) + " out of range");
        }
        if (seen[v]) {
            throw std::invalid_argument("permutation image " + std::to_string(v) + " repeated");
        }
        seen[v] = true;
    }
}

Permutation Permutation::identity(size_t size) {
    std::vector<uint32_t> map(size);
    std::iota(map.begin(), map.end(), 0u);
    return Permutation(std::move(map));
}

Permutation Permutation::full_cycle(size_t size) {
    std::vector<uint32_t> map(size);
    for (size_t s = 0; s < size; s++) {
        map[s] = static_cast<uint32_t>((s + 1) % size);
    }
    return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
    std::vector<uint32_t> inv(map_.size());
    for (size_t s = 0; s < map_.size(); s++) {
        inv[map_[s]] = static_cast<uint32_t>(s);
    }
    return Permutation(std::move(inv));
}

Permutation Permutation::pow(int64_t k) const {
    Permutation base = k < 0 ? inverse() : *this;
    uint64_t e = k < 0 ? static_cast<uint64_t>(-(k + 1)) + 1 : static_cast<uint64_t>(k);
    Permutation result = identity(size());
    while (e > 0) {
        if (e & 1) {
            result = compose(base, result);
        }
        base = compose(base, base);
        e >>= 1;
    }
    return result;
}

bool Permutation::is_identity() const noexcept {
    return fixed_point_count() == map_.size();
}

size_t Permutation::fixed_point_count() const noexcept {
    size_t n = 0;
    for (size_t s = 0; s < map_.size(); s++) {
        n += map_[s] == s;
    }
    return n;
}

std::strong_ordering Permutation::operator<=>(const Permutation &other) const {
    if (auto c = map_.size() <=> other.map_.size(); c != 0) {
        return c;
    }
    return std::lexicographical_compare_three_way(map_.begin(), map_.end(), other.map_.begin(), other.map_.end());
}

Permutation compose(const Permutation &p, const Permutation &q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("compose: size mismatch");
    }
    std::vector<uint32_t> map(p.size());
    for (size_t s = 0; s < map.size(); s++) {
        map[s] = p(q(s));
    }
    return Permutation(std::move(map));
}

namespace {

struct CycleLexer {
    std::string_view text;
    size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            pos++;
        }
    }
    bool done() {
        skip_space();
        return pos >= text.size();
    }
    [[noreturn]] void fail(const std::string &what) const {
        throw std::invalid_argument("cycle notation: " + what + " at offset " + std::to_string(pos));
    }
    void expect(char c) {
        skip_space();
        if (pos >= text.size() || text[pos] != c) {
            fail(std::string("expected '") + c + "'");
        }
        pos++;
    }
    bool peek(char c) {
        skip_space();
        return pos < text.size() && text[pos] == c;
    }
    uint64_t integer() {
        skip_space();
        size_t start = pos;
        uint64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + static_cast<uint64_t>(text[pos] - '0');
            if (v > UINT32_MAX) {
                fail("label too large");
            }
            pos++;
        }
        if (pos == start) {
            fail("expected a non-negative integer");
        }
        return v;
    }
};

}  // namespace

Permutation parse_cycles(std::string_view text, size_t size) {
    std::vector<uint32_t> map(size);
    std::iota(map.begin(), map.end(), 0u);
    std::vector<bool> used(size, false);
    CycleLexer lex{text};
    while (!lex.done()) {
        lex.expect('(');
        std::vector<uint32_t> cycle;
        while (true) {
            uint64_t v = lex.integer();
            if (v >= size) {
                throw std::invalid_argument(
                    "cycle notation: label " + std::to_string(v) + " out of range for size " + std::to_string(size));
            }
            if (used[v]) {
                throw std::invalid_argument("cycle notation: label " + std::to_string(v) + " repeated");
            }
            used[v] = true;
            cycle.push_back(static_cast<uint32_t>(v));
            if (lex.peek(',')) {
                lex.expect(',');
                continue;
            }
            lex.expect(')');
            break;
        }
        if (cycle.size() < 2) {
            lex.fail("single-element cycle");
        }
        for (size_t k = 0; k < cycle.size(); k++) {
            map[cycle[k]] = cycle[(k + 1) % cycle.size()];
        }
    }
    return Permutation(std::move(map));
}

std::string format_cycles(const Permutation &p) {
    std::string out;
    std::vector<bool> visited(p.size(), false);
    for (size_t start = 0; start < p.size(); start++) {
        if (visited[start] || p(start) == start) {
            continue;
        }
        out += '(';
        size_t s = start;
        bool first = true;
        do {
            if (!first) {
                out += ',';
            }
            first = false;
            out += std::to_string(s);
            visited[s] = true;
            s = p(s);
        } while (s != start);
        out += ')';
    }
    return out;
}

bool is_derangement(const Permutation &p) noexcept {
    return p.fixed_point_count() == 0;
}

size_t hs_inner(const Permutation &p, const Permutation &q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("hs_inner: size mismatch");
    }
    size_t n = 0;
    for (size_t s = 0; s < p.size(); s++) {
        n += p(s) == q(s);
    }
    return n;
}

OperatorSet::OperatorSet(std::vector<Permutation> members) : members_(std::move(members)) {
    if (members_.size() < 2) {
        throw std::invalid_argument("operator set needs at least 2 members");
    }
    for (const auto &p : members_) {
        if (p.size() != members_.front().size()) {
            throw std::invalid_argument("operator set members differ in size");
        }
    }
    if (!members_.front().is_identity()) {
        throw std::invalid_argument("operator set member 0 must be the identity");
    }
}

OperatorSet OperatorSet::inverted() const {
    std::vector<Permutation> inv;
    inv.reserve(members_.size());
    for (const auto &p : members_) {
        inv.push_back(p.inverse());
    }
    return OperatorSet(std::move(inv));
}

size_t combination_index(std::span<const size_t> choice, size_t d) {
    size_t index = 0;
    for (size_t k : choice) {
        index = index * d + k;
    }
    return index;
}

std::vector<size_t> combination_digits(size_t index, size_t d, size_t m) {
    std::vector<size_t> digits(m);
    for (size_t j = m; j-- > 0;) {
        digits[j] = index % d;
        index /= d;
    }
    return digits;
}

Permutation combination(std::span<const OperatorSet> sets, std::span<const size_t> choice) {
    if (sets.size() != choice.size() || sets.empty()) {
        throw std::invalid_argument("combination: need one choice per set");
    }
    Permutation result = Permutation::identity(sets.front().bus_dim());
    for (size_t j = 0; j < sets.size(); j++) {
        result = compose(sets[j][choice[j]], result);
    }
    return result;
}

std::vector<Permutation> all_combinations(std::span<const OperatorSet> sets) {
    if (sets.empty()) {
        throw std::invalid_argument("all_combinations: no sets");
    }
    size_t d = sets.front().subsystem_dim();
    size_t m = sets.size();
    size_t count = checked_pow(d, m, kDefaultMaxBusSize);
    std::vector<Permutation> out;
    out.reserve(count);
    for (size_t c = 0; c < count; c++) {
        auto digits = combination_digits(c, d, m);
        out.push_back(combination(sets, digits));
    }
    return out;
}

ValidityReport validate_interaction_sets(std::span<const OperatorSet> sets, size_t d, size_t m) {
    if (sets.size() != m) {
        throw std::invalid_argument(
            "validate_interaction_sets: expected " + std::to_string(m) + " sets, got " + std::to_string(sets.size()));
    }
    size_t bus = checked_pow(d, m, kDefaultMaxBusSize);
    for (const auto &set : sets) {
        if (set.subsystem_dim() != d || set.bus_dim() != bus) {
            throw std::invalid_argument("validate_interaction_sets: set does not match (d, m)");
        }
    }
    auto combos = all_combinations(sets);
    ValidityReport report;
    report.valid = true;
    report.fixed_point_counts.assign(combos.size(), std::vector<size_t>(combos.size()));
    for (size_t a = 0; a < combos.size(); a++) {
        for (size_t b = 0; b < combos.size(); b++) {
            size_t t = hs_inner(combos[a], combos[b]);
            report.fixed_point_counts[a][b] = t;
            bool ok = a == b ? t == bus : t == 0;
            if (!ok && report.valid) {
                report.valid = false;
                report.violating_pair = std::make_pair(a, b);
            }
        }
    }
    return report;
}

Permutation hv_row_cycle(size_t d) {
    std::vector<uint32_t> map(d * d);
    for (size_t row = 0; row < d; row++) {
        for (size_t col = 0; col < d; col++) {
            map[row * d + col] = static_cast<uint32_t>(row * d + (col + 1) % d);
        }
    }
    return Permutation(std::move(map));
}

Permutation hv_column_cycle(size_t d) {
    std::vector<uint32_t> map(d * d);
    for (size_t row = 0; row < d; row++) {
        for (size_t col = 0; col < d; col++) {
            map[row * d + col] = static_cast<uint32_t>(((row + 1) % d) * d + col);
        }
    }
    return Permutation(std::move(map));
}

std::pair<OperatorSet, OperatorSet> build_hv_sets(size_t d) {
    if (d < 2) {
        throw std::invalid_argument("build_hv_sets: d must be >= 2");
    }
    checked_pow(d, 2, kDefaultMaxBusSize);
    Permutation h = hv_row_cycle(d);
    Permutation v = hv_column_cycle(d);
    std::vector<Permutation> hs;
    std::vector<Permutation> vs;
    for (size_t k = 0; k < d; k++) {
        hs.push_back(h.pow(static_cast<int64_t>(k)));
        vs.push_back(v.pow(static_cast<int64_t>(k)));
    }
    return {OperatorSet(std::move(hs)), OperatorSet(std::move(vs))};
}

std::vector<OperatorSet> build_shift_sets(size_t d, size_t m, size_t max_bus_size) {
    if (d < 2 || m < 1) {
        throw std::invalid_argument("build_shift_sets: need d >= 2 and m >= 1");
    }
    size_t bus = checked_pow(d, m, max_bus_size);
    Permutation x = Permutation::full_cycle(bus);
    std::vector<OperatorSet> sets;
    size_t step = 1;
    for (size_t j = 0; j < m; j++) {
        std::vector<Permutation> members;
        for (size_t k = 0; k < d; k++) {
            members.push_back(x.pow(static_cast<int64_t>(k * step)));
        }
        sets.emplace_back(std::move(members));
        step *= d;
    }
    return sets;
}

uint64_t derangement_count(unsigned n) {
    if (n > 20) {
        throw std::overflow_error("derangement_count: n > 20 exceeds 64-bit range");
    }
    // !n = sum_k (-1)^k n!/k!, each term an integer.
    int64_t total = 0;
    for (unsigned k = 0; k <= n; k++) {
        int64_t term = 1;
        for (unsigned f = k + 1; f <= n; f++) {
            term *= f;
        }
        total += (k % 2 == 0) ? term : -term;
    }
    return static_cast<uint64_t>(total);
}

std::vector<Permutation> enumerate_derangements(unsigned n, unsigned limit) {
    if (n > limit) {
        throw std::invalid_argument(
            "enumerate_derangements: n = " + std::to_string(n) + " exceeds limit " + std::to_string(limit));
    }
    std::vector<Permutation> out;
    std::vector<uint32_t> map(n);
    std::iota(map.begin(), map.end(), 0u);
    do {
        bool ok = true;
        for (uint32_t s = 0; s < n && ok; s++) {
            ok = map[s] != s;
        }
        if (ok) {
            out.emplace_back(map);
        }
    } while (std::next_permutation(map.begin(), map.end()));
    return out;
}

size_t checked_pow(size_t base, size_t exponent, size_t max_value) {
    size_t result = 1;
    for (size_t i = 0; i < exponent; i++) {
        if (result > max_value / base) {
            throw std::invalid_argument(
                std::to_string(base) + "^" + std::to_string(exponent) + " exceeds limit " + std::to_string(max_value));
        }
        result *= base;
    }
    return result;
}

}  // namespace qbus
