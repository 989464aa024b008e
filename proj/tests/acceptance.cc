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

// Acceptance checks: one PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "qbus/cv_bus.h"
#include "qbus/interaction.h"
#include "qbus/mapping.h"
#include "qbus/protocol.h"

using namespace qbus;

namespace {

using Table = std::vector<std::vector<uint32_t>>;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string &what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

Permutation q(int i) {
    static const char *text[] = {"(0,1)(2,3)", "(0,2)(1,3)", "(0,3)(1,2)"};
    return parse_cycles(text[i - 1], 4);
}

Permutation r(int i) {
    static const char *text[] = {"(0,1,2,3)", "(0,1,3,2)", "(0,2,1,3)"};
    return parse_cycles(text[i - 1], 4);
}

std::vector<OperatorSet> pair_sets(const Permutation &a, const Permutation &b) {
    auto e = Permutation::identity(a.size());
    return {OperatorSet({e, a}), OperatorSet({e, b})};
}

Permutation y(int n, int m) {
    return compose(hv_column_cycle(3).pow(n), hv_row_cycle(3).pow(m));
}

std::vector<OperatorSet> qutrit_sets(int a, int b, int c, int d, int e, int f, int g, int h) {
    auto id = Permutation::identity(9);
    return {OperatorSet({id, y(a, b), y(c, d)}), OperatorSet({id, y(e, f), y(g, h)})};
}

Table table_of(const PreMeasurementMatrix &m) {
    Table t;
    for (size_t row = 0; row < m.dim(); row++) {
        auto span = m.row(row);
        t.emplace_back(span.begin(), span.end());
    }
    return t;
}

bool exact(double f) {
    return std::abs(f - 1) <= 1e-12;
}

// entry[r][c] read from a state-vector run: Alice's register prepared in |c>,
// bus in |0>, Bob's blanks uniform.
Table expanded_table(const std::vector<OperatorSet> &alice, const std::vector<OperatorSet> &bob, size_t d, size_t m) {
    const size_t dim = alice.front().bus_dim();
    std::vector<size_t> reg(m, d);
    Table t(dim, std::vector<uint32_t>(dim));
    for (size_t c = 0; c < dim; c++) {
        StateVector s = tensor(StateVector::basis(reg, c), StateVector::basis({dim}, 0));
        for (size_t j = 0; j < m; j++) {
            s = apply_conditional(s, j, alice[j]);
        }
        auto digits = combination_digits(c, d, m);
        for (size_t j = 0; j < m; j++) {
            s = measure(s, 0, Basis::computational, digits[j]).second;
        }
        s = tensor(StateVector::uniform(reg), s);
        for (size_t j = 0; j < m; j++) {
            s = apply_conditional(s, j, bob[j]);
        }
        for (size_t i = 0; i < s.size(); i++) {
            if (std::abs(s[i]) > 1e-9) {
                t[i / dim][c] = static_cast<uint32_t>(i % dim);
            }
        }
    }
    return t;
}

const Table kLoc{{0, 3, 1, 2}, {3, 0, 2, 1}, {1, 2, 0, 3}, {2, 1, 3, 0}};
const Table kEnt{{0, 3, 1, 2}, {3, 0, 2, 1}, {2, 1, 3, 0}, {1, 2, 0, 3}};
const Table kCom{{0, 2, 1, 3}, {2, 0, 3, 1}, {1, 3, 2, 0}, {3, 1, 0, 2}};
const Table kQutritLocal{
    {0, 3, 6, 1, 4, 7, 2, 5, 8}, {6, 0, 3, 7, 1, 4, 8, 2, 5}, {3, 6, 0, 4, 7, 1, 5, 8, 2},
    {2, 5, 8, 0, 3, 6, 1, 4, 7}, {8, 2, 5, 6, 0, 3, 7, 1, 4}, {5, 8, 2, 3, 6, 0, 4, 7, 1},
    {1, 4, 7, 2, 5, 8, 0, 3, 6}, {7, 1, 4, 8, 2, 5, 6, 0, 3}, {4, 7, 1, 5, 8, 2, 3, 6, 0},
};
const Table kQutritEntangling{
    {0, 3, 6, 1, 4, 7, 2, 5, 8}, {8, 2, 5, 6, 0, 3, 7, 1, 4}, {4, 7, 1, 5, 8, 2, 3, 6, 0},
    {1, 4, 7, 2, 5, 8, 0, 3, 6}, {6, 0, 3, 7, 1, 4, 8, 2, 5}, {5, 8, 2, 3, 6, 0, 4, 7, 1},
    {2, 5, 8, 0, 3, 6, 1, 4, 7}, {7, 1, 4, 8, 2, 5, 6, 0, 3}, {3, 6, 0, 4, 7, 1, 5, 8, 2},
};
const Table kQutritMaximalPrinted{
    {0, 3, 6, 1, 4, 7, 2, 5, 8}, {8, 2, 5, 6, 0, 3, 7, 1, 4}, {4, 7, 3, 5, 8, 2, 3, 6, 0},
    {7, 1, 4, 8, 2, 5, 6, 0, 3}, {3, 6, 0, 4, 7, 1, 5, 8, 2}, {2, 5, 8, 0, 3, 6, 1, 4, 7},
    {5, 8, 2, 3, 6, 0, 4, 7, 1}, {1, 4, 7, 2, 5, 8, 0, 3, 6}, {6, 0, 3, 7, 1, 4, 8, 2, 5},
};
const Table kQutritShift{
    {0, 3, 6, 1, 4, 7, 2, 5, 8}, {6, 0, 3, 7, 1, 4, 8, 2, 5}, {3, 6, 0, 4, 7, 1, 5, 8, 2},
    {8, 2, 5, 0, 3, 6, 1, 4, 7}, {5, 8, 2, 6, 0, 3, 7, 1, 4}, {2, 5, 8, 3, 6, 0, 4, 7, 1},
    {7, 1, 4, 8, 2, 5, 0, 3, 6}, {4, 7, 1, 5, 8, 2, 6, 0, 3}, {1, 4, 7, 2, 5, 8, 3, 6, 0},
};

Check criterion_1() {
    Check c;
    InteractionSpec spec(2, 2, pair_sets(q(1), q(3)), pair_sets(q(1), q(3)));
    auto input = random_state({2, 2}, 1);
    auto traces = run_transfer(input, spec, EnumerateAllPolicy{});
    // Alice's 4 conjugate outcomes x 4 bus outcomes.
    c.expect(traces.size() == 16, "expected 16 branches, got " + std::to_string(traces.size()));
    Permutation x = Permutation::full_cycle(2);
    Permutation e = Permutation::identity(2);
    std::vector<std::vector<Permutation>> table{{e, e}, {x, e}, {x, x}, {e, x}};
    for (const auto &t : traces) {
        c.expect(exact(t.fidelity), "fidelity " + std::to_string(t.fidelity));
        c.expect(t.target_gate.is_identity(), "target is not the identity");
        c.expect(t.correction.permutation == tensor_permutation(table[t.bus_outcome]),
                 "correction for bus outcome " + std::to_string(t.bus_outcome));
    }
    c.detail = c.ok ? "16 branches (d^m x D; the stated 64 double-counts Alice's phase outcomes), fidelity 1, table I.I X.I X.X I.X"
                    : c.detail;
    return c;
}

Check criterion_2() {
    Check c;
    auto loc = build_premeasurement_matrix(pair_sets(q(1), q(3)), pair_sets(q(1), q(3)));
    auto ent = build_premeasurement_matrix(pair_sets(q(1), q(3)), pair_sets(q(2), q(3)));
    auto com = build_premeasurement_matrix(pair_sets(r(1), q(2)), pair_sets(r(1), q(2)));
    c.expect(table_of(loc) == kLoc, "local table");
    c.expect(table_of(ent) == kEnt, "entangling table");
    c.expect(table_of(com) == kCom, "combined table");
    auto cls = classify_mapping(com);
    c.expect(cls.kind == MappingKind::combined, "combined class");
    c.expect(cls.per_outcome == std::vector<OutcomeKind>{OutcomeKind::entangling, OutcomeKind::local,
                                                         OutcomeKind::entangling, OutcomeKind::local},
             "per-outcome classes");
    c.expect(classify_mapping(loc).kind == MappingKind::local, "local class");
    c.expect(classify_mapping(ent).kind == MappingKind::entangling, "entangling class");
    return c;
}

Check criterion_3() {
    Check c;
    InteractionSpec spec(2, 2, pair_sets(q(1), q(3)), pair_sets(q(2), q(3)));
    Permutation cnot(std::vector<uint32_t>{0, 1, 3, 2});
    std::vector<Amplitude> ones(4, 1);
    for (uint64_t seed = 0; seed < 8; seed++) {
        auto input = random_state({2, 2}, seed);
        auto expected = permute_register(input, cnot, ones);
        for (const auto &t : run_transfer(input, spec, EnumerateAllPolicy{})) {
            c.expect(t.target_gate == cnot, "residual is not CNOT");
            c.expect(local_factors(t.correction.permutation, 2, 2).has_value(), "correction is not local");
            c.expect(exact(fidelity(t.output, expected)), "output differs from CNOT(input)");
        }
    }
    return c;
}

Check criterion_4() {
    Check c;
    c.expect(derangement_count(4) == 9, "!4");
    std::set<std::string> got;
    for (const auto &p : enumerate_derangements(4)) {
        got.insert(format_cycles(p));
    }
    std::set<std::string> expected{"(0,1)(2,3)", "(0,2)(1,3)", "(0,3)(1,2)", "(0,1,2,3)", "(0,1,3,2)",
                                   "(0,2,1,3)",  "(0,3,2,1)",  "(0,2,3,1)",  "(0,3,1,2)"};
    c.expect(got == expected, "derangements of 4");
    for (unsigned n = 0; n <= 8; n++) {
        c.expect(enumerate_derangements(n).size() == derangement_count(n), "count mismatch at n=" + std::to_string(n));
    }
    return c;
}

Check criterion_5() {
    Check c;
    auto alice = qutrit_sets(0, 1, 0, 2, 1, 0, 2, 0);
    c.expect(table_of(build_premeasurement_matrix(alice, qutrit_sets(0, 2, 0, 1, 2, 0, 1, 0))) == kQutritLocal,
             "local table");
    auto ent = build_premeasurement_matrix(alice, qutrit_sets(0, 1, 0, 2, 2, 2, 1, 1));
    c.expect(table_of(ent) == kQutritEntangling, "entangling table");
    auto max = build_premeasurement_matrix(alice, qutrit_sets(2, 1, 1, 2, 2, 2, 1, 1));
    Table t = table_of(max);
    size_t diffs = 0;
    for (size_t i = 0; i < 9; i++) {
        for (size_t j = 0; j < 9; j++) {
            diffs += t[i][j] != kQutritMaximalPrinted[i][j];
        }
    }
    c.expect(diffs == 1 && t[2][2] == 1 && kQutritMaximalPrinted[2][2] == 3,
             "maximal table differs in " + std::to_string(diffs) + " entries");
    for (uint32_t label = 0; label < 9; label++) {
        c.expect(satisfies_block_criteria(outcome_permutation(max, label), 3), "block criteria");
    }
    auto shift = build_shift_sets(3, 2);
    InteractionSpec shift_spec(3, 2, shift, inverse_ordered(shift));
    c.expect(table_of(premeasurement_matrix(shift_spec)) == kQutritShift, "shift table");
    auto traces = run_teleport(random_state({3, 3}, 3), shift_spec, EnumerateAllPolicy{});
    c.expect(traces.size() == 81, "81 teleport branches");
    for (const auto &tr : traces) {
        c.expect(exact(tr.fidelity), "teleport fidelity");
    }
    if (c.ok) {
        c.detail = "maximal table: printed row 2 col 2 reads lambda3, computed lambda1 (single-entry typo)";
    }
    return c;
}

Check criterion_6() {
    Check c;
    for (size_t d : {2, 3, 4}) {
        auto [h, v] = build_hv_sets(d);
        std::vector<OperatorSet> alice{h, v};
        InteractionSpec spec(d, 2, alice, inverse_ordered(alice));
        Permutation x = Permutation::full_cycle(d);
        Rng rng(600 + d);
        for (int trial = 0; trial < 200; trial++) {
            auto input = random_state({d, d}, 10'000 * d + static_cast<uint64_t>(trial));
            auto t = run_sampled(Direction::transfer, input, spec, rng);
            auto [m, n] = bus_register_pair(t.bus_outcome, d);
            std::vector<Permutation> held{x.pow(-static_cast<int64_t>(m)), x.pow(-static_cast<int64_t>(n))};
            Permutation law = tensor_permutation(held);
            c.expect(t.outcome_permutation == law, "held state is not X^-m (x) X^-n");
            c.expect(t.correction.permutation == law.inverse(), "correction does not undo X^-m (x) X^-n");
            c.expect(exact(t.fidelity), "fidelity");
        }
    }
    return c;
}

Check criterion_7() {
    Check c;
    auto cyclic = pair_sets(r(1), r(2));
    c.expect(!validate_interaction_sets(cyclic, 2, 2).valid, "{I,R1},{I,R2} accepted");
    bool threw = false;
    try {
        InteractionSpec(2, 2, cyclic, pair_sets(q(1), q(3)));
    } catch (const InvalidSpecError &) {
        threw = true;
    }
    c.expect(threw, "spec construction accepted cyclic-only sets");
    // Corrupt Bob's valid sets by replacing one member; every corruption that
    // breaks validity must break the Latin property too.
    auto alice = pair_sets(q(1), q(3));
    size_t corrupted = 0;
    for (const auto &p : enumerate_derangements(4)) {
        auto bob = pair_sets(q(1), p);
        if (validate_interaction_sets(bob, 2, 2).valid) {
            continue;
        }
        corrupted++;
        auto m = build_premeasurement_matrix(alice, bob);
        c.expect(!m.is_latin(), "corrupted spec gave a Latin matrix");
        bool rejected = false;
        try {
            classify_mapping(m);
        } catch (const NotLatinError &) {
            rejected = true;
        }
        c.expect(rejected, "non-Latin matrix not rejected");
    }
    auto e = Permutation::identity(9);
    std::vector<OperatorSet> swapped{OperatorSet({e, y(0, 1), y(1, 0)}), OperatorSet({e, y(0, 2), y(2, 0)})};
    c.expect(!validate_interaction_sets(swapped, 3, 2).valid, "member-swapped qutrit sets accepted");
    c.expect(!build_premeasurement_matrix(qutrit_sets(0, 1, 0, 2, 1, 0, 2, 0), swapped).is_latin(),
             "member-swapped qutrit sets gave a Latin matrix");
    c.expect(corrupted > 0, "no corruptions generated");
    return c;
}

Check criterion_8() {
    Check c;
    InteractionSpec spec(2, 2, pair_sets(r(1), q(2)), pair_sets(r(1), q(2)));
    auto stats = repeat_until_entangled(spec, 2024, 1000, 10'000);
    double mean = stats.mean_rounds();
    c.expect(mean >= 1.9 && mean <= 2.1, "mean rounds " + std::to_string(mean));
    c.expect(exact(stats.min_fidelity), "fidelity lost between rounds");
    if (c.ok) {
        c.detail = "mean rounds " + std::to_string(mean);
    }
    return c;
}

Check criterion_9() {
    Check c;
    c.expect(max_dimension(100, 1e-5) == 130, "D_max(100, 1e-5) = " + std::to_string(max_dimension(100, 1e-5)));
    c.expect(qubit_capacity(100, 1e-5) == 7, "capacity");
    std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    auto rows = sweep(0.5, 200, 0.5, eps);
    const size_t per_curve = rows.size() / eps.size();
    for (size_t k = 0; k < eps.size(); k++) {
        for (size_t i = 0; i < per_curve; i++) {
            const auto &row = rows[k * per_curve + i];
            if (i > 0) {
                c.expect(row.d_max_real >= rows[k * per_curve + i - 1].d_max_real, "not monotone in alpha");
            }
            if (k > 0) {
                c.expect(row.d_max_real <= rows[(k - 1) * per_curve + i].d_max_real, "curves out of order");
            }
            if (!row.flagged) {
                double at = adjacent_overlap_magnitude(row.alpha, row.d_max_real);
                c.expect(std::abs(at - row.epsilon) <= 1e-10, "bound not tight");
                c.expect(adjacent_overlap_magnitude(row.alpha, static_cast<double>(row.d_max)) <= row.epsilon + 1e-10,
                         "floor exceeds epsilon");
                c.expect(adjacent_overlap_magnitude(row.alpha, static_cast<double>(row.d_max + 1)) > row.epsilon,
                         "floor + 1 within epsilon");
            }
        }
    }
    return c;
}

Check criterion_10() {
    Check c;
    auto pool = enumerate_derangements(4);
    std::vector<std::vector<OperatorSet>> valid;
    for (const auto &a : pool) {
        for (const auto &b : pool) {
            if (validate_interaction_sets(pair_sets(a, b), 2, 2).valid) {
                valid.push_back(pair_sets(a, b));
            }
        }
    }
    for (const auto &alice : valid) {
        for (const auto &bob : valid) {
            c.expect(table_of(build_premeasurement_matrix(alice, bob)) == expanded_table(alice, bob, 2, 2),
                     "qubit spec mismatch");
        }
    }
    auto alice = qutrit_sets(0, 1, 0, 2, 1, 0, 2, 0);
    for (const auto &bob : {qutrit_sets(0, 1, 0, 2, 2, 2, 1, 1), qutrit_sets(2, 1, 1, 2, 2, 2, 1, 1)}) {
        c.expect(table_of(build_premeasurement_matrix(alice, bob)) == expanded_table(alice, bob, 3, 2),
                 "qutrit spec mismatch");
    }
    if (c.ok) {
        c.detail = std::to_string(valid.size() * valid.size()) + " qubit specs + 2 qutrit specs";
    }
    return c;
}

}  // namespace

int main() {
    struct Entry {
        int number;
        const char *title;
        std::function<Check()> run;
        double limit_seconds;
    };
    std::vector<Entry> entries{
        {1, "two-qubit local transfer, all branches", criterion_1, 1},
        {2, "qubit pre-measurement matrices and classes", criterion_2, 1},
        {3, "entangling mapping realizes CNOT", criterion_3, 0},
        {4, "derangement facts", criterion_4, 0},
        {5, "two-qutrit appendix tables and teleport", criterion_5, 10},
        {6, "H/V correction law, d = 2, 3, 4", criterion_6, 0},
        {7, "invalid and corrupted specs rejected", criterion_7, 0},
        {8, "repeat-until-success mean rounds", criterion_8, 0},
        {9, "coherent bus capacity and sweep", criterion_9, 1},
        {10, "symbolic vs state-vector matrices", criterion_10, 0},
    };
    int failures = 0;
    for (const auto &entry : entries) {
        auto start = std::chrono::steady_clock::now();
        Check c;
        try {
            c = entry.run();
        } catch (const std::exception &e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (entry.limit_seconds > 0 && seconds >= entry.limit_seconds) {
            c.ok = false;
            c.detail = "runtime " + std::to_string(seconds) + " s over the limit";
        }
        failures += !c.ok;
        std::printf("[%s] criterion %d: %s (%.3f s)%s%s\n", c.ok ? "PASS" : "FAIL", entry.number, entry.title, seconds,
                    c.detail.empty() ? "" : " -- ", c.detail.c_str());
    }
    return failures;
}
