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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "oracles.h"

using namespace qbus;

namespace {

double max_diff(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    double worst = 0;
    for (size_t i = 0; i < a.size(); i++) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace

TEST(state, construction_normalizes_and_validates) {
    StateVector s({2}, {3, 4});
    EXPECT_NEAR(std::abs(s[0]), 0.6, 1e-15);
    EXPECT_NEAR(s.norm_squared(), 1, 1e-15);
    EXPECT_THROW(StateVector({1}, {1}), std::invalid_argument);
    EXPECT_THROW(StateVector({2}, {1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(StateVector({2}, {0, 0}), std::invalid_argument);
    EXPECT_THROW(StateVector::basis({2, 2}, 4), std::invalid_argument);
    EXPECT_THROW(StateVector::uniform({1024, 1024, 2}), std::invalid_argument);
}

TEST(state, random_state_is_seeded) {
    auto a = random_state({3, 3}, 5);
    auto b = random_state({3, 3}, 5);
    auto c = random_state({3, 3}, 6);
    EXPECT_EQ(max_diff(a.amplitudes(), b.amplitudes()), 0);
    EXPECT_GT(max_diff(a.amplitudes(), c.amplitudes()), 1e-3);
    EXPECT_NEAR(a.norm_squared(), 1, 1e-14);
}

TEST(state, rng_uniform_in_unit_interval) {
    Rng rng(1);
    double sum = 0;
    for (int i = 0; i < 10000; i++) {
        double u = rng.uniform();
        ASSERT_GE(u, 0);
        ASSERT_LT(u, 1);
        sum += u;
    }
    EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(state, conditional_matches_oracle) {
    auto [h, v] = build_hv_sets(3);
    auto input = random_state({3, 3}, 9);
    auto state = tensor(input, StateVector::basis({9}, 0));
    auto out = apply_conditional(state, 0, h, kernels::Execution::serial);
    out = apply_conditional(out, 1, v, kernels::Execution::serial);
    std::vector<oracle::C> amps(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<size_t> dims{3, 3, 9};
    auto maps_of = [](const OperatorSet &set) {
        std::vector<std::vector<uint32_t>> maps;
        for (const auto &p : set.members()) {
            maps.emplace_back(p.map().begin(), p.map().end());
        }
        return maps;
    };
    amps = oracle::conditional(amps, dims, 0, maps_of(h));
    amps = oracle::conditional(amps, dims, 1, maps_of(v));
    EXPECT_EQ(max_diff(out.amplitudes(), amps), 0);
    EXPECT_THROW(apply_conditional(state, 2, h), std::invalid_argument);
    EXPECT_THROW(apply_conditional(tensor(input, StateVector::basis({4}, 0)), 0, h), std::invalid_argument);
}

TEST(state, conditional_serial_parallel_bitwise) {
    // Large enough to cross the parallel threshold.
    auto sets = build_shift_sets(3, 3);
    auto state = tensor(random_state({3, 3, 3, 3}, 2), StateVector::basis({27}, 0));
    for (size_t j = 0; j < 3; j++) {
        auto a = apply_conditional(state, j, sets[j], kernels::Execution::serial);
        auto b = apply_conditional(state, j, sets[j], kernels::Execution::parallel);
        EXPECT_EQ(std::memcmp(a.amplitudes().data(), b.amplitudes().data(), a.size() * sizeof(Amplitude)), 0);
    }
}

TEST(state, conjugate_basis_is_orthonormal) {
    for (size_t d = 2; d <= 5; d++) {
        for (size_t a = 0; a < d; a++) {
            for (size_t b = 0; b < d; b++) {
                auto ka = conjugate_ket(d, a);
                auto kb = conjugate_ket(d, b);
                Amplitude dot = 0;
                for (size_t s = 0; s < d; s++) {
                    dot += std::conj(ka[s]) * kb[s];
                }
                EXPECT_NEAR(std::abs(dot), a == b ? 1.0 : 0.0, 1e-14);
            }
        }
    }
    auto k = conjugate_ket(3, 1);
    EXPECT_NEAR(std::arg(k[1]), 2 * std::numbers::pi / 3, 1e-14);
}

TEST(state, measurement_probabilities_and_collapse) {
    StateVector s({2, 3}, {1, 0, 0, 0, 0, 1});
    auto probs = outcome_probabilities(s, 0, Basis::computational);
    EXPECT_NEAR(probs[0], 0.5, 1e-15);
    auto [record, rest] = measure(s, 0, Basis::computational, size_t{1});
    EXPECT_EQ(record.outcome, 1u);
    EXPECT_NEAR(record.probability, 0.5, 1e-15);
    EXPECT_EQ(rest.dims(), std::vector<size_t>{3});
    EXPECT_NEAR(std::abs(rest[2]), 1, 1e-15);
    EXPECT_THROW(measure(s, 1, Basis::computational, size_t{1}), std::invalid_argument);
    EXPECT_THROW(measure(s, 0, Basis::computational, size_t{2}), std::invalid_argument);

    // Conjugate outcome a leaves phases w^{-a s}.
    auto u = tensor(StateVector::uniform({3}), StateVector::basis({2}, 0));
    auto conj_probs = outcome_probabilities(u, 0, Basis::conjugate);
    EXPECT_NEAR(conj_probs[0], 1, 1e-14);
    EXPECT_NEAR(conj_probs[1], 0, 1e-14);
    auto input = random_state({3, 2}, 4);
    auto [r2, after] = measure(input, 0, Basis::conjugate, size_t{2});
    std::vector<size_t> out_dims;
    std::vector<oracle::C> amps(input.amplitudes().begin(), input.amplitudes().end());
    auto ket = conjugate_ket(3, 2);
    std::vector<oracle::C> bra{std::conj(ket[0]), std::conj(ket[1]), std::conj(ket[2])};
    auto expected = oracle::project(amps, {3, 2}, 0, bra, out_dims);
    double norm = 0;
    for (auto &x : expected) {
        norm += std::norm(x);
    }
    EXPECT_NEAR(r2.probability, norm, 1e-14);
    for (auto &x : expected) {
        x /= std::sqrt(norm);
    }
    EXPECT_LT(max_diff(after.amplitudes(), expected), 1e-14);
}

TEST(state, sampled_measurement_follows_probabilities) {
    StateVector s({2}, {1, std::sqrt(3.0)});
    Rng rng(11);
    int ones = 0;
    for (int i = 0; i < 20000; i++) {
        ones += measure(tensor(s, StateVector::basis({2}, 0)), 0, Basis::computational, rng).first.outcome == 1;
    }
    EXPECT_NEAR(ones / 20000.0, 0.75, 0.015);
}

TEST(state, local_operations) {
    auto s = StateVector::basis({3, 3}, 1 * 3 + 2);
    auto shifted = apply_local(s, 1, ShiftPower{1});
    EXPECT_NEAR(std::abs(shifted[3]), 1, 1e-15);
    auto back = apply_local(shifted, 1, ShiftPower{-1});
    EXPECT_NEAR(fidelity(back, s), 1, 1e-15);
    auto phased = apply_local(StateVector::uniform({3}), 0, PhasePower{1});
    EXPECT_NEAR(std::arg(phased[1] / phased[0]), 2 * std::numbers::pi / 3, 1e-14);
    auto permuted = apply_local(s, 0, parse_cycles("(0,1,2)", 3));
    EXPECT_NEAR(std::abs(permuted[2 * 3 + 2]), 1, 1e-15);
    double r = 1 / std::sqrt(2.0);
    UnitaryTable hadamard{{r, r, r, -r}};
    auto plus = apply_local(StateVector::basis({2}, 0), 0, hadamard);
    EXPECT_NEAR(std::abs(plus[1]), r, 1e-15);
    EXPECT_THROW(apply_local(plus, 0, UnitaryTable{{1, 1, 0, 1}}), std::invalid_argument);
}

TEST(state, permute_register_and_fidelity) {
    auto s = random_state({2, 2}, 3);
    Permutation cnot(std::vector<uint32_t>{0, 1, 3, 2});
    std::vector<Amplitude> ones(4, 1);
    auto t = permute_register(s, cnot, ones);
    EXPECT_EQ(t[3], s[2]);
    EXPECT_EQ(t[2], s[3]);
    EXPECT_NEAR(fidelity(s, s), 1, 1e-15);
    EXPECT_NEAR(fidelity(StateVector::basis({2}, 0), StateVector::basis({2}, 1)), 0, 1e-15);
}

TEST(state, reduced_purity_product_and_bell) {
    auto product = tensor(random_state({3}, 1), random_state({4}, 2));
    EXPECT_NEAR(reduced_purity(product, 0), 1, 1e-14);
    EXPECT_NEAR(reduced_purity(product, 1), 1, 1e-14);
    StateVector bell({2, 2}, {1, 0, 0, 1});
    EXPECT_NEAR(reduced_purity(bell, 0), 0.5, 1e-14);
    StateVector ghz({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    EXPECT_NEAR(reduced_purity(ghz, 1), 1.0 / 3, 1e-14);
}

TEST(state, bus_pair_labels) {
    for (size_t d = 2; d <= 4; d++) {
        for (size_t s = 0; s < d * d; s++) {
            auto [a, b] = bus_register_pair(s, d);
            EXPECT_EQ(bus_label_from_pair(a, b, d), s);
            // h moves the first coordinate, v the second.
            auto [ha, hb] = bus_register_pair(hv_row_cycle(d)(s), d);
            EXPECT_EQ(ha, (a + 1) % d);
            EXPECT_EQ(hb, b);
            auto [va, vb] = bus_register_pair(hv_column_cycle(d)(s), d);
            EXPECT_EQ(va, a);
            EXPECT_EQ(vb, (b + 1) % d);
        }
    }
}
