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

#include "qbus/cv_bus.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qbus {

namespace {

void check_point(double alpha, double epsilon) {
    if (!(alpha > 0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be a positive finite number");
    }
    if (!(epsilon > 0 && epsilon < 1)) {
        throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
    }
}

}  // namespace

CoherentBusSpec::CoherentBusSpec(double alpha, size_t dimension, double epsilon)
    : alpha_(alpha), dimension_(dimension), epsilon_(epsilon) {
    check_point(alpha, epsilon);
    if (dimension < 2) {
        throw std::invalid_argument("a coherent bus needs at least two phase slots");
    }
}

double CoherentBusSpec::theta() const noexcept {
    return 2 * std::numbers::pi / static_cast<double>(dimension_);
}

bool CoherentBusSpec::slots_distinguishable() const {
    return adjacent_overlap_magnitude(alpha_, static_cast<double>(dimension_)) <= epsilon_;
}

uint64_t rotate_label(uint64_t n, uint64_t k, uint64_t s, uint64_t dimension) {
    if (dimension == 0) {
        throw std::invalid_argument("rotate_label: dimension must be positive");
    }
    return (n % dimension + (k % dimension) * (s % dimension)) % dimension;
}

std::complex<double> coherent_overlap(double alpha, int64_t n, int64_t m, uint64_t dimension) {
    double delta = 2 * std::numbers::pi * static_cast<double>(m - n) / static_cast<double>(dimension);
    return std::exp(alpha * alpha * (std::polar(1.0, delta) - 1.0));
}

double adjacent_overlap_magnitude(double alpha, double dimension) {
    return std::exp(alpha * alpha * (std::cos(2 * std::numbers::pi / dimension) - 1));
}

DimensionBound max_dimension_bound(double alpha, double epsilon) {
    check_point(alpha, epsilon);
    double argument = std::log(epsilon) / (alpha * alpha) + 1;
    if (argument < -1) {
        return DimensionBound{1, 1, true};
    }
    double real = 2 * std::numbers::pi / std::acos(argument);
    return DimensionBound{real, static_cast<uint64_t>(std::floor(real)), false};
}

double max_dimension_real(double alpha, double epsilon) {
    return max_dimension_bound(alpha, epsilon).real;
}

uint64_t max_dimension(double alpha, double epsilon) {
    return max_dimension_bound(alpha, epsilon).floor;
}

unsigned qubit_capacity(double alpha, double epsilon) {
    uint64_t d = max_dimension(alpha, epsilon);
    unsigned bits = 0;
    while (d >= 2) {
        d >>= 1;
        bits++;
    }
    return bits;
}

std::vector<SweepRow> sweep(double alpha_min, double alpha_max, double alpha_step, const std::vector<double> &epsilons) {
    if (!(alpha_step > 0)) {
        throw std::invalid_argument("sweep: alpha step must be positive");
    }
    if (!(alpha_min > 0) || alpha_max < alpha_min) {
        throw std::invalid_argument("sweep: need 0 < alpha_min <= alpha_max");
    }
    if (epsilons.empty()) {
        throw std::invalid_argument("sweep: no epsilon values");
    }
    // Integer step count keeps the grid free of accumulated rounding.
    auto steps = static_cast<uint64_t>(std::floor((alpha_max - alpha_min) / alpha_step + 1e-9));
    std::vector<SweepRow> rows;
    for (double epsilon : epsilons) {
        check_point(alpha_min, epsilon);
        for (uint64_t i = 0; i <= steps; i++) {
            double alpha = alpha_min + static_cast<double>(i) * alpha_step;
            DimensionBound bound = max_dimension_bound(alpha, epsilon);
            SweepRow row;
            row.alpha = alpha;
            row.epsilon = epsilon;
            row.theta = 2 * std::numbers::pi / static_cast<double>(bound.floor);
            row.d_max_real = bound.real;
            row.d_max = bound.floor;
            row.qubit_capacity = bound.flagged ? 0 : qubit_capacity(alpha, epsilon);
            row.flagged = bound.flagged;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::string out = "alpha,epsilon,theta,d_max_real,d_max,qubit_capacity\n";
    char buffer[256];
    for (const auto &row : rows) {
        std::snprintf(buffer, sizeof buffer, "%.12g,%.12g,%.12g,%.12g,%llu,%u\n", row.alpha, row.epsilon, row.theta,
                      row.d_max_real, static_cast<unsigned long long>(row.d_max), row.qubit_capacity);
        out += buffer;
    }
    return out;
}

}  // namespace qbus
