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

#include "qbus/kernels.h"

#include <cstddef>

namespace qbus::kernels {

Execution choose(size_t amplitude_count) {
    return amplitude_count >= kParallelThreshold ? Execution::parallel : Execution::serial;
}

void conditional_permute_serial(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ConditionalShape &shape,
    std::span<const uint32_t> maps) {
    const size_t block = shape.middle * shape.bus;
    for (size_t o = 0; o < shape.outer; o++) {
        for (size_t i = 0; i < shape.control; i++) {
            const uint32_t *map = maps.data() + i * shape.bus;
            const size_t base = (o * shape.control + i) * block;
            for (size_t q = 0; q < shape.middle; q++) {
                const size_t row = base + q * shape.bus;
                for (size_t s = 0; s < shape.bus; s++) {
                    out[row + map[s]] = in[row + s];
                }
            }
        }
    }
}

void conditional_permute_omp(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ConditionalShape &shape,
    std::span<const uint32_t> maps) {
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(shape.outer * shape.control * shape.middle);
    const size_t bus = shape.bus;
    const size_t middle = shape.middle;
    const size_t control = shape.control;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; r++) {
        const size_t i = (static_cast<size_t>(r) / middle) % control;
        const uint32_t *map = maps.data() + i * bus;
        const size_t row = static_cast<size_t>(r) * bus;
        for (size_t s = 0; s < bus; s++) {
            out[row + map[s]] = in[row + s];
        }
    }
}

void project_serial(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ProjectShape &shape,
    std::span<const Amplitude> bra) {
    for (size_t o = 0; o < shape.outer; o++) {
        for (size_t r = 0; r < shape.inner; r++) {
            Amplitude acc = 0;
            for (size_t s = 0; s < shape.dim; s++) {
                acc += bra[s] * in[(o * shape.dim + s) * shape.inner + r];
            }
            out[o * shape.inner + r] = acc;
        }
    }
}

void project_omp(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ProjectShape &shape,
    std::span<const Amplitude> bra) {
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(shape.outer * shape.inner);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < total; k++) {
        const size_t o = static_cast<size_t>(k) / shape.inner;
        const size_t r = static_cast<size_t>(k) % shape.inner;
        Amplitude acc = 0;
        for (size_t s = 0; s < shape.dim; s++) {
            acc += bra[s] * in[(o * shape.dim + s) * shape.inner + r];
        }
        out[static_cast<size_t>(k)] = acc;
    }
}

void apply_matrix_serial(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ProjectShape &shape,
    std::span<const Amplitude> matrix) {
    const size_t d = shape.dim;
    for (size_t o = 0; o < shape.outer; o++) {
        for (size_t row = 0; row < d; row++) {
            for (size_t r = 0; r < shape.inner; r++) {
                Amplitude acc = 0;
                for (size_t s = 0; s < d; s++) {
                    acc += matrix[row * d + s] * in[(o * d + s) * shape.inner + r];
                }
                out[(o * d + row) * shape.inner + r] = acc;
            }
        }
    }
}

void apply_matrix_omp(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ProjectShape &shape,
    std::span<const Amplitude> matrix) {
    const size_t d = shape.dim;
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(shape.outer * d * shape.inner);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < total; k++) {
        const size_t r = static_cast<size_t>(k) % shape.inner;
        const size_t row = (static_cast<size_t>(k) / shape.inner) % d;
        const size_t o = static_cast<size_t>(k) / (shape.inner * d);
        Amplitude acc = 0;
        for (size_t s = 0; s < d; s++) {
            acc += matrix[row * d + s] * in[(o * d + s) * shape.inner + r];
        }
        out[static_cast<size_t>(k)] = acc;
    }
}

void permute_then_phase_serial(
    std::span<const Amplitude> in, std::span<Amplitude> out, std::span<const uint32_t> map,
    std::span<const Amplitude> phases) {
    for (size_t c = 0; c < map.size(); c++) {
        out[map[c]] = in[c] * phases[map[c]];
    }
}

void permute_then_phase_omp(
    std::span<const Amplitude> in, std::span<Amplitude> out, std::span<const uint32_t> map,
    std::span<const Amplitude> phases) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(map.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < n; c++) {
        const uint32_t t = map[static_cast<size_t>(c)];
        out[t] = in[static_cast<size_t>(c)] * phases[t];
    }
}

}  // namespace qbus::kernels
