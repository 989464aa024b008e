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

#ifndef QBUS_KERNELS_H
#define QBUS_KERNELS_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace qbus {

using Amplitude = std::complex<double>;

namespace kernels {

// Every kernel comes as a serial reference and an OpenMP version. Both
// write each output element from a fixed sequence of inputs, so they agree
// bit-for-bit regardless of thread count.

enum class Execution { serial, parallel };

/// States smaller than this run serially under Execution::parallel dispatch.
inline constexpr size_t kParallelThreshold = size_t{1} << 12;

Execution choose(size_t amplitude_count);

/// Amplitude layout [outer][control][middle][bus]. For control value i, the
/// bus index s is sent to maps[i * bus + s].
struct ConditionalShape {
    size_t outer;
    size_t control;
    size_t middle;
    size_t bus;
};

void conditional_permute_serial(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ConditionalShape &shape,
    std::span<const uint32_t> maps);
void conditional_permute_omp(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ConditionalShape &shape,
    std::span<const uint32_t> maps);

/// Contracts one subsystem with a bra: out[o][r] = sum_s bra[s] in[o][s][r].
struct ProjectShape {
    size_t outer;
    size_t dim;
    size_t inner;
};

void project_serial(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ProjectShape &shape,
    std::span<const Amplitude> bra);
void project_omp(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ProjectShape &shape,
    std::span<const Amplitude> bra);

/// Applies a dense dim x dim matrix (row-major) to one subsystem.
void apply_matrix_serial(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ProjectShape &shape,
    std::span<const Amplitude> matrix);
void apply_matrix_omp(
    std::span<const Amplitude> in, std::span<Amplitude> out, const ProjectShape &shape,
    std::span<const Amplitude> matrix);

/// out[map[c]] = in[c] * phases[map[c]] over the whole register.
void permute_then_phase_serial(
    std::span<const Amplitude> in, std::span<Amplitude> out, std::span<const uint32_t> map,
    std::span<const Amplitude> phases);
void permute_then_phase_omp(
    std::span<const Amplitude> in, std::span<Amplitude> out, std::span<const uint32_t> map,
    std::span<const Amplitude> phases);

}  // namespace kernels
}  // namespace qbus

#endif
