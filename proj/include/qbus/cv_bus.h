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

#ifndef QBUS_CV_BUS_H
#define QBUS_CV_BUS_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qbus {

/// Coherent-state bus with D phase slots |alpha e^{i 2 pi n / D}>.
class CoherentBusSpec {
   public:
    /// Throws std::invalid_argument unless alpha > 0, D >= 2 and 0 < epsilon < 1.
    CoherentBusSpec(double alpha, size_t dimension, double epsilon);

    double alpha() const noexcept {
        return alpha_;
    }
    size_t dimension() const noexcept {
        return dimension_;
    }
    double epsilon() const noexcept {
        return epsilon_;
    }
    double theta() const noexcept;
    /// Adjacent-slot overlap magnitude is at most epsilon.
    bool slots_distinguishable() const;

   private:
    double alpha_;
    size_t dimension_;
    double epsilon_;
};

/// MOD_D(n + k s): the phase slot after k rotations controlled by level s.
uint64_t rotate_label(uint64_t n, uint64_t k, uint64_t s, uint64_t dimension);

/// <alpha e^{i 2 pi n / D} | alpha e^{i 2 pi m / D}>.
std::complex<double> coherent_overlap(double alpha, int64_t n, int64_t m, uint64_t dimension);

/// |overlap| of neighbouring slots when the circle holds `dimension` slots;
/// `dimension` may be fractional.
double adjacent_overlap_magnitude(double alpha, double dimension);

struct DimensionBound {
    double real = 1;
    uint64_t floor = 1;
    /// Amplitude too small to separate even two slots at this epsilon.
    bool flagged = false;
};

/// 2 pi / acos(ln(epsilon) / alpha^2 + 1) and its floor. Throws
/// std::invalid_argument unless alpha > 0 and 0 < epsilon < 1.
DimensionBound max_dimension_bound(double alpha, double epsilon);
double max_dimension_real(double alpha, double epsilon);
uint64_t max_dimension(double alpha, double epsilon);

/// floor(log2(max_dimension)).
unsigned qubit_capacity(double alpha, double epsilon);

struct SweepRow {
    double alpha = 0;
    double epsilon = 0;
    double theta = 0;
    double d_max_real = 0;
    uint64_t d_max = 0;
    unsigned qubit_capacity = 0;
    bool flagged = false;
};

/// Rows for every epsilon (outer, in the given order) and alpha from
/// alpha_min to alpha_max inclusive in steps of alpha_step (inner).
std::vector<SweepRow> sweep(double alpha_min, double alpha_max, double alpha_step, const std::vector<double> &epsilons);

std::string sweep_csv(const std::vector<SweepRow> &rows);

}  // namespace qbus

#endif
