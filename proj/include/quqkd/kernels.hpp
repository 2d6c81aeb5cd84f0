// Copyright 2026 The quqkd Authors
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

#pragma once

// Dense complex kernels. Every kernel exists twice: a plain serial loop kept
// as the reference, and an OpenMP version used by the library. Each output
// element is produced by exactly one thread with the same summation order as
// the serial loop, so both variants agree bit for bit.

#include <complex>
#include <cstddef>
#include <span>

namespace quqkd::kernels {

using Complex = std::complex<double>;

namespace serial {

/// out = a * b for row-major dim x dim matrices.
void multiply(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out,
              std::size_t dim);

/// out = a * x.
void matvec(std::span<const Complex> a, std::span<const Complex> x, std::span<Complex> out,
            std::size_t dim);

/// Applies a 4x4 row-major operator to ququart `position` of an n-ququart
/// vector (most significant ququart first).
void apply_local(std::span<const Complex> local, std::span<const Complex> in,
                 std::span<Complex> out, std::size_t num_ququarts, std::size_t position);

}  // namespace serial

namespace omp {

void multiply(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out,
              std::size_t dim);

void matvec(std::span<const Complex> a, std::span<const Complex> x, std::span<Complex> out,
            std::size_t dim);

void apply_local(std::span<const Complex> local, std::span<const Complex> in,
                 std::span<Complex> out, std::size_t num_ququarts, std::size_t position);

}  // namespace omp

/// Below this dimension the OpenMP kernels run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 64;

}  // namespace quqkd::kernels
