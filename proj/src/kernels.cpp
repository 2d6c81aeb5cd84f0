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

#include "quqkd/kernels.hpp"

#include <cassert>
#include <cstdint>

namespace quqkd::kernels {

namespace {

std::size_t pow4(std::size_t n) { return std::size_t{1} << (2 * n); }

}  // namespace

namespace serial {

void multiply(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out,
              std::size_t dim) {
  assert(a.size() == dim * dim && b.size() == dim * dim && out.size() == dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      Complex acc{};
      for (std::size_t k = 0; k < dim; ++k) {
        acc += a[i * dim + k] * b[k * dim + j];
      }
      out[i * dim + j] = acc;
    }
  }
}

void matvec(std::span<const Complex> a, std::span<const Complex> x, std::span<Complex> out,
            std::size_t dim) {
  assert(a.size() == dim * dim && x.size() == dim && out.size() == dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Complex acc{};
    for (std::size_t k = 0; k < dim; ++k) {
      acc += a[i * dim + k] * x[k];
    }
    out[i] = acc;
  }
}

void apply_local(std::span<const Complex> local, std::span<const Complex> in,
                 std::span<Complex> out, std::size_t num_ququarts, std::size_t position) {
  const std::size_t dim = pow4(num_ququarts);
  const std::size_t stride = pow4(num_ququarts - 1 - position);
  assert(local.size() == 16 && in.size() == dim && out.size() == dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const std::size_t digit = (idx / stride) % 4;
    const std::size_t base = idx - digit * stride;
    Complex acc{};
    for (std::size_t j = 0; j < 4; ++j) {
      acc += local[digit * 4 + j] * in[base + j * stride];
    }
    out[idx] = acc;
  }
}

}  // namespace serial

namespace omp {

void multiply(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out,
              std::size_t dim) {
  assert(a.size() == dim * dim && b.size() == dim * dim && out.size() == dim * dim);
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < dim; ++j) {
      Complex acc{};
      for (std::size_t k = 0; k < dim; ++k) {
        acc += a[row * dim + k] * b[k * dim + j];
      }
      out[row * dim + j] = acc;
    }
  }
}

void matvec(std::span<const Complex> a, std::span<const Complex> x, std::span<Complex> out,
            std::size_t dim) {
  assert(a.size() == dim * dim && x.size() == dim && out.size() == dim);
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i);
    Complex acc{};
    for (std::size_t k = 0; k < dim; ++k) {
      acc += a[row * dim + k] * x[k];
    }
    out[row] = acc;
  }
}

void apply_local(std::span<const Complex> local, std::span<const Complex> in,
                 std::span<Complex> out, std::size_t num_ququarts, std::size_t position) {
  const std::size_t dim = pow4(num_ququarts);
  const std::size_t stride = pow4(num_ququarts - 1 - position);
  assert(local.size() == 16 && in.size() == dim && out.size() == dim);
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) if (dim >= 4 * kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    const std::size_t digit = (idx / stride) % 4;
    const std::size_t base = idx - digit * stride;
    Complex acc{};
    for (std::size_t j = 0; j < 4; ++j) {
      acc += local[digit * 4 + j] * in[base + j * stride];
    }
    out[idx] = acc;
  }
}

}  // namespace omp

}  // namespace quqkd::kernels
