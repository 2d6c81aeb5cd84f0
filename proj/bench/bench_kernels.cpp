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

// Serial reference kernels against their OpenMP counterparts, plus serial
// against parallel batch sessions.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "quqkd/kernels.hpp"
#include "quqkd/session.hpp"

namespace {

using quqkd::kernels::Complex;

std::vector<Complex> random_entries(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> out(n);
  for (auto& x : out) {
    x = Complex(u(gen), u(gen));
  }
  return out;
}

template <auto Multiply>
void BM_Multiply(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto a = random_entries(dim * dim, 1);
  const auto b = random_entries(dim * dim, 2);
  std::vector<Complex> out(dim * dim);
  for (auto _ : state) {
    Multiply(a, b, out, dim);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto ApplyLocal>
void BM_ApplyLocal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::size_t dim = 1;
  for (std::size_t i = 0; i < n; ++i) dim *= 4;
  const auto local = random_entries(16, 3);
  const auto in = random_entries(dim, 4);
  std::vector<Complex> out(dim);
  for (auto _ : state) {
    ApplyLocal(local, in, out, n, 1);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Sessions(benchmark::State& state) {
  quqkd::SessionConfig base;
  base.protocol = quqkd::ProtocolKind::three_party_controlled;
  base.verification_rounds = 500;
  base.key_rounds = 500;
  const auto configs = quqkd::repeat_configs(base, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto reports = Parallel ? quqkd::run_sessions_parallel(configs)
                            : quqkd::run_sessions_serial(configs);
    benchmark::DoNotOptimize(reports.data());
  }
}

}  // namespace

BENCHMARK(BM_Multiply<quqkd::kernels::serial::multiply>)->Name("multiply/serial")->Arg(64)->Arg(256);
BENCHMARK(BM_Multiply<quqkd::kernels::omp::multiply>)->Name("multiply/omp")->Arg(64)->Arg(256);
BENCHMARK(BM_ApplyLocal<quqkd::kernels::serial::apply_local>)
    ->Name("apply_local/serial")->Arg(3)->Arg(6);
BENCHMARK(BM_ApplyLocal<quqkd::kernels::omp::apply_local>)
    ->Name("apply_local/omp")->Arg(3)->Arg(6);
BENCHMARK(BM_Sessions<false>)->Name("sessions/serial")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sessions<true>)->Name("sessions/parallel")->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
