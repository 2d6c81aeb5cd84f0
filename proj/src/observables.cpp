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

#include "quqkd/observables.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quqkd {

namespace {

LinearOperator kb(std::size_t ket, std::size_t bra) { return LinearOperator::ket_bra(4, ket, bra); }

LinearOperator matrix_for(ObservableName name) {
  switch (name) {
    case ObservableName::sigma_x:
      return kb(3, 0) + kb(0, 3) + kb(1, 2) + kb(2, 1);
    case ObservableName::upsilon_x:
      return kb(2, 0) + kb(0, 2) + kb(3, 1) + kb(1, 3);
    case ObservableName::sigma_z:
      return kb(3, 3) + kb(1, 1) - kb(0, 0) - kb(2, 2);
    case ObservableName::upsilon_z:
      return kb(2, 2) + kb(3, 3) - kb(0, 0) - kb(1, 1);
    case ObservableName::epsilon_x:
      return kb(2, 3) + kb(3, 2) + kb(0, 1) + kb(1, 0);
    case ObservableName::o_z:
      return kb(3, 3) - kb(1, 1) + kb(0, 0) + kb(2, 2);
    case ObservableName::identity:
      return LinearOperator::identity(4);
  }
  throw std::invalid_argument("unknown observable");
}

LinearOperator tensor_power(const LinearOperator& op, std::size_t n) {
  std::vector<LinearOperator> factors(n, op);
  return tensor(factors);
}

}  // namespace

std::string_view to_string(ObservableName name) {
  switch (name) {
    case ObservableName::sigma_x: return "sigma_x";
    case ObservableName::upsilon_x: return "upsilon_x";
    case ObservableName::sigma_z: return "sigma_z";
    case ObservableName::upsilon_z: return "upsilon_z";
    case ObservableName::epsilon_x: return "epsilon_x";
    case ObservableName::o_z: return "o_z";
    case ObservableName::identity: return "identity";
  }
  return "?";
}

std::optional<ObservableName> parse_observable_name(std::string_view text) {
  for (auto name : kAllObservables) {
    if (to_string(name) == text) {
      return name;
    }
  }
  return std::nullopt;
}

Observable build_observable(ObservableName name) {
  LinearOperator m = matrix_for(name);
  const auto id = LinearOperator::identity(4);
  LinearOperator plus = 0.5 * (id + m);
  LinearOperator minus = 0.5 * (id - m);
  return Observable{name, std::move(m), std::move(plus), std::move(minus)};
}

Observable build_observable(std::string_view name) {
  auto parsed = parse_observable_name(name);
  if (!parsed) {
    throw std::invalid_argument("unknown observable name: " + std::string(name));
  }
  return build_observable(*parsed);
}

const Observable& observable(ObservableName name) {
  static const std::array<Observable, 7> cache = [] {
    return std::array<Observable, 7>{
        build_observable(ObservableName::sigma_x),   build_observable(ObservableName::upsilon_x),
        build_observable(ObservableName::sigma_z),   build_observable(ObservableName::upsilon_z),
        build_observable(ObservableName::epsilon_x), build_observable(ObservableName::o_z),
        build_observable(ObservableName::identity)};
  }();
  return cache[static_cast<std::size_t>(name)];
}

std::string_view to_string(KeyLabel label) {
  switch (label) {
    case KeyLabel::phi_plus: return "phi_plus";
    case KeyLabel::phi_minus: return "phi_minus";
    case KeyLabel::psi_plus: return "psi_plus";
    case KeyLabel::psi_minus: return "psi_minus";
  }
  return "?";
}

std::optional<KeyLabel> parse_key_label(std::string_view text) {
  for (int i = 0; i < 4; ++i) {
    auto label = static_cast<KeyLabel>(i);
    if (to_string(label) == text) {
      return label;
    }
  }
  return std::nullopt;
}

KeyOutcome KeyOutcome::from_bits(int parity_bit, int phase_bit) {
  if ((parity_bit != 0 && parity_bit != 1) || (phase_bit != 0 && phase_bit != 1)) {
    throw std::invalid_argument("KeyOutcome::from_bits: bits must be 0 or 1");
  }
  return KeyOutcome{static_cast<KeyLabel>(parity_bit * 2 + phase_bit)};
}

KeyOutcome outcome_from_index(int index) {
  if (index < 0 || index > 3) {
    throw std::out_of_range("key outcome index out of range: " + std::to_string(index));
  }
  return KeyOutcome{static_cast<KeyLabel>(index)};
}

KeyBasis build_key_basis() {
  const double h = 1.0 / std::sqrt(2.0);
  auto vec = [&](std::size_t i, std::size_t j, double sign) {
    std::vector<Complex> amps(4);
    amps[i] = h;
    amps[j] = sign * h;
    return StateVector(1, std::move(amps));
  };
  std::array<StateVector, 4> vectors = {vec(0, 3, 1.0), vec(0, 3, -1.0), vec(1, 2, 1.0),
                                        vec(1, 2, -1.0)};
  std::array<LinearOperator, 4> projectors = {
      LinearOperator::outer(vectors[0], vectors[0]), LinearOperator::outer(vectors[1], vectors[1]),
      LinearOperator::outer(vectors[2], vectors[2]), LinearOperator::outer(vectors[3], vectors[3])};
  return KeyBasis{std::move(vectors), std::move(projectors)};
}

const KeyBasis& key_basis() {
  static const KeyBasis basis = build_key_basis();
  return basis;
}

double commutator_norm(const LinearOperator& a, const LinearOperator& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("commutator_norm: dimension mismatch");
  }
  return (a * b - b * a).frobenius_norm();
}

double commutator_norm(const Observable& a, const Observable& b, Composition pairing) {
  const std::size_t n = pairing == Composition::two_party ? 2 : 3;
  return commutator_norm(tensor_power(a.matrix, n), tensor_power(b.matrix, n));
}

}  // namespace quqkd
