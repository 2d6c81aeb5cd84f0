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

#include <array>
#include <optional>
#include <string_view>

#include "quqkd/qudit_core.hpp"

namespace quqkd {

/// The single-ququart check observables. All are Hermitian involutions.
enum class ObservableName { sigma_x, upsilon_x, sigma_z, upsilon_z, epsilon_x, o_z, identity };

inline constexpr std::array<ObservableName, 7> kAllObservables = {
    ObservableName::sigma_x,   ObservableName::upsilon_x, ObservableName::sigma_z,
    ObservableName::upsilon_z, ObservableName::epsilon_x, ObservableName::o_z,
    ObservableName::identity};

std::string_view to_string(ObservableName name);
std::optional<ObservableName> parse_observable_name(std::string_view text);

struct Observable {
  ObservableName name;
  LinearOperator matrix;
  /// (I + M) / 2 and (I - M) / 2.
  LinearOperator plus_projector;
  LinearOperator minus_projector;

  /// {plus, minus}; outcome index 0 is eigenvalue +1.
  std::array<LinearOperator, 2> projectors() const { return {plus_projector, minus_projector}; }
  bool is_identity() const { return name == ObservableName::identity; }
};

Observable build_observable(ObservableName name);
/// Throws std::invalid_argument for an unrecognized name.
Observable build_observable(std::string_view name);

/// Cached instance; the observables are immutable.
const Observable& observable(ObservableName name);

// --- key basis -------------------------------------------------------------

enum class KeyLabel { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

std::string_view to_string(KeyLabel label);
std::optional<KeyLabel> parse_key_label(std::string_view text);

/// A key-basis outcome and its two-bit coding: parity bit separates phi (0)
/// from psi (1), phase bit separates + (0) from - (1).
struct KeyOutcome {
  KeyLabel label;

  int index() const { return static_cast<int>(label); }
  int parity_bit() const { return index() / 2; }
  int phase_bit() const { return index() % 2; }

  static KeyOutcome from_bits(int parity_bit, int phase_bit);

  bool operator==(const KeyOutcome&) const = default;
};

/// Throws std::out_of_range unless 0 <= index <= 3.
KeyOutcome outcome_from_index(int index);

struct KeyBasis {
  /// |phi+>, |phi->, |psi+>, |psi-> in that order.
  std::array<StateVector, 4> vectors;
  std::array<LinearOperator, 4> projectors;
};

KeyBasis build_key_basis();
const KeyBasis& key_basis();

// --- algebraic checks ----------------------------------------------------

enum class Composition { two_party, three_party };

/// Frobenius norm of [A, B].
double commutator_norm(const LinearOperator& a, const LinearOperator& b);

/// Frobenius norm of [a^{(x)n}, b^{(x)n}] with n = 2 or 3 per `pairing`.
double commutator_norm(const Observable& a, const Observable& b, Composition pairing);

}  // namespace quqkd
