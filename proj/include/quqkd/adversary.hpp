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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quqkd/channels.hpp"
#include "quqkd/qudit_core.hpp"
#include "quqkd/rng.hpp"

namespace quqkd {

enum class ProtocolKind { two_party, three_party_controlled };

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol_kind(std::string_view text);
std::size_t party_count(ProtocolKind kind);

enum class AttackKind {
  none,
  intercept_resend_computational,
  intercept_resend_key_basis,
  entangle_probe,
  depolarize,
};

std::string_view to_string(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(std::string_view text);

/// Ququarts in flight from the source; Alice's ququart never travels.
enum class AttackTarget { to_bob, to_charlie };

std::string_view to_string(AttackTarget target);
std::optional<AttackTarget> parse_attack_target(std::string_view text);
/// Index of the targeted ququart in the channel state.
std::size_t target_position(AttackTarget target);

struct AttackModel {
  AttackKind kind = AttackKind::none;
  std::vector<AttackTarget> targets;
  /// Depolarizing probability; ignored by the other kinds.
  double strength = 0.0;

  /// Throws std::invalid_argument if targets are empty (for a real attack),
  /// repeated, or absent from a `party_count`-party channel, or if strength is
  /// outside [0, 1].
  void validate(std::size_t party_count) const;

  bool operator==(const AttackModel&) const = default;
};

/// One sampled trajectory of the attack on a state in transit. The result is
/// normalized. Randomness comes from the eavesdropper's stream only.
StateVector apply_attack(const StateVector& state, const AttackModel& model, Rng& rng);

/// Exact action of the attack on a density matrix.
LinearOperator attack_channel(const LinearOperator& rho, const AttackModel& model);

struct AttackPrediction {
  /// Check id -> probability that a matched check round shows a product
  /// outcome different from the expected eigenvalue.
  std::map<std::string, double> violation;
  /// Expected bit error rate on the key-phase sample.
  double qber = 0.0;
};

/// Density-matrix oracle. Throws std::invalid_argument if the channel's
/// party count disagrees with `protocol` or the model is invalid for it.
AttackPrediction predict(const AttackModel& model, const ChannelSpec& channel,
                         ProtocolKind protocol);

}  // namespace quqkd
