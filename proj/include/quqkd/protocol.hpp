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

// Protocol engine for the two-party and controlled three-party key
// distribution schemes. Each phase follows the same pattern: the source emits
// one copy of the channel per round (passing it through the attack model), the
// parties measure their own ququarts with their own random streams, and then
// all coordination happens through ClassicalMessages on a MessageBus.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quqkd/adversary.hpp"
#include "quqkd/channels.hpp"
#include "quqkd/messages.hpp"
#include "quqkd/observables.hpp"
#include "quqkd/rng.hpp"

namespace quqkd {

enum class Phase { verification, key };
enum class DiscardReason { operator_mismatch, sample_consumed };

std::string_view to_string(DiscardReason reason);

struct RoundRecord {
  std::size_t index = 0;
  Phase phase = Phase::verification;
  /// Verification: operator chosen by each party, in party order.
  std::vector<ObservableName> operators;
  /// Verification: +-1 outcome per party (identity reports +1).
  std::vector<int> check_outcomes;
  /// Key: key-basis outcome per party.
  std::vector<KeyOutcome> key_outcomes;
  bool kept = false;
  std::optional<DiscardReason> discard_reason;
  /// Matched verification rounds: id of the check and whether it failed.
  std::optional<std::string> check_id;
  bool violated = false;
};

/// Two bits per kept key round: parity bit then phase bit.
struct SiftedKey {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  bool empty() const { return bits.empty(); }
  /// Bits packed most-significant first, zero padded to whole bytes.
  std::string hex() const;
  static SiftedKey from_hex(std::string_view hex, std::size_t num_bits);

  bool operator==(const SiftedKey&) const = default;
};

/// Random streams of one session. Each party owns an independent stream
/// derived from the session seed; the eavesdropper has its own.
struct SessionStreams {
  Rng alice;
  Rng bob;
  Rng charlie;
  Rng eve;

  static SessionStreams for_phase(std::uint64_t seed, Phase phase);
  Rng& of(Party party);
};

struct CheckTally {
  std::size_t matched = 0;
  std::size_t violations = 0;
  bool operator==(const CheckTally&) const = default;
};

struct VerificationResult {
  std::vector<RoundRecord> records;
  bool pass = true;
  std::size_t matched = 0;
  std::size_t discarded = 0;
  /// Incremented when the check set is empty and the pass is vacuous.
  std::size_t warnings = 0;
  /// Keyed by check id; every check of the channel appears.
  std::map<std::string, CheckTally> per_check;
  std::vector<std::string> transcript;
};

/// Operators each party draws from, uniformly.
std::span<const ObservableName> verification_menu(ProtocolKind protocol);

VerificationResult run_verification_phase_2p(const ChannelSpec& channel, std::size_t num_rounds,
                                             const AttackModel& attack, std::uint64_t seed);

VerificationResult run_verification_phase_3p(const ChannelSpec& channel, std::size_t num_rounds,
                                             const AttackModel& attack, std::uint64_t seed);

struct KeyPhaseSettings {
  std::size_t num_rounds = 0;
  double sample_fraction = 0.1;
  double qber_threshold = 0.0;
};

struct TwoPartyKeyResult {
  std::vector<RoundRecord> records;
  SiftedKey alice_key;
  SiftedKey bob_key;
  std::size_t sampled = 0;
  std::size_t sample_bit_errors = 0;
  double qber = 0.0;
  bool pass = false;
  std::vector<std::string> transcript;
};

TwoPartyKeyResult run_key_phase_2p(const ChannelSpec& channel, const KeyPhaseSettings& settings,
                                   const AttackModel& attack, std::uint64_t seed);

struct ControlledKeyResult {
  std::vector<RoundRecord> records;
  /// Bob's deduction of Charlie's outcome bits; empty without permission.
  SiftedKey bob_key;
  /// Charlie's own outcome bits; empty without permission.
  SiftedKey charlie_key;
  std::size_t sampled = 0;
  std::size_t sample_bit_errors = 0;
  double qber = 0.0;
  /// Fraction of non-sampled rounds where Bob's estimate of Charlie's full
  /// outcome is right.
  double deduction_accuracy = 0.0;
  std::size_t deduction_rounds = 0;
  std::size_t deduction_hits = 0;
  bool permitted = false;
  bool pass = false;
  std::vector<std::string> transcript;
};

ControlledKeyResult run_key_phase_3p_controlled(const ChannelSpec& channel,
                                                const KeyPhaseSettings& settings,
                                                bool alice_permits, const AttackModel& attack,
                                                std::uint64_t seed);

/// Charlie's outcome implied by Alice's and Bob's: bitwise XOR of parity and
/// phase bits. Symmetric in Bob and Charlie.
KeyOutcome deduce_partner_outcome(KeyOutcome alice, KeyOutcome own);

enum class BitCoding { direct, complement };

struct SiftResult {
  std::vector<SiftedKey> keys;
  /// Bit positions where some party's key differs from the first party's.
  std::vector<std::size_t> mismatch_positions;
};

/// Serializes kept key rounds, one key per entry of `coding`. Throws
/// std::invalid_argument if a kept key round lacks an outcome for a party.
SiftResult sift_and_compare(std::span<const RoundRecord> records,
                            std::span<const BitCoding> coding);

}  // namespace quqkd
