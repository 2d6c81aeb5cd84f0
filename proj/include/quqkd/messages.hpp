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

// Classical messages exchanged between the parties, and the FIFO bus that
// delivers them. Every message has a canonical one-line text form, which is
// what session transcripts contain.

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "quqkd/observables.hpp"

namespace quqkd {

enum class Party { alice, bob, charlie };

std::string_view to_string(Party party);
std::optional<Party> parse_party(std::string_view text);

struct OperatorAnnouncement {
  std::size_t round;
  ObservableName op;
  int outcome;  // +1 or -1
  bool operator==(const OperatorAnnouncement&) const = default;
};

struct SampleCheckRequest {
  std::vector<std::size_t> rounds;
  bool operator==(const SampleCheckRequest&) const = default;
};

using RoundOutcomes = std::vector<std::pair<std::size_t, KeyOutcome>>;

struct SampleCheckReveal {
  RoundOutcomes outcomes;
  bool operator==(const SampleCheckReveal&) const = default;
};

struct ControlReveal {
  RoundOutcomes outcomes;
  bool operator==(const ControlReveal&) const = default;
};

struct Abort {
  std::string reason;
  bool operator==(const Abort&) const = default;
};

using MessageBody =
    std::variant<OperatorAnnouncement, SampleCheckRequest, SampleCheckReveal, ControlReveal, Abort>;

struct ClassicalMessage {
  Party sender;
  MessageBody body;

  /// Canonical text, e.g. "bob OperatorAnnouncement round=3 op=sigma_x outcome=-1".
  std::string serialize() const;
  /// Inverse of serialize; throws std::invalid_argument on malformed input.
  static ClassicalMessage parse(std::string_view line);

  bool operator==(const ClassicalMessage&) const = default;
};

/// Deterministic FIFO scheduler. Messages are delivered in posting order and
/// recorded in the transcript at posting time.
class MessageBus {
 public:
  void post(ClassicalMessage message);
  std::optional<ClassicalMessage> next();
  bool empty() const { return queue_.empty(); }

  const std::vector<std::string>& transcript() const { return transcript_; }

 private:
  std::deque<ClassicalMessage> queue_;
  std::vector<std::string> transcript_;
};

}  // namespace quqkd
