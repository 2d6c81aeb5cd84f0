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

#include "quqkd/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace quqkd {

namespace {

constexpr std::array<ObservableName, 4> kTwoPartyMenu = {
    ObservableName::sigma_x, ObservableName::sigma_z, ObservableName::upsilon_x,
    ObservableName::upsilon_z};

constexpr std::array<ObservableName, 4> kThreePartyMenu = {
    ObservableName::sigma_x, ObservableName::epsilon_x, ObservableName::o_z,
    ObservableName::identity};

constexpr std::array<Party, 3> kParties = {Party::alice, Party::bob, Party::charlie};

struct Announced {
  ObservableName op;
  int outcome;
};

// One participant. Holds only its own measurement record and whatever it has
// learned from delivered messages.
class PartyAgent {
 public:
  PartyAgent(Party id, std::size_t position, Rng& rng) : id_(id), position_(position), rng_(rng) {}

  Party id() const { return id_; }

  void measure_check(StateVector& shared, std::span<const ObservableName> menu) {
    const ObservableName op = menu[rng_.below(menu.size())];
    int outcome = 1;
    if (op != ObservableName::identity) {
      const auto projectors = observable(op).projectors();
      auto result = measure_local(shared, projectors, position_, rng_);
      shared = std::move(result.post_state);
      outcome = result.outcome_index == 0 ? 1 : -1;
    }
    checks_.push_back({op, outcome});
  }

  void measure_key(StateVector& shared) {
    auto result = measure_local(shared, key_basis().projectors, position_, rng_);
    shared = std::move(result.post_state);
    keys_.push_back(outcome_from_index(static_cast<int>(result.outcome_index)));
  }

  const std::vector<Announced>& own_checks() const { return checks_; }
  const std::vector<KeyOutcome>& own_keys() const { return keys_; }

  void announce_checks(MessageBus& bus) const {
    for (std::size_t r = 0; r < checks_.size(); ++r) {
      bus.post({id_, OperatorAnnouncement{r, checks_[r].op, checks_[r].outcome}});
    }
  }

  void reveal(MessageBus& bus, std::span<const std::size_t> rounds) const {
    RoundOutcomes outcomes;
    outcomes.reserve(rounds.size());
    for (auto r : rounds) {
      outcomes.emplace_back(r, keys_.at(r));
    }
    bus.post({id_, SampleCheckReveal{std::move(outcomes)}});
  }

  void receive(const ClassicalMessage& message) {
    std::visit([&](const auto& body) { on(message.sender, body); }, message.body);
  }

  /// Announced check table of `party` as seen by this agent.
  std::vector<Announced> check_table(Party party, std::size_t num_rounds) const {
    if (party == id_) {
      return checks_;
    }
    const auto& got = announced_.at(party);
    std::vector<Announced> table(num_rounds, Announced{ObservableName::identity, 0});
    for (const auto& [round, entry] : got) {
      table.at(round) = entry;
    }
    for (const auto& entry : table) {
      if (entry.outcome == 0) {
        throw std::logic_error("missing operator announcement");
      }
    }
    return table;
  }

  const std::vector<std::size_t>& sample_request() const { return sample_request_; }
  const RoundOutcomes& revealed_by(Party party) const { return revealed_.at(party); }
  const std::optional<RoundOutcomes>& control() const { return control_; }
  bool aborted() const { return abort_reason_.has_value(); }

 private:
  void on(Party sender, const OperatorAnnouncement& m) {
    announced_[sender].emplace_back(m.round, Announced{m.op, m.outcome});
  }
  void on(Party, const SampleCheckRequest& m) { sample_request_ = m.rounds; }
  void on(Party sender, const SampleCheckReveal& m) { revealed_[sender] = m.outcomes; }
  void on(Party, const ControlReveal& m) { control_ = m.outcomes; }
  void on(Party, const Abort& m) { abort_reason_ = m.reason; }

  Party id_;
  std::size_t position_;
  Rng& rng_;
  std::vector<Announced> checks_;
  std::vector<KeyOutcome> keys_;
  std::map<Party, std::vector<std::pair<std::size_t, Announced>>> announced_;
  std::vector<std::size_t> sample_request_;
  std::map<Party, RoundOutcomes> revealed_;
  std::optional<RoundOutcomes> control_;
  std::optional<std::string> abort_reason_;
};

std::vector<PartyAgent> make_agents(std::size_t count, SessionStreams& streams) {
  std::vector<PartyAgent> agents;
  agents.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    agents.emplace_back(kParties[i], i, streams.of(kParties[i]));
  }
  return agents;
}

void deliver_all(MessageBus& bus, std::vector<PartyAgent>& agents) {
  while (auto message = bus.next()) {
    for (auto& agent : agents) {
      if (agent.id() != message->sender) {
        agent.receive(*message);
      }
    }
  }
}

void require_party_count(const ChannelSpec& channel, std::size_t expected, const char* what) {
  if (channel.party_count != expected) {
    throw std::invalid_argument(std::string(what) + ": expected a " + std::to_string(expected) +
                                "-party channel");
  }
}

VerificationResult run_verification(const ChannelSpec& channel, std::size_t num_rounds,
                                    const AttackModel& attack, std::uint64_t seed,
                                    std::span<const ObservableName> menu) {
  if (num_rounds < 1) {
    throw std::invalid_argument("verification phase needs at least one round");
  }
  attack.validate(channel.party_count);
  SessionStreams streams = SessionStreams::for_phase(seed, Phase::verification);
  auto agents = make_agents(channel.party_count, streams);

  for (std::size_t r = 0; r < num_rounds; ++r) {
    StateVector shared = apply_attack(channel.state, attack, streams.eve);
    for (auto& agent : agents) {
      agent.measure_check(shared, menu);
    }
  }

  // Batch announcement after all rounds, in party order.
  MessageBus bus;
  for (const auto& agent : agents) {
    agent.announce_checks(bus);
  }
  deliver_all(bus, agents);

  // Evaluation from Alice's view; every honest party computes the same.
  const PartyAgent& alice = agents.front();
  std::vector<std::vector<Announced>> tables;
  for (std::size_t p = 0; p < agents.size(); ++p) {
    tables.push_back(alice.check_table(kParties[p], num_rounds));
  }

  VerificationResult result;
  for (const auto& check : channel.checks) {
    result.per_check[check.id()];
  }
  result.records.reserve(num_rounds);
  for (std::size_t r = 0; r < num_rounds; ++r) {
    RoundRecord rec;
    rec.index = r;
    rec.phase = Phase::verification;
    int product = 1;
    for (const auto& table : tables) {
      rec.operators.push_back(table[r].op);
      rec.check_outcomes.push_back(table[r].outcome);
      product *= table[r].outcome;
    }
    const auto match = std::find_if(channel.checks.begin(), channel.checks.end(),
                                    [&](const Check& c) { return c.operators == rec.operators; });
    if (match == channel.checks.end()) {
      rec.kept = false;
      rec.discard_reason = DiscardReason::operator_mismatch;
      ++result.discarded;
    } else {
      rec.kept = true;
      rec.check_id = match->id();
      rec.violated = product != match->expected;
      auto& tally = result.per_check[*rec.check_id];
      ++tally.matched;
      if (rec.violated) {
        ++tally.violations;
        result.pass = false;
      }
      ++result.matched;
    }
    result.records.push_back(std::move(rec));
  }
  if (result.matched == 0) {
    ++result.warnings;
  }
  result.transcript = bus.transcript();
  return result;
}

std::vector<std::size_t> choose_sample(std::size_t num_rounds, double fraction, Rng& rng) {
  const auto count =
      std::min(num_rounds, static_cast<std::size_t>(std::llround(fraction * num_rounds)));
  std::vector<std::size_t> all(num_rounds);
  for (std::size_t i = 0; i < num_rounds; ++i) {
    all[i] = i;
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(all[i], all[i + rng.below(num_rounds - i)]);
  }
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

void check_settings(const KeyPhaseSettings& settings) {
  if (!(settings.sample_fraction >= 0.0 && settings.sample_fraction < 1.0)) {
    throw std::invalid_argument("sample_fraction must lie in [0, 1)");
  }
}

std::vector<RoundRecord> key_records(const std::vector<PartyAgent>& agents,
                                     std::size_t num_rounds,
                                     std::span<const std::size_t> sample) {
  std::vector<bool> sampled(num_rounds, false);
  for (auto r : sample) {
    sampled[r] = true;
  }
  std::vector<RoundRecord> records;
  records.reserve(num_rounds);
  for (std::size_t r = 0; r < num_rounds; ++r) {
    RoundRecord rec;
    rec.index = r;
    rec.phase = Phase::key;
    for (const auto& agent : agents) {
      rec.key_outcomes.push_back(agent.own_keys()[r]);
    }
    rec.kept = !sampled[r];
    if (!rec.kept) {
      rec.discard_reason = DiscardReason::sample_consumed;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::size_t bit_errors(KeyOutcome expected, KeyOutcome actual) {
  return static_cast<std::size_t>(expected.parity_bit() != actual.parity_bit()) +
         static_cast<std::size_t>(expected.phase_bit() != actual.phase_bit());
}

KeyOutcome complement(KeyOutcome o) {
  return KeyOutcome::from_bits(1 - o.parity_bit(), 1 - o.phase_bit());
}

std::string qber_abort_reason(double qber, double threshold) {
  return "qber " + std::to_string(qber) + " exceeds threshold " + std::to_string(threshold);
}

}  // namespace

std::string_view to_string(DiscardReason reason) {
  return reason == DiscardReason::operator_mismatch ? "OperatorMismatch" : "SampleConsumed";
}

std::string SiftedKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t byte = 0; byte * 8 < bits.size(); ++byte) {
    unsigned value = 0;
    for (std::size_t b = 0; b < 8; ++b) {
      const std::size_t i = byte * 8 + b;
      value = (value << 1) | (i < bits.size() ? bits[i] : 0u);
    }
    out += kDigits[value >> 4];
    out += kDigits[value & 0xF];
  }
  return out;
}

SiftedKey SiftedKey::from_hex(std::string_view hex, std::size_t num_bits) {
  if (hex.size() != 2 * ((num_bits + 7) / 8)) {
    throw std::invalid_argument("SiftedKey::from_hex: length does not match bit count");
  }
  SiftedKey key;
  key.bits.reserve(num_bits);
  for (std::size_t i = 0; i < num_bits; ++i) {
    const char c = hex[i / 4];
    int nibble;
    if (c >= '0' && c <= '9') {
      nibble = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nibble = c - 'a' + 10;
    } else {
      throw std::invalid_argument("SiftedKey::from_hex: bad hex digit");
    }
    key.bits.push_back(static_cast<std::uint8_t>((nibble >> (3 - i % 4)) & 1));
  }
  return key;
}

SessionStreams SessionStreams::for_phase(std::uint64_t seed, Phase phase) {
  const std::uint64_t base = phase == Phase::verification ? 0 : 10;
  return SessionStreams{Rng(seed, base + 1), Rng(seed, base + 2), Rng(seed, base + 3),
                        Rng(seed, base + 4)};
}

Rng& SessionStreams::of(Party party) {
  switch (party) {
    case Party::alice: return alice;
    case Party::bob: return bob;
    case Party::charlie: return charlie;
  }
  return alice;
}

std::span<const ObservableName> verification_menu(ProtocolKind protocol) {
  return protocol == ProtocolKind::two_party ? std::span<const ObservableName>(kTwoPartyMenu)
                                             : std::span<const ObservableName>(kThreePartyMenu);
}

VerificationResult run_verification_phase_2p(const ChannelSpec& channel, std::size_t num_rounds,
                                             const AttackModel& attack, std::uint64_t seed) {
  require_party_count(channel, 2, "run_verification_phase_2p");
  return run_verification(channel, num_rounds, attack, seed,
                          verification_menu(ProtocolKind::two_party));
}

VerificationResult run_verification_phase_3p(const ChannelSpec& channel, std::size_t num_rounds,
                                             const AttackModel& attack, std::uint64_t seed) {
  require_party_count(channel, 3, "run_verification_phase_3p");
  return run_verification(channel, num_rounds, attack, seed,
                          verification_menu(ProtocolKind::three_party_controlled));
}

TwoPartyKeyResult run_key_phase_2p(const ChannelSpec& channel, const KeyPhaseSettings& settings,
                                   const AttackModel& attack, std::uint64_t seed) {
  require_party_count(channel, 2, "run_key_phase_2p");
  check_settings(settings);
  attack.validate(2);
  SessionStreams streams = SessionStreams::for_phase(seed, Phase::key);
  auto agents = make_agents(2, streams);
  const std::size_t n = settings.num_rounds;

  for (std::size_t r = 0; r < n; ++r) {
    StateVector shared = apply_attack(channel.state, attack, streams.eve);
    for (auto& agent : agents) {
      agent.measure_key(shared);
    }
  }

  MessageBus bus;
  const auto sample = choose_sample(n, settings.sample_fraction, streams.alice);
  bus.post({Party::alice, SampleCheckRequest{sample}});
  deliver_all(bus, agents);
  for (const auto& agent : agents) {
    agent.reveal(bus, agent.id() == Party::alice ? sample : agent.sample_request());
  }
  deliver_all(bus, agents);

  TwoPartyKeyResult result;
  result.sampled = sample.size();
  // Alice's view: Bob's outcome should have both bits opposite to hers.
  const auto& bob_revealed = agents[0].revealed_by(Party::bob);
  for (const auto& [round, bob_outcome] : bob_revealed) {
    result.sample_bit_errors += bit_errors(complement(agents[0].own_keys()[round]), bob_outcome);
  }
  result.qber = sample.empty() ? 0.0
                               : static_cast<double>(result.sample_bit_errors) /
                                     static_cast<double>(2 * sample.size());
  result.pass = result.qber <= settings.qber_threshold;
  result.records = key_records(agents, n, sample);

  if (!result.pass) {
    bus.post({Party::alice, Abort{qber_abort_reason(result.qber, settings.qber_threshold)}});
    deliver_all(bus, agents);
  } else {
    const std::array<BitCoding, 2> coding = {BitCoding::direct, BitCoding::complement};
    auto sifted = sift_and_compare(result.records, coding);
    result.alice_key = std::move(sifted.keys[0]);
    result.bob_key = std::move(sifted.keys[1]);
  }
  result.transcript = bus.transcript();
  return result;
}

KeyOutcome deduce_partner_outcome(KeyOutcome alice, KeyOutcome own) {
  return KeyOutcome::from_bits(own.parity_bit() ^ alice.parity_bit(),
                               own.phase_bit() ^ alice.phase_bit());
}

ControlledKeyResult run_key_phase_3p_controlled(const ChannelSpec& channel,
                                                const KeyPhaseSettings& settings,
                                                bool alice_permits, const AttackModel& attack,
                                                std::uint64_t seed) {
  require_party_count(channel, 3, "run_key_phase_3p_controlled");
  check_settings(settings);
  attack.validate(3);
  SessionStreams streams = SessionStreams::for_phase(seed, Phase::key);
  auto agents = make_agents(3, streams);
  const std::size_t n = settings.num_rounds;

  for (std::size_t r = 0; r < n; ++r) {
    StateVector shared = apply_attack(channel.state, attack, streams.eve);
    for (auto& agent : agents) {
      agent.measure_key(shared);
    }
  }

  MessageBus bus;
  const auto sample = choose_sample(n, settings.sample_fraction, streams.alice);
  bus.post({Party::alice, SampleCheckRequest{sample}});
  deliver_all(bus, agents);
  for (const auto& agent : agents) {
    agent.reveal(bus, agent.id() == Party::alice ? sample : agent.sample_request());
  }
  deliver_all(bus, agents);

  ControlledKeyResult result;
  result.sampled = sample.size();
  result.permitted = alice_permits;
  const PartyAgent& alice = agents[0];
  const auto& bob_revealed = alice.revealed_by(Party::bob);
  const auto& charlie_revealed = alice.revealed_by(Party::charlie);
  for (std::size_t i = 0; i < bob_revealed.size(); ++i) {
    const std::size_t round = bob_revealed[i].first;
    const KeyOutcome expected =
        deduce_partner_outcome(alice.own_keys()[round], bob_revealed[i].second);
    result.sample_bit_errors += bit_errors(expected, charlie_revealed.at(i).second);
  }
  result.qber = sample.empty() ? 0.0
                               : static_cast<double>(result.sample_bit_errors) /
                                     static_cast<double>(2 * sample.size());
  result.pass = result.qber <= settings.qber_threshold;
  result.records = key_records(agents, n, sample);

  if (!result.pass) {
    bus.post({Party::alice, Abort{qber_abort_reason(result.qber, settings.qber_threshold)}});
    deliver_all(bus, agents);
    result.transcript = bus.transcript();
    return result;
  }

  if (alice_permits) {
    RoundOutcomes reveal;
    for (const auto& rec : result.records) {
      if (rec.kept) {
        reveal.emplace_back(rec.index, alice.own_keys()[rec.index]);
      }
    }
    bus.post({Party::alice, ControlReveal{std::move(reveal)}});
    deliver_all(bus, agents);
  }

  // Bob's estimate of Charlie's outcome on every kept round: the XOR law with
  // Alice's revealed outcome, or his own outcome when Alice stays silent.
  const PartyAgent& bob = agents[1];
  const PartyAgent& charlie = agents[2];
  std::vector<std::uint8_t> bob_bits;
  std::vector<std::uint8_t> charlie_bits;
  std::size_t control_index = 0;
  for (const auto& rec : result.records) {
    if (!rec.kept) {
      continue;
    }
    const KeyOutcome bob_own = bob.own_keys()[rec.index];
    KeyOutcome estimate = bob_own;
    if (bob.control()) {
      const auto& [round, alice_outcome] = bob.control()->at(control_index++);
      if (round != rec.index) {
        throw std::logic_error("control reveal out of order");
      }
      estimate = deduce_partner_outcome(alice_outcome, bob_own);
    }
    const KeyOutcome actual = charlie.own_keys()[rec.index];
    ++result.deduction_rounds;
    if (estimate == actual) {
      ++result.deduction_hits;
    }
    bob_bits.push_back(static_cast<std::uint8_t>(estimate.parity_bit()));
    bob_bits.push_back(static_cast<std::uint8_t>(estimate.phase_bit()));
    charlie_bits.push_back(static_cast<std::uint8_t>(actual.parity_bit()));
    charlie_bits.push_back(static_cast<std::uint8_t>(actual.phase_bit()));
  }
  result.deduction_accuracy = result.deduction_rounds == 0
                                  ? 0.0
                                  : static_cast<double>(result.deduction_hits) /
                                        static_cast<double>(result.deduction_rounds);
  if (alice_permits) {
    result.bob_key.bits = std::move(bob_bits);
    result.charlie_key.bits = std::move(charlie_bits);
  }
  result.transcript = bus.transcript();
  return result;
}

SiftResult sift_and_compare(std::span<const RoundRecord> records,
                            std::span<const BitCoding> coding) {
  SiftResult result;
  result.keys.resize(coding.size());
  for (const auto& rec : records) {
    if (rec.phase != Phase::key || !rec.kept) {
      continue;
    }
    if (rec.key_outcomes.size() != coding.size()) {
      throw std::invalid_argument("sift_and_compare: round " + std::to_string(rec.index) +
                                  " is missing an outcome");
    }
    for (std::size_t p = 0; p < coding.size(); ++p) {
      KeyOutcome o = rec.key_outcomes[p];
      if (coding[p] == BitCoding::complement) {
        o = complement(o);
      }
      result.keys[p].bits.push_back(static_cast<std::uint8_t>(o.parity_bit()));
      result.keys[p].bits.push_back(static_cast<std::uint8_t>(o.phase_bit()));
    }
  }
  if (!result.keys.empty()) {
    const auto& first = result.keys.front().bits;
    for (std::size_t i = 0; i < first.size(); ++i) {
      for (std::size_t p = 1; p < result.keys.size(); ++p) {
        if (result.keys[p].bits[i] != first[i]) {
          result.mismatch_positions.push_back(i);
          break;
        }
      }
    }
  }
  return result;
}

}  // namespace quqkd
