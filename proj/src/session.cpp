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

#include "quqkd/session.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "quqkd/channels.hpp"

namespace quqkd {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("invalid value for " + std::string(key) + ": '" +
                              std::string(value) + "'");
}

template <typename Number>
Number parse_number(std::string_view key, std::string_view value) {
  Number out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value);
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

std::vector<AttackTarget> parse_targets(std::string_view key, std::string_view value) {
  std::vector<AttackTarget> out;
  std::size_t start = 0;
  while (start <= value.size() && !value.empty()) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma - start));
    auto target = parse_attack_target(item);
    if (!target) {
      bad_value(key, value);
    }
    out.push_back(*target);
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

CheckStatistics statistics_for(const Check& check, const CheckTally& tally,
                               const AttackPrediction& prediction) {
  CheckStatistics s;
  s.id = check.id();
  s.matched = tally.matched;
  s.violations = tally.violations;
  s.frequency = tally.matched == 0 ? 0.0
                                   : static_cast<double>(tally.violations) /
                                         static_cast<double>(tally.matched);
  s.predicted = prediction.violation.at(s.id);
  s.z_score = binomial_z_score(s.frequency, s.predicted, s.matched);
  return s;
}

PartyKey party_key(Party party, const SiftedKey& key, bool established) {
  return PartyKey{std::string(to_string(party)), established ? key.size() : 0,
                  established ? key.hex() : std::string{}};
}

}  // namespace

void SessionConfig::validate() const {
  if (!(sample_fraction >= 0.0 && sample_fraction < 1.0)) {
    throw std::invalid_argument("sample_fraction must lie in [0, 1)");
  }
  if (!(qber_threshold >= 0.0 && qber_threshold < 1.0)) {
    throw std::invalid_argument("qber_threshold must lie in [0, 1)");
  }
  attack.validate(party_count(protocol));
}

void apply_config_entry(SessionConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "protocol") {
    auto p = parse_protocol_kind(value);
    if (!p) bad_value(key, value);
    config.protocol = *p;
  } else if (key == "verification_rounds") {
    config.verification_rounds = parse_number<std::size_t>(key, value);
  } else if (key == "key_rounds") {
    config.key_rounds = parse_number<std::size_t>(key, value);
  } else if (key == "sample_fraction") {
    config.sample_fraction = parse_number<double>(key, value);
  } else if (key == "qber_threshold") {
    config.qber_threshold = parse_number<double>(key, value);
  } else if (key == "attack") {
    auto a = parse_attack_kind(value);
    if (!a) bad_value(key, value);
    config.attack.kind = *a;
  } else if (key == "attack_target") {
    config.attack.targets = parse_targets(key, value);
  } else if (key == "attack_strength") {
    config.attack.strength = parse_number<double>(key, value);
  } else if (key == "alice_permits") {
    config.alice_permits = parse_bool(key, value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "report") {
    config.report_path = std::string(value);
  } else {
    throw std::invalid_argument("unknown config key: " + std::string(key));
  }
}

SessionConfig parse_config(std::string_view text, SessionConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_config_entry(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

SessionConfig load_config(const std::filesystem::path& path, SessionConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

std::string_view to_string(SessionOutcome outcome) {
  switch (outcome) {
    case SessionOutcome::key_established: return "KeyEstablished";
    case SessionOutcome::aborted_verification: return "AbortedVerification";
    case SessionOutcome::aborted_qber: return "AbortedQber";
    case SessionOutcome::no_permission: return "NoPermission";
  }
  return "?";
}

int exit_code(SessionOutcome outcome) {
  switch (outcome) {
    case SessionOutcome::key_established: return 0;
    case SessionOutcome::aborted_verification:
    case SessionOutcome::aborted_qber: return 2;
    case SessionOutcome::no_permission: return 3;
  }
  return 1;
}

double binomial_z_score(double frequency, double p, std::size_t n) {
  if (n == 0) {
    return 0.0;
  }
  const double variance = p * (1.0 - p) / static_cast<double>(n);
  if (variance <= 0.0) {
    if (frequency == p) {
      return 0.0;
    }
    return frequency > p ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  }
  return (frequency - p) / std::sqrt(variance);
}

SessionReport run_session(const SessionConfig& config) {
  config.validate();
  return run_session(config, config.protocol == ProtocolKind::two_party
                                  ? make_channel_two_party()
                                  : make_channel_three_party());
}

SessionReport run_session(const SessionConfig& config, const ChannelSpec& channel) {
  config.validate();
  if (channel.party_count != party_count(config.protocol)) {
    throw std::invalid_argument("channel party count does not match the protocol");
  }
  const bool two_party = config.protocol == ProtocolKind::two_party;
  const AttackPrediction prediction = predict(config.attack, channel, config.protocol);

  SessionReport report;
  report.config = config;
  report.config.report_path.clear();
  report.predicted_qber = prediction.qber;

  VerificationResult verification;
  if (config.verification_rounds > 0) {
    verification = two_party ? run_verification_phase_2p(channel, config.verification_rounds,
                                                         config.attack, config.seed)
                             : run_verification_phase_3p(channel, config.verification_rounds,
                                                         config.attack, config.seed);
  } else {
    for (const auto& check : channel.checks) {
      verification.per_check[check.id()];
    }
    verification.warnings = 1;
  }
  report.verification_rounds = config.verification_rounds;
  report.matched_rounds = verification.matched;
  report.discarded_rounds = verification.discarded;
  report.warnings = verification.warnings;
  report.verification_pass = verification.pass;
  for (const auto& check : channel.checks) {
    report.checks.push_back(
        statistics_for(check, verification.per_check.at(check.id()), prediction));
    report.total_violations += report.checks.back().violations;
  }

  if (!verification.pass) {
    report.outcome = SessionOutcome::aborted_verification;
    return report;
  }

  report.key_phase_run = true;
  report.key_rounds = config.key_rounds;
  const KeyPhaseSettings settings{config.key_rounds, config.sample_fraction,
                                  config.qber_threshold};
  if (two_party) {
    const auto key = run_key_phase_2p(channel, settings, config.attack, config.seed);
    report.sampled_rounds = key.sampled;
    report.sample_bit_errors = key.sample_bit_errors;
    report.qber = key.qber;
    report.outcome = key.pass ? SessionOutcome::key_established : SessionOutcome::aborted_qber;
    const bool established = report.outcome == SessionOutcome::key_established;
    report.keys_equal = established && key.alice_key == key.bob_key;
    report.keys.push_back(party_key(Party::alice, key.alice_key, established));
    report.keys.push_back(party_key(Party::bob, key.bob_key, established));
  } else {
    const auto key = run_key_phase_3p_controlled(channel, settings, config.alice_permits,
                                                 config.attack, config.seed);
    report.sampled_rounds = key.sampled;
    report.sample_bit_errors = key.sample_bit_errors;
    report.qber = key.qber;
    report.deduction_rounds = key.deduction_rounds;
    report.deduction_accuracy = key.deduction_accuracy;
    if (!key.pass) {
      report.outcome = SessionOutcome::aborted_qber;
    } else if (!config.alice_permits) {
      report.outcome = SessionOutcome::no_permission;
    } else {
      report.outcome = SessionOutcome::key_established;
    }
    const bool established = report.outcome == SessionOutcome::key_established;
    report.keys_equal = established && key.bob_key == key.charlie_key;
    report.keys.push_back(party_key(Party::bob, key.bob_key, established));
    report.keys.push_back(party_key(Party::charlie, key.charlie_key, established));
  }
  report.kept_rounds = report.key_rounds - report.sampled_rounds;
  report.qber_z_score =
      binomial_z_score(report.qber, report.predicted_qber, 2 * report.sampled_rounds);
  return report;
}

std::vector<SessionConfig> repeat_configs(const SessionConfig& config, std::size_t count) {
  std::vector<SessionConfig> out(count, config);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].seed = config.seed + i;
  }
  return out;
}

std::vector<SessionReport> run_sessions_serial(std::span<const SessionConfig> configs) {
  std::vector<SessionReport> out;
  out.reserve(configs.size());
  for (const auto& c : configs) {
    out.push_back(run_session(c));
  }
  return out;
}

std::vector<SessionReport> run_sessions_parallel(std::span<const SessionConfig> configs) {
  for (const auto& c : configs) {
    c.validate();
  }
  std::vector<SessionReport> out(configs.size());
  const auto n = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_session(configs[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace quqkd
