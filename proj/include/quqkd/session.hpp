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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quqkd/adversary.hpp"
#include "quqkd/protocol.hpp"

namespace quqkd {

struct SessionConfig {
  ProtocolKind protocol = ProtocolKind::two_party;
  std::size_t verification_rounds = 1000;
  std::size_t key_rounds = 1000;
  double sample_fraction = 0.1;
  double qber_threshold = 0.0;
  AttackModel attack;
  bool alice_permits = true;
  std::uint64_t seed = 1;
  std::string report_path;

  /// Throws std::invalid_argument describing the first invalid field.
  void validate() const;

  bool operator==(const SessionConfig&) const = default;
};

/// Sets one field from its config-file key. Throws std::invalid_argument on
/// an unknown key or unparsable value.
void apply_config_entry(SessionConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" text; '#' starts a comment. Later entries win.
SessionConfig parse_config(std::string_view text, SessionConfig base = {});
SessionConfig load_config(const std::filesystem::path& path, SessionConfig base = {});

enum class SessionOutcome { key_established, aborted_verification, aborted_qber, no_permission };

std::string_view to_string(SessionOutcome outcome);
/// 0 established, 2 aborted, 3 no permission.
int exit_code(SessionOutcome outcome);

struct CheckStatistics {
  std::string id;
  std::size_t matched = 0;
  std::size_t violations = 0;
  double frequency = 0.0;
  double predicted = 0.0;
  double z_score = 0.0;

  bool operator==(const CheckStatistics&) const = default;
};

struct PartyKey {
  std::string party;
  std::size_t bits = 0;
  /// Hex-packed key; empty unless the session established a key.
  std::string hex;

  bool operator==(const PartyKey&) const = default;
};

struct SessionReport {
  SessionConfig config;

  std::size_t verification_rounds = 0;
  std::size_t matched_rounds = 0;
  std::size_t discarded_rounds = 0;
  std::size_t total_violations = 0;
  std::size_t warnings = 0;
  bool verification_pass = false;
  std::vector<CheckStatistics> checks;

  bool key_phase_run = false;
  std::size_t key_rounds = 0;
  std::size_t sampled_rounds = 0;
  std::size_t kept_rounds = 0;
  std::size_t sample_bit_errors = 0;
  double qber = 0.0;
  double predicted_qber = 0.0;
  double qber_z_score = 0.0;
  bool keys_equal = false;
  std::size_t deduction_rounds = 0;
  double deduction_accuracy = 0.0;
  std::vector<PartyKey> keys;

  SessionOutcome outcome = SessionOutcome::aborted_verification;

  bool operator==(const SessionReport&) const = default;
};

inline constexpr std::string_view kReportSchemaVersion = "1";

/// Runs verification, then (on pass) the key phase. A pure function of the
/// config. Throws std::invalid_argument for an invalid config before any
/// simulation happens.
SessionReport run_session(const SessionConfig& config);

/// Same, over an explicit channel (for negative controls).
SessionReport run_session(const SessionConfig& config, const ChannelSpec& channel);

/// (freq - p) / sqrt(p (1 - p) / n); 0 when n == 0 or when freq == p with a
/// degenerate p; +-infinity for a degenerate p that is contradicted.
double binomial_z_score(double frequency, double p, std::size_t n);

std::string format_report(const SessionReport& report);
/// Inverse of format_report. Throws std::invalid_argument on malformed text
/// or an unsupported schema version.
SessionReport parse_report(std::string_view text);
/// Writes format_report(report); I/O failures raise std::runtime_error
/// naming the path.
void emit_report(const SessionReport& report, const std::filesystem::path& path);

/// One line: outcome, qber, sifted bits, violations.
std::string summary_line(const SessionReport& report);

/// `count` copies of `config` with seeds seed, seed + 1, ...
std::vector<SessionConfig> repeat_configs(const SessionConfig& config, std::size_t count);

/// Independent sessions; results in input order.
std::vector<SessionReport> run_sessions_serial(std::span<const SessionConfig> configs);
/// OpenMP fan-out of run_session; identical results to run_sessions_serial.
std::vector<SessionReport> run_sessions_parallel(std::span<const SessionConfig> configs);

/// Documents joined by "---" lines, in input order.
std::string format_reports(std::span<const SessionReport> reports);

}  // namespace quqkd
