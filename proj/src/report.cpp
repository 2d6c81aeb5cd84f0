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

#include <charconv>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <system_error>
#include <type_traits>
#include <utility>

#include "quqkd/session.hpp"

namespace quqkd {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) {
    throw std::logic_error("format_double: to_chars failed");
  }
  return std::string(buf, ptr);
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string join_targets(const std::vector<AttackTarget>& targets) {
  std::string out;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (i) out += ',';
    out += to_string(targets[i]);
  }
  return out;
}

class Writer {
 public:
  template <typename T>
  void put(std::string_view key, const T& value) {
    std::string v;
    if constexpr (std::is_same_v<T, bool>) {
      v = format_bool(value);
    } else if constexpr (std::is_same_v<T, double>) {
      v = format_double(value);
    } else if constexpr (std::is_integral_v<T>) {
      v = std::to_string(value);
    } else {
      v = std::string(value);
    }
    out_ += key;
    out_ += v.empty() ? " =" : " = ";
    out_ += v;
    out_ += '\n';
  }
  std::string str() && { return std::move(out_); }

 private:
  std::string out_;
};

class Fields {
 public:
  explicit Fields(std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
      const auto eol = text.find('\n');
      std::string_view line = text.substr(0, eol);
      text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
      ++line_no;
      if (line.empty() || line.front() == '#') {
        continue;
      }
      const auto eq = line.find(" =");
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("report line " + std::to_string(line_no) +
                                    ": expected 'key = value'");
      }
      std::string_view value = line.substr(eq + 2);
      if (!value.empty() && value.front() == ' ') {
        value.remove_prefix(1);
      }
      if (!values_.emplace(std::string(line.substr(0, eq)), std::string(value)).second) {
        throw std::invalid_argument("report: duplicate key " + std::string(line.substr(0, eq)));
      }
    }
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      throw std::invalid_argument("report: missing key " + key);
    }
    return it->second;
  }

  template <typename Number>
  Number number(const std::string& key) const {
    const auto& v = text(key);
    Number out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
      throw std::invalid_argument("report: bad number for " + key + ": " + v);
    }
    return out;
  }

  bool boolean(const std::string& key) const {
    const auto& v = text(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::invalid_argument("report: bad boolean for " + key + ": " + v);
  }

 private:
  std::map<std::string, std::string> values_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (!s.empty()) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

SessionOutcome parse_outcome(const std::string& s) {
  for (auto o : {SessionOutcome::key_established, SessionOutcome::aborted_verification,
                 SessionOutcome::aborted_qber, SessionOutcome::no_permission}) {
    if (to_string(o) == s) {
      return o;
    }
  }
  throw std::invalid_argument("report: unknown outcome " + s);
}

}  // namespace

std::string format_report(const SessionReport& r) {
  Writer w;
  const auto& c = r.config;
  w.put("schema_version", kReportSchemaVersion);
  w.put("config.protocol", to_string(c.protocol));
  w.put("config.verification_rounds", c.verification_rounds);
  w.put("config.key_rounds", c.key_rounds);
  w.put("config.sample_fraction", c.sample_fraction);
  w.put("config.qber_threshold", c.qber_threshold);
  w.put("config.attack", to_string(c.attack.kind));
  w.put("config.attack_target", join_targets(c.attack.targets));
  w.put("config.attack_strength", c.attack.strength);
  w.put("config.alice_permits", c.alice_permits);
  w.put("config.seed", c.seed);

  w.put("verification.rounds", r.verification_rounds);
  w.put("verification.matched", r.matched_rounds);
  w.put("verification.discarded", r.discarded_rounds);
  w.put("verification.violations", r.total_violations);
  w.put("verification.warnings", r.warnings);
  w.put("verification.pass", r.verification_pass);
  std::string ids;
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    if (i) ids += ',';
    ids += r.checks[i].id;
  }
  w.put("verification.checks", ids);
  for (const auto& s : r.checks) {
    const std::string prefix = "check." + s.id + ".";
    w.put(prefix + "matched", s.matched);
    w.put(prefix + "violations", s.violations);
    w.put(prefix + "frequency", s.frequency);
    w.put(prefix + "predicted", s.predicted);
    w.put(prefix + "z_score", s.z_score);
  }

  w.put("key.run", r.key_phase_run);
  w.put("key.rounds", r.key_rounds);
  w.put("key.sampled", r.sampled_rounds);
  w.put("key.kept", r.kept_rounds);
  w.put("key.sample_bit_errors", r.sample_bit_errors);
  w.put("key.qber", r.qber);
  w.put("key.predicted_qber", r.predicted_qber);
  w.put("key.qber_z_score", r.qber_z_score);
  w.put("key.keys_equal", r.keys_equal);
  w.put("key.deduction_rounds", r.deduction_rounds);
  w.put("key.deduction_accuracy", r.deduction_accuracy);
  std::string parties;
  for (std::size_t i = 0; i < r.keys.size(); ++i) {
    if (i) parties += ',';
    parties += r.keys[i].party;
  }
  w.put("key.parties", parties);
  for (const auto& k : r.keys) {
    w.put("key." + k.party + ".bits", k.bits);
    w.put("key." + k.party + ".hex", k.hex);
  }
  w.put("outcome", to_string(r.outcome));
  return std::move(w).str();
}

SessionReport parse_report(std::string_view text) {
  const Fields f(text);
  if (f.text("schema_version") != kReportSchemaVersion) {
    throw std::invalid_argument("report: unsupported schema_version " + f.text("schema_version"));
  }
  SessionReport r;
  auto& c = r.config;
  apply_config_entry(c, "protocol", f.text("config.protocol"));
  c.verification_rounds = f.number<std::size_t>("config.verification_rounds");
  c.key_rounds = f.number<std::size_t>("config.key_rounds");
  c.sample_fraction = f.number<double>("config.sample_fraction");
  c.qber_threshold = f.number<double>("config.qber_threshold");
  apply_config_entry(c, "attack", f.text("config.attack"));
  apply_config_entry(c, "attack_target", f.text("config.attack_target"));
  c.attack.strength = f.number<double>("config.attack_strength");
  c.alice_permits = f.boolean("config.alice_permits");
  c.seed = f.number<std::uint64_t>("config.seed");

  r.verification_rounds = f.number<std::size_t>("verification.rounds");
  r.matched_rounds = f.number<std::size_t>("verification.matched");
  r.discarded_rounds = f.number<std::size_t>("verification.discarded");
  r.total_violations = f.number<std::size_t>("verification.violations");
  r.warnings = f.number<std::size_t>("verification.warnings");
  r.verification_pass = f.boolean("verification.pass");
  for (const auto& id : split_list(f.text("verification.checks"))) {
    const std::string prefix = "check." + id + ".";
    CheckStatistics s;
    s.id = id;
    s.matched = f.number<std::size_t>(prefix + "matched");
    s.violations = f.number<std::size_t>(prefix + "violations");
    s.frequency = f.number<double>(prefix + "frequency");
    s.predicted = f.number<double>(prefix + "predicted");
    s.z_score = f.number<double>(prefix + "z_score");
    r.checks.push_back(std::move(s));
  }

  r.key_phase_run = f.boolean("key.run");
  r.key_rounds = f.number<std::size_t>("key.rounds");
  r.sampled_rounds = f.number<std::size_t>("key.sampled");
  r.kept_rounds = f.number<std::size_t>("key.kept");
  r.sample_bit_errors = f.number<std::size_t>("key.sample_bit_errors");
  r.qber = f.number<double>("key.qber");
  r.predicted_qber = f.number<double>("key.predicted_qber");
  r.qber_z_score = f.number<double>("key.qber_z_score");
  r.keys_equal = f.boolean("key.keys_equal");
  r.deduction_rounds = f.number<std::size_t>("key.deduction_rounds");
  r.deduction_accuracy = f.number<double>("key.deduction_accuracy");
  for (const auto& party : split_list(f.text("key.parties"))) {
    PartyKey k;
    k.party = party;
    k.bits = f.number<std::size_t>("key." + party + ".bits");
    k.hex = f.text("key." + party + ".hex");
    r.keys.push_back(std::move(k));
  }
  r.outcome = parse_outcome(f.text("outcome"));
  return r;
}

void emit_report(const SessionReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open report file " + path.string() + " for writing");
  }
  out << format_report(report);
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing report file " + path.string());
  }
}

std::string format_reports(std::span<const SessionReport> reports) {
  std::string out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out += "---\n";
    out += format_report(reports[i]);
  }
  return out;
}

std::string summary_line(const SessionReport& report) {
  std::size_t bits = report.keys.empty() ? 0 : report.keys.front().bits;
  return "outcome=" + std::string(to_string(report.outcome)) +
         " qber=" + format_double(report.qber) + " sifted_bits=" + std::to_string(bits) +
         " violations=" + std::to_string(report.total_violations) +
         " seed=" + std::to_string(report.config.seed);
}

}  // namespace quqkd
