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

// quqkd: command-line entry point.
//
//   quqkd run [--config FILE] [flags] [--repeat N]
//   quqkd verify-channel
//   quqkd predict --protocol P --attack A [--attack-target T] [--attack-strength S]

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <type_traits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quqkd/adversary.hpp"
#include "quqkd/channels.hpp"
#include "quqkd/session.hpp"

namespace {

using namespace quqkd;

struct FlagValues {
  std::optional<std::string> config_file;
  std::optional<std::string> protocol;
  std::optional<std::size_t> verification_rounds;
  std::optional<std::size_t> key_rounds;
  std::optional<double> sample_fraction;
  std::optional<double> qber_threshold;
  std::optional<std::string> attack;
  std::optional<std::string> attack_target;
  std::optional<double> attack_strength;
  bool no_permission = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> report;
  std::size_t repeat = 1;
};

void add_attack_flags(CLI::App* cmd, FlagValues& f) {
  cmd->add_option("--attack", f.attack,
                  "none | intercept_resend_computational | intercept_resend_key_basis | "
                  "entangle_probe | depolarize");
  cmd->add_option("--attack-target", f.attack_target, "Comma list of bob, charlie");
  cmd->add_option("--attack-strength", f.attack_strength, "Depolarizing probability");
  cmd->add_option("--protocol", f.protocol, "two_party | three_party_controlled");
}

SessionConfig build_config(const FlagValues& f) {
  SessionConfig config;
  if (f.config_file) {
    config = load_config(*f.config_file);
  }
  auto set = [&](const char* key, const auto& value) {
    if (value) {
      if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, std::string>) {
        apply_config_entry(config, key, *value);
      } else {
        apply_config_entry(config, key, std::to_string(*value));
      }
    }
  };
  set("protocol", f.protocol);
  set("verification_rounds", f.verification_rounds);
  set("key_rounds", f.key_rounds);
  if (f.sample_fraction) config.sample_fraction = *f.sample_fraction;
  if (f.qber_threshold) config.qber_threshold = *f.qber_threshold;
  set("attack", f.attack);
  set("attack_target", f.attack_target);
  if (f.attack_strength) config.attack.strength = *f.attack_strength;
  if (f.no_permission) config.alice_permits = false;
  set("seed", f.seed);
  set("report", f.report);
  config.validate();
  return config;
}

int cmd_run(const FlagValues& flags) {
  const SessionConfig config = build_config(flags);
  if (flags.repeat == 0) {
    throw std::invalid_argument("--repeat must be at least 1");
  }
  const auto configs = repeat_configs(config, flags.repeat);
  const auto reports =
      flags.repeat == 1 ? run_sessions_serial(configs) : run_sessions_parallel(configs);
  int code = 0;
  for (const auto& r : reports) {
    std::cout << summary_line(r) << "\n";
    if (code == 0) {
      code = exit_code(r.outcome);
    }
  }
  if (!config.report_path.empty()) {
    if (reports.size() == 1) {
      emit_report(reports.front(), config.report_path);
    } else {
      std::ofstream out(config.report_path, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw std::runtime_error("cannot open report file " + config.report_path);
      }
      out << format_reports(reports);
    }
  }
  return code;
}

void print_certificate(const char* label, const SubspaceCertificate& cert,
                       const StateVector& channel) {
  std::printf("%s: dimension=%zu residual=%.3e commuting=%s overlap=%.12f\n", label,
              cert.dimension, cert.residual, cert.commuting ? "true" : "false",
              cert.basis.empty() ? 0.0 : std::abs(inner(channel, cert.basis.front())));
}

int cmd_verify_channel() {
  bool ok = true;
  for (const auto& spec : {make_channel_two_party(), make_channel_three_party()}) {
    const auto residuals = check_residuals(spec);
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      std::printf("%zu-party check %-32s expected %+d residual %.3e\n", spec.party_count,
                  spec.checks[i].id().c_str(), spec.checks[i].expected, residuals[i]);
      ok = ok && residuals[i] < kExactTolerance;
    }
    const auto constraints = constraints_of(spec);
    const auto cert = stabilized_subspace(constraints, spec.party_count);
    print_certificate(spec.party_count == 2 ? "two-party certificate" : "three-party certificate",
                      cert, spec.state);
    ok = ok && cert.dimension == 1 && same_ray(cert.basis.front(), spec.state);
  }
  return ok ? 0 : 2;
}

int cmd_predict(const FlagValues& flags) {
  SessionConfig config = build_config(flags);
  const ChannelSpec channel = config.protocol == ProtocolKind::two_party
                                  ? make_channel_two_party()
                                  : make_channel_three_party();
  const auto prediction = predict(config.attack, channel, config.protocol);
  for (const auto& check : channel.checks) {
    std::printf("violation %-32s %.12g\n", check.id().c_str(), prediction.violation.at(check.id()));
  }
  std::printf("qber %.12g\n", prediction.qber);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Four-level entanglement key distribution simulator"};
  app.require_subcommand(1);
  FlagValues flags;

  auto* run = app.add_subcommand("run", "Simulate a full session");
  run->add_option("--config", flags.config_file, "Flat key = value config file");
  add_attack_flags(run, flags);
  run->add_option("--verification-rounds", flags.verification_rounds);
  run->add_option("--key-rounds", flags.key_rounds);
  run->add_option("--sample-fraction", flags.sample_fraction);
  run->add_option("--qber-threshold", flags.qber_threshold);
  run->add_flag("--no-permission", flags.no_permission, "Controller withholds her outcomes");
  run->add_option("--seed", flags.seed);
  run->add_option("--report", flags.report, "Report output path");
  run->add_option("--repeat", flags.repeat, "Run N sessions with consecutive seeds");

  auto* verify = app.add_subcommand("verify-channel", "Check eigen-equations and uniqueness");
  auto* pred = app.add_subcommand("predict", "Exact attack statistics, no simulation");
  add_attack_flags(pred, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(flags);
    if (*verify) return cmd_verify_channel();
    if (*pred) return cmd_predict(flags);
  } catch (const std::exception& e) {
    std::cerr << "quqkd: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
