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

#include "quqkd/adversary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "quqkd/observables.hpp"

namespace quqkd {

namespace {

std::array<LinearOperator, 4> computational_projectors() {
  return {LinearOperator::ket_bra(4, 0, 0), LinearOperator::ket_bra(4, 1, 1),
          LinearOperator::ket_bra(4, 2, 2), LinearOperator::ket_bra(4, 3, 3)};
}

// X^a Z^b with X|j> = |j+1 mod 4> and Z|j> = i^j |j>.
LinearOperator weyl(std::size_t a, std::size_t b) {
  static const std::array<Complex, 4> powers_of_i = {Complex{1, 0}, Complex{0, 1},
                                                     Complex{-1, 0}, Complex{0, -1}};
  LinearOperator op(4);
  for (std::size_t j = 0; j < 4; ++j) {
    op((j + a) % 4, j) = powers_of_i[(b * j) % 4];
  }
  return op;
}

// |j>_target |k>_probe -> |j>|k + j mod 4> with the probe appended last.
LinearOperator controlled_shift(std::size_t num_ququarts, std::size_t target) {
  const std::size_t extended = num_ququarts + 1;
  const std::size_t dim = ququart_dim(extended);
  const std::size_t stride = ququart_dim(extended) / ququart_dim(target + 1);
  LinearOperator u(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const std::size_t j = (idx / stride) % 4;
    const std::size_t k = idx % 4;
    const std::size_t image = idx - k + (k + j) % 4;
    u(image, idx) = 1.0;
  }
  return u;
}

StateVector probe_trajectory(const StateVector& state, std::size_t position, Rng& rng) {
  const std::size_t n = state.num_ququarts();
  StateVector extended = tensor(state, StateVector::basis(1, 0));
  StateVector coupled = apply(controlled_shift(n, position), extended).normalized();
  const auto projectors = computational_projectors();
  MeasurementResult probe = measure_local(coupled, projectors, n, rng);
  return drop_last_ququart(probe.post_state, probe.outcome_index).normalized();
}

LinearOperator measure_channel(const LinearOperator& rho, std::span<const LinearOperator> local,
                               std::size_t position) {
  const std::size_t n = rho.num_ququarts();
  LinearOperator out(rho.dim());
  for (const auto& p : local) {
    const auto full = partial_projector(p, position, n);
    out += full * rho * full;
  }
  return out;
}

LinearOperator probe_channel(const LinearOperator& rho, std::size_t position) {
  const std::size_t n = rho.num_ququarts();
  const LinearOperator extended = tensor(rho, LinearOperator::ket_bra(4, 0, 0));
  const LinearOperator u = controlled_shift(n, position);
  const LinearOperator coupled = u * extended * u.adjoint();
  LinearOperator reduced(rho.dim());
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      Complex acc{};
      for (std::size_t k = 0; k < 4; ++k) {
        acc += coupled(r * 4 + k, c * 4 + k);
      }
      reduced(r, c) = acc;
    }
  }
  return reduced;
}

LinearOperator depolarize_channel(const LinearOperator& rho, std::size_t position, double p) {
  const std::size_t n = rho.num_ququarts();
  LinearOperator twirled(rho.dim());
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      const auto w = partial_projector(weyl(a, b), position, n);
      twirled += w * rho * w.adjoint();
    }
  }
  return (1.0 - p) * rho + (p / 16.0) * twirled;
}

double expectation(const LinearOperator& rho, const LinearOperator& op) {
  return (rho * op).trace().real();
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  return kind == ProtocolKind::two_party ? "two_party" : "three_party_controlled";
}

std::optional<ProtocolKind> parse_protocol_kind(std::string_view text) {
  if (text == "two_party") return ProtocolKind::two_party;
  if (text == "three_party_controlled" || text == "three_party") {
    return ProtocolKind::three_party_controlled;
  }
  return std::nullopt;
}

std::size_t party_count(ProtocolKind kind) { return kind == ProtocolKind::two_party ? 2 : 3; }

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::none: return "none";
    case AttackKind::intercept_resend_computational: return "intercept_resend_computational";
    case AttackKind::intercept_resend_key_basis: return "intercept_resend_key_basis";
    case AttackKind::entangle_probe: return "entangle_probe";
    case AttackKind::depolarize: return "depolarize";
  }
  return "?";
}

std::optional<AttackKind> parse_attack_kind(std::string_view text) {
  for (auto kind : {AttackKind::none, AttackKind::intercept_resend_computational,
                    AttackKind::intercept_resend_key_basis, AttackKind::entangle_probe,
                    AttackKind::depolarize}) {
    if (to_string(kind) == text) {
      return kind;
    }
  }
  return std::nullopt;
}

std::string_view to_string(AttackTarget target) {
  return target == AttackTarget::to_bob ? "bob" : "charlie";
}

std::optional<AttackTarget> parse_attack_target(std::string_view text) {
  if (text == "bob") return AttackTarget::to_bob;
  if (text == "charlie") return AttackTarget::to_charlie;
  return std::nullopt;
}

std::size_t target_position(AttackTarget target) {
  return target == AttackTarget::to_bob ? 1 : 2;
}

void AttackModel::validate(std::size_t party_count) const {
  if (!(strength >= 0.0 && strength <= 1.0)) {
    throw std::invalid_argument("attack strength must lie in [0, 1]");
  }
  if (kind == AttackKind::none) {
    return;
  }
  if (targets.empty()) {
    throw std::invalid_argument("attack " + std::string(to_string(kind)) + " needs a target");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (target_position(targets[i]) >= party_count) {
      throw std::invalid_argument("attack target " + std::string(to_string(targets[i])) +
                                  " does not exist in a " + std::to_string(party_count) +
                                  "-party channel");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[j] == targets[i]) {
        throw std::invalid_argument("attack target listed twice");
      }
    }
  }
}

StateVector apply_attack(const StateVector& state, const AttackModel& model, Rng& rng) {
  model.validate(state.num_ququarts());
  StateVector current = state;
  if (model.kind == AttackKind::none) {
    return current;
  }
  for (auto target : model.targets) {
    const std::size_t pos = target_position(target);
    switch (model.kind) {
      case AttackKind::intercept_resend_computational: {
        const auto projectors = computational_projectors();
        current = measure_local(current, projectors, pos, rng).post_state;
        break;
      }
      case AttackKind::intercept_resend_key_basis:
        current = measure_local(current, key_basis().projectors, pos, rng).post_state;
        break;
      case AttackKind::entangle_probe:
        current = probe_trajectory(current, pos, rng);
        break;
      case AttackKind::depolarize:
        if (rng.bernoulli(model.strength)) {
          const std::size_t a = rng.below(4);
          const std::size_t b = rng.below(4);
          current = apply_local(weyl(a, b), current, pos).normalized();
        }
        break;
      case AttackKind::none:
        break;
    }
  }
  return current;
}

LinearOperator attack_channel(const LinearOperator& rho, const AttackModel& model) {
  model.validate(rho.num_ququarts());
  LinearOperator out = rho;
  if (model.kind == AttackKind::none) {
    return out;
  }
  for (auto target : model.targets) {
    const std::size_t pos = target_position(target);
    switch (model.kind) {
      case AttackKind::intercept_resend_computational: {
        const auto projectors = computational_projectors();
        out = measure_channel(out, projectors, pos);
        break;
      }
      case AttackKind::intercept_resend_key_basis:
        out = measure_channel(out, key_basis().projectors, pos);
        break;
      case AttackKind::entangle_probe:
        out = probe_channel(out, pos);
        break;
      case AttackKind::depolarize:
        out = depolarize_channel(out, pos, model.strength);
        break;
      case AttackKind::none:
        break;
    }
  }
  return out;
}

AttackPrediction predict(const AttackModel& model, const ChannelSpec& channel,
                         ProtocolKind protocol) {
  if (channel.party_count != party_count(protocol)) {
    throw std::invalid_argument("predict: channel has " + std::to_string(channel.party_count) +
                                " parties but protocol " + std::string(to_string(protocol)) +
                                " needs " + std::to_string(party_count(protocol)));
  }
  model.validate(channel.party_count);
  const LinearOperator rho =
      attack_channel(LinearOperator::outer(channel.state, channel.state), model);
  const auto id = LinearOperator::identity(rho.dim());

  AttackPrediction prediction;
  for (const auto& check : channel.checks) {
    const LinearOperator wrong = 0.5 * (id - static_cast<double>(check.expected) * check.joint());
    prediction.violation[check.id()] = std::clamp(expectation(rho, wrong), 0.0, 1.0);
  }

  const auto& basis = key_basis();
  double expected_errors = 0.0;
  if (protocol == ProtocolKind::two_party) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const double p = expectation(rho, tensor(basis.projectors[a], basis.projectors[b]));
        const auto alice = outcome_from_index(a);
        const auto bob = outcome_from_index(b);
        // Bob's bits are complemented before comparison.
        expected_errors += p * ((alice.parity_bit() == bob.parity_bit()) +
                                (alice.phase_bit() == bob.phase_bit()));
      }
    }
  } else {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const auto ab = tensor(basis.projectors[a], basis.projectors[b]);
        for (int c = 0; c < 4; ++c) {
          const double p = expectation(rho, tensor(ab, basis.projectors[c]));
          const auto alice = outcome_from_index(a);
          const auto bob = outcome_from_index(b);
          const auto charlie = outcome_from_index(c);
          expected_errors +=
              p * (((bob.parity_bit() ^ alice.parity_bit()) != charlie.parity_bit()) +
                   ((bob.phase_bit() ^ alice.phase_bit()) != charlie.phase_bit()));
        }
      }
    }
  }
  prediction.qber = std::clamp(expected_errors / 2.0, 0.0, 1.0);
  return prediction;
}

}  // namespace quqkd
