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

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "test_support.hpp"

using namespace quqkd;

namespace {

constexpr std::array<const char*, 4> kTwoPartyIds = {"sigma_x/sigma_x", "upsilon_x/upsilon_x",
                                                     "sigma_z/sigma_z", "upsilon_z/upsilon_z"};
constexpr std::array<const char*, 4> kThreePartyIds = {
    "sigma_x/sigma_x/sigma_x", "o_z/o_z/o_z", "epsilon_x/epsilon_x/identity",
    "identity/epsilon_x/epsilon_x"};

AttackModel model(AttackKind kind, std::vector<AttackTarget> targets, double strength = 0.0) {
  return AttackModel{kind, std::move(targets), strength};
}

void expect_prediction(const AttackPrediction& p, const std::array<const char*, 4>& ids,
                       const std::array<double, 4>& violation, double qber) {
  ASSERT_EQ(p.violation.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    ASSERT_TRUE(p.violation.contains(ids[k])) << ids[k];
    EXPECT_NEAR(p.violation.at(ids[k]), violation[k], kAccumulatedTolerance) << ids[k];
  }
  EXPECT_NEAR(p.qber, qber, kAccumulatedTolerance);
}

LinearOperator density(const StateVector& psi) { return LinearOperator::outer(psi, psi); }

}  // namespace

using AK = AttackKind;
using AT = AttackTarget;

TEST(Prediction, no_attack_is_clean) {
  expect_prediction(predict({}, make_channel_two_party(), ProtocolKind::two_party), kTwoPartyIds,
                    {0, 0, 0, 0}, 0);
  expect_prediction(
      predict({}, make_channel_three_party(), ProtocolKind::three_party_controlled),
      kThreePartyIds, {0, 0, 0, 0}, 0);
}

TEST(Prediction, intercept_resend_computational) {
  const auto two = make_channel_two_party();
  const auto three = make_channel_three_party();
  const auto p3 = ProtocolKind::three_party_controlled;
  expect_prediction(predict(model(AK::intercept_resend_computational, {AT::to_bob}), two,
                            ProtocolKind::two_party),
                    kTwoPartyIds, {0.5, 0.5, 0, 0}, 0.25);
  expect_prediction(predict(model(AK::intercept_resend_computational, {AT::to_bob}), three, p3),
                    kThreePartyIds, {0.5, 0, 0.5, 0.5}, 0.25);
  expect_prediction(
      predict(model(AK::intercept_resend_computational, {AT::to_charlie}), three, p3),
      kThreePartyIds, {0.5, 0, 0, 0.5}, 0.25);
  expect_prediction(
      predict(model(AK::intercept_resend_computational, {AT::to_bob, AT::to_charlie}), three, p3),
      kThreePartyIds, {0.5, 0, 0.5, 0.5}, 0.25);
}

TEST(Prediction, intercept_resend_key_basis_leaves_key_untouched) {
  const auto two = make_channel_two_party();
  const auto three = make_channel_three_party();
  const auto p3 = ProtocolKind::three_party_controlled;
  expect_prediction(
      predict(model(AK::intercept_resend_key_basis, {AT::to_bob}), two, ProtocolKind::two_party),
      kTwoPartyIds, {0, 0.5, 0.5, 0.5}, 0);
  expect_prediction(predict(model(AK::intercept_resend_key_basis, {AT::to_bob}), three, p3),
                    kThreePartyIds, {0, 0.25, 0.5, 0.5}, 0);
  expect_prediction(predict(model(AK::intercept_resend_key_basis, {AT::to_charlie}), three, p3),
                    kThreePartyIds, {0, 0.25, 0, 0.5}, 0);
  expect_prediction(
      predict(model(AK::intercept_resend_key_basis, {AT::to_bob, AT::to_charlie}), three, p3),
      kThreePartyIds, {0, 0.375, 0.5, 0.5}, 0);
}

TEST(Prediction, entangle_probe_matches_computational_intercept) {
  const auto two = make_channel_two_party();
  const auto three = make_channel_three_party();
  expect_prediction(
      predict(model(AK::entangle_probe, {AT::to_bob}), two, ProtocolKind::two_party),
      kTwoPartyIds, {0.5, 0.5, 0, 0}, 0.25);
  expect_prediction(predict(model(AK::entangle_probe, {AT::to_charlie}), three,
                            ProtocolKind::three_party_controlled),
                    kThreePartyIds, {0.5, 0, 0, 0.5}, 0.25);
}

TEST(Prediction, depolarize_scales_linearly) {
  const auto two = make_channel_two_party();
  const auto three = make_channel_three_party();
  for (double p : {0.0, 0.2, 0.4, 1.0}) {
    expect_prediction(
        predict(model(AK::depolarize, {AT::to_bob}, p), two, ProtocolKind::two_party),
        kTwoPartyIds, {p / 2, p / 2, p / 2, p / 2}, p / 2);
    expect_prediction(predict(model(AK::depolarize, {AT::to_bob}, p), three,
                              ProtocolKind::three_party_controlled),
                      kThreePartyIds, {p / 2, 0.375 * p, p / 2, p / 2}, p / 2);
  }
}

TEST(Prediction, violation_is_monotone_in_depolarizing_strength) {
  const auto two = make_channel_two_party();
  double last = -1.0;
  for (int i = 0; i <= 10; ++i) {
    const auto p = predict(model(AK::depolarize, {AT::to_bob}, i / 10.0), two,
                           ProtocolKind::two_party);
    EXPECT_GT(p.violation.at(kTwoPartyIds[0]), last);
    last = p.violation.at(kTwoPartyIds[0]);
  }
}

TEST(Prediction, rejects_mismatched_protocol) {
  EXPECT_THROW(predict({}, make_channel_two_party(), ProtocolKind::three_party_controlled),
               std::invalid_argument);
  EXPECT_THROW(predict(model(AK::intercept_resend_computational, {AT::to_charlie}),
                       make_channel_two_party(), ProtocolKind::two_party),
               std::invalid_argument);
}

TEST(AttackModel, validation) {
  EXPECT_NO_THROW(AttackModel{}.validate(2));
  EXPECT_THROW(model(AK::depolarize, {}, 0.5).validate(2), std::invalid_argument);
  EXPECT_THROW(model(AK::depolarize, {AT::to_bob}, 1.5).validate(2), std::invalid_argument);
  EXPECT_THROW(model(AK::depolarize, {AT::to_bob}, -0.1).validate(2), std::invalid_argument);
  EXPECT_THROW(model(AK::entangle_probe, {AT::to_charlie}).validate(2), std::invalid_argument);
  EXPECT_THROW(model(AK::entangle_probe, {AT::to_bob, AT::to_bob}).validate(3),
               std::invalid_argument);
  EXPECT_NO_THROW(model(AK::entangle_probe, {AT::to_bob, AT::to_charlie}).validate(3));
}

TEST(AttackModel, names_round_trip) {
  for (auto k : {AK::none, AK::intercept_resend_computational, AK::intercept_resend_key_basis,
                 AK::entangle_probe, AK::depolarize}) {
    EXPECT_EQ(parse_attack_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_attack_target("charlie"), AT::to_charlie);
  EXPECT_EQ(target_position(AT::to_bob), 1u);
  EXPECT_EQ(target_position(AT::to_charlie), 2u);
  EXPECT_EQ(parse_protocol_kind("three_party"), ProtocolKind::three_party_controlled);
  EXPECT_FALSE(parse_attack_kind("photon_splitting").has_value());
}

TEST(Trajectory, no_attack_and_zero_depolarizing_are_identity) {
  const auto chi = make_channel_two_party().state;
  Rng rng(3);
  EXPECT_EQ(apply_attack(chi, {}, rng), chi);
  for (int i = 0; i < 20; ++i) {
    EXPECT_LT(distance(apply_attack(chi, model(AK::depolarize, {AT::to_bob}, 0.0), rng), chi),
              kExactTolerance);
  }
}

TEST(Trajectory, results_are_normalized) {
  const auto chi = make_channel_three_party().state;
  Rng rng(11);
  for (auto kind : {AK::intercept_resend_computational, AK::intercept_resend_key_basis,
                    AK::entangle_probe, AK::depolarize}) {
    for (int i = 0; i < 25; ++i) {
      const auto out = apply_attack(chi, model(kind, {AT::to_bob, AT::to_charlie}, 0.7), rng);
      EXPECT_TRUE(out.is_normalized());
      EXPECT_NEAR(out.norm_squared(), 1.0, kAccumulatedTolerance);
    }
  }
}

TEST(Trajectory, computational_intercept_collapses_bob_uniformly) {
  const auto chi = make_channel_two_party().state;
  Rng rng(99);
  std::array<std::size_t, 4> counts{};
  constexpr std::size_t kTrials = 20000;
  for (std::size_t t = 0; t < kTrials; ++t) {
    const auto out = apply_attack(chi, model(AK::intercept_resend_computational, {AT::to_bob}), rng);
    // Bob's ququart is now a computational basis state paired with Alice's.
    std::size_t bob = 4;
    for (std::size_t i = 0; i < 16; ++i) {
      if (std::abs(out[i]) > 0.5) {
        EXPECT_NEAR(std::abs(out[i]), 1.0, kExactTolerance);
        bob = i % 4;
      }
    }
    ASSERT_LT(bob, 4u);
    ++counts[bob];
  }
  for (auto c : counts) {
    EXPECT_LE(std::abs(static_cast<double>(c) / kTrials - 0.25),
              4.0 * quqkd::testing::binomial_sigma(0.25, kTrials));
  }
}

TEST(Trajectory, average_matches_density_channel) {
  const auto chi = make_channel_two_party().state;
  const auto rho = density(chi);
  constexpr std::size_t kTrials = 20000;
  for (auto kind : {AK::intercept_resend_computational, AK::intercept_resend_key_basis,
                    AK::entangle_probe, AK::depolarize}) {
    const auto m = model(kind, {AT::to_bob}, 0.6);
    Rng rng(1234);
    LinearOperator avg(16);
    for (std::size_t t = 0; t < kTrials; ++t) {
      avg += density(apply_attack(chi, m, rng));
    }
    avg *= Complex(1.0 / kTrials);
    const auto exact = attack_channel(rho, m);
    EXPECT_NEAR(exact.trace().real(), 1.0, kAccumulatedTolerance);
    EXPECT_TRUE(exact.is_hermitian(kAccumulatedTolerance));
    // Entries are bounded by 1/4 in magnitude; 4 sigma of a mean of N
    // bounded samples stays under 4 * 0.25 / sqrt(N).
    EXPECT_LT(max_abs_difference(avg, exact), 4.0 * 0.25 / std::sqrt(double(kTrials)) * 2.0)
        << to_string(kind);
  }
}

TEST(DensityChannel, zero_strength_depolarizing_is_identity) {
  const auto rho = density(make_channel_two_party().state);
  EXPECT_LT(max_abs_difference(attack_channel(rho, model(AK::depolarize, {AT::to_bob}, 0.0)), rho),
            kExactTolerance);
  EXPECT_LT(max_abs_difference(attack_channel(rho, {}), rho), kExactTolerance);
}

TEST(DensityChannel, full_depolarizing_makes_bob_maximally_mixed) {
  const auto rho = density(make_channel_two_party().state);
  const auto out = attack_channel(rho, model(AK::depolarize, {AT::to_bob}, 1.0));
  // Alice's marginal is already maximally mixed, so the result is I/16.
  EXPECT_LT(max_abs_difference(out, Complex(1.0 / 16.0) * LinearOperator::identity(16)),
            kAccumulatedTolerance);
}
