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

#include "quqkd/qudit_core.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <concepts>

#include "quqkd/channels.hpp"
#include "quqkd/observables.hpp"
#include "test_support.hpp"

using namespace quqkd;
using quqkd::testing::binomial_sigma;
using quqkd::testing::random_operator;
using quqkd::testing::random_state;

namespace {

std::array<LinearOperator, 4> computational() {
  return {LinearOperator::ket_bra(4, 0, 0), LinearOperator::ket_bra(4, 1, 1),
          LinearOperator::ket_bra(4, 2, 2), LinearOperator::ket_bra(4, 3, 3)};
}

template <typename A, typename B>
concept Tensorable = requires(const A& a, const B& b) { tensor(a, b); };

}  // namespace

// Mixed vector/operator products have no overload.
static_assert(Tensorable<StateVector, StateVector>);
static_assert(Tensorable<LinearOperator, LinearOperator>);
static_assert(!Tensorable<StateVector, LinearOperator>);
static_assert(!Tensorable<LinearOperator, StateVector>);

TEST(StateVector, rejects_wrong_length_and_unnormalized_amplitudes) {
  EXPECT_THROW(StateVector(1, std::vector<Complex>(3)), std::invalid_argument);
  EXPECT_THROW(StateVector(1, std::vector<Complex>{1.0, 1.0, 0.0, 0.0}), std::invalid_argument);
  auto raw = StateVector::unnormalized(1, {1.0, 1.0, 0.0, 0.0});
  EXPECT_FALSE(raw.is_normalized());
  EXPECT_TRUE(raw.normalized().is_normalized());
  EXPECT_NEAR(raw.normalized().norm_squared(), 1.0, kExactTolerance);
  EXPECT_THROW(StateVector::zero(1).normalized(), std::domain_error);
}

TEST(LinearOperator, dimension_must_be_power_of_four) {
  EXPECT_THROW(LinearOperator(8), std::invalid_argument);
  EXPECT_THROW(LinearOperator(4, std::vector<Complex>(15)), std::invalid_argument);
  EXPECT_NO_THROW(LinearOperator(64));
}

TEST(Tensor, basis_index_convention) {
  const auto v = tensor(StateVector::basis(1, 0), StateVector::basis(1, 1));
  EXPECT_EQ(v.num_ququarts(), 2u);
  EXPECT_EQ(v, StateVector::basis(2, 1));
  // |223> of three ququarts sits at 2*16 + 2*4 + 3.
  const auto w = tensor(tensor(StateVector::basis(1, 2), StateVector::basis(1, 2)),
                        StateVector::basis(1, 3));
  EXPECT_EQ(w, StateVector::basis(3, 43));
}

TEST(Tensor, identity_squared_is_identity) {
  EXPECT_EQ(tensor(LinearOperator::identity(4), LinearOperator::identity(4)),
            LinearOperator::identity(16));
}

TEST(Tensor, sigma_x_pair_maps_01_to_32) {
  const auto& sx = observable(ObservableName::sigma_x).matrix;
  const auto out = apply(tensor(sx, sx), StateVector::basis(2, 1));
  EXPECT_EQ(distance(out, StateVector::basis(2, 14)), 0.0);
}

TEST(Tensor, associative_on_random_operators) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = random_operator(4, seed * 3 + 1);
    const auto b = random_operator(4, seed * 3 + 2);
    const auto c = random_operator(4, seed * 3 + 3);
    EXPECT_LT(max_abs_difference(tensor(tensor(a, b), c), tensor(a, tensor(b, c))),
              kAccumulatedTolerance);
  }
}

TEST(Apply, identity_and_channel_eigen_equations) {
  const auto psi = random_state(2, 3);
  EXPECT_EQ(distance(apply(LinearOperator::identity(16), psi), psi), 0.0);

  const auto chi = make_channel_two_party().state;
  const auto& sx = observable(ObservableName::sigma_x).matrix;
  const auto& uz = observable(ObservableName::upsilon_z).matrix;
  const auto flipped = apply(tensor(sx, sx), chi);
  const auto kept = apply(tensor(uz, uz), chi);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_NEAR(std::abs(flipped[i] + chi[i]), 0.0, kExactTolerance);
    EXPECT_NEAR(std::abs(kept[i] - chi[i]), 0.0, kExactTolerance);
  }
  EXPECT_FALSE(flipped.is_normalized());
}

TEST(Apply, dimension_mismatch_throws) {
  EXPECT_THROW(apply(LinearOperator::identity(4), StateVector::basis(2, 0)),
               std::invalid_argument);
  EXPECT_THROW(inner(StateVector::basis(1, 0), StateVector::basis(2, 0)), std::invalid_argument);
}

TEST(Inner, orthonormal_basis_and_conjugate_linearity) {
  EXPECT_EQ(inner(StateVector::basis(1, 0), StateVector::basis(1, 0)), Complex(1.0));
  EXPECT_EQ(inner(StateVector::basis(1, 0), StateVector::basis(1, 1)), Complex(0.0));
  const auto a = StateVector::unnormalized(1, {Complex(0, 1), 0.0, 0.0, 0.0});
  const auto b = StateVector::basis(1, 0);
  EXPECT_EQ(inner(a, b), Complex(0, -1));
}

TEST(Inner, key_basis_overlaps_match_measurement_probabilities) {
  // <phi+ (x) psi-|chi> = 1/2 from expanding the channel in the key basis.
  const auto chi = make_channel_two_party().state;
  const auto& kb = key_basis();
  const auto pair = tensor(kb.vectors[0], kb.vectors[3]);
  EXPECT_NEAR(std::abs(inner(pair, chi) - Complex(0.5)), 0.0, kExactTolerance);
  Rng rng(1);
  const auto projector = LinearOperator::outer(pair, pair);
  const std::array<LinearOperator, 2> split = {projector,
                                               LinearOperator::identity(16) - projector};
  const auto result = measure_projective(chi, split, rng);
  const double p0 = result.outcome_index == 0 ? result.probability : 1.0 - result.probability;
  EXPECT_NEAR(p0, std::norm(inner(pair, chi)), kExactTolerance);
}

TEST(Measure, computational_basis_state_is_certain) {
  Rng rng(5);
  const auto projectors = computational();
  const auto r = measure_projective(StateVector::basis(1, 0), projectors, rng);
  EXPECT_EQ(r.outcome_index, 0u);
  EXPECT_DOUBLE_EQ(r.probability, 1.0);
  EXPECT_EQ(r.post_state, StateVector::basis(1, 0));
}

TEST(Measure, alice_key_marginal_is_uniform) {
  const auto chi = make_channel_two_party().state;
  const auto p = local_probabilities(chi, key_basis().projectors, 0);
  for (double v : p) {
    EXPECT_NEAR(v, 0.25, kExactTolerance);
  }
}

TEST(Measure, alice_psi_minus_leaves_bob_in_phi_plus) {
  const auto chi = make_channel_two_party().state;
  const auto& kb = key_basis();
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng rng(seed);
    const auto r = measure_local(chi, kb.projectors, 0, rng);
    if (r.outcome_index != 3) {
      continue;
    }
    EXPECT_TRUE(same_ray(r.post_state, tensor(kb.vectors[3], kb.vectors[0]), kExactTolerance));
    return;
  }
  FAIL() << "no psi- outcome in 64 seeds";
}

TEST(Measure, rejects_incomplete_projector_set) {
  Rng rng(1);
  const std::array<LinearOperator, 2> partial = {LinearOperator::ket_bra(4, 0, 0),
                                                 LinearOperator::ket_bra(4, 1, 1)};
  EXPECT_THROW(measure_projective(StateVector::basis(1, 0), partial, rng), std::invalid_argument);
  EXPECT_THROW(measure_local(StateVector::basis(2, 0), partial, 0, rng), std::invalid_argument);
}

TEST(Measure, deterministic_given_seed) {
  const auto psi = random_state(2, 8);
  const auto& kb = key_basis();
  Rng a(77), b(77);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(measure_local(psi, kb.projectors, 1, a).outcome_index,
              measure_local(psi, kb.projectors, 1, b).outcome_index);
  }
}

TEST(MeasureProperty, post_states_are_normalized_and_probability_matches) {
  const auto& kb = key_basis();
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto psi = random_state(3, seed);
    Rng rng(seed);
    const std::size_t pos = seed % 3;
    const auto probs = local_probabilities(psi, kb.projectors, pos);
    const auto r = measure_local(psi, kb.projectors, pos, rng);
    EXPECT_NEAR(r.post_state.norm_squared(), 1.0, kExactTolerance);
    EXPECT_NEAR(r.probability, probs[r.outcome_index], kExactTolerance);
    EXPECT_NEAR(r.probability,
                apply(partial_projector(kb.projectors[r.outcome_index], pos, 3), psi)
                    .norm_squared(),
                kExactTolerance);
  }
}

TEST(MeasureProperty, projectors_are_mutually_orthogonal) {
  const auto& kb = key_basis();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto psi = random_state(2, 200 + seed);
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        if (j == k) continue;
        const auto pj = partial_projector(kb.projectors[j], 1, 2);
        const auto pk = partial_projector(kb.projectors[k], 1, 2);
        EXPECT_LT(apply(pk, apply(pj, psi)).norm(), kAccumulatedTolerance);
      }
    }
  }
}

TEST(MeasureProperty, empirical_frequencies_within_four_sigma) {
  const auto psi = random_state(2, 4242);
  const auto& kb = key_basis();
  const auto expected = local_probabilities(psi, kb.projectors, 1);
  std::array<std::size_t, 4> counts{};
  Rng rng(2024);
  constexpr std::size_t kDraws = 100000;
  for (std::size_t i = 0; i < kDraws; ++i) {
    ++counts[measure_local(psi, kb.projectors, 1, rng).outcome_index];
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const double freq = static_cast<double>(counts[k]) / kDraws;
    EXPECT_LE(std::abs(freq - expected[k]), 4.0 * binomial_sigma(expected[k], kDraws)) << k;
  }
}

TEST(PartialProjector, embeds_at_position) {
  const auto& sz = observable(ObservableName::sigma_z).matrix;
  const auto& sx = observable(ObservableName::sigma_x).matrix;
  EXPECT_EQ(partial_projector(sz, 0, 1), sz);
  EXPECT_EQ(partial_projector(sx, 1, 2), tensor(LinearOperator::identity(4), sx));
  EXPECT_THROW(partial_projector(sx, 2, 2), std::out_of_range);
  EXPECT_THROW(partial_projector(LinearOperator::identity(16), 0, 2), std::invalid_argument);
}

TEST(PartialProjector, epsilon_x_on_bob_and_charlie_stabilizes_three_party_channel) {
  const auto& ex = observable(ObservableName::epsilon_x).matrix;
  const auto chi = make_channel_three_party().state;
  const auto op = partial_projector(ex, 1, 3) * partial_projector(ex, 2, 3);
  EXPECT_EQ(op, tensor(tensor(LinearOperator::identity(4), ex), ex));
  EXPECT_LT(distance(apply(op, chi), chi), kExactTolerance);
}

TEST(Rng, streams_are_reproducible_and_distinct) {
  Rng a(9, 1), b(9, 1), c(9, 2);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
  Rng d(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = d.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(d.below(7), 7u);
  }
  EXPECT_THROW(d.below(0), std::invalid_argument);
}
