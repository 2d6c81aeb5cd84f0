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

#include "quqkd/channels.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_support.hpp"

using namespace quqkd;
using quqkd::testing::brute_force_joint_eigenspace;
using quqkd::testing::EigenMatrix;
using quqkd::testing::to_eigen;

namespace {

std::vector<Constraint> subset(const std::vector<Constraint>& all, unsigned mask) {
  std::vector<Constraint> out;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (mask & (1u << k)) out.push_back(all[k]);
  }
  return out;
}

bool pairwise_commuting(const std::vector<Constraint>& cs) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (commutator_norm(cs[i].op, cs[j].op) > kRankThreshold) return false;
    }
  }
  return true;
}

double projector_gap(const SubspaceCertificate& cert, const EigenMatrix& oracle_basis,
                     std::size_t dim) {
  const EigenMatrix ours = to_eigen(cert.span_projector(dim));
  const EigenMatrix theirs = oracle_basis * oracle_basis.adjoint();
  return (ours - theirs).cwiseAbs().maxCoeff();
}

std::vector<std::pair<LinearOperator, int>> as_pairs(const std::vector<Constraint>& cs) {
  std::vector<std::pair<LinearOperator, int>> out;
  for (const auto& c : cs) out.emplace_back(c.op, c.eigenvalue);
  return out;
}

}  // namespace

TEST(TwoPartyChannel, amplitudes) {
  const auto spec = make_channel_two_party();
  EXPECT_EQ(spec.party_count, 2u);
  for (std::size_t i = 0; i < 16; ++i) {
    double expected = 0.0;
    if (i == 1 || i == 4) expected = 0.5;
    if (i == 11 || i == 14) expected = -0.5;
    EXPECT_NEAR(std::abs(spec.state[i] - Complex(expected)), 0.0, kExactTolerance) << i;
  }
}

TEST(TwoPartyChannel, key_basis_expansion_pairs_opposite_labels) {
  const auto chi = make_channel_two_party().state;
  const auto& kb = key_basis();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double p = std::norm(inner(tensor(kb.vectors[a], kb.vectors[b]), chi));
      EXPECT_NEAR(p, b == 3 - a ? 0.25 : 0.0, kExactTolerance) << a << "," << b;
    }
  }
}

TEST(TwoPartyChannel, check_residuals_vanish) {
  const auto spec = make_channel_two_party();
  const auto res = check_residuals(spec);
  ASSERT_EQ(res.size(), 4u);
  for (double r : res) EXPECT_LT(r, kExactTolerance);
  EXPECT_EQ(spec.checks[0].id(), "sigma_x/sigma_x");
  EXPECT_EQ(spec.checks[3].id(), "upsilon_z/upsilon_z");
  EXPECT_EQ(spec.checks[3].expected, 1);
}

TEST(ThreePartyChannel, amplitudes) {
  const auto spec = make_channel_three_party();
  const std::array<std::size_t, 8> support = {0, 5, 17, 20, 43, 46, 58, 63};
  const double a = 1.0 / (2.0 * std::sqrt(2.0));
  for (std::size_t i = 0; i < 64; ++i) {
    const bool in = std::find(support.begin(), support.end(), i) != support.end();
    EXPECT_NEAR(std::abs(spec.state[i] - Complex(in ? a : 0.0)), 0.0, kExactTolerance) << i;
  }
}

TEST(ThreePartyChannel, key_basis_expansion_follows_xor_law) {
  const auto chi = make_channel_three_party().state;
  const auto& kb = key_basis();
  double total = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        const auto v = tensor(tensor(kb.vectors[a], kb.vectors[b]), kb.vectors[c]);
        const double p = std::norm(inner(v, chi));
        total += p;
        EXPECT_NEAR(p, c == (a ^ b) ? 1.0 / 16.0 : 0.0, kExactTolerance);
      }
    }
  }
  EXPECT_NEAR(total, 1.0, kExactTolerance);
}

TEST(ThreePartyChannel, check_residuals_vanish) {
  const auto spec = make_channel_three_party();
  for (double r : check_residuals(spec)) EXPECT_LT(r, kExactTolerance);
  EXPECT_EQ(spec.checks[2].id(), "epsilon_x/epsilon_x/identity");
}

TEST(ThreePartyChannel, o_z_check_does_not_commute_with_the_others) {
  const auto cs = constraints_of(make_channel_three_party());
  const double eight_root_two = 8.0 * std::sqrt(2.0);
  EXPECT_NEAR(commutator_norm(cs[0].op, cs[1].op), eight_root_two, kAccumulatedTolerance);
  EXPECT_NEAR(commutator_norm(cs[1].op, cs[2].op), eight_root_two, kAccumulatedTolerance);
  EXPECT_NEAR(commutator_norm(cs[1].op, cs[3].op), eight_root_two, kAccumulatedTolerance);
  EXPECT_NEAR(commutator_norm(cs[0].op, cs[2].op), 0.0, kExactTolerance);
  EXPECT_NEAR(commutator_norm(cs[0].op, cs[3].op), 0.0, kExactTolerance);
  EXPECT_NEAR(commutator_norm(cs[2].op, cs[3].op), 0.0, kExactTolerance);
  // The commutators still annihilate the shared state.
  const auto chi = make_channel_three_party().state;
  for (std::size_t k = 0; k < 4; ++k) {
    if (k == 1) continue;
    const auto comm = cs[1].op * cs[k].op - cs[k].op * cs[1].op;
    EXPECT_LT(apply(comm, chi).norm(), kExactTolerance);
  }
}

TEST(CorruptedChannel, sign_flip_breaks_a_check) {
  const auto spec = make_channel_two_party();
  std::vector<Complex> amps(spec.state.amplitudes().begin(), spec.state.amplitudes().end());
  amps[1] = -amps[1];
  const auto bad = spec.with_state(StateVector(2, amps));
  EXPECT_GT(verify_checks(bad), 0.1);
  EXPECT_NEAR(verify_checks(bad), std::sqrt(2.0), kExactTolerance);
  EXPECT_THROW(spec.with_state(StateVector::basis(3, 0)), std::invalid_argument);
}

TEST(StabilizedSubspace, both_channels_are_unique_joint_eigenvectors) {
  for (const auto& spec : {make_channel_two_party(), make_channel_three_party()}) {
    const auto cs = constraints_of(spec);
    const auto cert = stabilized_subspace(cs, spec.party_count);
    ASSERT_EQ(cert.dimension, 1u);
    EXPECT_LT(cert.residual, kAccumulatedTolerance);
    EXPECT_NEAR(std::abs(inner(cert.basis[0], spec.state)), 1.0, kAccumulatedTolerance);
    EXPECT_TRUE(same_ray(cert.basis[0], spec.state));
  }
}

TEST(StabilizedSubspace, method_selection) {
  const auto two = stabilized_subspace(constraints_of(make_channel_two_party()), 2);
  EXPECT_TRUE(two.commuting);
  EXPECT_EQ(two.method, SubspaceMethod::projector_product);
  const auto three = stabilized_subspace(constraints_of(make_channel_three_party()), 3);
  EXPECT_FALSE(three.commuting);
  EXPECT_EQ(three.method, SubspaceMethod::elimination);
  EXPECT_THROW(stabilized_subspace(constraints_of(make_channel_three_party()), 3,
                                   SubspaceMethod::projector_product),
               std::invalid_argument);
}

TEST(StabilizedSubspace, empty_constraint_set_gives_full_space) {
  const auto cert = stabilized_subspace({}, 2);
  EXPECT_EQ(cert.dimension, 16u);
  EXPECT_LT(max_abs_difference(cert.span_projector(16), LinearOperator::identity(16)),
            kAccumulatedTolerance);
}

TEST(StabilizedSubspace, every_constraint_is_necessary) {
  for (const auto& spec : {make_channel_two_party(), make_channel_three_party()}) {
    const auto cs = constraints_of(spec);
    for (std::size_t drop = 0; drop < cs.size(); ++drop) {
      auto reduced = cs;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(drop));
      EXPECT_GT(stabilized_subspace(reduced, spec.party_count).dimension, 1u)
          << spec.party_count << " parties, dropped " << drop;
    }
  }
}

TEST(StabilizedSubspace, invariant_under_constraint_order) {
  for (const auto& spec : {make_channel_two_party(), make_channel_three_party()}) {
    auto cs = constraints_of(spec);
    const auto forward = stabilized_subspace(cs, spec.party_count);
    std::reverse(cs.begin(), cs.end());
    const auto backward = stabilized_subspace(cs, spec.party_count);
    const std::size_t dim = spec.state.dim();
    EXPECT_EQ(forward.dimension, backward.dimension);
    EXPECT_LT(max_abs_difference(forward.span_projector(dim), backward.span_projector(dim)),
              kAccumulatedTolerance);
  }
}

TEST(StabilizedSubspace, agrees_with_svd_oracle_on_every_subset) {
  for (const auto& spec : {make_channel_two_party(), make_channel_three_party()}) {
    const auto cs = constraints_of(spec);
    const std::size_t dim = spec.state.dim();
    for (unsigned mask = 0; mask < (1u << cs.size()); ++mask) {
      const auto sub = subset(cs, mask);
      const auto oracle = brute_force_joint_eigenspace(as_pairs(sub), dim);
      const auto cert = stabilized_subspace(sub, spec.party_count);
      ASSERT_EQ(cert.dimension, static_cast<std::size_t>(oracle.cols()))
          << spec.party_count << " parties, mask " << mask;
      EXPECT_LT(projector_gap(cert, oracle, dim), kAccumulatedTolerance);
      EXPECT_LT(cert.residual, kAccumulatedTolerance);
      const auto elim = stabilized_subspace(sub, spec.party_count, SubspaceMethod::elimination);
      EXPECT_LT(projector_gap(elim, oracle, dim), kAccumulatedTolerance);
      if (pairwise_commuting(sub)) {
        const auto prod =
            stabilized_subspace(sub, spec.party_count, SubspaceMethod::projector_product);
        EXPECT_LT(projector_gap(prod, oracle, dim), kAccumulatedTolerance);
      }
    }
  }
}

TEST(StabilizedSubspace, opposite_eigenvalues_have_no_common_vector) {
  const auto op = partial_projector(observable(ObservableName::sigma_z).matrix, 0, 2);
  const std::vector<Constraint> cs = {{op, 1}, {op, -1}};
  EXPECT_EQ(stabilized_subspace(cs, 2).dimension, 0u);
}

TEST(StabilizedSubspace, rejects_invalid_constraints) {
  const auto sz2 = partial_projector(observable(ObservableName::sigma_z).matrix, 0, 2);
  EXPECT_THROW(stabilized_subspace(std::vector<Constraint>{{sz2, 0}}, 2), std::invalid_argument);
  EXPECT_THROW(stabilized_subspace(std::vector<Constraint>{{sz2, 1}}, 3), std::invalid_argument);
  EXPECT_THROW(stabilized_subspace(std::vector<Constraint>{{2.0 * sz2, 1}}, 2),
               std::invalid_argument);
  auto skew = LinearOperator::ket_bra(16, 0, 1);
  EXPECT_THROW(stabilized_subspace(std::vector<Constraint>{{skew, 1}}, 2), std::invalid_argument);
}
