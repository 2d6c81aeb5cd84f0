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
#include <span>
#include <string>
#include <vector>

#include "quqkd/observables.hpp"
#include "quqkd/qudit_core.hpp"

namespace quqkd {

/// A joint eigen-equation (O_A (x) O_B [(x) O_C]) |chi> = expected |chi>.
struct Check {
  std::vector<ObservableName> operators;
  int expected;

  /// Operator names joined with '/', e.g. "epsilon_x/epsilon_x/identity".
  std::string id() const;
  LinearOperator joint() const;

  bool operator==(const Check&) const = default;
};

/// Shared entangled resource plus the checks that certify it.
struct ChannelSpec {
  std::size_t party_count;
  StateVector state;
  std::vector<Check> checks;

  /// Same checks over a different state; used for negative controls.
  ChannelSpec with_state(StateVector replacement) const;
};

/// (|01> + |10> - |23> - |32>) / 2 with the four two-party checks.
ChannelSpec make_channel_two_party();
/// Uniform superposition of |000>,|011>,|101>,|110>,|223>,|232>,|322>,|333>
/// with the four three-party checks.
ChannelSpec make_channel_three_party();

/// ||O psi - lambda psi|| per check, in check order.
std::vector<double> check_residuals(const ChannelSpec& spec);
/// Max of check_residuals.
double verify_checks(const ChannelSpec& spec);

// --- stabilized subspace ---------------------------------------------------

struct Constraint {
  LinearOperator op;
  int eigenvalue;
};

std::vector<Constraint> constraints_of(const ChannelSpec& spec);

enum class SubspaceMethod {
  /// Projector product when the constraints commute, elimination otherwise.
  automatic,
  /// Column space of prod_k (I + lambda_k O_k) / 2. Requires commuting input.
  projector_product,
  /// Null space of the stacked (O_k - lambda_k I) by complete-pivoting
  /// Gaussian elimination.
  elimination,
};

struct SubspaceCertificate {
  std::size_t dimension = 0;
  std::vector<StateVector> basis;
  /// Max ||O v - lambda v|| over basis vectors and constraints.
  double residual = 0.0;
  bool commuting = true;
  SubspaceMethod method = SubspaceMethod::automatic;

  /// Orthogonal projector onto span(basis).
  LinearOperator span_projector(std::size_t dim) const;
};

/// Pivot / residual-norm threshold for the rank decisions.
inline constexpr double kRankThreshold = 1e-8;

/// Orthonormal basis of the joint eigenspace of the constraints on
/// `num_ququarts` ququarts. Throws std::invalid_argument if an operator is not
/// a Hermitian involution, a dimension disagrees, an eigenvalue is not +-1,
/// or projector_product is forced on a non-commuting set.
SubspaceCertificate stabilized_subspace(std::span<const Constraint> constraints,
                                        std::size_t num_ququarts,
                                        SubspaceMethod method = SubspaceMethod::automatic);

/// |<a|b>| = 1 within tolerance, i.e. equal up to global phase.
bool same_ray(const StateVector& a, const StateVector& b,
              double tolerance = kAccumulatedTolerance);

}  // namespace quqkd
