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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace quqkd {

namespace {

using Column = std::vector<Complex>;

double column_norm(const Column& v) {
  double s = 0.0;
  for (const auto& a : v) {
    s += std::norm(a);
  }
  return std::sqrt(s);
}

// Removes the components of v along every (orthonormal) vector in `basis`.
// Two passes keep the result orthogonal to working precision.
void orthogonalize(Column& v, const std::vector<Column>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      Complex dot{};
      for (std::size_t i = 0; i < v.size(); ++i) {
        dot += std::conj(b[i]) * v[i];
      }
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] -= dot * b[i];
      }
    }
  }
}

// Pivoted Gram-Schmidt: repeatedly takes the candidate with the largest
// remaining norm until every remainder falls below the rank threshold.
std::vector<Column> orthonormal_span(std::vector<Column> candidates) {
  std::vector<Column> basis;
  std::vector<bool> used(candidates.size(), false);
  while (true) {
    std::size_t best = candidates.size();
    double best_norm = kRankThreshold;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) {
        continue;
      }
      orthogonalize(candidates[c], basis);
      const double n = column_norm(candidates[c]);
      if (n > best_norm) {
        best_norm = n;
        best = c;
      }
    }
    if (best == candidates.size()) {
      break;
    }
    used[best] = true;
    Column v = std::move(candidates[best]);
    for (auto& a : v) {
      a /= best_norm;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Column> span_by_projector_product(std::span<const Constraint> constraints,
                                              std::size_t dim) {
  const auto id = LinearOperator::identity(dim);
  LinearOperator product = id;
  for (const auto& c : constraints) {
    product = product * (0.5 * (id + static_cast<double>(c.eigenvalue) * c.op));
  }
  std::vector<Column> columns(dim, Column(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t col = 0; col < dim; ++col) {
      columns[col][r] = product(r, col);
    }
  }
  return orthonormal_span(std::move(columns));
}

std::vector<Column> span_by_elimination(std::span<const Constraint> constraints,
                                        std::size_t dim) {
  const std::size_t rows = constraints.size() * dim;
  std::vector<Complex> a(rows * dim);
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const auto& c = constraints[k];
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t col = 0; col < dim; ++col) {
        Complex v = c.op(r, col);
        if (r == col) {
          v -= static_cast<double>(c.eigenvalue);
        }
        a[(k * dim + r) * dim + col] = v;
      }
    }
  }
  auto at = [&](std::size_t r, std::size_t c) -> Complex& { return a[r * dim + c]; };

  // Reduced row echelon form with complete pivoting over unpivoted columns.
  std::vector<std::size_t> pivot_cols;
  std::vector<bool> is_pivot(dim, false);
  std::size_t rank = 0;
  while (rank < rows) {
    double best = kRankThreshold;
    std::size_t br = rows, bc = dim;
    for (std::size_t r = rank; r < rows; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        if (!is_pivot[c] && std::abs(at(r, c)) > best) {
          best = std::abs(at(r, c));
          br = r;
          bc = c;
        }
      }
    }
    if (br == rows) {
      break;
    }
    if (br != rank) {
      for (std::size_t c = 0; c < dim; ++c) {
        std::swap(at(br, c), at(rank, c));
      }
    }
    const Complex pivot = at(rank, bc);
    for (std::size_t c = 0; c < dim; ++c) {
      at(rank, c) /= pivot;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) {
        continue;
      }
      const Complex f = at(r, bc);
      if (f == Complex{}) {
        continue;
      }
      for (std::size_t c = 0; c < dim; ++c) {
        at(r, c) -= f * at(rank, c);
      }
    }
    is_pivot[bc] = true;
    pivot_cols.push_back(bc);
    ++rank;
  }

  std::vector<Column> null_vectors;
  for (std::size_t free = 0; free < dim; ++free) {
    if (is_pivot[free]) {
      continue;
    }
    Column x(dim);
    x[free] = 1.0;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      x[pivot_cols[i]] = -at(i, free);
    }
    null_vectors.push_back(std::move(x));
  }
  return orthonormal_span(std::move(null_vectors));
}

void validate(std::span<const Constraint> constraints, std::size_t dim) {
  const auto id = LinearOperator::identity(dim);
  for (const auto& c : constraints) {
    if (c.op.dim() != dim) {
      throw std::invalid_argument("stabilized_subspace: constraint dimension " +
                                  std::to_string(c.op.dim()) + " does not match space " +
                                  std::to_string(dim));
    }
    if (c.eigenvalue != 1 && c.eigenvalue != -1) {
      throw std::invalid_argument("stabilized_subspace: eigenvalue must be +1 or -1");
    }
    if (!c.op.is_hermitian(kAccumulatedTolerance)) {
      throw std::invalid_argument("stabilized_subspace: constraint is not Hermitian");
    }
    if (max_abs_difference(c.op * c.op, id) > kAccumulatedTolerance) {
      throw std::invalid_argument("stabilized_subspace: constraint is not an involution");
    }
  }
}

bool pairwise_commuting(std::span<const Constraint> constraints) {
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (std::size_t j = i + 1; j < constraints.size(); ++j) {
      if (commutator_norm(constraints[i].op, constraints[j].op) > kAccumulatedTolerance) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::string Check::id() const {
  std::string out;
  for (std::size_t i = 0; i < operators.size(); ++i) {
    if (i) {
      out += '/';
    }
    out += to_string(operators[i]);
  }
  return out;
}

LinearOperator Check::joint() const {
  std::vector<LinearOperator> factors;
  factors.reserve(operators.size());
  for (auto name : operators) {
    factors.push_back(observable(name).matrix);
  }
  return tensor(factors);
}

ChannelSpec ChannelSpec::with_state(StateVector replacement) const {
  if (replacement.num_ququarts() != party_count) {
    throw std::invalid_argument("ChannelSpec::with_state: party count mismatch");
  }
  return ChannelSpec{party_count, std::move(replacement), checks};
}

ChannelSpec make_channel_two_party() {
  std::vector<Complex> amps(16);
  amps[0 * 4 + 1] = 0.5;
  amps[1 * 4 + 0] = 0.5;
  amps[2 * 4 + 3] = -0.5;
  amps[3 * 4 + 2] = -0.5;
  using enum ObservableName;
  std::vector<Check> checks = {
      {{sigma_x, sigma_x}, -1},
      {{upsilon_x, upsilon_x}, -1},
      {{sigma_z, sigma_z}, -1},
      {{upsilon_z, upsilon_z}, +1},
  };
  return ChannelSpec{2, StateVector(2, std::move(amps)), std::move(checks)};
}

ChannelSpec make_channel_three_party() {
  std::vector<Complex> amps(64);
  const double a = 1.0 / (2.0 * std::sqrt(2.0));
  for (std::size_t idx : {0u, 5u, 17u, 20u, 43u, 46u, 58u, 63u}) {
    amps[idx] = a;
  }
  using enum ObservableName;
  std::vector<Check> checks = {
      {{sigma_x, sigma_x, sigma_x}, +1},
      {{o_z, o_z, o_z}, +1},
      {{epsilon_x, epsilon_x, identity}, +1},
      {{identity, epsilon_x, epsilon_x}, +1},
  };
  return ChannelSpec{3, StateVector(3, std::move(amps)), std::move(checks)};
}

std::vector<double> check_residuals(const ChannelSpec& spec) {
  std::vector<double> out;
  out.reserve(spec.checks.size());
  for (const auto& check : spec.checks) {
    if (check.operators.size() != spec.party_count) {
      throw std::invalid_argument("check arity does not match party count");
    }
    StateVector image = apply(check.joint(), spec.state);
    double sum = 0.0;
    for (std::size_t i = 0; i < image.dim(); ++i) {
      sum += std::norm(image[i] - static_cast<double>(check.expected) * spec.state[i]);
    }
    out.push_back(std::sqrt(sum));
  }
  return out;
}

double verify_checks(const ChannelSpec& spec) {
  const auto r = check_residuals(spec);
  return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

std::vector<Constraint> constraints_of(const ChannelSpec& spec) {
  std::vector<Constraint> out;
  for (const auto& check : spec.checks) {
    out.push_back(Constraint{check.joint(), check.expected});
  }
  return out;
}

LinearOperator SubspaceCertificate::span_projector(std::size_t dim) const {
  LinearOperator p(dim);
  for (const auto& v : basis) {
    p += LinearOperator::outer(v, v);
  }
  return p;
}

SubspaceCertificate stabilized_subspace(std::span<const Constraint> constraints,
                                        std::size_t num_ququarts, SubspaceMethod method) {
  const std::size_t dim = ququart_dim(num_ququarts);
  validate(constraints, dim);

  SubspaceCertificate cert;
  cert.commuting = pairwise_commuting(constraints);
  if (method == SubspaceMethod::automatic) {
    method = cert.commuting ? SubspaceMethod::projector_product : SubspaceMethod::elimination;
  }
  if (method == SubspaceMethod::projector_product && !cert.commuting) {
    throw std::invalid_argument(
        "stabilized_subspace: projector product requires pairwise commuting constraints");
  }
  cert.method = method;

  auto columns = method == SubspaceMethod::projector_product
                     ? span_by_projector_product(constraints, dim)
                     : span_by_elimination(constraints, dim);
  for (auto& col : columns) {
    cert.basis.push_back(StateVector::unnormalized(num_ququarts, std::move(col)).normalized());
  }
  cert.dimension = cert.basis.size();

  for (const auto& v : cert.basis) {
    for (const auto& c : constraints) {
      StateVector image = apply(c.op, v);
      double sum = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        sum += std::norm(image[i] - static_cast<double>(c.eigenvalue) * v[i]);
      }
      cert.residual = std::max(cert.residual, std::sqrt(sum));
    }
  }
  return cert;
}

bool same_ray(const StateVector& a, const StateVector& b, double tolerance) {
  return std::abs(std::abs(inner(a, b)) - 1.0) <= tolerance;
}

}  // namespace quqkd
