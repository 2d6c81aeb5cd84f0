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

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "quqkd/kernels.hpp"

namespace quqkd {

namespace {

constexpr std::size_t kMaxQuquarts = 6;

std::size_t sample_index(std::span<const double> probabilities, Rng& rng) {
  const double r = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_nonzero = probabilities.size();
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] <= 0.0) {
      continue;
    }
    last_nonzero = k;
    cumulative += probabilities[k];
    if (r < cumulative) {
      return k;
    }
  }
  // r landed in the rounding gap above the cumulative sum.
  if (last_nonzero == probabilities.size()) {
    throw std::logic_error("measurement: every outcome has zero probability");
  }
  return last_nonzero;
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

void check_completeness(std::span<const LinearOperator> projectors, std::size_t dim,
                        const char* what) {
  if (projectors.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty projector set");
  }
  LinearOperator sum(dim);
  for (const auto& p : projectors) {
    require_same_dim(p.dim(), dim, what);
    sum += p;
  }
  if (max_abs_difference(sum, LinearOperator::identity(dim)) > kAccumulatedTolerance) {
    throw std::invalid_argument(std::string(what) +
                                ": projectors do not sum to the identity");
  }
}

MeasurementResult collapse(std::vector<StateVector> branches, Rng& rng) {
  std::vector<double> probabilities;
  probabilities.reserve(branches.size());
  for (const auto& branch : branches) {
    probabilities.push_back(branch.norm_squared());
  }
  const std::size_t k = sample_index(probabilities, rng);
  if (probabilities[k] <= 0.0) {
    throw std::logic_error("measurement: sampled a zero-probability branch");
  }
  return MeasurementResult{k, probabilities[k], branches[k].normalized()};
}

}  // namespace

std::size_t ququart_dim(std::size_t num_ququarts) {
  if (num_ququarts == 0 || num_ququarts > kMaxQuquarts) {
    throw std::invalid_argument("ququart count out of range: " + std::to_string(num_ququarts));
  }
  return std::size_t{1} << (2 * num_ququarts);
}

std::size_t ququarts_for_dim(std::size_t dim) {
  std::size_t n = 0;
  std::size_t d = 1;
  while (d < dim && n <= kMaxQuquarts) {
    d *= 4;
    ++n;
  }
  if (d != dim || n == 0 || n > kMaxQuquarts) {
    throw std::invalid_argument("dimension is not a supported power of 4: " + std::to_string(dim));
  }
  return n;
}

// --- StateVector ---------------------------------------------------------

StateVector::StateVector(std::size_t num_ququarts, std::vector<Complex> amplitudes, bool normalized)
    : num_ququarts_(num_ququarts), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
  if (amplitudes_.size() != ququart_dim(num_ququarts_)) {
    throw std::invalid_argument("StateVector: expected " +
                                std::to_string(ququart_dim(num_ququarts_)) + " amplitudes, got " +
                                std::to_string(amplitudes_.size()));
  }
}

StateVector::StateVector(std::size_t num_ququarts, std::vector<Complex> amplitudes)
    : StateVector(num_ququarts, std::move(amplitudes), true) {
  if (std::abs(norm_squared() - 1.0) > kExactTolerance) {
    throw std::invalid_argument("StateVector: amplitudes are not normalized");
  }
}

StateVector StateVector::unnormalized(std::size_t num_ququarts, std::vector<Complex> amplitudes) {
  return StateVector(num_ququarts, std::move(amplitudes), false);
}

StateVector StateVector::basis(std::size_t num_ququarts, std::size_t index) {
  std::vector<Complex> amps(ququart_dim(num_ququarts));
  if (index >= amps.size()) {
    throw std::out_of_range("StateVector::basis: index out of range");
  }
  amps[index] = 1.0;
  return StateVector(num_ququarts, std::move(amps), true);
}

StateVector StateVector::zero(std::size_t num_ququarts) {
  return StateVector(num_ququarts, std::vector<Complex>(ququart_dim(num_ququarts)), false);
}

double StateVector::norm_squared() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) {
    sum += std::norm(a);
  }
  return sum;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) {
    throw std::domain_error("StateVector::normalized: zero vector");
  }
  std::vector<Complex> amps(amplitudes_);
  for (auto& a : amps) {
    a /= n;
  }
  return StateVector(num_ququarts_, std::move(amps), true);
}

// --- LinearOperator ------------------------------------------------------

LinearOperator::LinearOperator(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  ququarts_for_dim(dim);
}

LinearOperator::LinearOperator(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  ququarts_for_dim(dim);
  if (entries_.size() != dim * dim) {
    throw std::invalid_argument("LinearOperator: entry count is not dim*dim");
  }
}

LinearOperator LinearOperator::identity(std::size_t dim) {
  LinearOperator op(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    op(i, i) = 1.0;
  }
  return op;
}

LinearOperator LinearOperator::ket_bra(std::size_t dim, std::size_t ket, std::size_t bra) {
  LinearOperator op(dim);
  if (ket >= dim || bra >= dim) {
    throw std::out_of_range("LinearOperator::ket_bra: index out of range");
  }
  op(ket, bra) = 1.0;
  return op;
}

LinearOperator LinearOperator::outer(const StateVector& ket, const StateVector& bra) {
  require_same_dim(ket.dim(), bra.dim(), "outer");
  LinearOperator op(ket.dim());
  for (std::size_t i = 0; i < ket.dim(); ++i) {
    for (std::size_t j = 0; j < bra.dim(); ++j) {
      op(i, j) = ket[i] * std::conj(bra[j]);
    }
  }
  return op;
}

LinearOperator LinearOperator::adjoint() const {
  LinearOperator out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      out(j, i) = std::conj((*this)(i, j));
    }
  }
  return out;
}

Complex LinearOperator::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < dim_; ++i) {
    t += (*this)(i, i);
  }
  return t;
}

double LinearOperator::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& e : entries_) {
    sum += std::norm(e);
  }
  return std::sqrt(sum);
}

bool LinearOperator::is_hermitian(double tolerance) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tolerance) {
        return false;
      }
    }
  }
  return true;
}

LinearOperator& LinearOperator::operator+=(const LinearOperator& other) {
  require_same_dim(dim_, other.dim_, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i] += other.entries_[i];
  }
  return *this;
}

LinearOperator& LinearOperator::operator-=(const LinearOperator& other) {
  require_same_dim(dim_, other.dim_, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i] -= other.entries_[i];
  }
  return *this;
}

LinearOperator& LinearOperator::operator*=(Complex scalar) {
  for (auto& e : entries_) {
    e *= scalar;
  }
  return *this;
}

LinearOperator operator+(LinearOperator a, const LinearOperator& b) { return a += b; }
LinearOperator operator-(LinearOperator a, const LinearOperator& b) { return a -= b; }
LinearOperator operator*(Complex scalar, LinearOperator a) { return a *= scalar; }

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator*");
  LinearOperator out(a.dim());
  kernels::omp::multiply(a.entries(), b.entries(), out.entries(), a.dim());
  return out;
}

double max_abs_difference(const LinearOperator& a, const LinearOperator& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_difference");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return worst;
}

double distance(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    sum += std::norm(a[i] - b[i]);
  }
  return std::sqrt(sum);
}

// --- products ------------------------------------------------------------

StateVector tensor(const StateVector& a, const StateVector& b) {
  const std::size_t n = a.num_ququarts() + b.num_ququarts();
  std::vector<Complex> amps(ququart_dim(n));
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      amps[i * b.dim() + j] = a[i] * b[j];
    }
  }
  if (a.is_normalized() && b.is_normalized()) {
    return StateVector(n, std::move(amps));
  }
  return StateVector::unnormalized(n, std::move(amps));
}

LinearOperator tensor(const LinearOperator& a, const LinearOperator& b) {
  const std::size_t dim = a.dim() * b.dim();
  LinearOperator out(dim);
  for (std::size_t ar = 0; ar < a.dim(); ++ar) {
    for (std::size_t ac = 0; ac < a.dim(); ++ac) {
      const Complex s = a(ar, ac);
      if (s == Complex{}) {
        continue;
      }
      for (std::size_t br = 0; br < b.dim(); ++br) {
        for (std::size_t bc = 0; bc < b.dim(); ++bc) {
          out(ar * b.dim() + br, ac * b.dim() + bc) = s * b(br, bc);
        }
      }
    }
  }
  return out;
}

LinearOperator tensor(std::span<const LinearOperator> factors) {
  if (factors.empty()) {
    throw std::invalid_argument("tensor: no factors");
  }
  LinearOperator out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    out = tensor(out, factors[i]);
  }
  return out;
}

StateVector apply(const LinearOperator& op, const StateVector& psi) {
  require_same_dim(op.dim(), psi.dim(), "apply");
  std::vector<Complex> out(psi.dim());
  kernels::omp::matvec(op.entries(), psi.amplitudes(), out, psi.dim());
  return StateVector::unnormalized(psi.num_ququarts(), std::move(out));
}

StateVector apply_local(const LinearOperator& local, const StateVector& psi,
                        std::size_t position) {
  if (local.dim() != 4) {
    throw std::invalid_argument("apply_local: operator must be 4x4");
  }
  if (position >= psi.num_ququarts()) {
    throw std::out_of_range("apply_local: position out of range");
  }
  std::vector<Complex> out(psi.dim());
  kernels::omp::apply_local(local.entries(), psi.amplitudes(), out, psi.num_ququarts(), position);
  return StateVector::unnormalized(psi.num_ququarts(), std::move(out));
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner");
  Complex acc{};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    acc += std::conj(a[i]) * b[i];
  }
  return acc;
}

LinearOperator partial_projector(const LinearOperator& local, std::size_t position,
                                 std::size_t num_ququarts) {
  if (local.dim() != 4) {
    throw std::invalid_argument("partial_projector: local operator must be 4x4");
  }
  if (position >= num_ququarts) {
    throw std::out_of_range("partial_projector: position " + std::to_string(position) +
                            " out of range for " + std::to_string(num_ququarts) + " ququarts");
  }
  std::vector<LinearOperator> factors(num_ququarts, LinearOperator::identity(4));
  factors[position] = local;
  return tensor(factors);
}

// --- measurement ---------------------------------------------------------

MeasurementResult measure_projective(const StateVector& psi,
                                     std::span<const LinearOperator> projectors, Rng& rng) {
  if (!psi.is_normalized()) {
    throw std::invalid_argument("measure_projective: state is not normalized");
  }
  check_completeness(projectors, psi.dim(), "measure_projective");
  std::vector<StateVector> branches;
  branches.reserve(projectors.size());
  for (const auto& p : projectors) {
    branches.push_back(apply(p, psi));
  }
  return collapse(std::move(branches), rng);
}

MeasurementResult measure_local(const StateVector& psi, std::span<const LinearOperator> projectors,
                                std::size_t position, Rng& rng) {
  if (!psi.is_normalized()) {
    throw std::invalid_argument("measure_local: state is not normalized");
  }
  check_completeness(projectors, 4, "measure_local");
  std::vector<StateVector> branches;
  branches.reserve(projectors.size());
  for (const auto& p : projectors) {
    branches.push_back(apply_local(p, psi, position));
  }
  return collapse(std::move(branches), rng);
}

std::vector<double> local_probabilities(const StateVector& psi,
                                        std::span<const LinearOperator> projectors,
                                        std::size_t position) {
  check_completeness(projectors, 4, "local_probabilities");
  std::vector<double> out;
  out.reserve(projectors.size());
  for (const auto& p : projectors) {
    out.push_back(apply_local(p, psi, position).norm_squared());
  }
  return out;
}

StateVector drop_last_ququart(const StateVector& psi, std::size_t digit) {
  if (psi.num_ququarts() < 2 || digit >= 4) {
    throw std::invalid_argument("drop_last_ququart: need at least two ququarts and digit < 4");
  }
  std::vector<Complex> amps(psi.dim() / 4);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    amps[i] = psi[i * 4 + digit];
  }
  return StateVector::unnormalized(psi.num_ququarts() - 1, std::move(amps));
}

}  // namespace quqkd
