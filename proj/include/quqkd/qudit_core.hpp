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

// Dense state vectors and operators over n four-level systems.
//
// Basis convention: the computational basis of n ququarts is ordered
// lexicographically with the first ququart (party A) most significant, so
// |k l m> maps to index 16k + 4l + m.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "quqkd/rng.hpp"

namespace quqkd {

using Complex = std::complex<double>;

/// Tolerance for identities that hold exactly in dyadic arithmetic.
inline constexpr double kExactTolerance = 1e-12;
/// Tolerance for results of accumulated products.
inline constexpr double kAccumulatedTolerance = 1e-10;

/// 4^n; throws if the result would not fit a practical dense simulation.
std::size_t ququart_dim(std::size_t num_ququarts);
/// Inverse of ququart_dim; throws if dim is not a positive power of four.
std::size_t ququarts_for_dim(std::size_t dim);

class StateVector {
 public:
  /// Normalized state. Throws if the length is not 4^num_ququarts or the
  /// squared norm deviates from 1 by more than kExactTolerance.
  StateVector(std::size_t num_ququarts, std::vector<Complex> amplitudes);

  /// Vector with no normalization requirement. Only the subspace solver and
  /// raw operator application produce these.
  static StateVector unnormalized(std::size_t num_ququarts, std::vector<Complex> amplitudes);
  static StateVector basis(std::size_t num_ququarts, std::size_t index);
  static StateVector zero(std::size_t num_ququarts);

  std::size_t num_ququarts() const { return num_ququarts_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t index) const { return amplitudes_[index]; }

  /// True when the vector was constructed (or renormalized) as a state.
  bool is_normalized() const { return normalized_; }
  double norm_squared() const;
  double norm() const;

  /// Returns a normalized copy. Throws std::domain_error on a zero vector.
  StateVector normalized() const;

  bool operator==(const StateVector&) const = default;

 private:
  StateVector(std::size_t num_ququarts, std::vector<Complex> amplitudes, bool normalized);

  std::size_t num_ququarts_;
  std::vector<Complex> amplitudes_;
  bool normalized_;
};

/// Square complex matrix acting on 4^n dimensions. Row-major.
class LinearOperator {
 public:
  /// Zero operator.
  explicit LinearOperator(std::size_t dim);
  LinearOperator(std::size_t dim, std::vector<Complex> entries);

  static LinearOperator identity(std::size_t dim);
  /// |ket><bra| for two basis indices.
  static LinearOperator ket_bra(std::size_t dim, std::size_t ket, std::size_t bra);
  static LinearOperator outer(const StateVector& ket, const StateVector& bra);

  std::size_t dim() const { return dim_; }
  std::size_t num_ququarts() const { return ququarts_for_dim(dim_); }
  std::span<const Complex> entries() const { return entries_; }
  std::span<Complex> entries() { return entries_; }

  Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }

  LinearOperator adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  bool is_hermitian(double tolerance = kExactTolerance) const;

  LinearOperator& operator+=(const LinearOperator& other);
  LinearOperator& operator-=(const LinearOperator& other);
  LinearOperator& operator*=(Complex scalar);

  bool operator==(const LinearOperator&) const = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

LinearOperator operator+(LinearOperator a, const LinearOperator& b);
LinearOperator operator-(LinearOperator a, const LinearOperator& b);
LinearOperator operator*(Complex scalar, LinearOperator a);
LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);

/// Max-entry distance between two operators of equal dimension.
double max_abs_difference(const LinearOperator& a, const LinearOperator& b);
double distance(const StateVector& a, const StateVector& b);

/// Kronecker product with `a` as the more significant factor. Mixed
/// vector/operator arguments have no overload.
StateVector tensor(const StateVector& a, const StateVector& b);
LinearOperator tensor(const LinearOperator& a, const LinearOperator& b);
LinearOperator tensor(std::span<const LinearOperator> factors);

/// Matrix-vector product; the result is flagged unnormalized.
StateVector apply(const LinearOperator& op, const StateVector& psi);

/// Applies a 4x4 operator to one ququart without building the full matrix.
StateVector apply_local(const LinearOperator& local, const StateVector& psi, std::size_t position);

/// <a|b>, conjugate-linear in `a`.
Complex inner(const StateVector& a, const StateVector& b);

/// I (x) ... (x) local (x) ... (x) I with `local` at `position`.
LinearOperator partial_projector(const LinearOperator& local, std::size_t position,
                                 std::size_t num_ququarts);

struct MeasurementResult {
  std::size_t outcome_index;
  double probability;
  StateVector post_state;
};

/// Projective measurement with outcome probabilities <psi|P_k|psi>. The
/// projector set must sum to the identity within kAccumulatedTolerance.
MeasurementResult measure_projective(const StateVector& psi,
                                     std::span<const LinearOperator> projectors, Rng& rng);

/// Same as measure_projective for 4x4 projectors acting on one ququart.
MeasurementResult measure_local(const StateVector& psi, std::span<const LinearOperator> projectors,
                                std::size_t position, Rng& rng);

/// Outcome probabilities of a local projective measurement, without sampling.
std::vector<double> local_probabilities(const StateVector& psi,
                                        std::span<const LinearOperator> projectors,
                                        std::size_t position);

/// Computational-basis slice with the last ququart fixed to `digit`
/// (unnormalized). Used to drop an ancilla after measuring it.
StateVector drop_last_ququart(const StateVector& psi, std::size_t digit);

}  // namespace quqkd
