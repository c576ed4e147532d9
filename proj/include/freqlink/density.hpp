// Copyright 2026 The freqlink Authors
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

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "freqlink/state.hpp"

namespace freqlink {

/// Minimal density matrix over a labeled tensor basis. Only what the
/// heralded-gate code needs: accumulation of pure branches, trace
/// normalization, overlap with a pure state, and a rank-one check.
class DensityMatrix {
 public:
  explicit DensityMatrix(std::vector<Subsystem> factors) : factors_(std::move(factors)) {
    dim_ = 1;
    for (const auto& f : factors_) dim_ *= static_cast<std::size_t>(f.dim);
    elems_.assign(dim_ * dim_, Complex(0.0, 0.0));
  }

  static DensityMatrix from_pure(const JointState& s, double weight = 1.0) {
    DensityMatrix rho(s.factors());
    rho.accumulate(s, weight);
    return rho;
  }

  const std::vector<Subsystem>& factors() const { return factors_; }
  std::size_t dim() const { return dim_; }

  Complex element(std::size_t row, std::size_t col) const { return elems_.at(row * dim_ + col); }
  Complex& element_ref(std::size_t row, std::size_t col) { return elems_.at(row * dim_ + col); }

  /// rho += weight * |branch><branch|. The branch may be unnormalized; its
  /// norm is folded into the weight.
  void accumulate(const JointState& branch, double weight = 1.0) {
    if (branch.factors() != factors_) {
      throw std::invalid_argument("density accumulate: mismatched bases");
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      const Complex bi = branch.amplitude(i);
      if (bi == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        elems_[i * dim_ + j] += weight * bi * std::conj(branch.amplitude(j));
      }
    }
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += elems_[i * dim_ + i].real();
    return t;
  }

  DensityMatrix normalized() const {
    const double t = trace();
    if (t <= 0.0) throw std::domain_error("cannot normalize a zero density matrix");
    DensityMatrix out = *this;
    for (auto& e : out.elems_) e /= t;
    return out;
  }

  /// <psi|rho|psi> with rho scaled to unit trace.
  double fidelity(const JointState& pure) const {
    if (pure.factors() != factors_) {
      throw std::invalid_argument("density fidelity: mismatched bases");
    }
    const double t = trace();
    if (t <= 0.0) throw std::domain_error("fidelity of a zero density matrix");
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        acc += std::conj(pure.amplitude(i)) * elems_[i * dim_ + j] * pure.amplitude(j);
      }
    }
    return acc.real() / t;
  }

  // tr(rho^2) / tr(rho)^2; equals 1 exactly for pure states.
  double purity() const {
    const double t = trace();
    if (t <= 0.0) throw std::domain_error("purity of a zero density matrix");
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        acc += std::norm(elems_[i * dim_ + j]);
      }
    }
    return acc / (t * t);
  }

  /// Extracts the pure state when rho is rank one (within tolerance).
  std::optional<JointState> as_pure(double tolerance = 1e-10) const {
    const double t = trace();
    if (t <= 0.0) return std::nullopt;
    // Column under the largest diagonal entry spans the range of a rank-one
    // matrix; reconstruct and verify.
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double d = elems_[i * dim_ + i].real();
      if (d > best) {
        best = d;
        pivot = i;
      }
    }
    if (best <= 0.0) return std::nullopt;
    std::vector<Complex> v(dim_);
    const double inv = 1.0 / std::sqrt(best);
    for (std::size_t i = 0; i < dim_; ++i) v[i] = elems_[i * dim_ + pivot] * inv;
    // Check rho == v v^dagger * t (elementwise, relative to trace scale).
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        const Complex expect = v[i] * std::conj(v[j]);
        if (std::abs(elems_[i * dim_ + j] - expect) > tolerance * t) return std::nullopt;
      }
    }
    std::vector<Complex> normalized_v = v;
    double n = 0.0;
    for (const auto& a : normalized_v) n += std::norm(a);
    n = std::sqrt(n);
    for (auto& a : normalized_v) a /= n;
    return JointState::from_amplitudes(factors_, std::move(normalized_v));
  }

 private:
  std::vector<Subsystem> factors_;
  std::size_t dim_ = 1;
  std::vector<Complex> elems_;
};

}  // namespace freqlink
