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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "freqlink/tolerances.hpp"

namespace freqlink {

using Complex = std::complex<double>;

enum class SubsystemKind { atom, photon_mode };

/// One tensor factor of a joint state. Atoms are two-level; photonic modes
/// carry an occupation number truncated at 2.
struct Subsystem {
  std::string id;
  SubsystemKind kind;
  int dim;

  static Subsystem atom(std::string id) {
    return Subsystem{std::move(id), SubsystemKind::atom, 2};
  }
  static Subsystem photon_mode(std::string id) {
    return Subsystem{std::move(id), SubsystemKind::photon_mode, 3};
  }

  friend bool operator==(const Subsystem& a, const Subsystem& b) {
    return a.id == b.id && a.kind == b.kind && a.dim == b.dim;
  }
};

/// Dense state vector over an ordered list of labeled subsystems.
///
/// Amplitudes are stored row-major with the first factor slowest. States are
/// treated as immutable values once built; all operations return new states,
/// so read-only sharing across threads is safe.
class JointState {
 public:
  // Scalar state (no factors, single amplitude 1). Useful as the residual of
  // a projection that consumed every factor.
  JointState() : factors_(), amps_(1, Complex(1.0, 0.0)) {}

  static JointState from_amplitudes(std::vector<Subsystem> factors,
                                    std::vector<Complex> amplitudes) {
    JointState s;
    s.factors_ = std::move(factors);
    std::size_t dim = 1;
    for (const auto& f : s.factors_) {
      if (f.dim < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
      dim *= static_cast<std::size_t>(f.dim);
    }
    if (amplitudes.size() != dim) {
      throw std::invalid_argument("amplitude vector length does not match factor dimensions");
    }
    s.amps_ = std::move(amplitudes);
    s.check_finite();
    return s;
  }

  static JointState basis_state(std::vector<Subsystem> factors, std::vector<int> levels) {
    std::size_t dim = 1;
    for (const auto& f : factors) dim *= static_cast<std::size_t>(f.dim);
    if (levels.size() != factors.size()) {
      throw std::invalid_argument("level list length does not match factor count");
    }
    std::vector<Complex> amps(dim, Complex(0.0, 0.0));
    JointState s;
    s.factors_ = std::move(factors);
    s.amps_ = std::move(amps);
    s.amps_[s.index_of(levels)] = Complex(1.0, 0.0);
    return s;
  }

  const std::vector<Subsystem>& factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }

  Complex amplitude(std::size_t index) const { return amps_.at(index); }
  Complex amplitude(std::span<const int> levels) const { return amps_[index_of(levels)]; }

  double norm2() const {
    double n = 0.0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
  }

  bool is_normalized(double tolerance = tol::kAmplitude) const {
    return std::abs(norm2() - 1.0) < tolerance;
  }

  JointState normalized() const {
    const double n = std::sqrt(norm2());
    if (n <= 0.0) throw std::domain_error("cannot normalize a zero state");
    JointState out = *this;
    for (auto& a : out.amps_) a /= n;
    return out;
  }

  JointState scaled(Complex factor) const {
    JointState out = *this;
    for (auto& a : out.amps_) a *= factor;
    out.check_finite();
    return out;
  }

  int factor_index(std::string_view id) const {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].id == id) return static_cast<int>(i);
    }
    return -1;
  }

  std::size_t index_of(std::span<const int> levels) const {
    if (levels.size() != factors_.size()) {
      throw std::invalid_argument("level list length does not match factor count");
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (levels[i] < 0 || levels[i] >= factors_[i].dim) {
        throw std::out_of_range("level index outside declared subsystem dimension");
      }
      idx = idx * static_cast<std::size_t>(factors_[i].dim) + static_cast<std::size_t>(levels[i]);
    }
    return idx;
  }

  std::vector<int> levels_of(std::size_t index) const {
    std::vector<int> levels(factors_.size(), 0);
    for (std::size_t i = factors_.size(); i-- > 0;) {
      const auto d = static_cast<std::size_t>(factors_[i].dim);
      levels[i] = static_cast<int>(index % d);
      index /= d;
    }
    return levels;
  }

  /// New state with factors rearranged into the given id order.
  JointState permuted(std::span<const std::string> id_order) const {
    if (id_order.size() != factors_.size()) {
      throw std::invalid_argument("permutation must name every factor exactly once");
    }
    std::vector<int> source(factors_.size());
    std::vector<Subsystem> new_factors;
    new_factors.reserve(factors_.size());
    for (std::size_t i = 0; i < id_order.size(); ++i) {
      const int idx = factor_index(id_order[i]);
      if (idx < 0) throw std::invalid_argument("unknown factor id in permutation: " + id_order[i]);
      source[i] = idx;
      new_factors.push_back(factors_[static_cast<std::size_t>(idx)]);
    }
    std::vector<int> seen(factors_.size(), 0);
    for (int s : source) {
      if (seen[static_cast<std::size_t>(s)]++) {
        throw std::invalid_argument("duplicate factor id in permutation");
      }
    }
    std::vector<Complex> amps(amps_.size());
    std::vector<int> new_levels(factors_.size());
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
      const std::vector<int> old_levels = levels_of(idx);
      for (std::size_t i = 0; i < source.size(); ++i) {
        new_levels[i] = old_levels[static_cast<std::size_t>(source[i])];
      }
      std::size_t nidx = 0;
      for (std::size_t i = 0; i < new_factors.size(); ++i) {
        nidx = nidx * static_cast<std::size_t>(new_factors[i].dim) +
               static_cast<std::size_t>(new_levels[i]);
      }
      amps[nidx] = amps_[idx];
    }
    return from_amplitudes(std::move(new_factors), std::move(amps));
  }

  JointState renamed_factor(std::string_view old_id, std::string new_id) const {
    JointState out = *this;
    const int idx = out.factor_index(old_id);
    if (idx < 0) throw std::invalid_argument("unknown factor id: " + std::string(old_id));
    out.factors_[static_cast<std::size_t>(idx)].id = std::move(new_id);
    return out;
  }

  std::string basis_label(std::size_t index) const {
    const std::vector<int> levels = levels_of(index);
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += ' ';
      out += factors_[i].id;
      out += ':';
      out += std::to_string(levels[i]);
    }
    return out;
  }

  /// Debug dump: list of (basis label, re, im), tiny amplitudes omitted.
  nlohmann::json dump_json(double cutoff = tol::kDumpCutoff) const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) < cutoff) continue;
      rows.push_back({{"basis", basis_label(i)}, {"re", amps_[i].real()}, {"im", amps_[i].imag()}});
    }
    return rows;
  }

 private:
  void check_finite() const {
    for (const auto& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw std::invalid_argument("non-finite amplitude in state");
      }
    }
  }

  std::vector<Subsystem> factors_;
  std::vector<Complex> amps_;
};

/// Kronecker product in declared factor order. Subsystem ids must not clash.
inline JointState tensor(const JointState& a, const JointState& b) {
  for (const auto& fb : b.factors()) {
    if (a.factor_index(fb.id) >= 0) {
      throw std::invalid_argument("tensor: overlapping subsystem id: " + fb.id);
    }
  }
  std::vector<Subsystem> factors = a.factors();
  factors.insert(factors.end(), b.factors().begin(), b.factors().end());
  std::vector<Complex> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Complex ai = a.amplitude(i);
    for (std::size_t j = 0; j < b.dim(); ++j) {
      amps[i * b.dim() + j] = ai * b.amplitude(j);
    }
  }
  return JointState::from_amplitudes(std::move(factors), std::move(amps));
}

inline Complex inner_product(const JointState& a, const JointState& b) {
  if (a.factors() != b.factors()) {
    throw std::invalid_argument("inner_product: mismatched bases");
  }
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    acc += std::conj(a.amplitude(i)) * b.amplitude(i);
  }
  return acc;
}

struct ProjectionResult {
  JointState residual;  // unnormalized, over the factors the target did not cover
  double probability = 0.0;
  bool null_projection = true;

  JointState normalized() const {
    if (null_projection) {
      throw std::domain_error("null projection has no normalized residual");
    }
    return residual.normalized();
  }
};

/// Projects `state` onto `target` over the subset of factors the target
/// names; the residual keeps the remaining factors in their original order.
/// The target must be normalized. A zero-probability projection is flagged,
/// not thrown.
inline ProjectionResult project(const JointState& state, const JointState& target) {
  if (!target.is_normalized(tol::kInputNorm)) {
    throw std::invalid_argument("project: target vector must be normalized");
  }
  std::vector<int> target_pos;  // position of each target factor within state
  target_pos.reserve(target.num_factors());
  for (const auto& f : target.factors()) {
    const int idx = state.factor_index(f.id);
    if (idx < 0 || !(state.factors()[static_cast<std::size_t>(idx)] == f)) {
      throw std::invalid_argument("project: target factor not present in state: " + f.id);
    }
    target_pos.push_back(idx);
  }
  std::vector<bool> covered(state.num_factors(), false);
  for (int p : target_pos) {
    if (covered[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("project: duplicate factor in target");
    }
    covered[static_cast<std::size_t>(p)] = true;
  }
  std::vector<Subsystem> rem_factors;
  std::vector<int> rem_pos;
  for (std::size_t i = 0; i < state.num_factors(); ++i) {
    if (!covered[i]) {
      rem_factors.push_back(state.factors()[i]);
      rem_pos.push_back(static_cast<int>(i));
    }
  }
  std::size_t rem_dim = 1;
  for (const auto& f : rem_factors) rem_dim *= static_cast<std::size_t>(f.dim);

  std::vector<Complex> res(rem_dim, Complex(0.0, 0.0));
  std::vector<int> levels(state.num_factors());
  for (std::size_t idx = 0; idx < state.dim(); ++idx) {
    const Complex amp = state.amplitude(idx);
    if (amp == Complex(0.0, 0.0)) continue;
    const std::vector<int> all = state.levels_of(idx);
    std::size_t tidx = 0;
    for (std::size_t t = 0; t < target_pos.size(); ++t) {
      tidx = tidx * static_cast<std::size_t>(target.factors()[t].dim) +
             static_cast<std::size_t>(all[static_cast<std::size_t>(target_pos[t])]);
    }
    const Complex t_amp = target.amplitude(tidx);
    if (t_amp == Complex(0.0, 0.0)) continue;
    std::size_t ridx = 0;
    for (std::size_t r = 0; r < rem_pos.size(); ++r) {
      ridx = ridx * static_cast<std::size_t>(rem_factors[r].dim) +
             static_cast<std::size_t>(all[static_cast<std::size_t>(rem_pos[r])]);
    }
    res[ridx] += std::conj(t_amp) * amp;
  }

  ProjectionResult out{JointState::from_amplitudes(std::move(rem_factors), std::move(res)), 0.0,
                       true};
  out.probability = out.residual.norm2();
  out.null_projection = out.probability <= tol::kNullProjection;
  return out;
}

/// |<a|b>|^2 for normalized states over the same basis.
inline double fidelity_up_to_global_phase(const JointState& a, const JointState& b) {
  if (a.factors() != b.factors()) {
    throw std::invalid_argument("fidelity: mismatched bases");
  }
  if (!a.is_normalized(tol::kInputNorm) || !b.is_normalized(tol::kInputNorm)) {
    throw std::invalid_argument("fidelity: states must be normalized");
  }
  return std::min(1.0, std::norm(inner_product(a, b)));
}

/// New state with each amplitude replaced by fn(levels, amplitude).
inline JointState map_amplitudes(
    const JointState& state,
    const std::function<Complex(std::span<const int>, Complex)>& fn) {
  std::vector<Complex> amps(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const std::vector<int> levels = state.levels_of(i);
    amps[i] = fn(levels, state.amplitude(i));
  }
  return JointState::from_amplitudes(state.factors(), std::move(amps));
}

}  // namespace freqlink
