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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "freqlink/pauli.hpp"
#include "freqlink/rng.hpp"

namespace freqlink {

/// Stabilizer state on n qubits, represented by n independent commuting
/// Pauli generators with +/-1 phases.
class StabilizerTableau {
 public:
  /// |0...0>, stabilized by Z_q.
  static StabilizerTableau zeros(std::size_t n) {
    StabilizerTableau t;
    t.n_ = n;
    for (std::size_t q = 0; q < n; ++q) {
      t.gens_.push_back(PauliString::single(n, q, 'Z'));
    }
    return t;
  }

  /// |+...+>, stabilized by X_q.
  static StabilizerTableau pluses(std::size_t n) {
    StabilizerTableau t;
    t.n_ = n;
    for (std::size_t q = 0; q < n; ++q) {
      t.gens_.push_back(PauliString::single(n, q, 'X'));
    }
    return t;
  }

  static StabilizerTableau from_generators(std::vector<PauliString> generators) {
    if (generators.empty()) throw std::invalid_argument("tableau needs at least one generator");
    StabilizerTableau t;
    t.n_ = generators.front().num_qubits();
    if (generators.size() != t.n_) {
      throw std::invalid_argument("tableau needs exactly n generators for n qubits");
    }
    t.gens_ = std::move(generators);
    std::string why;
    if (!t.is_valid(&why)) throw std::invalid_argument("invalid generator set: " + why);
    return t;
  }

  std::size_t num_qubits() const { return n_; }
  const PauliString& generator(std::size_t i) const { return gens_.at(i); }
  const std::vector<PauliString>& generators() const { return gens_; }

  /// All generator pairs commute, every generator is Hermitian, and the
  /// (x|z) rows are independent over GF(2).
  bool is_valid(std::string* why = nullptr) const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (gens_[i].num_qubits() != n_) {
        if (why) *why = "generator size mismatch";
        return false;
      }
      if (!gens_[i].is_hermitian()) {
        if (why) *why = "generator with imaginary phase: " + gens_[i].str();
        return false;
      }
      for (std::size_t j = i + 1; j < gens_.size(); ++j) {
        if (!gens_[i].commutes_with(gens_[j])) {
          if (why) *why = "generators anticommute: " + gens_[i].str() + ", " + gens_[j].str();
          return false;
        }
      }
    }
    if (symplectic_rank() != gens_.size()) {
      if (why) *why = "generators are dependent over GF(2)";
      return false;
    }
    return true;
  }

  // --- Clifford conjugations (generator rewriting, phases tracked) ---

  void apply_h(std::size_t q) {
    for (auto& g : gens_) {
      const bool gx = g.x(q), gz = g.z(q);
      if (gx && gz) g.negate();  // Y -> -Y
      g.set_x(q, gz);
      g.set_z(q, gx);
    }
  }

  void apply_s(std::size_t q) {
    for (auto& g : gens_) {
      const bool gx = g.x(q), gz = g.z(q);
      if (gx && gz) g.negate();  // Y -> -X
      if (gx) g.set_z(q, !gz);   // X -> Y
    }
  }

  void apply_cx(std::size_t control, std::size_t target) {
    if (control == target) throw std::invalid_argument("cx needs distinct qubits");
    for (auto& g : gens_) {
      const bool xc = g.x(control), zc = g.z(control);
      const bool xt = g.x(target), zt = g.z(target);
      if (xc && zt && (xt == zc)) g.negate();
      g.set_x(target, xt ^ xc);
      g.set_z(control, zc ^ zt);
    }
  }

  void apply_x(std::size_t q) {
    for (auto& g : gens_) {
      if (g.z(q)) g.negate();
    }
  }

  void apply_z(std::size_t q) {
    for (auto& g : gens_) {
      if (g.x(q)) g.negate();
    }
  }

  struct MeasureResult {
    int outcome = +1;       // measured eigenvalue of the Pauli
    bool deterministic = false;
  };

  /// Measures a Hermitian Pauli observable. When the observable anticommutes
  /// with some generator the outcome is random: `forced_outcome` selects the
  /// branch if given, otherwise `rng` flips a fair coin (one of the two must
  /// be provided). When the observable is already in the stabilizer group
  /// (up to sign) the outcome is deterministic and the state is unchanged.
  MeasureResult measure(const PauliString& observable, std::optional<int> forced_outcome,
                        RngStream* rng) {
    if (observable.num_qubits() != n_) {
      throw std::invalid_argument("measure: observable acts on wrong qubit count");
    }
    if (!observable.is_hermitian()) {
      throw std::invalid_argument("measure: observable must be Hermitian");
    }
    // Measuring -P with outcome s is measuring P with outcome -s.
    const int obs_sign = observable.sign();
    PauliString positive = observable;
    positive.set_phase_exp(0);

    std::vector<std::size_t> anti;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (!gens_[i].commutes_with(positive)) anti.push_back(i);
    }
    MeasureResult result;
    if (!anti.empty()) {
      int outcome;
      if (forced_outcome.has_value()) {
        outcome = *forced_outcome;
        if (outcome != 1 && outcome != -1) {
          throw std::invalid_argument("measure: forced outcome must be +1 or -1");
        }
      } else if (rng != nullptr) {
        outcome = rng->bernoulli(0.5) ? 1 : -1;
      } else {
        throw std::invalid_argument("measure: random outcome needs a forced choice or an rng");
      }
      const std::size_t pivot = anti.front();
      for (std::size_t i = 1; i < anti.size(); ++i) {
        gens_[anti[i]] *= gens_[pivot];
      }
      PauliString replacement = positive;
      if (outcome * obs_sign == -1) replacement.negate();
      gens_[pivot] = replacement;
      result.outcome = outcome;
      result.deterministic = false;
      return result;
    }
    int sign = 0;
    if (!group_sign(positive, &sign)) {
      // Cannot happen for a full-rank tableau: the stabilizer group is a
      // maximal commuting subgroup.
      throw std::logic_error("measure: commuting observable outside the stabilizer group");
    }
    result.outcome = sign * obs_sign;
    result.deterministic = true;
    return result;
  }

  /// Group membership of the observable's letters. When they are in the
  /// span, `sign_out` receives the sign s for which s * letters is a group
  /// member (the deterministic outcome of measuring the unsigned letters).
  bool contains_letters(const PauliString& observable, int* sign_out = nullptr) const {
    int sign = 0;
    PauliString probe = observable;
    probe.set_phase_exp(0);
    if (!group_sign(probe, &sign)) return false;
    if (sign_out) *sign_out = sign;
    return true;
  }

  /// Whether exactly this signed operator is a group member.
  bool contains(const PauliString& observable) const {
    int sign = 0;
    return contains_letters(observable, &sign) && sign == observable.sign();
  }

 private:
  // Finds the product of generators whose letters equal `target`'s letters
  // and reports its sign relative to +target. Returns false when the letters
  // are not in the span.
  bool group_sign(const PauliString& target, int* sign_out) const {
    // Gaussian elimination over GF(2) on the (x|z) rows.
    std::vector<PauliString> rows = gens_;
    PauliString acc = PauliString::identity(n_);
    PauliString remaining = target;
    remaining.set_phase_exp(0);
    std::size_t row = 0;
    for (std::size_t col = 0; col < 2 * n_ && row < rows.size(); ++col) {
      const bool is_x = col < n_;
      const std::size_t q = is_x ? col : col - n_;
      auto bit = [&](const PauliString& p) { return is_x ? p.x(q) : p.z(q); };
      std::size_t pivot = row;
      while (pivot < rows.size() && !bit(rows[pivot])) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[row], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r != row && bit(rows[r])) rows[r] *= rows[row];
      }
      if (bit(remaining)) {
        acc *= rows[row];
        remaining *= rows[row];
      }
      ++row;
    }
    if (!remaining.is_identity_letters()) return false;
    // acc now has target's letters; compare phases.
    PauliString check = target;
    check.set_phase_exp(0);
    if (!acc.same_letters(check)) return false;
    if (!acc.is_hermitian()) return false;
    if (sign_out) *sign_out = acc.sign();
    return true;
  }

  std::size_t symplectic_rank() const {
    std::vector<PauliString> rows = gens_;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < 2 * n_ && rank < rows.size(); ++col) {
      const bool is_x = col < n_;
      const std::size_t q = is_x ? col : col - n_;
      auto bit = [&](const PauliString& p) { return is_x ? p.x(q) : p.z(q); };
      std::size_t pivot = rank;
      while (pivot < rows.size() && !bit(rows[pivot])) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r != rank && bit(rows[r])) rows[r] *= rows[rank];
      }
      ++rank;
    }
    return rank;
  }

  std::size_t n_ = 0;
  std::vector<PauliString> gens_;
};

/// QND measurement of Z_a Z_b. The heralded optical gate corresponds to
/// post-selecting the -1 outcome, so callers model it by forcing -1.
inline StabilizerTableau::MeasureResult measure_zz(StabilizerTableau& tableau, std::size_t a,
                                                   std::size_t b,
                                                   std::optional<int> forced_outcome,
                                                   RngStream* rng = nullptr) {
  if (a == b || a >= tableau.num_qubits() || b >= tableau.num_qubits()) {
    throw std::invalid_argument("measure_zz: qubits must be distinct and in range");
  }
  PauliString zz = PauliString::single(tableau.num_qubits(), a, 'Z');
  zz *= PauliString::single(tableau.num_qubits(), b, 'Z');
  return tableau.measure(zz, forced_outcome, rng);
}

}  // namespace freqlink
