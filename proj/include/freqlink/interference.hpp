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

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "freqlink/atom_photon.hpp"
#include "freqlink/density.hpp"
#include "freqlink/rng.hpp"
#include "freqlink/state.hpp"

namespace freqlink {

namespace modes {

inline std::string detector_nu0(int det) { return "d" + std::to_string(det) + ".nu0"; }
inline std::string detector_nu1(int det) { return "d" + std::to_string(det) + ".nu1"; }

}  // namespace modes

struct EfficiencyModel {
  double eta_d = 1.0;     // detector quantum efficiency
  double eta_c = 1.0;     // collection efficiency
  double eta_b = 1.0;     // pi-channel branching ratio
  double dark_rate = 0.0; // spurious count probability per detector per attempt

  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(eta_d)) issues.push_back("eta_d must lie in [0, 1]");
    if (!in_unit(eta_c)) issues.push_back("eta_c must lie in [0, 1]");
    if (!in_unit(eta_b)) issues.push_back("eta_b must lie in [0, 1]");
    if (dark_rate < 0.0 || dark_rate >= 1.0) issues.push_back("dark_rate must lie in [0, 1)");
    return issues;
  }
};

/// Overall herald probability: both atoms take the pi channel, both photons
/// are collected and detected, and the pair splits across the detectors
/// (probability 1/4 averaged over input states).
inline double success_probability(const EfficiencyModel& eff) {
  return eff.eta_d * eff.eta_d * eff.eta_c * eff.eta_c * eff.eta_b * eff.eta_b / 4.0;
}

/// Rewrites two bosonic modes under a linear transformation of their
/// creation operators:
///
///   a_in^dag  ->  m[0][0] a_out^dag + m[1][0] b_out^dag
///   b_in^dag  ->  m[0][1] a_out^dag + m[1][1] b_out^dag
///
/// with the combinatorial sqrt factors the occupation basis requires. The
/// occupation truncation must hold on output; exceeding it is an error.
inline JointState apply_two_mode_unitary(const JointState& state, std::string_view mode_a,
                                         std::string_view mode_b,
                                         const std::array<std::array<Complex, 2>, 2>& m) {
  const int pa = state.factor_index(mode_a);
  const int pb = state.factor_index(mode_b);
  if (pa < 0 || pb < 0) throw std::invalid_argument("apply_two_mode_unitary: unknown mode id");
  const auto& fa = state.factors()[static_cast<std::size_t>(pa)];
  const auto& fb = state.factors()[static_cast<std::size_t>(pb)];
  if (fa.kind != SubsystemKind::photon_mode || fb.kind != SubsystemKind::photon_mode) {
    throw std::invalid_argument("apply_two_mode_unitary: factors must be photonic modes");
  }
  static constexpr double kFact[5] = {1.0, 1.0, 2.0, 6.0, 24.0};
  auto choose = [](int n, int k) {
    static constexpr double c[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
    return c[n][k];
  };
  // std::pow on complex is exp/log based and maps 0^0 to NaN; occupations
  // are tiny integers, so multiply directly.
  auto ipow = [](Complex base, int e) {
    Complex r(1.0, 0.0);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
  };

  std::vector<Complex> out(state.dim(), Complex(0.0, 0.0));
  for (std::size_t idx = 0; idx < state.dim(); ++idx) {
    const Complex amp = state.amplitude(idx);
    if (amp == Complex(0.0, 0.0)) continue;
    std::vector<int> levels = state.levels_of(idx);
    const int na = levels[static_cast<std::size_t>(pa)];
    const int nb = levels[static_cast<std::size_t>(pb)];
    // Expand (image of a^dag)^na (image of b^dag)^nb over output occupations.
    for (int k = 0; k <= na; ++k) {
      for (int l = 0; l <= nb; ++l) {
        const int out_a = k + l;
        const int out_b = na + nb - out_a;
        if (out_a >= fa.dim || out_b >= fb.dim) {
          throw std::invalid_argument("apply_two_mode_unitary: occupation truncation exceeded");
        }
        Complex coeff = choose(na, k) * choose(nb, l);
        coeff *= ipow(m[0][0], k) * ipow(m[1][0], na - k);
        coeff *= ipow(m[0][1], l) * ipow(m[1][1], nb - l);
        coeff *= std::sqrt(kFact[out_a] * kFact[out_b] / (kFact[na] * kFact[nb]));
        levels[static_cast<std::size_t>(pa)] = out_a;
        levels[static_cast<std::size_t>(pb)] = out_b;
        out[state.index_of(levels)] += amp * coeff;
      }
    }
  }
  return JointState::from_amplitudes(state.factors(), std::move(out));
}

inline int total_photons(const JointState& state, std::span<const int> levels) {
  int total = 0;
  for (std::size_t i = 0; i < state.num_factors(); ++i) {
    if (state.factors()[i].kind == SubsystemKind::photon_mode) total += levels[i];
  }
  return total;
}

/// 50:50 beam splitter interfering the two collection arms, independently
/// for each frequency mode:
///
///   arm1^dag -> (d1^dag + d2^dag) / sqrt(2)
///   arm2^dag -> (d1^dag - d2^dag) / sqrt(2)
///
/// Input factors arm{1,2}.nu{0,1} are relabeled to detector modes
/// d{1,2}.nu{0,1}. States carrying more than two photons in total are
/// rejected (occupation truncation).
inline JointState beam_splitter(const JointState& state) {
  for (std::size_t idx = 0; idx < state.dim(); ++idx) {
    if (state.amplitude(idx) == Complex(0.0, 0.0)) continue;
    const std::vector<int> levels = state.levels_of(idx);
    if (total_photons(state, levels) > 2) {
      throw std::invalid_argument("beam_splitter: more than two photons in the mode set");
    }
  }
  constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
  const std::array<std::array<Complex, 2>, 2> m{{{Complex(kInvSqrt2), Complex(kInvSqrt2)},
                                                 {Complex(kInvSqrt2), Complex(-kInvSqrt2)}}};
  JointState out = state;
  for (const char* nu : {".nu0", ".nu1"}) {
    const std::string in1 = std::string("arm1") + nu;
    const std::string in2 = std::string("arm2") + nu;
    if (out.factor_index(in1) < 0 && out.factor_index(in2) < 0) continue;
    out = apply_two_mode_unitary(out, in1, in2, m);
    out = out.renamed_factor(in1, std::string("d1") + nu);
    out = out.renamed_factor(in2, std::string("d2") + nu);
  }
  return out;
}

namespace detail {

inline std::vector<Subsystem> two_atom_factors() {
  return {Subsystem::atom(modes::atom_id(1)), Subsystem::atom(modes::atom_id(2))};
}

}  // namespace detail

/// Probability that the two emitted photons split across the detectors,
/// given the photon wave-packet overlap J (J = 1 for indistinguishable
/// envelopes). Derived by projecting onto the exchange-antisymmetric
/// two-photon component; cross-checked against the explicit temporal-mode
/// simulation in the test suite.
inline double coincidence_probability(const AtomQubit& a, const AtomQubit& b, Complex overlap) {
  const double j2 = std::norm(overlap);
  if (j2 > 1.0 + tol::kInputNorm) {
    throw std::invalid_argument("coincidence_probability: |J| must not exceed 1");
  }
  const double w01 = std::norm(a.c0 * b.c1);
  const double w10 = std::norm(a.c1 * b.c0);
  const double w00 = std::norm(a.c0 * b.c0);
  const double w11 = std::norm(a.c1 * b.c1);
  return 0.5 * (w01 + w10 + (1.0 - j2) * (w00 + w11));
}

/// Two-atom state conditioned on a detector coincidence, for wave-packet
/// overlap J. Unit trace. For |J| = 1 this is the pure state
/// c0 d1 |01> - c1 d0 |10> (normalized); for |J| < 1 the cross coherence is
/// damped by |J|^2 and same-frequency photon pairs leak weight onto |00> and
/// |11>. Validated against the explicit temporal-mode oracle in the tests.
inline DensityMatrix conditioned_density(const AtomQubit& a, const AtomQubit& b, Complex overlap) {
  const double j2 = std::norm(overlap);
  if (j2 > 1.0 + tol::kInputNorm) {
    throw std::invalid_argument("conditioned_density: |J| must not exceed 1");
  }
  DensityMatrix rho(detail::two_atom_factors());
  const Complex a01 = a.c0 * b.c1;
  const Complex a10 = a.c1 * b.c0;
  // Basis order: |00>, |01>, |10>, |11>.
  rho.element_ref(0, 0) = 0.5 * (1.0 - j2) * std::norm(a.c0 * b.c0);
  rho.element_ref(1, 1) = 0.5 * std::norm(a01);
  rho.element_ref(2, 2) = 0.5 * std::norm(a10);
  rho.element_ref(3, 3) = 0.5 * (1.0 - j2) * std::norm(a.c1 * b.c1);
  rho.element_ref(1, 2) = -0.5 * j2 * a01 * std::conj(a10);
  rho.element_ref(2, 1) = std::conj(rho.element(1, 2));
  const double t = rho.trace();
  if (t <= tol::kNullProjection) {
    throw std::domain_error("conditioned_density: zero coincidence probability");
  }
  return rho.normalized();
}

struct GateResult {
  bool null_outcome = true;
  double coincidence_probability = 0.0;
  // Normalized conditioned two-atom state; phase convention taken from the
  // branch where detector 1 sees nu1 and detector 2 sees nu0, which carries
  // c0 d1 |01> - c1 d0 |10>.
  std::optional<JointState> post_state;
};

/// Full Fock-space simulation of the heralded ZZ parity measurement: emit
/// from both atoms, interfere at the beam splitter, and keep the component
/// with one photon at each (frequency-blind) detector. `pre_bs_phases`, when
/// given, applies per-arm per-frequency phases before the beam splitter, in
/// the order (arm1.nu0, arm1.nu1, arm2.nu0, arm2.nu1).
inline GateResult zz_measurement_gate(const AtomQubit& a, const AtomQubit& b,
                                      const std::array<double, 4>* pre_bs_phases = nullptr) {
  if (!a.is_normalized() || !b.is_normalized()) {
    throw std::invalid_argument("zz_measurement_gate: atoms must be normalized");
  }
  JointState joint = tensor(excite_and_decay_pi_filtered(a, 1), excite_and_decay_pi_filtered(b, 2));
  const std::vector<std::string> canonical{modes::atom_id(1),  modes::atom_id(2),
                                           modes::arm_nu0(1), modes::arm_nu1(1),
                                           modes::arm_nu0(2), modes::arm_nu1(2)};
  joint = joint.permuted(canonical);
  if (pre_bs_phases != nullptr) {
    const std::array<double, 4> ph = *pre_bs_phases;
    joint = map_amplitudes(joint, [&](std::span<const int> levels, Complex amp) {
      const double total = ph[0] * levels[2] + ph[1] * levels[3] + ph[2] * levels[4] +
                           ph[3] * levels[5];
      return amp * std::polar(1.0, total);
    });
  }
  const JointState after_bs = beam_splitter(joint);

  // One photon at each detector, either frequency: four orthogonal patterns.
  const std::vector<Subsystem> photon_factors{
      Subsystem::photon_mode(modes::detector_nu0(1)), Subsystem::photon_mode(modes::detector_nu1(1)),
      Subsystem::photon_mode(modes::detector_nu0(2)), Subsystem::photon_mode(modes::detector_nu1(2))};
  const std::array<std::array<int, 4>, 4> patterns{{
      {1, 0, 1, 0},
      {1, 0, 0, 1},
      {0, 1, 1, 0},  // canonical branch: d1 sees nu1, d2 sees nu0
      {0, 1, 0, 1},
  }};

  GateResult result;
  double total_probability = 0.0;
  std::optional<JointState> canonical_branch;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const JointState target = JointState::basis_state(
        photon_factors, {patterns[p][0], patterns[p][1], patterns[p][2], patterns[p][3]});
    const ProjectionResult proj = project(after_bs, target);
    total_probability += proj.probability;
    if (p == 2) canonical_branch = proj.residual;
  }
  result.coincidence_probability = total_probability;
  if (total_probability <= tol::kNullProjection) {
    result.null_outcome = true;
    return result;
  }
  result.null_outcome = false;
  result.post_state = canonical_branch->normalized();
  return result;
}

enum class GateStatus { success, failure };

enum class FailureReason { none, sigma_decay, not_collected, not_detected, no_coincidence };

struct GateOutcome {
  GateStatus status = GateStatus::failure;
  FailureReason failure_reason = FailureReason::none;
  std::pair<int, int> detector_pattern{0, 0};
  // Conditioned two-atom state on a herald whose both counts are photons.
  // Pure form present when the conditioned state is rank one (|J| = 1).
  std::optional<JointState> post_state;
  std::optional<DensityMatrix> post_density;
  // True when a dark count participated in the herald; no reconstructed
  // state is reported for such events.
  bool dark_assisted = false;
};

/// One Monte Carlo attempt of the heralded gate. Samples, in order: the
/// pi-vs-sigma decay of each atom (eta_b), collection of each pi photon
/// (eta_c), detection of each collected photon (eta_d), and finally the
/// detector pattern from the interference statistics for wave-packet
/// overlap J. Failures are data, not errors.
inline GateOutcome run_gate_attempt(const AtomQubit& a, const AtomQubit& b,
                                    const EfficiencyModel& eff, Complex overlap, RngStream& rng) {
  if (std::norm(overlap) > 1.0 + tol::kInputNorm) {
    throw std::invalid_argument("run_gate_attempt: |J| must not exceed 1");
  }
  GateOutcome out;
  const bool pi1 = rng.bernoulli(eff.eta_b);
  const bool pi2 = rng.bernoulli(eff.eta_b);
  int photons_at_d1 = 0;
  int photons_at_d2 = 0;
  bool optical_coincidence = false;
  if (!pi1 || !pi2) {
    out.failure_reason = FailureReason::sigma_decay;
  } else {
    const bool col1 = rng.bernoulli(eff.eta_c);
    const bool col2 = rng.bernoulli(eff.eta_c);
    if (!col1 || !col2) {
      out.failure_reason = FailureReason::not_collected;
      if (col1 != col2) {
        // The surviving photon still reaches a detector half the time each.
        if (rng.bernoulli(eff.eta_d)) (rng.bernoulli(0.5) ? photons_at_d1 : photons_at_d2)++;
      }
    } else {
      const bool det1 = rng.bernoulli(eff.eta_d);
      const bool det2 = rng.bernoulli(eff.eta_d);
      if (!det1 || !det2) {
        out.failure_reason = FailureReason::not_detected;
        if (det1 != det2) (rng.bernoulli(0.5) ? photons_at_d1 : photons_at_d2)++;
      } else {
        const double p_cc = coincidence_probability(a, b, overlap);
        if (rng.bernoulli(p_cc)) {
          photons_at_d1 = 1;
          photons_at_d2 = 1;
          optical_coincidence = true;
        } else {
          out.failure_reason = FailureReason::no_coincidence;
          // Bunched events land on either detector with equal probability.
          (rng.bernoulli(0.5) ? photons_at_d1 : photons_at_d2) += 2;
        }
      }
    }
  }

  int darks_at_d1 = 0;
  int darks_at_d2 = 0;
  if (eff.dark_rate > 0.0) {
    darks_at_d1 = rng.bernoulli(eff.dark_rate) ? 1 : 0;
    darks_at_d2 = rng.bernoulli(eff.dark_rate) ? 1 : 0;
  }
  const int count1 = std::min(2, photons_at_d1 + darks_at_d1);
  const int count2 = std::min(2, photons_at_d2 + darks_at_d2);
  out.detector_pattern = {count1, count2};

  if (count1 == 1 && count2 == 1) {
    out.status = GateStatus::success;
    if (optical_coincidence && darks_at_d1 == 0 && darks_at_d2 == 0) {
      out.failure_reason = FailureReason::none;
      out.post_density = conditioned_density(a, b, overlap);
      out.post_state = out.post_density->as_pure();
    } else {
      // Herald formed with a dark count; the attempt carries no usable state.
      out.failure_reason = FailureReason::none;
      out.dark_assisted = true;
    }
  } else {
    out.status = GateStatus::failure;
    if (optical_coincidence) {
      // A dark count spoiled an otherwise good coincidence.
      out.failure_reason = FailureReason::no_coincidence;
    }
  }
  return out;
}

}  // namespace freqlink
