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
#include <span>
#include <vector>

#include "freqlink/interference.hpp"
#include "freqlink/state.hpp"

namespace freqlink {

struct TrapParams {
  double nu_t = 0.0;  // trap frequency, rad/s
  double l_s = 0.0;   // characteristic oscillation length, m

  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    if (nu_t <= 0.0) issues.push_back("nu_t must be positive");
    if (l_s <= 0.0) issues.push_back("l_s must be positive");
    return issues;
  }
};

/// One-sided exponential emission envelope
///   f(t) = sqrt(gamma) exp(-gamma (t - t0) / 2) exp(i detuning (t - t0)),
/// for t >= t0 = emission_time_offset. Unit L2 norm.
struct EmissionEnvelope {
  double gamma = 1.0;
  double detuning = 0.0;
  double emission_time_offset = 0.0;
};

struct InterferometerPhases {
  double phi_arm1_nu0 = 0.0;
  double phi_arm1_nu1 = 0.0;
  double phi_arm2_nu0 = 0.0;
  double phi_arm2_nu1 = 0.0;
};

/// Applies the emission-position phase e^{i k.r} to a state's photonic
/// component. Every photon carries the factor, so each basis state picks up
/// the phase once per photon it holds; for the single-photon atom-photon
/// state both frequency components get the same factor, which is a global
/// phase.
inline JointState position_phase(const JointState& state, double k_dot_r) {
  return map_amplitudes(state, [&](std::span<const int> levels, Complex amp) {
    const int photons = total_photons(state, levels);
    return amp * std::polar(1.0, k_dot_r * static_cast<double>(photons));
  });
}

/// Closed-form wave-packet overlap <f1|f2> of two one-sided exponential
/// envelopes. For equal rates, equal offsets, and detuning difference d:
/// J = gamma / (gamma - i d). For equal rates and a time offset tau at zero
/// detuning: |J| = exp(-gamma tau / 2).
inline Complex mode_overlap(const EmissionEnvelope& e1, const EmissionEnvelope& e2) {
  if (e1.gamma <= 0.0 || e2.gamma <= 0.0) {
    throw std::invalid_argument("mode_overlap: gamma must be positive");
  }
  // <f1|f2> with the later envelope defining the integration start.
  auto overlap_ordered = [](const EmissionEnvelope& a, const EmissionEnvelope& b) {
    // requires b.emission_time_offset >= a.emission_time_offset
    const double delta_t = b.emission_time_offset - a.emission_time_offset;
    const Complex lead =
        std::sqrt(a.gamma * b.gamma) *
        std::exp(Complex(-a.gamma * delta_t / 2.0, -a.detuning * delta_t));
    return lead / Complex((a.gamma + b.gamma) / 2.0, -(b.detuning - a.detuning));
  };
  if (e2.emission_time_offset >= e1.emission_time_offset) {
    return overlap_ordered(e1, e2);
  }
  return std::conj(overlap_ordered(e2, e1));
}

struct DopplerReport {
  double ratio = 0.0;  // |k| nu_t l_s / gamma
  double threshold = tol::kRegimeRatio;
  bool pass = false;
};

/// The residual Doppler spread |k| nu_t l_s must sit well below the emission
/// linewidth for the wave packets from different atoms to match. The "well
/// below" threshold is a reporting convention, not a physical constant.
inline DopplerReport doppler_regime_check(const AtomicSpecies& species, const TrapParams& trap,
                                          double threshold = tol::kRegimeRatio) {
  DopplerReport report;
  report.threshold = threshold;
  report.ratio = species.k_mag * trap.nu_t * trap.l_s / species.gamma;
  report.pass = report.ratio < threshold;
  return report;
}

/// Per-attempt Doppler detuning: zero-mean Gaussian with sigma = |k| nu_t l_s
/// (the atom sits at a fixed but random point of its oscillation during the
/// fast emission).
inline double sample_doppler_detuning(const AtomicSpecies& species, const TrapParams& trap,
                                      RngStream& rng) {
  return rng.normal() * species.k_mag * trap.nu_t * trap.l_s;
}

struct PhaseGateReport {
  bool null_outcome = true;
  double coincidence_probability = 0.0;
  double fidelity = 0.0;  // vs the noiseless conditioned state
  std::optional<JointState> post_state;
};

/// Runs the full gate with per-arm, per-frequency phases applied before the
/// beam splitter and compares the conditioned state against the noiseless
/// one. A phase common to both frequencies of an arm factors out entirely;
/// only the differential phase between nu0 and nu1 survives into the result.
inline PhaseGateReport interferometer_phase_gate(const AtomQubit& a, const AtomQubit& b,
                                                 const InterferometerPhases& phases) {
  const std::array<double, 4> ph{phases.phi_arm1_nu0, phases.phi_arm1_nu1, phases.phi_arm2_nu0,
                                 phases.phi_arm2_nu1};
  const GateResult noisy = zz_measurement_gate(a, b, &ph);
  PhaseGateReport report;
  report.null_outcome = noisy.null_outcome;
  report.coincidence_probability = noisy.coincidence_probability;
  if (noisy.null_outcome) return report;
  const GateResult ideal = zz_measurement_gate(a, b);
  report.post_state = noisy.post_state;
  report.fidelity = fidelity_up_to_global_phase(*ideal.post_state, *noisy.post_state);
  return report;
}

struct DopplerSweepRow {
  double delta_over_gamma = 0.0;
  double overlap_sq = 0.0;
  double fidelity = 0.0;
  double coincidence_prob = 0.0;
};

struct DopplerSweepReport {
  DopplerReport regime;
  std::vector<DopplerSweepRow> rows;
};

/// Conditioned-state quality versus Doppler detuning, for balanced input
/// qubits. Each grid point maps delta/gamma to the wave-packet overlap J,
/// then to the conditioned density matrix and its fidelity against the
/// noiseless conditioned state.
inline DopplerSweepReport doppler_fidelity_sweep(const AtomicSpecies& species,
                                                 const TrapParams& trap,
                                                 std::span<const double> delta_over_gamma) {
  DopplerSweepReport report;
  report.regime = doppler_regime_check(species, trap);
  constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
  const AtomQubit balanced{Complex(kInvSqrt2, 0.0), Complex(kInvSqrt2, 0.0)};
  // Noiseless conditioned state for balanced inputs: (|01> - |10>)/sqrt(2).
  const JointState ideal = JointState::from_amplitudes(
      detail::two_atom_factors(),
      {Complex(0.0), Complex(kInvSqrt2), Complex(-kInvSqrt2), Complex(0.0)});
  report.rows.reserve(delta_over_gamma.size());
  for (const double x : delta_over_gamma) {
    const EmissionEnvelope ref{species.gamma, 0.0, 0.0};
    const EmissionEnvelope shifted{species.gamma, x * species.gamma, 0.0};
    const Complex j = mode_overlap(ref, shifted);
    DopplerSweepRow row;
    row.delta_over_gamma = x;
    row.overlap_sq = std::norm(j);
    row.coincidence_prob = coincidence_probability(balanced, balanced, j);
    row.fidelity = conditioned_density(balanced, balanced, j).fidelity(ideal);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace freqlink
