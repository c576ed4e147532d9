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
#include <optional>
#include <string>
#include <vector>

#include "freqlink/rng.hpp"
#include "freqlink/state.hpp"
#include "freqlink/tolerances.hpp"

namespace freqlink {

/// Physical constants of an alkali-like ion with hyperfine clock-state
/// qubit levels |0> = |F,0> and |1> = |F+1,0>. All frequencies and rates in
/// rad/s, wavenumber in rad/m.
struct AtomicSpecies {
  int f = 0;                         // lower ground hyperfine quantum number
  double delta_hf_s = 0.0;           // ground S1/2 hyperfine splitting
  double delta_hf_p = 0.0;           // excited P1/2 hyperfine splitting
  double gamma = 0.0;                // excited-state linewidth
  double k_mag = 0.0;                // wavevector magnitude of the emitted photon
  double eta_b = 0.0;                // branching ratio into the pi decay channel
  double fine_structure_split = 0.0; // P1/2 - P3/2 splitting

  /// Hard invariant violations (empty means the species is usable).
  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    if (f < 0) issues.push_back("f must be non-negative");
    if (delta_hf_s <= 0.0) issues.push_back("delta_hf_s must be positive");
    if (delta_hf_p <= 0.0) issues.push_back("delta_hf_p must be positive");
    if (gamma <= 0.0) issues.push_back("gamma must be positive");
    if (k_mag <= 0.0) issues.push_back("k_mag must be positive");
    if (eta_b < 0.0 || eta_b > 1.0) issues.push_back("eta_b must lie in [0, 1]");
    if (fine_structure_split <= 0.0) issues.push_back("fine_structure_split must be positive");
    return issues;
  }

  /// The two pi-channel photon frequencies differ by the sum of the ground
  /// and excited hyperfine splittings; they are usable as distinct modes only
  /// when that difference dominates the linewidth.
  bool frequency_modes_resolved(double ratio_threshold = tol::kRegimeRatio) const {
    return gamma < ratio_threshold * (delta_hf_s + delta_hf_p);
  }
};

/// 111Cd+-like species: 14 GHz ground hyperfine splitting and 74 THz fine
/// structure splitting with F = 0. Linewidth, excited splitting, branching
/// ratio and wavelength vary by modeling choices, so they are arguments.
inline AtomicSpecies cadmium_like_species(double gamma_hz, double delta_hf_p_hz, double eta_b,
                                          double wavelength_nm) {
  constexpr double kTwoPi = 6.283185307179586476925287;
  AtomicSpecies s;
  s.f = 0;
  s.delta_hf_s = kTwoPi * 14.0e9;
  s.delta_hf_p = kTwoPi * delta_hf_p_hz;
  s.gamma = kTwoPi * gamma_hz;
  s.k_mag = kTwoPi / (wavelength_nm * 1e-9);
  s.eta_b = eta_b;
  s.fine_structure_split = kTwoPi * 74.0e12;
  return s;
}

struct AtomQubit {
  Complex c0{1.0, 0.0};
  Complex c1{0.0, 0.0};

  double norm2() const { return std::norm(c0) + std::norm(c1); }
  bool is_normalized(double tolerance = tol::kInputNorm) const {
    return std::abs(norm2() - 1.0) < tolerance;
  }
  AtomQubit normalized() const {
    const double n = std::sqrt(norm2());
    return AtomQubit{c0 / n, c1 / n};
  }
};

/// Uniform (Haar) random pure qubit state.
inline AtomQubit haar_random_qubit(RngStream& rng) {
  const Complex a(rng.normal(), rng.normal());
  const Complex b(rng.normal(), rng.normal());
  return AtomQubit{a, b}.normalized();
}

enum class PulsePolarization { pi, sigma_plus, sigma_minus };

struct PulseSpec {
  double bandwidth = 0.0;  // rad/s
  PulsePolarization polarization = PulsePolarization::pi;
};

struct PulseValidity {
  bool valid = false;
  std::vector<std::string> violations;
};

/// An excitation pulse drives both qubit levels to unique excited hyperfine
/// levels only if it is spectrally wider than the ground hyperfine splitting
/// yet narrow enough to leave the other fine-structure line untouched, and
/// pi-polarized so the m=0 -> m=0 transitions are the only ones allowed.
inline PulseValidity validate_pulse(const AtomicSpecies& species, const PulseSpec& pulse) {
  PulseValidity report;
  if (!(pulse.bandwidth > species.delta_hf_s)) {
    report.violations.push_back("bandwidth does not exceed the ground hyperfine splitting");
  }
  if (!(pulse.bandwidth < species.fine_structure_split)) {
    report.violations.push_back("bandwidth reaches the fine structure splitting");
  }
  if (pulse.polarization != PulsePolarization::pi) {
    report.violations.push_back("pulse must be pi-polarized");
  }
  report.valid = report.violations.empty();
  return report;
}

namespace modes {

inline std::string arm_nu0(int site) { return "arm" + std::to_string(site) + ".nu0"; }
inline std::string arm_nu1(int site) { return "arm" + std::to_string(site) + ".nu1"; }
inline std::string atom_id(int site) { return "atom" + std::to_string(site); }

}  // namespace modes

/// Excitation followed by pi-filtered spontaneous decay. The net map tags
/// each qubit amplitude with a single photon in the matching frequency mode:
///
///   c0|0> + c1|1>  ->  c0|0>|nu0> + c1|1>|nu1>
///
/// Factors: atom{site}, arm{site}.nu0, arm{site}.nu1 (occupation basis).
/// The qubit amplitudes are carried over bit-for-bit; the cross terms
/// |0>|nu1> and |1>|nu0> are exactly zero by the selection rules.
inline JointState excite_and_decay_pi_filtered(const AtomQubit& atom, int site = 1) {
  std::vector<Subsystem> factors{Subsystem::atom(modes::atom_id(site)),
                                 Subsystem::photon_mode(modes::arm_nu0(site)),
                                 Subsystem::photon_mode(modes::arm_nu1(site))};
  std::vector<Complex> amps(2 * 3 * 3, Complex(0.0, 0.0));
  // index = (atom * 3 + n_nu0) * 3 + n_nu1
  amps[(0 * 3 + 1) * 3 + 0] = atom.c0;
  amps[(1 * 3 + 0) * 3 + 1] = atom.c1;
  return JointState::from_amplitudes(std::move(factors), std::move(amps));
}

enum class DecayChannel { pi_nu0, pi_nu1, pi_superposed, sigma };

/// Ground Zeeman sublevel an atom is parked in after a sigma decay. These
/// states sit outside the qubit space; they only mark the attempt as failed.
struct ZeemanLevel {
  int f = 0;
  int m = 0;
};

struct DecayOutcome {
  DecayChannel channel = DecayChannel::pi_superposed;
  // Present for pi outcomes: the atom-photon entangled state.
  std::optional<JointState> post_state;
  // Present for sigma outcomes: the collapsed atomic sublevel. The photon is
  // absorbed by the polarization filter.
  std::optional<ZeemanLevel> parked;
};

/// Samples one excitation-decay cycle. With probability eta_b the atom takes
/// the pi channel and the full entangled state is returned; otherwise a sigma
/// photon is emitted, filtered away, and the atom collapses to one of the
/// m = +/-1 ground sublevels (uniform over the sublevels that exist for the
/// species' two ground manifolds).
inline DecayOutcome sample_decay_channel(const AtomQubit& atom, const AtomicSpecies& species,
                                         RngStream& rng, int site = 1) {
  DecayOutcome out;
  if (rng.bernoulli(species.eta_b)) {
    out.post_state = excite_and_decay_pi_filtered(atom, site);
    const bool only0 = std::norm(atom.c1) < tol::kAmplitude;
    const bool only1 = std::norm(atom.c0) < tol::kAmplitude;
    out.channel = only0   ? DecayChannel::pi_nu0
                  : only1 ? DecayChannel::pi_nu1
                          : DecayChannel::pi_superposed;
    return out;
  }
  out.channel = DecayChannel::sigma;
  // Sigma decay from either excited m=0 level reaches the ground m = +/-1
  // sublevels; m = +/-1 requires f >= 1, which also enforces the F'=0 -> F=0
  // exclusion. Both excited levels allow the same sublevel set, so a single
  // uniform draw over it covers the decay-path sampling.
  std::vector<ZeemanLevel> candidates;
  for (int f : {species.f, species.f + 1}) {
    for (int m : {-1, 1}) {
      if (std::abs(m) <= f) candidates.push_back(ZeemanLevel{f, m});
    }
  }
  out.parked = candidates[static_cast<std::size_t>(rng.uniform_below(candidates.size()))];
  return out;
}

}  // namespace freqlink
