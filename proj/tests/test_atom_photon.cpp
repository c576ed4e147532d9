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

#include "freqlink/atom_photon.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

using namespace freqlink;

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

AtomicSpecies cd_species() {
  // Linewidth, excited splitting and branching are modeling inputs here.
  return cadmium_like_species(/*gamma_hz=*/50.0e6, /*delta_hf_p_hz=*/0.8e9, /*eta_b=*/0.5,
                              /*wavelength_nm=*/214.5);
}

}  // namespace

TEST_CASE("picosecond pulses pass the bandwidth window") {
  const PulseSpec pulse{kTwoPi * 500.0e9, PulsePolarization::pi};
  const PulseValidity report = validate_pulse(cd_species(), pulse);
  CHECK(report.valid);
  CHECK(report.violations.empty());
}

TEST_CASE("a pulse narrower than the hyperfine splitting is rejected") {
  const PulseSpec pulse{kTwoPi * 1.0e9, PulsePolarization::pi};
  const PulseValidity report = validate_pulse(cd_species(), pulse);
  CHECK_FALSE(report.valid);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].find("hyperfine") != std::string::npos);
}

TEST_CASE("a pulse wider than the fine structure splitting is rejected") {
  const PulseSpec pulse{kTwoPi * 100.0e12, PulsePolarization::pi};
  const PulseValidity report = validate_pulse(cd_species(), pulse);
  CHECK_FALSE(report.valid);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].find("fine structure") != std::string::npos);
}

TEST_CASE("sigma-polarized pulses are rejected regardless of bandwidth") {
  const PulseSpec pulse{kTwoPi * 500.0e9, PulsePolarization::sigma_plus};
  CHECK_FALSE(validate_pulse(cd_species(), pulse).valid);
}

TEST_CASE("species validation flags out-of-range parameters") {
  AtomicSpecies s = cd_species();
  s.eta_b = 1.5;
  s.gamma = -1.0;
  const auto issues = s.validate();
  CHECK(issues.size() == 2);
}

TEST_CASE("frequency modes are resolved when gamma is far below the splittings") {
  AtomicSpecies s = cd_species();
  CHECK(s.frequency_modes_resolved());
  s.gamma = s.delta_hf_s + s.delta_hf_p;  // linewidth as large as the mode spacing
  CHECK_FALSE(s.frequency_modes_resolved());
}

TEST_CASE("a |0> atom emits a nu0 photon in a product state") {
  const JointState out = excite_and_decay_pi_filtered(AtomQubit{Complex(1.0), Complex(0.0)});
  CHECK(out.amplitude(std::vector<int>{0, 1, 0}) == Complex(1.0));
  CHECK(out.norm2() == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("a balanced atom emits the maximally entangled atom-photon state") {
  constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
  const JointState out = excite_and_decay_pi_filtered(
      AtomQubit{Complex(kInvSqrt2), Complex(kInvSqrt2)});
  CHECK(out.amplitude(std::vector<int>{0, 1, 0}) == Complex(kInvSqrt2));
  CHECK(out.amplitude(std::vector<int>{1, 0, 1}) == Complex(kInvSqrt2));
  CHECK(out.norm2() == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("emission preserves the qubit amplitudes bit-for-bit") {
  const AtomQubit atom{Complex(0.6, 0.0), Complex(0.0, 0.8)};
  const JointState out = excite_and_decay_pi_filtered(atom);
  // Exact equality: the map only relocates the coefficients.
  CHECK(out.amplitude(std::vector<int>{0, 1, 0}) == atom.c0);
  CHECK(out.amplitude(std::vector<int>{1, 0, 1}) == atom.c1);
  CHECK(out.norm2() == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("selection rules zero the cross terms exactly") {
  RngStream rng(5);
  for (int i = 0; i < 100; ++i) {
    const AtomQubit atom = haar_random_qubit(rng);
    const JointState out = excite_and_decay_pi_filtered(atom);
    // |0>|nu1> and |1>|nu0> never appear.
    CHECK(out.amplitude(std::vector<int>{0, 0, 1}) == Complex(0.0));
    CHECK(out.amplitude(std::vector<int>{1, 1, 0}) == Complex(0.0));
    CHECK(out.amplitude(std::vector<int>{0, 1, 0}) == atom.c0);
    CHECK(out.amplitude(std::vector<int>{1, 0, 1}) == atom.c1);
    CHECK(std::abs(out.norm2() - 1.0) < 1e-12);
  }
}

TEST_CASE("unit branching ratio always takes the pi channel") {
  AtomicSpecies s = cd_species();
  s.eta_b = 1.0;
  RngStream rng(77);
  for (int i = 0; i < 200; ++i) {
    const DecayOutcome out = sample_decay_channel(haar_random_qubit(rng), s, rng);
    CHECK(out.channel != DecayChannel::sigma);
    CHECK(out.post_state.has_value());
  }
}

TEST_CASE("zero branching ratio always loses the photon to the filter") {
  AtomicSpecies s = cd_species();
  s.eta_b = 0.0;
  RngStream rng(78);
  for (int i = 0; i < 200; ++i) {
    const DecayOutcome out = sample_decay_channel(haar_random_qubit(rng), s, rng);
    CHECK(out.channel == DecayChannel::sigma);
    CHECK_FALSE(out.post_state.has_value());
    REQUIRE(out.parked.has_value());
    // F = 0 species: only the F + 1 = 1 manifold has m = +/-1 sublevels.
    CHECK(out.parked->f == 1);
    CHECK((out.parked->m == 1 || out.parked->m == -1));
  }
}

TEST_CASE("pi fraction follows the branching ratio binomially") {
  AtomicSpecies s = cd_species();
  s.eta_b = 0.5;
  RngStream rng(79);
  const int trials = 100000;
  int pi_count = 0;
  const AtomQubit atom{Complex(0.6), Complex(0.8)};
  for (int i = 0; i < trials; ++i) {
    if (sample_decay_channel(atom, s, rng).channel != DecayChannel::sigma) ++pi_count;
  }
  // Binomial oracle: mean 0.5, sigma = sqrt(p(1-p)/N).
  const double fraction = static_cast<double>(pi_count) / trials;
  const double sigma = std::sqrt(0.25 / trials);
  CHECK(std::abs(fraction - 0.5) < 3.0 * sigma);
}

TEST_CASE("basis-state inputs are labeled with their exclusive frequency channel") {
  AtomicSpecies s = cd_species();
  s.eta_b = 1.0;
  RngStream rng(80);
  CHECK(sample_decay_channel(AtomQubit{Complex(1.0), Complex(0.0)}, s, rng).channel ==
        DecayChannel::pi_nu0);
  CHECK(sample_decay_channel(AtomQubit{Complex(0.0), Complex(1.0)}, s, rng).channel ==
        DecayChannel::pi_nu1);
  CHECK(sample_decay_channel(AtomQubit{Complex(0.6), Complex(0.8)}, s, rng).channel ==
        DecayChannel::pi_superposed);
}

TEST_CASE("seeded decay sampling is reproducible") {
  AtomicSpecies s = cd_species();
  const AtomQubit atom{Complex(0.6), Complex(0.8)};
  std::vector<DecayChannel> first, second;
  for (auto* sink : {&first, &second}) {
    RngStream rng(4242);
    for (int i = 0; i < 50; ++i) sink->push_back(sample_decay_channel(atom, s, rng).channel);
  }
  CHECK(first == second);
}

TEST_CASE("haar sampling covers the sphere uniformly in |c0|^2") {
  RngStream rng(31337);
  const int trials = 20000;
  double mean = 0.0;
  for (int i = 0; i < trials; ++i) mean += std::norm(haar_random_qubit(rng).c0);
  mean /= trials;
  // |c0|^2 is uniform on [0,1]: mean 1/2, variance 1/12.
  CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / trials));
}
