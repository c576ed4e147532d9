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

#include "freqlink/interference.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>

#include "freqlink/noise.hpp"
#include "support/oracles.hpp"

using namespace freqlink;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

std::vector<Subsystem> arm_factors() {
  return {Subsystem::photon_mode("arm1.nu0"), Subsystem::photon_mode("arm1.nu1"),
          Subsystem::photon_mode("arm2.nu0"), Subsystem::photon_mode("arm2.nu1")};
}

JointState photons(std::vector<int> occupations) {
  return JointState::basis_state(arm_factors(), std::move(occupations));
}

// Z1 (I - Z1 Z2) applied to |a>|b>, renormalized: the direct projector route.
JointState direct_parity_projection(const AtomQubit& a, const AtomQubit& b) {
  std::vector<Complex> amps{a.c0 * b.c0, a.c0 * b.c1, a.c1 * b.c0, a.c1 * b.c1};
  // (I - Z1 Z2) keeps odd-parity components (doubled), Z1 then flips |1x>.
  amps[0] = Complex(0.0);
  amps[3] = Complex(0.0);
  amps[1] *= 2.0;
  amps[2] *= -2.0;
  JointState s = JointState::from_amplitudes(
      {Subsystem::atom("atom1"), Subsystem::atom("atom2")}, std::move(amps));
  return s.normalized();
}

}  // namespace

TEST_CASE("a single photon splits evenly across the detectors") {
  const JointState out = beam_splitter(photons({1, 0, 0, 0}));
  CHECK(std::abs(out.amplitude(std::vector<int>{1, 0, 0, 0}) - Complex(kInvSqrt2)) < 1e-15);
  CHECK(std::abs(out.amplitude(std::vector<int>{0, 0, 1, 0}) - Complex(kInvSqrt2)) < 1e-15);
  CHECK(out.norm2() == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("same-frequency photons bunch: two-photon mode algebra") {
  // (a1^dag a2^dag) -> ((d1^dag)^2 - (d2^dag)^2)/2 = (|2,0> - |0,2>)/sqrt(2).
  const JointState out = beam_splitter(photons({1, 0, 1, 0}));
  CHECK(std::abs(out.amplitude(std::vector<int>{2, 0, 0, 0}) - Complex(kInvSqrt2)) < 1e-14);
  CHECK(std::abs(out.amplitude(std::vector<int>{0, 0, 2, 0}) - Complex(-kInvSqrt2)) < 1e-14);
  // Zero coincidence amplitude.
  CHECK(std::abs(out.amplitude(std::vector<int>{1, 0, 1, 0})) < 1e-15);
  CHECK(out.norm2() == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("distinguishable-frequency photons coincide half the time") {
  const JointState out = beam_splitter(photons({1, 0, 0, 1}));
  double coincidence = 0.0;
  for (std::size_t idx = 0; idx < out.dim(); ++idx) {
    const auto levels = out.levels_of(idx);
    const int d1 = levels[0] + levels[1];
    const int d2 = levels[2] + levels[3];
    if (d1 == 1 && d2 == 1) coincidence += std::norm(out.amplitude(idx));
  }
  CHECK(coincidence == Catch::Approx(0.5).margin(1e-13));
}

TEST_CASE("the beam splitter is unitary on random truncated states") {
  RngStream rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    // Random state over the <= 2 photon sector.
    std::vector<Complex> amps(81, Complex(0.0));
    const JointState proto = photons({0, 0, 0, 0});
    for (std::size_t idx = 0; idx < 81; ++idx) {
      const auto levels = proto.levels_of(idx);
      if (levels[0] + levels[1] + levels[2] + levels[3] <= 2) {
        amps[idx] = Complex(rng.normal(), rng.normal());
      }
    }
    JointState s = JointState::from_amplitudes(arm_factors(), std::move(amps)).normalized();
    const JointState out = beam_splitter(s);
    CHECK(std::abs(out.norm2() - 1.0) < 1e-12);
  }
}

TEST_CASE("the beam splitter rejects states beyond the photon truncation") {
  CHECK_THROWS_AS(beam_splitter(photons({2, 1, 0, 0})), std::invalid_argument);
}

TEST_CASE("both atoms in |0> never herald") {
  const GateResult r = zz_measurement_gate(AtomQubit{Complex(1.0), Complex(0.0)},
                                           AtomQubit{Complex(1.0), Complex(0.0)});
  CHECK(r.null_outcome);
  CHECK(r.coincidence_probability <= 1e-20);
}

TEST_CASE("balanced inputs herald the odd-parity Bell state with probability 1/4") {
  const AtomQubit balanced{Complex(kInvSqrt2), Complex(kInvSqrt2)};
  const GateResult r = zz_measurement_gate(balanced, balanced);
  REQUIRE_FALSE(r.null_outcome);
  CHECK(r.coincidence_probability == Catch::Approx(0.25).margin(1e-12));
  const JointState& post = *r.post_state;
  CHECK(std::abs(post.amplitude(std::vector<int>{0, 1}) - Complex(kInvSqrt2)) < 1e-12);
  CHECK(std::abs(post.amplitude(std::vector<int>{1, 0}) - Complex(-kInvSqrt2)) < 1e-12);
}

TEST_CASE("one atom pinned to |0> heralds into |10| with probability 0.32") {
  const GateResult r = zz_measurement_gate(AtomQubit{Complex(0.6), Complex(0.8)},
                                           AtomQubit{Complex(1.0), Complex(0.0)});
  REQUIRE_FALSE(r.null_outcome);
  CHECK(r.coincidence_probability == Catch::Approx(0.32).margin(1e-12));  // |c1 d0|^2 / 2
  CHECK(fidelity_up_to_global_phase(
            *r.post_state, JointState::basis_state({Subsystem::atom("atom1"),
                                                    Subsystem::atom("atom2")},
                                                   {1, 0})) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("the heralded state matches the direct parity projection on random pairs") {
  RngStream rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const AtomQubit a = haar_random_qubit(rng);
    const AtomQubit b = haar_random_qubit(rng);
    const GateResult r = zz_measurement_gate(a, b);
    if (r.null_outcome) continue;
    const JointState expected = direct_parity_projection(a, b);
    CHECK(fidelity_up_to_global_phase(*r.post_state, expected) > 1.0 - 1e-12);
    const double p_formula =
        0.5 * (std::norm(a.c0 * b.c1) + std::norm(a.c1 * b.c0));
    CHECK(std::abs(r.coincidence_probability - p_formula) < 1e-12);
  }
}

TEST_CASE("the heralded state lies in the -1 eigenspace of Z1 Z2") {
  RngStream rng(321);
  for (int trial = 0; trial < 50; ++trial) {
    const GateResult r = zz_measurement_gate(haar_random_qubit(rng), haar_random_qubit(rng));
    if (r.null_outcome) continue;
    const JointState& post = *r.post_state;
    // Z1 Z2 |post> == -|post>, exactly: only odd-parity amplitudes present.
    CHECK(post.amplitude(std::vector<int>{0, 0}) == Complex(0.0));
    CHECK(post.amplitude(std::vector<int>{1, 1}) == Complex(0.0));
  }
}

TEST_CASE("any arm-exchange-symmetric photon pair never coincides") {
  RngStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    // Random symmetric two-photon state: (a1i a2j + a1j a2i)-type terms.
    std::vector<Complex> amps(81, Complex(0.0));
    const JointState proto = photons({0, 0, 0, 0});
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const Complex w(rng.normal(), rng.normal());
        std::vector<int> occ(4, 0);
        occ[static_cast<std::size_t>(i)] += 1;      // arm1, nu_i
        occ[static_cast<std::size_t>(2 + j)] += 1;  // arm2, nu_j
        amps[proto.index_of(occ)] += w;
        std::vector<int> swapped(4, 0);
        swapped[static_cast<std::size_t>(j)] += 1;
        swapped[static_cast<std::size_t>(2 + i)] += 1;
        amps[proto.index_of(swapped)] += w;
      }
    }
    const JointState sym = JointState::from_amplitudes(arm_factors(), amps).normalized();
    const JointState out = beam_splitter(sym);
    double coincidence = 0.0;
    for (std::size_t idx = 0; idx < out.dim(); ++idx) {
      const auto levels = out.levels_of(idx);
      if (levels[0] + levels[1] == 1 && levels[2] + levels[3] == 1) {
        coincidence += std::norm(out.amplitude(idx));
      }
    }
    CHECK(coincidence < 1e-12);
  }
}

TEST_CASE("success probability formula") {
  CHECK(success_probability(EfficiencyModel{1.0, 1.0, 1.0}) == Catch::Approx(0.25));
  CHECK(success_probability(EfficiencyModel{0.3, 0.02, 0.5}) ==
        Catch::Approx(2.25e-6).epsilon(1e-12));
  CHECK(success_probability(EfficiencyModel{0.0, 0.7, 0.9}) == 0.0);
}

TEST_CASE("average coincidence probability over the four basis pairs is exactly 1/4") {
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const AtomQubit a{Complex(i == 0 ? 1.0 : 0.0), Complex(i == 0 ? 0.0 : 1.0)};
      const AtomQubit b{Complex(j == 0 ? 1.0 : 0.0), Complex(j == 0 ? 0.0 : 1.0)};
      total += coincidence_probability(a, b, Complex(1.0));
    }
  }
  CHECK(std::abs(total / 4.0 - 0.25) < 1e-15);
}

TEST_CASE("zero branching ratio fails every attempt with sigma_decay") {
  RngStream rng(7);
  const EfficiencyModel eff{1.0, 1.0, 0.0};
  for (int i = 0; i < 100; ++i) {
    const GateOutcome out = run_gate_attempt(haar_random_qubit(rng), haar_random_qubit(rng), eff,
                                             Complex(1.0), rng);
    CHECK(out.status == GateStatus::failure);
    CHECK(out.failure_reason == FailureReason::sigma_decay);
  }
}

TEST_CASE("attempt outcomes follow the staged efficiency model") {
  RngStream rng(8);
  const EfficiencyModel eff{0.8, 0.7, 0.9};
  const int trials = 200000;
  std::map<FailureReason, int> reasons;
  int successes = 0;
  const AtomQubit balanced{Complex(kInvSqrt2), Complex(kInvSqrt2)};
  for (int i = 0; i < trials; ++i) {
    const GateOutcome out = run_gate_attempt(balanced, balanced, eff, Complex(1.0), rng);
    if (out.status == GateStatus::success) {
      ++successes;
      CHECK(out.detector_pattern == std::pair<int, int>{1, 1});
    } else {
      reasons[out.failure_reason]++;
    }
  }
  auto within_3_sigma = [&](double observed, double expected) {
    const double sigma = std::sqrt(expected * (1.0 - expected) / trials);
    return std::abs(observed - expected) <= 3.0 * sigma;
  };
  const double p_pi2 = eff.eta_b * eff.eta_b;
  const double p_col2 = eff.eta_c * eff.eta_c;
  const double p_det2 = eff.eta_d * eff.eta_d;
  // Balanced inputs coincide with probability 1/4 when everything survives.
  CHECK(within_3_sigma(static_cast<double>(successes) / trials, p_pi2 * p_col2 * p_det2 * 0.25));
  CHECK(within_3_sigma(static_cast<double>(reasons[FailureReason::sigma_decay]) / trials,
                       1.0 - p_pi2));
  CHECK(within_3_sigma(static_cast<double>(reasons[FailureReason::not_collected]) / trials,
                       p_pi2 * (1.0 - p_col2)));
  CHECK(within_3_sigma(static_cast<double>(reasons[FailureReason::not_detected]) / trials,
                       p_pi2 * p_col2 * (1.0 - p_det2)));
  CHECK(within_3_sigma(static_cast<double>(reasons[FailureReason::no_coincidence]) / trials,
                       p_pi2 * p_col2 * p_det2 * 0.75));
}

TEST_CASE("heralded attempts return the conditioned state") {
  RngStream rng(9);
  const EfficiencyModel eff{1.0, 1.0, 1.0};
  const AtomQubit a{Complex(0.6), Complex(0.8)};
  const AtomQubit b{Complex(0.8), Complex(0.6)};
  const JointState expected = direct_parity_projection(a, b);
  int heralds = 0;
  for (int i = 0; i < 500 && heralds < 20; ++i) {
    const GateOutcome out = run_gate_attempt(a, b, eff, Complex(1.0), rng);
    if (out.status != GateStatus::success) continue;
    ++heralds;
    REQUIRE(out.post_state.has_value());
    REQUIRE(out.post_density.has_value());
    CHECK(fidelity_up_to_global_phase(*out.post_state, expected) > 1.0 - 1e-10);
    CHECK(out.post_density->fidelity(expected) > 1.0 - 1e-10);
    CHECK(out.post_density->purity() == Catch::Approx(1.0).margin(1e-10));
  }
  CHECK(heralds == 20);
}

TEST_CASE("partial distinguishability damps the herald coherence as |J| squared") {
  RngStream rng(10);
  for (int trial = 0; trial < 25; ++trial) {
    const AtomQubit a = haar_random_qubit(rng);
    const AtomQubit b = haar_random_qubit(rng);
    const Complex j = std::polar(0.1 + 0.85 * rng.uniform(), 6.283185307179586 * rng.uniform());
    double p_oracle = 0.0;
    const DensityMatrix oracle = testing::temporal_mode_conditioned(a, b, j, &p_oracle);
    CHECK(std::abs(coincidence_probability(a, b, j) - p_oracle) < 1e-12);
    const DensityMatrix closed = conditioned_density(a, b, j);
    const DensityMatrix oracle_normalized = oracle.normalized();
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) {
        CHECK(std::abs(closed.element(r, c) - oracle_normalized.element(r, c)) < 1e-12);
      }
    }
  }
}

TEST_CASE("sampled attempts with |J| < 1 report the mixed conditioned state") {
  RngStream rng(11);
  const EfficiencyModel eff{1.0, 1.0, 1.0};
  const AtomQubit balanced{Complex(kInvSqrt2), Complex(kInvSqrt2)};
  const Complex j(0.6, 0.0);
  for (int i = 0; i < 200; ++i) {
    const GateOutcome out = run_gate_attempt(balanced, balanced, eff, j, rng);
    if (out.status != GateStatus::success) continue;
    REQUIRE(out.post_density.has_value());
    CHECK_FALSE(out.post_state.has_value());  // mixed: no pure form
    CHECK(out.post_density->trace() == Catch::Approx(1.0).margin(1e-12));
    CHECK(out.post_density->purity() < 1.0 - 1e-3);
  }
}

TEST_CASE("dark counts can fabricate heralds that carry no state") {
  RngStream rng(12);
  EfficiencyModel eff{1.0, 1.0, 0.0};  // photons never detected
  eff.dark_rate = 0.5;
  int fabricated = 0;
  const AtomQubit balanced{Complex(kInvSqrt2), Complex(kInvSqrt2)};
  for (int i = 0; i < 400; ++i) {
    const GateOutcome out = run_gate_attempt(balanced, balanced, eff, Complex(1.0), rng);
    if (out.status == GateStatus::success) {
      ++fabricated;
      CHECK(out.dark_assisted);
      CHECK_FALSE(out.post_state.has_value());
      CHECK_FALSE(out.post_density.has_value());
    }
  }
  CHECK(fabricated > 0);
}

TEST_CASE("seeded attempts are reproducible") {
  const EfficiencyModel eff{0.8, 0.5, 0.5};
  const AtomQubit a{Complex(0.6), Complex(0.8)};
  std::vector<int> first, second;
  for (auto* sink : {&first, &second}) {
    for (int i = 0; i < 100; ++i) {
      RngStream rng = RngStream::child(2024, static_cast<std::uint64_t>(i));
      const GateOutcome out = run_gate_attempt(a, a, eff, Complex(1.0), rng);
      sink->push_back(out.status == GateStatus::success ? 1 : 0);
    }
  }
  CHECK(first == second);
}

// Opt-in long run: success rate at realistic efficiencies over 10^8 attempts.
// Run with: test_interference "[long]"
TEST_CASE("low-efficiency Monte Carlo reproduces the success formula", "[.long]") {
  const EfficiencyModel eff{0.3, 0.02, 0.5};
  const std::uint64_t trials = 100000000;
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream rng = RngStream::child(555, t);
    AtomQubit a = haar_random_qubit(rng);
    AtomQubit b = haar_random_qubit(rng);
    if (run_gate_attempt(a, b, eff, Complex(1.0), rng).status == GateStatus::success) {
      ++successes;
    }
  }
  const double expected = success_probability(eff);  // 2.25e-6
  const double rate = static_cast<double>(successes) / static_cast<double>(trials);
  const double sigma = std::sqrt(expected / static_cast<double>(trials));  // Poisson
  CHECK(std::abs(rate - expected) < 3.0 * sigma);
}
