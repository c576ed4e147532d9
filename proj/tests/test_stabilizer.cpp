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

#include "freqlink/tableau.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "freqlink/cluster.hpp"
#include "support/oracles.hpp"

using namespace freqlink;
using freqlink::testing::QubitVector;

TEST_CASE("pauli products carry the right phases") {
  const PauliString x = PauliString::from_string("X");
  const PauliString y = PauliString::from_string("Y");
  const PauliString z = PauliString::from_string("Z");
  CHECK((x * z).str() == "-iY");
  CHECK((z * x).str() == "+iY");
  CHECK((x * y).str() == "+iZ");
  CHECK((y * y).str() == "+I");
  CHECK((x * x).str() == "+I");
  CHECK(PauliString::from_string("-XZ") * PauliString::from_string("-ZX") ==
        PauliString::from_string("YY"));
}

TEST_CASE("commutation follows the symplectic form") {
  CHECK(PauliString::from_string("XX").commutes_with(PauliString::from_string("ZZ")));
  CHECK_FALSE(PauliString::from_string("XI").commutes_with(PauliString::from_string("ZI")));
  CHECK(PauliString::from_string("XZ").commutes_with(PauliString::from_string("XZ")));
}

TEST_CASE("pauli action on state vectors matches the letter convention") {
  QubitVector v(1);  // |0>
  const QubitVector xv = v.applied_pauli(PauliString::from_string("X"));
  CHECK(xv[1] == Complex(1.0));
  const QubitVector yv = v.applied_pauli(PauliString::from_string("Y"));
  CHECK(yv[1] == Complex(0.0, 1.0));  // Y|0> = i|1>
  const QubitVector zv = v.applied_pauli(PauliString::from_string("Z"));
  CHECK(zv[0] == Complex(1.0));
}

TEST_CASE("linear chains carry the textbook stabilizers") {
  SECTION("single qubit") {
    const ClusterChain c = ClusterChain::linear(1);
    CHECK(c.tableau().generator(0).str() == "+X");
  }
  SECTION("two qubits") {
    const ClusterChain c = ClusterChain::linear(2);
    CHECK(c.tableau().generator(0).str() == "+XZ");
    CHECK(c.tableau().generator(1).str() == "+ZX");
  }
  SECTION("four qubits: boundary generator is X on the end with one Z inward") {
    const ClusterChain c = ClusterChain::linear(4);
    CHECK(c.tableau().generator(3).str() == "+IIZX");
    CHECK(c.tableau().generator(1).str() == "+ZXZI");
    CHECK(c.tableau().is_valid());
  }
}

TEST_CASE("rejects chains below one qubit") {
  CHECK_THROWS_AS(ClusterChain::linear(0), std::invalid_argument);
}

TEST_CASE("zz measurement on two plus states post-selects the Bell pair") {
  StabilizerTableau t = StabilizerTableau::pluses(2);
  const auto result = measure_zz(t, 0, 1, -1);
  CHECK_FALSE(result.deterministic);
  CHECK(result.outcome == -1);
  CHECK(t.contains(PauliString::from_string("-ZZ")));
  CHECK(t.contains(PauliString::from_string("XX")));
  CHECK(t.is_valid());
}

TEST_CASE("zz measurement on an eigenstate is deterministic and non-destructive") {
  StabilizerTableau t = StabilizerTableau::zeros(3);  // |000>
  const auto before = t.generators();
  const auto result = measure_zz(t, 0, 2, std::nullopt);
  CHECK(result.deterministic);
  CHECK(result.outcome == +1);
  CHECK(t.generators() == before);

  t.apply_x(0);  // |100>: Z0 Z2 eigenvalue -1
  const auto result2 = measure_zz(t, 0, 2, std::nullopt);
  CHECK(result2.deterministic);
  CHECK(result2.outcome == -1);
}

TEST_CASE("measure rejects bad arguments") {
  StabilizerTableau t = StabilizerTableau::pluses(2);
  CHECK_THROWS_AS(measure_zz(t, 0, 0, -1), std::invalid_argument);
  CHECK_THROWS_AS(measure_zz(t, 0, 5, -1), std::invalid_argument);
  RngStream rng(1);
  PauliString imag = PauliString::from_string("iZ");
  CHECK_THROWS_AS(t.measure(imag, std::nullopt, &rng), std::invalid_argument);
}

TEST_CASE("tableau stays valid through random circuits and measurements") {
  RngStream rng(606);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.uniform_below(5);
    StabilizerTableau t = StabilizerTableau::zeros(n);
    QubitVector v(n);
    testing::random_clifford_circuit(t, v, rng, 3 * n * n);
    REQUIRE(t.is_valid());
    const std::size_t a = rng.uniform_below(n);
    std::size_t b = rng.uniform_below(n - 1);
    if (b >= a) ++b;
    measure_zz(t, a, b, std::nullopt, &rng);
    CHECK(t.is_valid());
  }
}

TEST_CASE("zz measurement agrees with brute-force state-vector projection") {
  RngStream rng(808);
  int random_outcomes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.uniform_below(5);  // up to 6 qubits here
    StabilizerTableau t = StabilizerTableau::zeros(n);
    QubitVector v(n);
    testing::random_clifford_circuit(t, v, rng, 3 * n * n);

    const std::size_t a = rng.uniform_below(n);
    std::size_t b = rng.uniform_below(n - 1);
    if (b >= a) ++b;
    PauliString zz = PauliString::single(n, a, 'Z');
    zz *= PauliString::single(n, b, 'Z');

    // Oracle probabilities.
    QubitVector plus = v;
    const double p_plus = plus.project_pauli(zz, +1);
    QubitVector minus = v;
    const double p_minus = minus.project_pauli(zz, -1);

    const auto result = measure_zz(t, a, b, -1, nullptr);
    if (result.deterministic) {
      const double p_det = result.outcome == +1 ? p_plus : p_minus;
      CHECK(p_det == Catch::Approx(1.0).margin(1e-10));
    } else {
      ++random_outcomes;
      CHECK(p_plus == Catch::Approx(0.5).margin(1e-10));
      CHECK(p_minus == Catch::Approx(0.5).margin(1e-10));
      // Forced the -1 branch: every updated generator stabilizes the
      // projected vector.
      minus.normalize();
      for (const auto& g : t.generators()) {
        CHECK(minus.stabilized_by(g));
      }
    }
  }
  CHECK(random_outcomes > 50);
}

TEST_CASE("contains distinguishes group members by sign") {
  StabilizerTableau t = StabilizerTableau::pluses(2);
  measure_zz(t, 0, 1, -1);
  CHECK(t.contains(PauliString::from_string("-ZZ")));
  CHECK_FALSE(t.contains(PauliString::from_string("ZZ")));
  CHECK(t.contains(PauliString::from_string("XX")));
  CHECK_FALSE(t.contains(PauliString::from_string("ZI")));
  int sign = 0;
  CHECK(t.contains_letters(PauliString::from_string("ZZ"), &sign));
  CHECK(sign == -1);
}

TEST_CASE("merging two single-qubit chains yields one logical qubit") {
  const ClusterChain merged = merge_chains(ClusterChain::linear(1), ClusterChain::linear(1));
  CHECK(merged.logical_length() == 1);
  CHECK(merged.num_physical_qubits() == 2);
  CHECK(merged.tableau().contains(PauliString::from_string("-ZZ")));
  CHECK(merged.tableau().contains(PauliString::from_string("XX")));
  REQUIRE(merged.fusions().size() == 1);
  CHECK(merged.fusions()[0].x_logical.str() == "+XX");
  CHECK(merged.fusions()[0].z_logical.str() == "+ZI");
}

TEST_CASE("merging two 2-chains produces the fused stabilizers") {
  const ClusterChain merged = merge_chains(ClusterChain::linear(2), ClusterChain::linear(2));
  CHECK(merged.logical_length() == 3);
  CHECK(merged.num_physical_qubits() == 4);
  CHECK(merged.tableau().is_valid());
  // New stabilizers: -(Z on the fused pair) and X X on the pair dressed with
  // the inward Z's.
  CHECK(merged.tableau().contains(PauliString::from_string("-IZZI")));
  CHECK(merged.tableau().contains(PauliString::from_string("ZXXZ")));
  // Byproduct frame: Z on the first measured qubit.
  CHECK(merged.pauli_frame().str() == "+IZII");
}

TEST_CASE("the merged 2-chain state is locally equivalent to the 3-qubit cluster") {
  const ClusterChain merged = merge_chains(ClusterChain::linear(2), ClusterChain::linear(2));
  QubitVector v = testing::statevector_from_tableau(merged.tableau());
  // Decode the fused pair (qubits 1, 2): CX maps X1X2 -> X1, Z1Z2 -> Z2, so
  // the ancilla ends in |1> (the -1 branch) and factors out.
  v.apply_cx(1, 2);
  QubitVector decoded(3);
  // Keep qubits (0, 1, 3) with qubit 2 pinned to |1>.
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (((i >> 2) & 1) == 0) {
      if (std::abs(v[i]) > 1e-12) FAIL("ancilla qubit not in |1> after decoding");
      continue;
    }
    const std::size_t out = (i & 3) | (((i >> 3) & 1) << 2);
    decoded[out] = v[i];
  }
  CHECK(decoded.norm2() == Catch::Approx(1.0).margin(1e-10));
  CHECK(testing::local_clifford_equivalent(decoded, testing::linear_cluster_vector(3)));
}

TEST_CASE("the local-equivalence search itself discriminates") {
  // Product states sit in a different local-Clifford class than the cluster;
  // 3-qubit GHZ sits in the same one. Both directions keep the search honest.
  QubitVector product(3);
  CHECK_FALSE(testing::local_clifford_equivalent(product, testing::linear_cluster_vector(3)));
  QubitVector ghz(3);
  ghz.apply_h(0);
  ghz.apply_cx(0, 1);
  ghz.apply_cx(1, 2);
  CHECK(testing::local_clifford_equivalent(ghz, testing::linear_cluster_vector(3)));
}

TEST_CASE("large merges keep the tableau invariants and the 2n-1 count") {
  const ClusterChain merged = merge_chains(ClusterChain::linear(50), ClusterChain::linear(50));
  CHECK(merged.logical_length() == 99);
  CHECK(merged.num_physical_qubits() == 100);
  CHECK(merged.tableau().is_valid());
  // The fused-pair constraint is present at scale too.
  PauliString zz(100);
  zz.set_z(49, true);
  zz.set_z(50, true);
  zz.negate();
  CHECK(merged.tableau().contains(zz));
}

TEST_CASE("merging chains of unequal length gives n_a + n_b - 1 logical qubits") {
  const ClusterChain merged = merge_chains(ClusterChain::linear(3), ClusterChain::linear(5));
  CHECK(merged.logical_length() == 7);
  CHECK(merged.tableau().is_valid());
}
