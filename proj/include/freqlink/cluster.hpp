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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "freqlink/rng.hpp"
#include "freqlink/tableau.hpp"

namespace freqlink {

/// Two physical qubits fused into one logical qubit by a ZZ measurement,
/// with its encoded operators.
struct LogicalFusion {
  std::size_t qubit_a = 0;
  std::size_t qubit_b = 0;
  PauliString x_logical{1};
  PauliString z_logical{1};
};

/// 1D cluster chain: a stabilizer tableau over its physical qubits plus the
/// fusion bookkeeping that maps physical qubits to logical chain sites. The
/// heralded gate's Z byproduct on the first measured qubit is tracked as a
/// Pauli frame instead of being applied.
class ClusterChain {
 public:
  /// Linear cluster of n qubits with stabilizers Z_{i-1} X_i Z_{i+1}
  /// (boundary terms truncated; n = 1 gives the single stabilizer X_0).
  static ClusterChain linear(std::size_t n) {
    if (n < 1) throw std::invalid_argument("cluster chain needs at least one qubit");
    std::vector<PauliString> gens;
    gens.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      PauliString g = PauliString::single(n, i, 'X');
      if (i > 0) g *= PauliString::single(n, i - 1, 'Z');
      if (i + 1 < n) g *= PauliString::single(n, i + 1, 'Z');
      gens.push_back(g);
    }
    ClusterChain c;
    c.tableau_ = StabilizerTableau::from_generators(std::move(gens));
    c.logical_length_ = n;
    c.frame_ = PauliString::identity(n);
    return c;
  }

  const StabilizerTableau& tableau() const { return tableau_; }
  StabilizerTableau& tableau() { return tableau_; }
  std::size_t num_physical_qubits() const { return tableau_.num_qubits(); }
  std::size_t logical_length() const { return logical_length_; }
  const std::vector<LogicalFusion>& fusions() const { return fusions_; }
  const PauliString& pauli_frame() const { return frame_; }

  friend ClusterChain merge_chains(const ClusterChain& a, const ClusterChain& b);

 private:
  StabilizerTableau tableau_ = StabilizerTableau::pluses(1);
  std::size_t logical_length_ = 0;
  std::vector<LogicalFusion> fusions_;
  PauliString frame_{1};
};

namespace detail {

inline PauliString embed(const PauliString& p, std::size_t total, std::size_t offset) {
  PauliString out(total);
  out.set_phase_exp(p.phase_exp());
  for (std::size_t q = 0; q < p.num_qubits(); ++q) {
    out.set_x(offset + q, p.x(q));
    out.set_z(offset + q, p.z(q));
  }
  return out;
}

}  // namespace detail

/// Fuses two chains with a ZZ measurement on their facing boundary qubits
/// (last qubit of `a`, first qubit of `b`), keeping the -1 branch the
/// optical gate heralds. The measured pair becomes one logical qubit with
/// X_L = X_a X_b and Z_L = Z_a, so the logical chain length is
/// a.logical_length() + b.logical_length() - 1.
inline ClusterChain merge_chains(const ClusterChain& a, const ClusterChain& b) {
  const std::size_t na = a.num_physical_qubits();
  const std::size_t nb = b.num_physical_qubits();
  const std::size_t total = na + nb;

  std::vector<PauliString> gens;
  gens.reserve(total);
  for (const auto& g : a.tableau().generators()) gens.push_back(detail::embed(g, total, 0));
  for (const auto& g : b.tableau().generators()) gens.push_back(detail::embed(g, total, na));

  ClusterChain merged;
  merged.tableau_ = StabilizerTableau::from_generators(std::move(gens));
  for (const auto& f : a.fusions_) merged.fusions_.push_back(f);
  for (const auto& f : b.fusions_) {
    LogicalFusion shifted = f;
    shifted.qubit_a += na;
    shifted.qubit_b += na;
    shifted.x_logical = detail::embed(f.x_logical, total, na);
    shifted.z_logical = detail::embed(f.z_logical, total, na);
    merged.fusions_.push_back(shifted);
  }

  const std::size_t qa = na - 1;  // boundary of a
  const std::size_t qb = na;      // boundary of b (first qubit, shifted)
  measure_zz(merged.tableau_, qa, qb, -1);

  LogicalFusion fusion;
  fusion.qubit_a = qa;
  fusion.qubit_b = qb;
  fusion.x_logical = PauliString::single(total, qa, 'X');
  fusion.x_logical *= PauliString::single(total, qb, 'X');
  fusion.z_logical = PauliString::single(total, qa, 'Z');
  merged.fusions_.push_back(fusion);

  // Byproduct Z on the first measured qubit, tracked, never applied.
  merged.frame_ = detail::embed(a.frame_, total, 0);
  merged.frame_ *= detail::embed(b.frame_, total, na);
  merged.frame_ *= PauliString::single(total, qa, 'Z');

  merged.logical_length_ = a.logical_length_ + b.logical_length_ - 1;
  return merged;
}

inline double critical_length_zz(double p_s) {
  if (p_s <= 0.0 || p_s > 1.0) throw std::invalid_argument("p_s must lie in (0, 1]");
  return 1.0 + 4.0 * (1.0 - p_s) / p_s;
}

inline double critical_length_cpf(double p_s) {
  if (p_s <= 0.0 || p_s > 1.0) throw std::invalid_argument("p_s must lie in (0, 1]");
  return 4.0 * (1.0 - p_s) / p_s;
}

struct MergedLengthResult {
  double exact = 0.0;    // truncated sum over failure counts
  double approx = 0.0;   // 2n - n_c
  double n_c = 0.0;      // critical length for the ZZ gate
};

/// Expected logical length after repeatedly attempting to fuse two n-qubit
/// chains, where each failure burns 2 boundary qubits off each chain:
///
///   n' = sum_i (2n - 1 - 4i) p_s (1 - p_s)^i   over i with 2n - 1 - 4i > 0
///      ~ 2n - n_c,    n_c = 1 + 4 (1 - p_s) / p_s.
inline MergedLengthResult expected_merged_length(int n, double p_s) {
  if (n < 1) throw std::invalid_argument("expected_merged_length: n must be >= 1");
  MergedLengthResult out;
  out.n_c = critical_length_zz(p_s);
  out.approx = 2.0 * n - out.n_c;
  double sum = 0.0;
  double weight = p_s;  // p_s (1-p_s)^i
  for (int i = 0; 2 * n - 1 - 4 * i > 0; ++i) {
    sum += static_cast<double>(2 * n - 1 - 4 * i) * weight;
    weight *= (1.0 - p_s);
  }
  out.exact = sum;
  return out;
}

struct GrowthPolicy {
  enum class Strategy { pairwise_doubling, incremental };

  double p_s = 0.5;
  int failure_cost_per_chain = 2;  // qubits burned off each chain end per failure
  Strategy strategy = Strategy::pairwise_doubling;
  // Fresh building-block chain length (incremental strategy consumes one
  // block per attempt; pairwise doubling seeds the pool with blocks).
  int block_length = 2;

  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    if (p_s <= 0.0 || p_s > 1.0) issues.push_back("p_s must lie in (0, 1]");
    if (failure_cost_per_chain < 1) issues.push_back("failure_cost_per_chain must be >= 1");
    if (block_length < 1) issues.push_back("block_length must be >= 1");
    return issues;
  }
};

inline const char* strategy_name(GrowthPolicy::Strategy s) {
  return s == GrowthPolicy::Strategy::pairwise_doubling ? "pairwise_doubling" : "incremental";
}

/// One merge round: two chains of length n attempt to fuse until success or
/// until a chain dies. Returns the merged logical length, or 0 when repeated
/// failures exhausted a chain first.
inline int simulate_merge_round(int n, const GrowthPolicy& policy, RngStream& rng) {
  int len_a = n;
  int len_b = n;
  while (len_a >= 1 && len_b >= 1) {
    if (rng.bernoulli(policy.p_s)) return len_a + len_b - 1;
    len_a -= policy.failure_cost_per_chain;
    len_b -= policy.failure_cost_per_chain;
  }
  return 0;
}

struct MergeRoundStats {
  int n = 0;
  double p_s = 0.0;
  double n_c = 0.0;
  double analytic_exact = 0.0;
  double analytic_approx = 0.0;
  double empirical_mean = 0.0;
  double empirical_stderr = 0.0;
  std::uint64_t trials = 0;
  bool non_growing = false;  // n <= n_c: merging is not expected to grow the chain
};

/// Monte Carlo over merge rounds, one child rng stream per trial.
inline MergeRoundStats merge_round_monte_carlo(int n, const GrowthPolicy& policy,
                                               std::uint64_t trials, std::uint64_t master_seed) {
  if (trials < 1) throw std::invalid_argument("merge_round_monte_carlo: trials must be >= 1");
  MergeRoundStats stats;
  stats.n = n;
  stats.p_s = policy.p_s;
  const MergedLengthResult analytic = expected_merged_length(n, policy.p_s);
  stats.n_c = analytic.n_c;
  stats.analytic_exact = analytic.exact;
  stats.analytic_approx = analytic.approx;
  stats.non_growing = static_cast<double>(n) <= analytic.n_c;
  stats.trials = trials;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream rng = RngStream::child(master_seed, t);
    const double len = static_cast<double>(simulate_merge_round(n, policy, rng));
    sum += len;
    sum_sq += len * len;
  }
  const double mean = sum / static_cast<double>(trials);
  const double var = std::max(0.0, sum_sq / static_cast<double>(trials) - mean * mean);
  stats.empirical_mean = mean;
  stats.empirical_stderr = std::sqrt(var / static_cast<double>(trials));
  return stats;
}

struct GrowthRunStats {
  int target_length = 0;
  double p_s = 0.0;
  std::uint64_t trials = 0;
  double reached_fraction = 0.0;
  double mean_operations = 0.0;  // gate attempts + fresh-block preparations
  double operations_stderr = 0.0;
  double mean_attempts = 0.0;
  double mean_round_length = 0.0;  // average merged length over successful merges
  bool non_growing = false;
};

/// Grows a chain to `target_length` from fresh building blocks, counting
/// elementary operations (one per gate attempt, one per fresh block). A
/// trial gives up once `max_operations` is hit, which keeps sub-critical
/// policies (expected growth <= 0) from looping forever; such policies are
/// reported as non-growing, not errors.
inline GrowthRunStats grow_chain_monte_carlo(int target_length, const GrowthPolicy& policy,
                                             std::uint64_t trials, std::uint64_t master_seed,
                                             std::uint64_t max_operations = 1000000) {
  if (target_length < 1) throw std::invalid_argument("grow_chain_monte_carlo: target must be >= 1");
  if (trials < 1) throw std::invalid_argument("grow_chain_monte_carlo: trials must be >= 1");
  GrowthRunStats stats;
  stats.target_length = target_length;
  stats.p_s = policy.p_s;
  stats.trials = trials;
  if (policy.strategy == GrowthPolicy::Strategy::incremental) {
    // Expected length change per attempt: p (m - 1) - (1 - p) * cost.
    const double drift = policy.p_s * (policy.block_length - 1) -
                         (1.0 - policy.p_s) * policy.failure_cost_per_chain;
    stats.non_growing = drift <= 0.0 && target_length > policy.block_length;
  }

  std::uint64_t reached = 0;
  double ops_sum = 0.0, ops_sq = 0.0, attempts_sum = 0.0;
  double round_len_sum = 0.0;
  std::uint64_t round_count = 0;

  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream rng = RngStream::child(master_seed, t);
    std::uint64_t ops = 0;
    std::uint64_t attempts = 0;
    bool done = false;

    if (policy.strategy == GrowthPolicy::Strategy::incremental) {
      int main_len = policy.block_length;
      ops += 1;  // first block
      while (!done && ops < max_operations) {
        if (main_len >= target_length) {
          done = true;
          break;
        }
        ops += 1;  // fresh block
        ops += 1;  // gate attempt
        attempts += 1;
        if (rng.bernoulli(policy.p_s)) {
          main_len += policy.block_length - 1;
          round_len_sum += main_len;
          ++round_count;
        } else {
          main_len -= policy.failure_cost_per_chain;
          if (main_len < 1) {
            main_len = policy.block_length;  // chain died; restart from a fresh block
            ops += 1;
          }
        }
      }
    } else {
      // Pairwise doubling: repeatedly fuse the two longest chains in the
      // pool, topping the pool up with fresh blocks as chains die.
      std::vector<int> pool;
      auto add_block = [&] {
        pool.push_back(policy.block_length);
        ops += 1;
      };
      add_block();
      add_block();
      while (!done && ops < max_operations) {
        if (!pool.empty() && *std::max_element(pool.begin(), pool.end()) >= target_length) {
          done = true;
          break;
        }
        while (pool.size() < 2) add_block();
        std::sort(pool.begin(), pool.end());
        const int a = pool.back();
        pool.pop_back();
        const int b = pool.back();
        pool.pop_back();
        ops += 1;
        attempts += 1;
        if (rng.bernoulli(policy.p_s)) {
          pool.push_back(a + b - 1);
          round_len_sum += a + b - 1;
          ++round_count;
        } else {
          if (a - policy.failure_cost_per_chain >= 1) pool.push_back(a - policy.failure_cost_per_chain);
          if (b - policy.failure_cost_per_chain >= 1) pool.push_back(b - policy.failure_cost_per_chain);
        }
      }
    }

    if (done) {
      ++reached;
      ops_sum += static_cast<double>(ops);
      ops_sq += static_cast<double>(ops) * static_cast<double>(ops);
      attempts_sum += static_cast<double>(attempts);
    }
  }

  stats.reached_fraction = static_cast<double>(reached) / static_cast<double>(trials);
  if (reached > 0) {
    const double mean = ops_sum / static_cast<double>(reached);
    const double var = std::max(0.0, ops_sq / static_cast<double>(reached) - mean * mean);
    stats.mean_operations = mean;
    stats.operations_stderr = std::sqrt(var / static_cast<double>(reached));
    stats.mean_attempts = attempts_sum / static_cast<double>(reached);
  }
  if (round_count > 0) {
    stats.mean_round_length = round_len_sum / static_cast<double>(round_count);
  }
  return stats;
}

}  // namespace freqlink
