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

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqlink/atom_photon.hpp"
#include "freqlink/cluster.hpp"
#include "freqlink/interference.hpp"
#include "freqlink/noise.hpp"

namespace freqlink {

inline constexpr double kTwoPi = 6.283185307179586476925287;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Extra knobs that ride along with the trap section: interferometer path
/// mismatch and the "much smaller than" reporting threshold.
struct NoiseConfig {
  double path_mismatch = 0.0;  // m
  double threshold_ratio = tol::kRegimeRatio;
};

/// Full run configuration. Frequencies are given in Hz in the file and
/// converted to rad/s here; lengths are in the unit their key names.
struct RunConfig {
  AtomicSpecies species;
  TrapParams trap;
  NoiseConfig noise;
  EfficiencyModel efficiencies;
  GrowthPolicy growth_policy;
  std::uint64_t master_seed = 12345;
  std::string output_dir = "out";
  std::uint64_t trials = 10000;

  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    for (auto& s : species.validate()) issues.push_back("species: " + s);
    if (!species.frequency_modes_resolved(noise.threshold_ratio)) {
      issues.push_back("species: warning: gamma is not well below the summed hyperfine "
                       "splittings; the photon frequency modes are poorly resolved");
    }
    for (auto& s : trap.validate()) issues.push_back("trap: " + s);
    if (noise.path_mismatch < 0.0) issues.push_back("noise: path_mismatch_mm must be >= 0");
    if (noise.threshold_ratio <= 0.0) issues.push_back("noise: threshold_ratio must be > 0");
    for (auto& s : efficiencies.validate()) issues.push_back("efficiencies: " + s);
    for (auto& s : growth_policy.validate()) issues.push_back("growth_policy: " + s);
    if (trials < 1) issues.push_back("trials must be >= 1");
    return issues;
  }

  /// Hard errors only (the resolvability line above is a warning).
  bool is_valid() const {
    for (const auto& s : validate()) {
      if (s.find("warning:") == std::string::npos) return false;
    }
    return true;
  }
};

inline nlohmann::json default_config_json() {
  return nlohmann::json{
      {"species",
       {{"f", 0},
        {"delta_hf_s_hz", 14.0e9},
        {"delta_hf_p_hz", 0.8e9},
        {"gamma_hz", 50.0e6},
        {"wavelength_nm", 214.5},
        {"eta_b", 0.5},
        {"fine_structure_thz", 74.0}}},
      {"trap", {{"nu_t_hz", 1.0e6}, {"l_s_nm", 50.0}}},
      {"noise", {{"path_mismatch_mm", 1.0}, {"threshold_ratio", 0.1}}},
      {"efficiencies",
       {{"eta_d", 1.0}, {"eta_c", 1.0}, {"eta_b", 1.0}, {"dark_rate", 0.0}}},
      {"growth_policy",
       {{"p_s", 0.5}, {"failure_cost_per_chain", 2}, {"strategy", "pairwise_doubling"}}},
      {"master_seed", 12345},
      {"output_dir", "out"},
      {"trials", 10000}};
}

namespace detail {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

}  // namespace detail

/// Defaults overlaid with the given document, section by section. The result
/// is the effective configuration; hashing its dump() identifies a run.
inline nlohmann::json merged_config_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: document must be a JSON object");
  nlohmann::json merged = default_config_json();
  for (auto& [name, value] : doc.items()) {
    if (value.is_object() && merged.contains(name) && merged.at(name).is_object()) {
      merged.at(name).update(value);
    } else {
      merged[name] = value;
    }
  }
  return merged;
}

/// Parses a configuration document; missing keys fall back to the defaults
/// above. Throws std::invalid_argument on malformed documents.
inline RunConfig parse_config(const nlohmann::json& doc) {
  const nlohmann::json merged_doc = merged_config_json(doc);
  auto section = [&](const char* name) -> nlohmann::json {
    const auto& given = merged_doc.at(name);
    if (!given.is_object()) {
      throw std::invalid_argument(std::string("config: section must be an object: ") + name);
    }
    return given;
  };

  RunConfig cfg;
  const nlohmann::json& doc_ref = merged_doc;
  try {
    const nlohmann::json sp = section("species");
    cfg.species.f = sp.at("f").get<int>();
    cfg.species.delta_hf_s = kTwoPi * sp.at("delta_hf_s_hz").get<double>();
    cfg.species.delta_hf_p = kTwoPi * sp.at("delta_hf_p_hz").get<double>();
    cfg.species.gamma = kTwoPi * sp.at("gamma_hz").get<double>();
    cfg.species.k_mag = kTwoPi / (sp.at("wavelength_nm").get<double>() * 1e-9);
    cfg.species.eta_b = sp.at("eta_b").get<double>();
    cfg.species.fine_structure_split = kTwoPi * sp.at("fine_structure_thz").get<double>() * 1e12;

    const nlohmann::json tr = section("trap");
    cfg.trap.nu_t = kTwoPi * tr.at("nu_t_hz").get<double>();
    cfg.trap.l_s = tr.at("l_s_nm").get<double>() * 1e-9;

    const nlohmann::json no = section("noise");
    cfg.noise.path_mismatch = no.at("path_mismatch_mm").get<double>() * 1e-3;
    cfg.noise.threshold_ratio = no.at("threshold_ratio").get<double>();

    const nlohmann::json ef = section("efficiencies");
    cfg.efficiencies.eta_d = ef.at("eta_d").get<double>();
    cfg.efficiencies.eta_c = ef.at("eta_c").get<double>();
    cfg.efficiencies.eta_b = ef.at("eta_b").get<double>();
    cfg.efficiencies.dark_rate = ef.at("dark_rate").get<double>();

    const nlohmann::json gp = section("growth_policy");
    cfg.growth_policy.p_s = gp.at("p_s").get<double>();
    cfg.growth_policy.failure_cost_per_chain = gp.at("failure_cost_per_chain").get<int>();
    const std::string strat = detail::get_or<std::string>(gp, "strategy", "pairwise_doubling");
    if (strat == "pairwise_doubling") {
      cfg.growth_policy.strategy = GrowthPolicy::Strategy::pairwise_doubling;
    } else if (strat == "incremental") {
      cfg.growth_policy.strategy = GrowthPolicy::Strategy::incremental;
    } else {
      throw std::invalid_argument("config: unknown growth strategy: " + strat);
    }
    cfg.growth_policy.block_length = detail::get_or<int>(gp, "block_length", 2);

    cfg.master_seed = doc_ref.at("master_seed").get<std::uint64_t>();
    cfg.output_dir = doc_ref.at("output_dir").get<std::string>();
    cfg.trials = doc_ref.at("trials").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
  }
  return parse_config(doc);
}

inline RunConfig default_config() { return parse_config(default_config_json()); }

/// Canonical serialization used for hashing: nlohmann sorts object keys, so
/// dump() is stable for a given document.
inline std::string canonical_config_string(const nlohmann::json& doc) { return doc.dump(); }

}  // namespace freqlink
