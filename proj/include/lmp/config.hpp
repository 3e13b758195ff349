// SPDX-License-Identifier: Apache-2.0
//
// Benchmark configuration: a single JSON document with strict (unknown keys
// rejected) parsing, serialization, and `--set key=value` overrides.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmp/rfsim.hpp"

namespace lmp {

struct DictionaryGrid {
    int tau_step = 10;
    std::vector<int> rho_set{25, 50, 100, 200};
    std::vector<int> halfperiod_set{1, 2, 4, 5, 10, 20, 25, 50};
    int cap = 4000;
    // Greedy candidate subsampling per step; 0 means exhaustive scan.
    int candidates_per_step = 0;
};

struct BenchmarkConfig {
    int n = 200;
    int b = 20;
    std::vector<int> m_values{50, 100, 150};
    int p = 4;        // LMP depth
    int bomp_k = 19;  // elimination iterations, default b - 1
    int k_max = 5;
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 30};
    long trials_per_cell = 50000;
    std::uint64_t seed = 1;
    std::vector<std::string> methods{"lmp", "zd-groth", "bomp-elim", "nyquist", "random"};
    std::string snr_mode = "target";  // "target" or "physical"
    double band_start_hz = 2.4e9;
    double band_stop_hz = 2.5e9;
    DictionaryGrid dictionary;
    rfsim::LinkBudget link_budget;
    rfsim::NoiseSpec noise;

    bool operator==(const BenchmarkConfig&) const;
};

// Parses a config document. Unknown keys anywhere are a hard error;
// validation failures throw std::invalid_argument.
BenchmarkConfig parse_config(const std::string& json_text);

std::string serialize_config(const BenchmarkConfig& cfg);

// Applies a `key=value` override with dotted key paths (applied after file
// parsing); the value is parsed as JSON when possible, else as a string.
std::string apply_override(const std::string& json_text, const std::string& assignment);

void validate_config(const BenchmarkConfig& cfg);

rfsim::ChannelPlan channel_plan(const BenchmarkConfig& cfg);
rfsim::SweepConfig sweep_config(const BenchmarkConfig& cfg);

}  // namespace lmp
