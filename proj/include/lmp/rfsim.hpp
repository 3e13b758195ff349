// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo RF whitespace benchmark: scenario generation, link budget,
// block-sparse frequency-domain signal synthesis, noisy compressive
// measurement, and SNR-swept error curves.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lmp/blocksparse.hpp"
#include "lmp/detectors.hpp"
#include "lmp/rng.hpp"

namespace lmp::rfsim {

struct ChannelPlan {
    int num_channels = 20;
    int bins_per_channel = 10;
    double band_start_hz = 2.4e9;
    double band_stop_hz = 2.5e9;

    int total_bins() const { return num_channels * bins_per_channel; }
    double channel_bw_hz() const { return (band_stop_hz - band_start_hz) / num_channels; }
    double center_hz() const { return 0.5 * (band_start_hz + band_stop_hz); }
    BlockPartition partition() const { return BlockPartition::uniform(total_bins(), num_channels); }
};

struct LinkBudget {
    double tx_power_dbm = 20.0;
    double rx_gain_dbi = 10.0;
    double path_loss_exponent = 3.5;
    double reference_distance_m = 1.0;
    // Reference loss at d0; NaN selects free-space loss at the band center.
    double reference_loss_db = std::numeric_limits<double>::quiet_NaN();
    double min_distance_m = 1.0;
    double max_distance_m = 280.0;

    double resolved_reference_loss_db(double center_hz) const;
};

enum class SnrMode { target, physical };

struct NoiseSpec {
    double temperature_k = 290.0;
    double noise_figure_db = 5.0;
    // Noise bandwidth for physical mode; NaN derives the full band span.
    double bandwidth_hz = std::numeric_limits<double>::quiet_NaN();
    SnrMode mode = SnrMode::target;
};

struct Scenario {
    std::vector<int> active_channels;    // distinct, size K
    std::vector<double> distances_m;     // per active transmitter
    std::vector<double> rx_powers_dbm;   // derived via the link budget
};

struct ErrorCell {
    std::string method;
    double snr_db = 0.0;
    int m = 0;
    long trials = 0;
    long errors = 0;

    double error_rate() const { return trials > 0 ? double(errors) / double(trials) : 0.0; }
};

struct ErrorCurve {
    std::vector<ErrorCell> cells;  // sorted by (method, m, snr_db)
};

struct SweepConfig {
    ChannelPlan plan;
    LinkBudget budget;
    NoiseSpec noise;
    std::vector<std::string> methods;
    std::vector<int> m_values;
    std::vector<double> snr_grid_db;
    int trials_per_cell = 2000;
    int k_max = 5;
    int lmp_p = 4;
    int bomp_iters = -1;  // -1: B - 1
};

double path_loss_db(double d_m, const LinkBudget& budget, double center_hz);

// K uniform on {1..k_max}, K distinct channels without replacement, distances
// uniform on the configured range; receive powers follow the link budget.
Scenario draw_scenario(Rng& rng, const ChannelPlan& plan, int k_max, const LinkBudget& budget);

// Frequency-domain block-sparse signal: active channels carry unit-magnitude
// QPSK-phase bins scaled so each block's l2-power equals its receive power
// (dBm converted to linear milliwatts).
BlockSparseSignal synthesize_signal(const Scenario& scenario, const ChannelPlan& plan, Rng& rng);

// Noise variance per measurement for the target-SNR protocol: chosen so the
// average per-transmitter SNR over active channels equals target_snr_db.
double target_noise_variance(const BlockSparseSignal& x, int num_measurements,
                             double target_snr_db);

// Physical-mode noise variance: kTB inflated by the noise figure, in mW.
double physical_noise_variance(const NoiseSpec& noise, const ChannelPlan& plan);

// y = A x + n with i.i.d. circularly-symmetric complex Gaussian noise.
// target_snr_db selects target mode; otherwise physical mode applies.
MeasurementVector measure(const SensingMatrix& A, const BlockSparseSignal& x,
                          const NoiseSpec& noise, const ChannelPlan& plan,
                          std::optional<double> target_snr_db, Rng& rng);

// Runs trials_per_cell independent trials per (method-independent) cell.
// Per-trial randomness derives from (seed, m index, snr index, trial index),
// so the curve is bit-identical for any worker count.
ErrorCurve run_sweep(const SweepConfig& config, const std::map<int, SensingMatrix>& matrices,
                     std::uint64_t seed, int workers = 1);

}  // namespace lmp::rfsim
