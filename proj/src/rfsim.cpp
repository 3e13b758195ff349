// SPDX-License-Identifier: Apache-2.0
#include "lmp/rfsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace lmp::rfsim {

namespace {

constexpr double kBoltzmann = 1.380649e-23;  // J/K
constexpr double kSpeedOfLight = 299792458.0;
constexpr double kQpskPhases[4] = {M_PI / 4, 3 * M_PI / 4, 5 * M_PI / 4, 7 * M_PI / 4};

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// mean over used blocks of ||x_j||^2 / N_j
double mean_used_density(const BlockSparseSignal& x) {
    const auto used = x.used_blocks();
    if (used.empty())
        throw std::invalid_argument("rfsim: no active channels");
    double acc = 0.0;
    for (int j : used) {
        const double nj = x.block_norm(j);
        acc += nj * nj / x.partition().block_size(j);
    }
    return acc / static_cast<double>(used.size());
}

CVec gaussian_noise(int len, double variance, Rng& rng) {
    CVec n = CVec::Zero(len);
    if (variance > 0.0)
        for (int k = 0; k < len; ++k) n(k) = rng.cnormal(variance);
    return n;
}

}  // namespace

double LinkBudget::resolved_reference_loss_db(double center_hz) const {
    if (!std::isnan(reference_loss_db)) return reference_loss_db;
    // Free-space loss at the reference distance.
    return 20.0 * std::log10(4.0 * M_PI * reference_distance_m * center_hz / kSpeedOfLight);
}

double path_loss_db(double d_m, const LinkBudget& budget, double center_hz) {
    if (d_m < budget.reference_distance_m)
        throw std::invalid_argument("path_loss_db: distance below reference distance");
    return budget.resolved_reference_loss_db(center_hz) +
           10.0 * budget.path_loss_exponent * std::log10(d_m / budget.reference_distance_m);
}

Scenario draw_scenario(Rng& rng, const ChannelPlan& plan, int k_max, const LinkBudget& budget) {
    const int b = plan.num_channels;
    if (k_max < 1 || k_max > b)
        throw std::invalid_argument("draw_scenario: k_max must lie in [1, B]");
    Scenario s;
    const int k = 1 + rng.index(k_max);
    // Distinct channels via partial Fisher-Yates.
    std::vector<int> channels(static_cast<std::size_t>(b));
    for (int i = 0; i < b; ++i) channels[static_cast<std::size_t>(i)] = i;
    for (int t = 0; t < k; ++t) {
        const int pick = t + rng.index(b - t);
        std::swap(channels[static_cast<std::size_t>(t)], channels[static_cast<std::size_t>(pick)]);
    }
    s.active_channels.assign(channels.begin(), channels.begin() + k);
    for (int t = 0; t < k; ++t) {
        const double d = rng.uniform(budget.min_distance_m, budget.max_distance_m);
        s.distances_m.push_back(d);
        s.rx_powers_dbm.push_back(budget.tx_power_dbm + budget.rx_gain_dbi -
                                  path_loss_db(d, budget, plan.center_hz()));
    }
    return s;
}

BlockSparseSignal synthesize_signal(const Scenario& scenario, const ChannelPlan& plan, Rng& rng) {
    const BlockPartition partition = plan.partition();
    CVec x = CVec::Zero(partition.total_len());
    for (std::size_t t = 0; t < scenario.active_channels.size(); ++t) {
        const int ch = scenario.active_channels[t];
        const double power_mw = dbm_to_mw(scenario.rx_powers_dbm[t]);
        const double bin_mag = std::sqrt(power_mw / partition.block_size(ch));
        for (int k = 0; k < partition.block_size(ch); ++k) {
            const double phase = kQpskPhases[rng.index(4)];
            x(partition.block_offset(ch) + k) = bin_mag * cxd(std::cos(phase), std::sin(phase));
        }
    }
    return BlockSparseSignal(std::move(x), partition);
}

double target_noise_variance(const BlockSparseSignal& x, int num_measurements,
                             double target_snr_db) {
    if (std::isinf(target_snr_db)) return 0.0;
    const double snr_lin = std::pow(10.0, target_snr_db / 10.0);
    const double n = x.partition().total_len();
    return n * mean_used_density(x) / (num_measurements * snr_lin);
}

double physical_noise_variance(const NoiseSpec& noise, const ChannelPlan& plan) {
    const double bw = std::isnan(noise.bandwidth_hz)
                          ? plan.band_stop_hz - plan.band_start_hz
                          : noise.bandwidth_hz;
    const double nf_lin = std::pow(10.0, noise.noise_figure_db / 10.0);
    return kBoltzmann * noise.temperature_k * bw * nf_lin * 1000.0;  // mW
}

MeasurementVector measure(const SensingMatrix& A, const BlockSparseSignal& x,
                          const NoiseSpec& noise, const ChannelPlan& plan,
                          std::optional<double> target_snr_db, Rng& rng) {
    if (A.partition().total_len() != x.partition().total_len())
        throw std::invalid_argument("measure: dimension mismatch");
    const double variance = target_snr_db
                                ? target_noise_variance(x, A.rows(), *target_snr_db)
                                : physical_noise_variance(noise, plan);
    const CVec n = gaussian_noise(A.rows(), variance, rng);
    MeasurementVector y;
    y.values = A.entries() * x.values() + n;
    y.noise_norm = n.norm();
    return y;
}

namespace {

struct CellCounts {
    long trials = 0;
    std::vector<long> errors;  // per method
};

void validate(const SweepConfig& config, const std::map<int, SensingMatrix>& matrices) {
    if (config.methods.empty())
        throw std::invalid_argument("run_sweep: no methods configured");
    for (const auto& m : config.methods)
        if (!method_from_name(m))
            throw std::invalid_argument("run_sweep: unknown method '" + m + "'");
    if (config.snr_grid_db.empty())
        throw std::invalid_argument("run_sweep: empty SNR grid");
    if (config.trials_per_cell < 1)
        throw std::invalid_argument("run_sweep: trials_per_cell must be positive");
    if (config.m_values.empty())
        throw std::invalid_argument("run_sweep: no M values configured");
    if (config.lmp_p < 1 || config.lmp_p > config.plan.num_channels - 1)
        throw std::invalid_argument("run_sweep: LMP depth out of range");
    for (int m : config.m_values) {
        if (m > config.plan.total_bins())
            throw std::invalid_argument("run_sweep: M exceeds N");
        auto it = matrices.find(m);
        if (it == matrices.end())
            throw std::invalid_argument("run_sweep: no sensing matrix for M=" +
                                        std::to_string(m));
        if (it->second.rows() != m)
            throw std::invalid_argument("run_sweep: sensing matrix row count mismatch");
    }
}

// One Monte-Carlo trial: draws a scenario, synthesizes the spectrum, measures
// it, and scores every configured method on the identical (A, y). Returns the
// SNR label the trial falls under (the grid value in target mode, the
// realized average per-transmitter SNR rounded to 1 dB in physical mode).
double run_trial(const SweepConfig& config, const SensingMatrix& A, std::uint64_t seed,
                 std::uint64_t mi, std::uint64_t si, std::uint64_t trial,
                 std::optional<double> target_snr, std::vector<char>& errs) {
    const int b = config.plan.num_channels;
    Rng rng_scenario = Rng::substream(seed, {mi, si, trial, 0});
    Rng rng_signal = Rng::substream(seed, {mi, si, trial, 1});
    Rng rng_noise = Rng::substream(seed, {mi, si, trial, 2});
    Rng rng_nyquist = Rng::substream(seed, {mi, si, trial, 3});
    Rng rng_random = Rng::substream(seed, {mi, si, trial, 4});

    const Scenario scenario =
        draw_scenario(rng_scenario, config.plan, config.k_max, config.budget);
    const BlockSparseSignal x = synthesize_signal(scenario, config.plan, rng_signal);
    const MeasurementVector y =
        measure(A, x, config.noise, config.plan, target_snr, rng_noise);

    double snr_label;
    double nyquist_variance;
    if (target_snr) {
        snr_label = *target_snr;
        nyquist_variance = std::isinf(*target_snr)
                               ? 0.0
                               : mean_used_density(x) / std::pow(10.0, *target_snr / 10.0);
    } else {
        const double variance = physical_noise_variance(config.noise, config.plan);
        const double snr_lin = mean_used_density(x) * config.plan.total_bins() /
                               (A.rows() * variance);
        snr_label = std::round(10.0 * std::log10(snr_lin));
        nyquist_variance = variance;
    }

    std::vector<char> occupied(static_cast<std::size_t>(b), 0);
    for (int ch : scenario.active_channels) occupied[static_cast<std::size_t>(ch)] = 1;

    errs.assign(config.methods.size(), 0);
    for (std::size_t mth = 0; mth < config.methods.size(); ++mth) {
        int declared = 0;
        switch (*method_from_name(config.methods[mth])) {
            case Method::zd_groth:
                declared = zd_groth(A, y).declared_unused;
                break;
            case Method::lmp:
                declared = lmp(A, y, config.lmp_p).declared_unused;
                break;
            case Method::bomp_elimination:
                declared = bomp_elimination(A, y, config.bomp_iters).declared_unused;
                break;
            case Method::nyquist: {
                // Full-rate baseline: the spectrum plus matched-SNR
                // frequency-domain noise.
                const CVec noisy =
                    x.values() + gaussian_noise(config.plan.total_bins(), nyquist_variance,
                                                rng_nyquist);
                declared = nyquist_min_power(noisy, x.partition()).declared_unused;
                break;
            }
            case Method::random:
                declared = random_unused(rng_random, b).declared_unused;
                break;
        }
        if (occupied[static_cast<std::size_t>(declared)]) errs[mth] = 1;
    }
    return snr_label;
}

}  // namespace

ErrorCurve run_sweep(const SweepConfig& config, const std::map<int, SensingMatrix>& matrices,
                     std::uint64_t seed, int workers) {
    validate(config, matrices);
    if (workers < 1) workers = 1;
    const bool target_mode = config.noise.mode == SnrMode::target;

    ErrorCurve curve;
    for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
        const int m = config.m_values[mi];
        const SensingMatrix& A = matrices.at(m);
        // Physical mode ignores the grid label: one batch of trials per M,
        // binned afterwards by realized SNR at 1 dB resolution.
        const std::size_t num_batches = target_mode ? config.snr_grid_db.size() : 1;
        for (std::size_t si = 0; si < num_batches; ++si) {
            const std::optional<double> target_snr =
                target_mode ? std::optional<double>(config.snr_grid_db[si]) : std::nullopt;
            const long total = config.trials_per_cell;

            // Per-worker (snr label -> counts); merged after the join, so the
            // result is independent of scheduling.
            std::vector<std::map<double, CellCounts>> partial(
                static_cast<std::size_t>(workers));
            std::vector<std::thread> pool;
            std::atomic<bool> failed{false};
            std::exception_ptr error;
            std::mutex error_mutex;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    const long lo = total * w / workers;
                    const long hi = total * (w + 1) / workers;
                    std::vector<char> errs;
                    try {
                        for (long trial = lo; trial < hi; ++trial) {
                            const double label =
                                run_trial(config, A, seed, mi, si,
                                          static_cast<std::uint64_t>(trial), target_snr, errs);
                            CellCounts& c = partial[static_cast<std::size_t>(w)][label];
                            if (c.errors.empty()) c.errors.assign(config.methods.size(), 0);
                            c.trials += 1;
                            for (std::size_t mth = 0; mth < errs.size(); ++mth)
                                c.errors[mth] += errs[mth];
                        }
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!failed.exchange(true)) error = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) t.join();
            if (failed) std::rethrow_exception(error);

            std::map<double, CellCounts> merged;
            for (const auto& p : partial) {
                for (const auto& [label, counts] : p) {
                    CellCounts& c = merged[label];
                    if (c.errors.empty()) c.errors.assign(config.methods.size(), 0);
                    c.trials += counts.trials;
                    for (std::size_t mth = 0; mth < counts.errors.size(); ++mth)
                        c.errors[mth] += counts.errors[mth];
                }
            }
            for (const auto& [label, counts] : merged) {
                for (std::size_t mth = 0; mth < config.methods.size(); ++mth) {
                    ErrorCell cell;
                    cell.method = config.methods[mth];
                    cell.snr_db = label;
                    cell.m = m;
                    cell.trials = counts.trials;
                    cell.errors = counts.errors[mth];
                    curve.cells.push_back(std::move(cell));
                }
            }
        }
    }
    std::sort(curve.cells.begin(), curve.cells.end(), [](const ErrorCell& a, const ErrorCell& b) {
        return std::tie(a.method, a.m, a.snr_db) < std::tie(b.method, b.m, b.snr_db);
    });
    return curve;
}

}  // namespace lmp::rfsim
