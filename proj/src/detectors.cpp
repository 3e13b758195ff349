// SPDX-License-Identifier: Apache-2.0
#include "lmp/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lmp {

namespace {

// Lowest index attaining the minimum.
int argmin(const std::vector<double>& v, const std::vector<char>* excluded = nullptr) {
    int best = -1;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
        if (excluded && (*excluded)[static_cast<std::size_t>(i)]) continue;
        if (v[static_cast<std::size_t>(i)] < best_val) {
            best_val = v[static_cast<std::size_t>(i)];
            best = i;
        }
    }
    return best;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::zd_groth: return "zd-groth";
        case Method::lmp: return "lmp";
        case Method::bomp_elimination: return "bomp-elim";
        case Method::nyquist: return "nyquist";
        case Method::random: return "random";
    }
    return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
    if (name == "zd-groth") return Method::zd_groth;
    if (name == "lmp") return Method::lmp;
    if (name == "bomp-elim") return Method::bomp_elimination;
    if (name == "nyquist") return Method::nyquist;
    if (name == "random") return Method::random;
    return std::nullopt;
}

BompTrace bomp(const SensingMatrix& A, const MeasurementVector& y, int iterations,
               const BompOptions& options) {
    const int b = A.num_blocks();
    if (iterations < 1 || iterations > b)
        throw std::invalid_argument("bomp: iteration count must lie in [1, B]");
    if (y.values.size() != A.rows())
        throw std::invalid_argument("bomp: measurement length mismatch");

    BompTrace trace;
    trace.correlation_history.resize(iterations, b);
    CVec residual = y.values;
    const double y_norm = y.values.norm();
    std::vector<char> selected(static_cast<std::size_t>(b), 0);

    int t = 0;
    for (; t < iterations; ++t) {
        double best = -1.0;
        int chosen = 0;
        for (int i = 0; i < b; ++i) {
            const double corr = block_correlation(A, i, residual);
            trace.correlation_history(t, i) = corr;
            if (selected[static_cast<std::size_t>(i)])
                continue;
            if (corr > best) {
                best = corr;
                chosen = i;
            }
        }
        selected[static_cast<std::size_t>(chosen)] = 1;
        trace.support_sequence.push_back(chosen);
        trace.final_estimate = block_least_squares(A, trace.support_sequence, y.values);

        // r = y - A_Omega x_hat
        CVec fitted = CVec::Zero(A.rows());
        int col = 0;
        for (int i : trace.support_sequence) {
            const int w = A.partition().block_size(i);
            fitted += A.block(i) * trace.final_estimate.segment(col, w);
            col += w;
        }
        residual = y.values - fitted;
        trace.residual_norms.push_back(residual.norm());

        if (options.early_stop && residual.norm() < 1e-12 * y_norm) {
            ++t;
            break;
        }
    }
    if (t < iterations)
        trace.correlation_history.conservativeResize(t, b);
    return trace;
}

Detection zd_groth(const SensingMatrix& A, const MeasurementVector& y) {
    Detection d;
    d.method = Method::zd_groth;
    d.scores.resize(static_cast<std::size_t>(A.num_blocks()));
    for (int i = 0; i < A.num_blocks(); ++i)
        d.scores[static_cast<std::size_t>(i)] = block_correlation(A, i, y.values);
    d.declared_unused = argmin(d.scores);
    return d;
}

Detection lmp(const SensingMatrix& A, const MeasurementVector& y, int p) {
    const int b = A.num_blocks();
    if (p < 1 || p > b - 1)
        throw std::invalid_argument("lmp: P must lie in [1, B-1]");
    Detection d;
    d.method = Method::lmp;
    d.trace = bomp(A, y, p);
    d.scores.assign(static_cast<std::size_t>(b), 0.0);
    for (int t = 0; t < d.trace->correlation_history.rows(); ++t)
        for (int i = 0; i < b; ++i)
            d.scores[static_cast<std::size_t>(i)] += d.trace->correlation_history(t, i);
    std::vector<char> excluded(static_cast<std::size_t>(b), 0);
    for (int i : d.trace->support_sequence) excluded[static_cast<std::size_t>(i)] = 1;
    d.declared_unused = argmin(d.scores, &excluded);
    return d;
}

Detection bomp_elimination(const SensingMatrix& A, const MeasurementVector& y, int iterations) {
    const int b = A.num_blocks();
    if (iterations < 0) iterations = b - 1;
    if (iterations > b - 1)
        throw std::invalid_argument("bomp_elimination: iterations must leave a block unselected");
    Detection d;
    d.method = Method::bomp_elimination;
    d.trace = bomp(A, y, iterations);
    std::vector<char> in_support(static_cast<std::size_t>(b), 0);
    for (int i : d.trace->support_sequence) in_support[static_cast<std::size_t>(i)] = 1;
    d.declared_unused = 0;
    for (int i = 0; i < b; ++i) {
        if (!in_support[static_cast<std::size_t>(i)]) {
            d.declared_unused = i;
            break;
        }
    }
    // Last-iteration correlations double as the reported scores.
    const auto last = d.trace->correlation_history.rows() - 1;
    d.scores.resize(static_cast<std::size_t>(b));
    for (int i = 0; i < b; ++i)
        d.scores[static_cast<std::size_t>(i)] = d.trace->correlation_history(last, i);
    return d;
}

Detection nyquist_min_power(const CVec& x_full, const BlockPartition& partition) {
    if (x_full.size() != partition.total_len())
        throw std::invalid_argument("nyquist_min_power: length mismatch with partition");
    Detection d;
    d.method = Method::nyquist;
    d.scores.resize(static_cast<std::size_t>(partition.num_blocks()));
    for (int i = 0; i < partition.num_blocks(); ++i)
        d.scores[static_cast<std::size_t>(i)] =
            x_full.segment(partition.block_offset(i), partition.block_size(i)).norm();
    d.declared_unused = argmin(d.scores);
    return d;
}

Detection random_unused(Rng& rng, int num_blocks) {
    if (num_blocks < 1)
        throw std::invalid_argument("random_unused: need at least one block");
    Detection d;
    d.method = Method::random;
    d.declared_unused = rng.index(num_blocks);
    return d;
}

GuaranteeReport check_zd_guarantee(const SensingMatrix& A, const BlockSparseSignal& x,
                                   double noise_norm) {
    if (noise_norm < 0.0)
        throw std::invalid_argument("check_zd_guarantee: negative noise norm");
    if (x.used_blocks().empty())
        throw std::invalid_argument("check_zd_guarantee: no used block");
    if (x.unused_blocks().empty())
        throw std::invalid_argument("check_zd_guarantee: no unused block");

    GuaranteeReport report;
    const SignalStats stats = signal_stats(x);
    report.mu_b = block_coherence(A);
    report.sigma_min = min_block_singular(A);
    report.x_min_norm = stats.min_used_norm;
    report.noise_norm = noise_norm;
    report.lhs = stats.dynamic_ratio;
    if (report.mu_b == 0.0) {
        // Orthogonal blocks: zero cross-leakage, detection cannot land on a
        // used block. The threshold is taken as +infinity.
        report.rhs = std::numeric_limits<double>::infinity();
        report.holds = true;
        return report;
    }
    report.rhs = 0.5 * (report.sigma_min / report.mu_b + 1.0) -
                 noise_norm / (report.mu_b * report.x_min_norm);
    report.holds = report.lhs < report.rhs;
    return report;
}

}  // namespace lmp
