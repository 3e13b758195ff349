// SPDX-License-Identifier: Apache-2.0
//
// Whitespace detectors: BOMP, ZD-GroTh, LMP, the BOMP-elimination and
// Nyquist/random baselines, and the detection-guarantee check.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmp/blocksparse.hpp"
#include "lmp/rng.hpp"

namespace lmp {

// Full history of a BOMP run. Row t of correlation_history holds the B
// correlations computed at iteration t+1; support_sequence grows by exactly
// one block per iteration.
struct BompTrace {
    std::vector<int> support_sequence;
    Eigen::MatrixXd correlation_history;  // iterations x B
    CVec final_estimate;                  // coefficients over the final support
    std::vector<double> residual_norms;   // ||r^t||_2 after each refit
};

struct BompOptions {
    // When set, stops as soon as the residual norm drops below
    // 1e-12 * ||y||_2. Off by default: the iteration count is the budget.
    bool early_stop = false;
};

enum class Method { zd_groth, lmp, bomp_elimination, nyquist, random };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

struct Detection {
    int declared_unused = 0;  // block index declared as whitespace
    Method method = Method::zd_groth;
    std::optional<BompTrace> trace;
    std::vector<double> scores;  // per-block decision scores
};

struct GuaranteeReport {
    double lhs = 0.0;   // dynamic-range ratio
    double rhs = 0.0;   // (1/2)(sigma_min/mu_B + 1) - ||n|| / (mu_B ||x_min||)
    bool holds = false; // lhs < rhs, strict
    double mu_b = 0.0;
    double sigma_min = 0.0;
    double x_min_norm = 0.0;
    double noise_norm = 0.0;
};

// Block orthogonal matching pursuit: per iteration, whitened correlations
// over all blocks, argmax selection (ties to the lowest index), least-squares
// refit over the grown support, residual update.
BompTrace bomp(const SensingMatrix& A, const MeasurementVector& y, int iterations,
               const BompOptions& options = {});

// Declares unused the block with the smallest whitened correlation with y.
Detection zd_groth(const SensingMatrix& A, const MeasurementVector& y);

// Runs BOMP for P iterations, then declares unused the unselected block with
// the smallest cumulative correlation over all P iterations.
Detection lmp(const SensingMatrix& A, const MeasurementVector& y, int p);

// Runs BOMP for B-1 iterations (or the supplied count) and declares unused
// the lowest-index block never selected.
Detection bomp_elimination(const SensingMatrix& A, const MeasurementVector& y,
                           int iterations = -1);

// Nyquist-rate baseline: declares unused the block of the frequency-domain
// vector with the lowest power.
Detection nyquist_min_power(const CVec& x_full, const BlockPartition& partition);

// Uniform random guess.
Detection random_unused(Rng& rng, int num_blocks);

// Evaluates the sufficient detection-success condition. Convention for
// mu_B = 0 (orthogonal blocks): holds whenever an unused block exists.
GuaranteeReport check_zd_guarantee(const SensingMatrix& A, const BlockSparseSignal& x,
                                   double noise_norm);

}  // namespace lmp
