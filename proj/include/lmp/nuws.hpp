// SPDX-License-Identifier: Apache-2.0
//
// Non-uniform wavelet sampling: Haar-like {-1,0,+1} pulse dictionary,
// DFT-domain effective sensing matrices, and greedy coherence-minimizing
// row selection.
#pragma once

#include <optional>
#include <vector>

#include "lmp/blocksparse.hpp"

namespace lmp {

struct WaveletParams {
    int tau = 0;          // sample offset in [0, N)
    int rho = 1;          // pulse width in [1, N - tau]
    int half_period = 1;  // square-wave half period, >= 1

    bool operator==(const WaveletParams&) const = default;
};

struct WaveletDictionary {
    Eigen::MatrixXd rows;               // L x N, entries in {-1, 0, +1}
    std::vector<WaveletParams> params;  // one per row
    int n = 0;

    int size() const { return static_cast<int>(params.size()); }
};

struct SelectionResult {
    std::vector<int> chosen;                  // ordered dictionary row indices
    SensingMatrix matrix;                     // effective M x N sensing matrix
    std::vector<double> coherence_trajectory; // mu_B after each greedy step
};

// Windowed square wave: zero outside [tau, tau+rho), +1/-1 alternating every
// half_period samples inside.
std::vector<int> haar_wavelet(const WaveletParams& p, int n);

// Cartesian grid over (tau, rho, half_period), lexicographic in
// (rho, half_period, tau), with out-of-support params and exact duplicate
// rows discarded; truncated keep-first at `cap` rows when supplied.
WaveletDictionary build_dictionary(int n, int tau_step, const std::vector<int>& rho_set,
                                   const std::vector<int>& halfperiod_set,
                                   std::optional<int> cap = std::nullopt);

// Effective sensing matrix A = Theta * Psi^-1 with Psi the unitary N-point
// DFT.
SensingMatrix effective_matrix(const CMat& theta, int n, const BlockPartition& partition,
                               double rank_tolerance = 1e-10);
SensingMatrix effective_matrix(const Eigen::MatrixXd& theta, int n,
                               const BlockPartition& partition, double rank_tolerance = 1e-10);

// Unitary inverse DFT matrix (conjugate transpose of the unitary DFT).
CMat unitary_idft(int n);

// Greedy mu_B-minimizing subset selection. Each step scans either all
// remaining rows or a seeded uniform subsample of candidates_per_step of
// them, keeps the candidate whose effective matrix has the lowest block
// mutual coherence (ties to the lowest row index), and repeats until M rows
// are chosen.
SelectionResult greedy_select(const WaveletDictionary& dict, const BlockPartition& partition,
                              int m, std::optional<int> candidates_per_step = std::nullopt,
                              std::uint64_t subsample_seed = 0,
                              double rank_tolerance = 1e-10);

}  // namespace lmp
