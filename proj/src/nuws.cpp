// SPDX-License-Identifier: Apache-2.0
#include "lmp/nuws.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lmp/rng.hpp"

namespace lmp {

std::vector<int> haar_wavelet(const WaveletParams& p, int n) {
    if (n < 1 || p.tau < 0 || p.tau >= n || p.rho < 1 || p.tau + p.rho > n || p.half_period < 1)
        throw std::invalid_argument("haar_wavelet: invalid params");
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < p.rho; ++k)
        w[static_cast<std::size_t>(p.tau + k)] = (k / p.half_period) % 2 == 0 ? 1 : -1;
    return w;
}

WaveletDictionary build_dictionary(int n, int tau_step, const std::vector<int>& rho_set,
                                   const std::vector<int>& halfperiod_set,
                                   std::optional<int> cap) {
    if (n < 1 || tau_step < 1)
        throw std::invalid_argument("build_dictionary: invalid n or tau_step");
    std::vector<int> rhos = rho_set;
    std::vector<int> halves = halfperiod_set;
    std::sort(rhos.begin(), rhos.end());
    std::sort(halves.begin(), halves.end());

    std::vector<std::vector<int>> rows;
    std::vector<WaveletParams> params;
    std::set<std::vector<int>> seen;
    for (int rho : rhos) {
        if (rho < 1 || rho > n)
            throw std::invalid_argument("build_dictionary: pulse width out of range");
        for (int h : halves) {
            if (h < 1) throw std::invalid_argument("build_dictionary: half period must be >= 1");
            for (int tau = 0; tau + rho <= n; tau += tau_step) {
                WaveletParams p{tau, rho, h};
                std::vector<int> w = haar_wavelet(p, n);
                if (!seen.insert(w).second) continue;  // exact duplicate row
                rows.push_back(std::move(w));
                params.push_back(p);
                if (cap && static_cast<int>(params.size()) >= *cap) goto done;
            }
        }
    }
done:
    if (params.empty()) throw std::invalid_argument("build_dictionary: empty grid");

    WaveletDictionary dict;
    dict.n = n;
    dict.params = std::move(params);
    dict.rows.resize(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t l = 0; l < rows.size(); ++l)
        for (int k = 0; k < n; ++k)
            dict.rows(static_cast<Eigen::Index>(l), k) = rows[l][static_cast<std::size_t>(k)];
    return dict;
}

CMat unitary_idft(int n) {
    CMat psi_inv(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double phase = 2.0 * M_PI * static_cast<double>(r) * static_cast<double>(c) /
                                 static_cast<double>(n);
            psi_inv(r, c) = cxd(std::cos(phase) * scale, std::sin(phase) * scale);
        }
    return psi_inv;
}

SensingMatrix effective_matrix(const CMat& theta, int n, const BlockPartition& partition,
                               double rank_tolerance) {
    if (theta.cols() != n || partition.total_len() != n)
        throw std::invalid_argument("effective_matrix: dimension mismatch");
    return SensingMatrix(theta * unitary_idft(n), partition, rank_tolerance);
}

SensingMatrix effective_matrix(const Eigen::MatrixXd& theta, int n,
                               const BlockPartition& partition, double rank_tolerance) {
    return effective_matrix(CMat(theta.cast<cxd>()), n, partition, rank_tolerance);
}

SelectionResult greedy_select(const WaveletDictionary& dict, const BlockPartition& partition,
                              int m, std::optional<int> candidates_per_step,
                              std::uint64_t subsample_seed, double rank_tolerance) {
    const int l = dict.size();
    const int n = dict.n;
    if (m < 1 || m > l)
        throw std::invalid_argument("greedy_select: M must lie in [1, L]");
    if (partition.total_len() != n)
        throw std::invalid_argument("greedy_select: partition length mismatch");

    // Effective rows of every dictionary entry, computed once.
    const CMat effective_rows = dict.rows.cast<cxd>() * unitary_idft(n);

    // Gram matrix of the chosen effective rows; a candidate's Gram is a
    // rank-1 update, which keeps each mu_B evaluation O(N^2) plus the
    // per-block eigensolves.
    CMat gram = CMat::Zero(n, n);
    std::vector<char> taken(static_cast<std::size_t>(l), 0);

    // Orthonormal basis of the chosen rows. Candidates inside the chosen
    // span are skipped: a dependent row adds no information and would leave
    // the final matrix rank deficient.
    Eigen::MatrixXd basis(0, n);
    const auto independent = [&](int r) {
        Eigen::VectorXd v = dict.rows.row(r).transpose();
        if (basis.rows() > 0) v -= basis.transpose() * (basis * v);
        return v.norm() > 1e-10 * dict.rows.row(r).norm();
    };
    const auto extend_basis = [&](int r) {
        Eigen::VectorXd v = dict.rows.row(r).transpose();
        for (int pass = 0; pass < 2; ++pass)  // twice for numerical stability
            if (basis.rows() > 0) v -= basis.transpose() * (basis * v);
        basis.conservativeResize(basis.rows() + 1, n);
        basis.row(basis.rows() - 1) = v.transpose() / v.norm();
    };

    SelectionResult result{
        {}, SensingMatrix(CMat::Ones(1, n), partition, rank_tolerance), {}};
    result.chosen.reserve(static_cast<std::size_t>(m));

    for (int step = 0; step < m; ++step) {
        std::vector<int> candidates;
        if (candidates_per_step && *candidates_per_step < l - step) {
            // Seeded uniform subsample of the remaining rows, one draw set
            // per step.
            Rng rng = Rng::substream(subsample_seed, {0x9d, static_cast<std::uint64_t>(step)});
            std::vector<int> remaining;
            remaining.reserve(static_cast<std::size_t>(l - step));
            for (int r = 0; r < l; ++r)
                if (!taken[static_cast<std::size_t>(r)]) remaining.push_back(r);
            for (int k = 0; k < *candidates_per_step; ++k) {
                const int pick = k + rng.index(static_cast<int>(remaining.size()) - k);
                std::swap(remaining[static_cast<std::size_t>(k)],
                          remaining[static_cast<std::size_t>(pick)]);
            }
            candidates.assign(remaining.begin(), remaining.begin() + *candidates_per_step);
            std::sort(candidates.begin(), candidates.end());
        } else {
            for (int r = 0; r < l; ++r)
                if (!taken[static_cast<std::size_t>(r)]) candidates.push_back(r);
        }

        int best_row = -1;
        double best_mu = std::numeric_limits<double>::infinity();
        const auto scan = [&](const std::vector<int>& rows) {
            for (int r : rows) {
                if (!independent(r)) continue;
                const CVec row = effective_rows.row(r).transpose();
                const CMat cand_gram = gram + row.conjugate() * row.transpose();
                const double mu =
                    block_coherence_from_gram(cand_gram, partition, rank_tolerance);
                if (mu < best_mu) {  // strict: ties resolve to the lowest row index
                    best_mu = mu;
                    best_row = r;
                }
            }
        };
        scan(candidates);
        if (best_row < 0 && candidates_per_step && *candidates_per_step < l - step) {
            // the subsample held only dependent rows; fall back to a full scan
            std::vector<int> remaining;
            for (int r = 0; r < l; ++r)
                if (!taken[static_cast<std::size_t>(r)]) remaining.push_back(r);
            scan(remaining);
        }
        if (best_row < 0)
            throw std::invalid_argument("greedy_select: dictionary rank exhausted before M rows");

        extend_basis(best_row);
        taken[static_cast<std::size_t>(best_row)] = 1;
        result.chosen.push_back(best_row);
        const CVec row = effective_rows.row(best_row).transpose();
        gram += row.conjugate() * row.transpose();
        result.coherence_trajectory.push_back(best_mu);
    }

    CMat a(m, n);
    for (int k = 0; k < m; ++k)
        a.row(k) = effective_rows.row(result.chosen[static_cast<std::size_t>(k)]);
    result.matrix = SensingMatrix(std::move(a), partition, rank_tolerance);
    return result;
}

}  // namespace lmp
