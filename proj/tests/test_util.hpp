// SPDX-License-Identifier: Apache-2.0
//
// Shared test helpers: seeded random instances and independent brute-force
// oracles (kept free of the library's computation paths).
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <vector>

#include "lmp/blocksparse.hpp"
#include "lmp/rng.hpp"

namespace testutil {

using lmp::BlockPartition;
using lmp::CMat;
using lmp::CVec;
using lmp::cxd;
using lmp::Rng;

inline CMat random_complex(Rng& rng, int rows, int cols) {
    CMat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = cxd(rng.normal(), rng.normal());
    return m;
}

inline CVec random_cvec(Rng& rng, int len) {
    CVec v(len);
    for (int k = 0; k < len; ++k) v(k) = cxd(rng.normal(), rng.normal());
    return v;
}

// Orthonormalizes the columns of each block (thin Q of a QR factorization).
inline CMat orthonormal_blocks(const CMat& a, const BlockPartition& p) {
    CMat out = a;
    for (int i = 0; i < p.num_blocks(); ++i) {
        const int off = p.block_offset(i), w = p.block_size(i);
        Eigen::HouseholderQR<CMat> qr(a.middleCols(off, w));
        out.middleCols(off, w) =
            qr.householderQ() * CMat::Identity(a.rows(), w);
    }
    return out;
}

// Oracle: pseudo-inverse square root of A_i^H A_i via SVD of the block
// itself, independent of the library's eigendecomposition route.
inline CMat oracle_whitening(const CMat& block, double tol = 1e-10) {
    Eigen::JacobiSVD<CMat> svd(block, Eigen::ComputeThinV);
    const Eigen::VectorXd s = svd.singularValues();
    Eigen::VectorXd inv(s.size());
    const double floor = s(0) * std::sqrt(tol);
    for (Eigen::Index k = 0; k < s.size(); ++k) inv(k) = s(k) > floor ? 1.0 / s(k) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixV().adjoint();
}

inline double oracle_spectral_norm(const CMat& m) {
    return Eigen::JacobiSVD<CMat>(m).singularValues()(0);
}

// Oracle: exhaustive scan of all ordered block pairs.
inline double oracle_block_coherence(const CMat& a, const BlockPartition& p) {
    double mu = 0.0;
    for (int i = 0; i < p.num_blocks(); ++i) {
        const CMat ai = a.middleCols(p.block_offset(i), p.block_size(i));
        const CMat wi = oracle_whitening(ai);
        for (int j = 0; j < p.num_blocks(); ++j) {
            if (i == j) continue;
            const CMat aj = a.middleCols(p.block_offset(j), p.block_size(j));
            mu = std::max(mu, oracle_spectral_norm(wi * (ai.adjoint() * aj)));
        }
    }
    return mu;
}

inline double oracle_block_correlation(const CMat& a, const BlockPartition& p, int i,
                                       const CVec& r) {
    const CMat ai = a.middleCols(p.block_offset(i), p.block_size(i));
    return (oracle_whitening(ai) * (ai.adjoint() * r)).norm();
}

inline bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

struct RandomInstance {
    lmp::SensingMatrix matrix;
    lmp::BlockSparseSignal signal;
    lmp::MeasurementVector y;
};

// Random block-sparse instance: Gaussian matrix, K used blocks with norms
// spanning `dynamic_range` (multiplicative), additive noise of the given
// norm. Everything derives from the seed.
inline RandomInstance random_instance(std::uint64_t seed, int m, int block_width,
                                      int num_blocks, int k, double dynamic_range,
                                      double noise_norm, bool orthonormalize = false) {
    Rng rng(lmp::splitmix64(seed));
    const int n = block_width * num_blocks;
    const BlockPartition p = BlockPartition::uniform(n, num_blocks);
    CMat a = random_complex(rng, m, n);
    if (orthonormalize) a = orthonormal_blocks(a, p);

    std::vector<int> blocks(static_cast<std::size_t>(num_blocks));
    for (int i = 0; i < num_blocks; ++i) blocks[static_cast<std::size_t>(i)] = i;
    for (int t = 0; t < k; ++t)
        std::swap(blocks[static_cast<std::size_t>(t)],
                  blocks[static_cast<std::size_t>(t + rng.index(num_blocks - t))]);

    CVec x = CVec::Zero(n);
    for (int t = 0; t < k; ++t) {
        CVec u = random_cvec(rng, block_width);
        const double scale = std::pow(dynamic_range, t / std::max(1.0, k - 1.0));
        u *= scale / u.norm();
        x.segment(p.block_offset(blocks[static_cast<std::size_t>(t)]), block_width) = u;
    }
    CVec noise = CVec::Zero(m);
    if (noise_norm > 0.0) {
        noise = random_cvec(rng, m);
        noise *= noise_norm / noise.norm();
    }
    lmp::BlockSparseSignal signal(x, p, 0.0);
    lmp::MeasurementVector y{a * x + noise, noise.norm()};
    return RandomInstance{lmp::SensingMatrix(std::move(a), p), std::move(signal), std::move(y)};
}

// Oracle: minimum-norm least squares via explicit SVD pseudo-inverse.
inline CVec oracle_pinv_solve(const CMat& a, const CVec& y) {
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = svd.singularValues();
    Eigen::VectorXd inv(s.size());
    const double floor = s(0) * 1e-12;
    for (Eigen::Index k = 0; k < s.size(); ++k) inv(k) = s(k) > floor ? 1.0 / s(k) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().adjoint() * y);
}

}  // namespace testutil
