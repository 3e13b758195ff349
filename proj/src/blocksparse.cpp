// SPDX-License-Identifier: Apache-2.0
#include "lmp/blocksparse.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lmp {

namespace {

bool all_finite(const CMat& m) {
    return m.real().allFinite() && m.imag().allFinite();
}

// Spectral norm of a small dense matrix, via the largest eigenvalue of the
// Hermitian product (cheaper than a full SVD at these sizes).
double spectral_norm(const CMat& m) {
    const CMat g = m.rows() <= m.cols() ? CMat(m * m.adjoint()) : CMat(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<CMat> eig(g);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("spectral_norm: eigendecomposition failed");
    return std::sqrt(std::max(0.0, eig.eigenvalues()(eig.eigenvalues().size() - 1)));
}

CMat whitening_from_gram(const CMat& gram, double rank_tolerance) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(gram);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("whitening_factor: eigendecomposition failed");
    const Eigen::VectorXd d = eig.eigenvalues();
    const double d_max = d.maxCoeff();
    if (d_max <= 0.0)
        throw std::invalid_argument("whitening_factor: degenerate block");
    Eigen::VectorXd inv_sqrt(d.size());
    const double floor = rank_tolerance * d_max;
    for (Eigen::Index k = 0; k < d.size(); ++k)
        inv_sqrt(k) = d(k) > floor ? 1.0 / std::sqrt(d(k)) : 0.0;
    return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

BlockPartition::BlockPartition(int total_len, std::vector<int> block_sizes)
    : total_len_(total_len), sizes_(std::move(block_sizes)) {
    if (sizes_.size() < 2)
        throw std::invalid_argument("BlockPartition: needs at least 2 blocks");
    int sum = 0;
    offsets_.reserve(sizes_.size());
    for (int s : sizes_) {
        if (s < 1) throw std::invalid_argument("BlockPartition: block size must be >= 1");
        offsets_.push_back(sum);
        sum += s;
    }
    if (sum != total_len_)
        throw std::invalid_argument("BlockPartition: block sizes must sum to total length");
}

BlockPartition BlockPartition::uniform(int total_len, int num_blocks) {
    if (num_blocks < 2 || total_len % num_blocks != 0)
        throw std::invalid_argument("BlockPartition::uniform: length not divisible by block count");
    return BlockPartition(total_len,
                          std::vector<int>(static_cast<std::size_t>(num_blocks),
                                           total_len / num_blocks));
}

BlockSparseSignal::BlockSparseSignal(CVec values, BlockPartition partition, double zero_tolerance)
    : values_(std::move(values)), partition_(std::move(partition)),
      zero_tolerance_(zero_tolerance) {
    if (values_.size() != partition_.total_len())
        throw std::invalid_argument("BlockSparseSignal: length mismatch with partition");
    if (zero_tolerance_ < 0.0) {
        double max_norm = 0.0;
        for (int i = 0; i < partition_.num_blocks(); ++i)
            max_norm = std::max(max_norm, block_norm(i));
        zero_tolerance_ = 1e-12 * max_norm;
    }
}

double BlockSparseSignal::block_norm(int i) const {
    return values_.segment(partition_.block_offset(i), partition_.block_size(i)).norm();
}

std::vector<int> BlockSparseSignal::used_blocks() const {
    std::vector<int> out;
    for (int i = 0; i < partition_.num_blocks(); ++i)
        if (block_norm(i) > zero_tolerance_) out.push_back(i);
    return out;
}

std::vector<int> BlockSparseSignal::unused_blocks() const {
    std::vector<int> out;
    for (int i = 0; i < partition_.num_blocks(); ++i)
        if (!(block_norm(i) > zero_tolerance_)) out.push_back(i);
    return out;
}

SensingMatrix::SensingMatrix(CMat entries, BlockPartition partition, double rank_tolerance)
    : entries_(std::move(entries)), partition_(std::move(partition)),
      rank_tolerance_(rank_tolerance),
      cache_(static_cast<std::size_t>(partition_.num_blocks())),
      cached_(static_cast<std::size_t>(partition_.num_blocks()), 0),
      cache_mutex_(std::make_unique<std::mutex>()) {
    if (entries_.rows() < 1)
        throw std::invalid_argument("SensingMatrix: needs at least one row");
    if (entries_.cols() != partition_.total_len())
        throw std::invalid_argument("SensingMatrix: column count mismatch with partition");
    if (!(rank_tolerance_ > 0.0 && rank_tolerance_ < 1.0))
        throw std::invalid_argument("SensingMatrix: rank_tolerance must lie in (0, 1)");
}

SensingMatrix::SensingMatrix(const SensingMatrix& o)
    : entries_(o.entries_), partition_(o.partition_), rank_tolerance_(o.rank_tolerance_),
      cache_(o.cache_), cached_(o.cached_), cache_mutex_(std::make_unique<std::mutex>()) {}

SensingMatrix& SensingMatrix::operator=(const SensingMatrix& o) {
    if (this != &o) {
        entries_ = o.entries_;
        partition_ = o.partition_;
        rank_tolerance_ = o.rank_tolerance_;
        cache_ = o.cache_;
        cached_ = o.cached_;
        cache_mutex_ = std::make_unique<std::mutex>();
    }
    return *this;
}

const CMat& SensingMatrix::whitening(int i) const {
    if (i < 0 || i >= num_blocks())
        throw std::out_of_range("SensingMatrix::whitening: block index out of range");
    const auto idx = static_cast<std::size_t>(i);
    {
        std::lock_guard<std::mutex> lock(*cache_mutex_);
        if (cached_[idx]) return cache_[idx];
    }
    CMat w = whitening_factor(block(i), rank_tolerance_);
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    if (!cached_[idx]) {
        cache_[idx] = std::move(w);
        cached_[idx] = 1;
    }
    return cache_[idx];
}

CMat whitening_factor(const CMat& block, double rank_tolerance) {
    if (block.rows() == 0 || block.cols() == 0)
        throw std::invalid_argument("whitening_factor: empty block");
    if (!(rank_tolerance > 0.0 && rank_tolerance < 1.0))
        throw std::invalid_argument("whitening_factor: rank_tolerance must lie in (0, 1)");
    if (!all_finite(block))
        throw std::invalid_argument("whitening_factor: non-finite entries");
    if (block.norm() == 0.0)
        throw std::invalid_argument("whitening_factor: degenerate block");
    return whitening_from_gram(block.adjoint() * block, rank_tolerance);
}

double block_correlation(const SensingMatrix& A, int i, const CVec& r) {
    if (i < 0 || i >= A.num_blocks())
        throw std::out_of_range("block_correlation: block index out of range");
    if (r.size() != A.rows())
        throw std::invalid_argument("block_correlation: residual length mismatch");
    return (A.whitening(i) * (A.block(i).adjoint() * r)).norm();
}

double block_coherence_from_gram(const CMat& gram, const BlockPartition& partition,
                                 double rank_tolerance) {
    const int b = partition.num_blocks();
    if (b < 2) throw std::invalid_argument("block_coherence: needs at least 2 blocks");
    std::vector<CMat> whitening(static_cast<std::size_t>(b));
    for (int i = 0; i < b; ++i) {
        const CMat g = gram.block(partition.block_offset(i), partition.block_offset(i),
                                  partition.block_size(i), partition.block_size(i));
        if (g.norm() == 0.0)
            throw std::invalid_argument("block_coherence: degenerate block");
        whitening[static_cast<std::size_t>(i)] = whitening_from_gram(g, rank_tolerance);
    }
    // The definition is asymmetric in (i, j): both orders are scanned.
    double mu = 0.0;
    for (int i = 0; i < b; ++i) {
        for (int j = 0; j < b; ++j) {
            if (i == j) continue;
            const CMat cross = gram.block(partition.block_offset(i), partition.block_offset(j),
                                          partition.block_size(i), partition.block_size(j));
            mu = std::max(mu, spectral_norm(whitening[static_cast<std::size_t>(i)] * cross));
        }
    }
    return mu;
}

double block_coherence(const SensingMatrix& A) {
    return block_coherence_from_gram(A.entries().adjoint() * A.entries(), A.partition(),
                                     A.rank_tolerance());
}

double min_block_singular(const SensingMatrix& A) {
    double s_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < A.num_blocks(); ++i) {
        if (A.partition().block_size(i) > A.rows()) return 0.0;
        const Eigen::VectorXd sv = Eigen::JacobiSVD<CMat>(A.block(i)).singularValues();
        s_min = std::min(s_min, sv(sv.size() - 1));
    }
    return s_min;
}

CVec block_least_squares(const SensingMatrix& A, const std::vector<int>& support, const CVec& y) {
    if (support.empty())
        throw std::invalid_argument("block_least_squares: empty support");
    if (y.size() != A.rows())
        throw std::invalid_argument("block_least_squares: measurement length mismatch");
    std::vector<int> seen(static_cast<std::size_t>(A.num_blocks()), 0);
    int total_cols = 0;
    for (int i : support) {
        if (i < 0 || i >= A.num_blocks())
            throw std::out_of_range("block_least_squares: block index out of range");
        if (seen[static_cast<std::size_t>(i)]++)
            throw std::invalid_argument("block_least_squares: duplicate block index");
        total_cols += A.partition().block_size(i);
    }
    CMat a_sub(A.rows(), total_cols);
    int col = 0;
    for (int i : support) {
        a_sub.middleCols(col, A.partition().block_size(i)) = A.block(i);
        col += A.partition().block_size(i);
    }
    return a_sub.completeOrthogonalDecomposition().solve(y);
}

SignalStats signal_stats(const BlockSparseSignal& x) {
    SignalStats stats;
    double sum = 0.0;
    double min_norm = std::numeric_limits<double>::infinity();
    for (int i : x.used_blocks()) {
        const double n = x.block_norm(i);
        stats.used_norms[i] = n;
        sum += n;
        min_norm = std::min(min_norm, n);
    }
    if (stats.used_norms.empty())
        throw std::invalid_argument("signal_stats: no used blocks");
    stats.min_used_norm = min_norm;
    stats.dynamic_ratio = sum / min_norm;
    return stats;
}

}  // namespace lmp
