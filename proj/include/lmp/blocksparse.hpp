// SPDX-License-Identifier: Apache-2.0
//
// Block-partitioned complex linear algebra: partitions, signals, sensing
// matrices, whitened block correlations, coherence metrics, and the
// least-squares solves shared by all detectors.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace lmp {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Contiguous block layout of a length-N vector into B blocks.
class BlockPartition {
public:
    BlockPartition(int total_len, std::vector<int> block_sizes);

    static BlockPartition uniform(int total_len, int num_blocks);

    int total_len() const { return total_len_; }
    int num_blocks() const { return static_cast<int>(sizes_.size()); }
    int block_size(int i) const { return sizes_.at(static_cast<std::size_t>(i)); }
    int block_offset(int i) const { return offsets_.at(static_cast<std::size_t>(i)); }
    const std::vector<int>& block_sizes() const { return sizes_; }

    bool operator==(const BlockPartition& o) const {
        return total_len_ == o.total_len_ && sizes_ == o.sizes_;
    }

private:
    int total_len_;
    std::vector<int> sizes_;
    std::vector<int> offsets_;
};

// Complex length-N frequency-domain vector with a block layout and a block
// l2-norm threshold separating used from unused blocks.
class BlockSparseSignal {
public:
    // zero_tolerance < 0 selects the default: 1e-12 * max block norm.
    BlockSparseSignal(CVec values, BlockPartition partition, double zero_tolerance = -1.0);

    const CVec& values() const { return values_; }
    const BlockPartition& partition() const { return partition_; }
    double zero_tolerance() const { return zero_tolerance_; }

    double block_norm(int i) const;
    std::vector<int> used_blocks() const;
    std::vector<int> unused_blocks() const;

private:
    CVec values_;
    BlockPartition partition_;
    double zero_tolerance_;
};

struct MeasurementVector {
    CVec values;
    std::optional<double> noise_norm;  // realized ||n||_2 when known
};

struct SignalStats {
    std::map<int, double> used_norms;
    double min_used_norm = 0.0;
    double dynamic_ratio = 0.0;  // sum of used norms / min used norm
};

// Complex M x N sensing matrix with block views and a lazily populated
// per-block cache of whitening factors (A_i^H A_i)^(-1/2).
class SensingMatrix {
public:
    SensingMatrix(CMat entries, BlockPartition partition, double rank_tolerance = 1e-10);
    SensingMatrix(const SensingMatrix& o);
    SensingMatrix& operator=(const SensingMatrix& o);
    SensingMatrix(SensingMatrix&&) = default;
    SensingMatrix& operator=(SensingMatrix&&) = default;

    const CMat& entries() const { return entries_; }
    const BlockPartition& partition() const { return partition_; }
    double rank_tolerance() const { return rank_tolerance_; }
    int rows() const { return static_cast<int>(entries_.rows()); }
    int num_blocks() const { return partition_.num_blocks(); }

    Eigen::Block<const CMat> block(int i) const {
        return entries_.block(0, partition_.block_offset(i), entries_.rows(),
                              partition_.block_size(i));
    }

    // Whitening factor for block i, computed on first use and cached.
    // Idempotent under concurrent access.
    const CMat& whitening(int i) const;

private:
    CMat entries_;
    BlockPartition partition_;
    double rank_tolerance_;
    mutable std::vector<CMat> cache_;
    mutable std::vector<char> cached_;
    mutable std::unique_ptr<std::mutex> cache_mutex_;
};

// (A_i^H A_i)^(-1/2) via Hermitian eigendecomposition, with eigenvalues
// below rank_tolerance * d_max treated as zero (pseudo square-root inverse).
CMat whitening_factor(const CMat& block, double rank_tolerance);

// lambda_i = || (A_i^H A_i)^(-1/2) A_i^H r ||_2
double block_correlation(const SensingMatrix& A, int i, const CVec& r);

// mu_B = max over ordered pairs i != j of || (A_i^H A_i)^(-1/2) A_i^H A_j ||_2
double block_coherence(const SensingMatrix& A);

// Same quantity computed from a precomputed Gram matrix G = A^H A.
double block_coherence_from_gram(const CMat& gram, const BlockPartition& partition,
                                 double rank_tolerance);

// min over blocks of the block's smallest singular value (zero when a block
// has more columns than rows).
double min_block_singular(const SensingMatrix& A);

// Minimum-norm least-squares solution over the concatenation of the selected
// blocks (pseudo-inverse semantics).
CVec block_least_squares(const SensingMatrix& A, const std::vector<int>& support, const CVec& y);

// Per-block norms over the used set, the weakest used norm, and the
// dynamic-range ratio (>= number of used blocks, equality iff equal norms).
SignalStats signal_stats(const BlockSparseSignal& x);

}  // namespace lmp
