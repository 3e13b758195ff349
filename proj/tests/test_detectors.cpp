// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "lmp/detectors.hpp"
#include "test_util.hpp"

using namespace lmp;
using namespace testutil;

namespace {

// Identity sensing matrix: blocks have pairwise-orthogonal column spaces.
SensingMatrix identity_matrix(const BlockPartition& p) {
    return SensingMatrix(CMat::Identity(p.total_len(), p.total_len()), p);
}

}  // namespace

TEST_CASE("bomp finds a single orthogonal block immediately") {
    const BlockPartition p(9, {3, 3, 3});
    const SensingMatrix a = identity_matrix(p);
    Rng rng(7);
    CVec x = CVec::Zero(9);
    x.segment(6, 3) = random_cvec(rng, 3);  // block 2 only
    const BompTrace trace = bomp(a, {x, 0.0}, 1);
    CHECK(trace.support_sequence == std::vector<int>{2});
    CHECK(trace.residual_norms.back() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bomp on y = 0: tie-break selects block 0, residual stays 0") {
    const BlockPartition p(9, {3, 3, 3});
    const SensingMatrix a = identity_matrix(p);
    const BompTrace trace = bomp(a, {CVec::Zero(9), 0.0}, 2);
    CHECK(trace.support_sequence == std::vector<int>{0, 1});
    CHECK(trace.correlation_history.maxCoeff() == 0.0);
    CHECK(trace.final_estimate.norm() == 0.0);
    CHECK(trace.residual_norms == std::vector<double>{0.0, 0.0});
}

TEST_CASE("bomp rejects an oversized iteration budget") {
    const SensingMatrix a = identity_matrix(BlockPartition(4, {2, 2}));
    CHECK_THROWS_AS(bomp(a, {CVec::Zero(4), {}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(bomp(a, {CVec::Zero(4), {}}, 0), std::invalid_argument);
}

TEST_CASE("bomp recovers the support under the coherence condition") {
    int tested = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto inst = random_instance(seed ^ 0xb0123, 300, 4, 6, 2, 1.0, 0.0, true);
        const double mu = block_coherence(inst.matrix);
        if (!(2 < 0.5 * (1.0 / mu + 1.0))) continue;  // condition not met, skip
        const BompTrace trace = bomp(inst.matrix, inst.y, 2);
        std::set<int> support(trace.support_sequence.begin(), trace.support_sequence.end());
        std::set<int> used;
        for (int i : inst.signal.used_blocks()) used.insert(i);
        CHECK(support == used);
        ++tested;
    }
    CHECK(tested >= 20);
}

TEST_CASE("bomp residuals: orthogonality and monotone norms (property)") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        auto inst = random_instance(seed ^ 0x5e5e, 24, 3, 6, 3, 10.0, 0.3);
        const int iters = 4;
        const BompTrace trace = bomp(inst.matrix, inst.y, iters);
        const double y_norm = inst.y.values.norm();
        double prev = std::numeric_limits<double>::infinity();
        for (int t = 0; t < iters; ++t) {
            CHECK(trace.residual_norms[static_cast<std::size_t>(t)] <= prev + 1e-12);
            prev = trace.residual_norms[static_cast<std::size_t>(t)];
            // rebuild the residual after iteration t and check A_Omega^H r ~ 0
            std::vector<int> prefix(trace.support_sequence.begin(),
                                    trace.support_sequence.begin() + t + 1);
            const CVec xhat = block_least_squares(inst.matrix, prefix, inst.y.values);
            CVec fitted = CVec::Zero(inst.matrix.rows());
            int col = 0;
            for (int i : prefix) {
                const int w = inst.matrix.partition().block_size(i);
                fitted += inst.matrix.block(i) * xhat.segment(col, w);
                col += w;
            }
            const CVec r = inst.y.values - fitted;
            double max_corr = 0.0;
            for (int i : prefix)
                max_corr = std::max(max_corr, (inst.matrix.block(i).adjoint() * r).norm());
            CHECK(max_corr <= 1e-8 * y_norm);
        }
    }
}

TEST_CASE("bomp early stop halts on a vanished residual") {
    const BlockPartition p(9, {3, 3, 3});
    const SensingMatrix a = identity_matrix(p);
    Rng rng(9);
    CVec x = CVec::Zero(9);
    x.segment(0, 3) = random_cvec(rng, 3);
    BompOptions opts;
    opts.early_stop = true;
    const BompTrace trace = bomp(a, {x, 0.0}, 3, opts);
    CHECK(trace.support_sequence.size() == 1);
    CHECK(trace.correlation_history.rows() == 1);
}

TEST_CASE("zd_groth picks the least correlated block") {
    const BlockPartition p(9, {3, 3, 3});
    const SensingMatrix a = identity_matrix(p);
    Rng rng(13);
    CVec x = CVec::Zero(9);
    x.segment(0, 3) = random_cvec(rng, 3);  // only block 0 active
    const Detection d = zd_groth(a, {x, 0.0});
    CHECK(d.declared_unused == 1);  // blocks 1 and 2 both score 0; lowest wins
    CHECK(d.scores.size() == 3);
    CHECK(d.scores[1] == doctest::Approx(0.0).epsilon(1e-14));

    CHECK(zd_groth(a, {CVec::Zero(9), 0.0}).declared_unused == 0);
}

TEST_CASE("lmp trivial cases") {
    const BlockPartition p(9, {3, 3, 3});
    const SensingMatrix a = identity_matrix(p);
    Rng rng(17);
    CVec x = CVec::Zero(9);
    x.segment(0, 3) = random_cvec(rng, 3);
    SUBCASE("P=1 strips the active block; tie-break picks the next lowest") {
        const Detection d = lmp::lmp(a, {x, 0.0}, 1);
        REQUIRE(d.trace.has_value());
        CHECK(d.trace->support_sequence == std::vector<int>{0});
        CHECK(d.declared_unused == 1);
    }
    SUBCASE("P = B-1 degenerates to the set complement") {
        const Detection d = lmp::lmp(a, {x, 0.0}, 2);
        std::set<int> support(d.trace->support_sequence.begin(),
                              d.trace->support_sequence.end());
        CHECK(support.size() == 2);
        CHECK(!support.count(d.declared_unused));
    }
    SUBCASE("P out of range") {
        CHECK_THROWS_AS(lmp::lmp(a, {x, 0.0}, 0), std::invalid_argument);
        CHECK_THROWS_AS(lmp::lmp(a, {x, 0.0}, 3), std::invalid_argument);
    }
}

TEST_CASE("high dynamic range: lmp succeeds where zd_groth fails (frozen fixture)") {
    // Found by seeded randomized search over this generator family; the seed
    // is frozen so the instance is reproducible.
    const std::uint64_t kFixtureSeed = 1;
    auto inst = random_instance(kFixtureSeed, 18, 3, 6, 3, 1.0 / 31.6227766, 0.05);
    const auto unused = inst.signal.unused_blocks();
    const Detection zd = zd_groth(inst.matrix, inst.y);
    const Detection better = lmp::lmp(inst.matrix, inst.y, 3);
    CHECK(!contains(unused, zd.declared_unused));
    CHECK(contains(unused, better.declared_unused));
}

TEST_CASE("bomp_elimination") {
    SUBCASE("B=2 with an orthogonal active block") {
        const BlockPartition p(4, {2, 2});
        const SensingMatrix a = identity_matrix(p);
        CVec x = CVec::Zero(4);
        x(0) = 1.0;
        const Detection d = bomp_elimination(a, {x, 0.0});
        CHECK(d.declared_unused == 1);
        CHECK(d.trace->support_sequence.size() == 1);
    }
    SUBCASE("B=20 runs 19 iterations and leaves one block") {
        auto inst = random_instance(0xabc, 60, 2, 20, 4, 5.0, 0.1);
        const Detection d = bomp_elimination(inst.matrix, inst.y);
        CHECK(d.trace->support_sequence.size() == 19);
        CHECK(!contains(d.trace->support_sequence, d.declared_unused));
    }
    SUBCASE("matches the complement of a direct bomp run") {
        auto inst = random_instance(0xdef, 30, 3, 8, 3, 4.0, 0.2);
        const Detection d = bomp_elimination(inst.matrix, inst.y);
        const BompTrace trace = bomp(inst.matrix, inst.y, 7);
        CHECK(trace.support_sequence == d.trace->support_sequence);
        for (int i = 0; i < 8; ++i)
            if (!contains(trace.support_sequence, i)) {
                CHECK(d.declared_unused == i);
                break;
            }
    }
}

TEST_CASE("nyquist_min_power") {
    const BlockPartition p(8, {2, 2, 2, 2});
    SUBCASE("an exactly-zero block wins") {
        CVec x = CVec::Ones(8);
        x.segment(4, 2).setZero();
        CHECK(nyquist_min_power(x, p).declared_unused == 2);
    }
    SUBCASE("all-equal norms tie-break to block 0") {
        CHECK(nyquist_min_power(CVec::Ones(8), p).declared_unused == 0);
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(nyquist_min_power(CVec::Ones(7), p), std::invalid_argument);
    }
    SUBCASE("occupied channels 10 dB above the floor are never declared") {
        Rng rng(23);
        const BlockPartition plan = BlockPartition::uniform(40, 10);
        for (int rep = 0; rep < 40; ++rep) {
            CVec x = random_cvec(rng, 40) * 0.1;  // noise floor
            std::set<int> occupied;
            while (occupied.size() < 5) occupied.insert(rng.index(10));
            for (int ch : occupied) {
                CVec s = random_cvec(rng, 4);
                s *= 2.0 / s.norm();  // well above the floor
                x.segment(4 * ch, 4) += s;
            }
            const Detection d = nyquist_min_power(x, plan);
            // exhaustive per-block power check
            int oracle = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 10; ++i) {
                const double pw = x.segment(4 * i, 4).norm();
                if (pw < best) {
                    best = pw;
                    oracle = i;
                }
            }
            CHECK(d.declared_unused == oracle);
            CHECK(!occupied.count(d.declared_unused));
        }
    }
}

TEST_CASE("random_unused") {
    SUBCASE("single block") {
        Rng rng(1);
        CHECK(random_unused(rng, 1).declared_unused == 0);
    }
    SUBCASE("fixed seed reproduces the sequence") {
        Rng a(42), b(42);
        for (int i = 0; i < 100; ++i)
            CHECK(random_unused(a, 20).declared_unused == random_unused(b, 20).declared_unused);
    }
    SUBCASE("empirical distribution is uniform (chi-square at 1%)") {
        Rng rng(77);
        const int draws = 100000, b = 20;
        std::vector<long> counts(b, 0);
        for (int i = 0; i < draws; ++i) ++counts[random_unused(rng, b).declared_unused];
        const double expected = double(draws) / b;
        double chi2 = 0.0;
        for (long c : counts) chi2 += (c - expected) * (c - expected) / expected;
        CHECK(chi2 < 36.191);  // chi2 quantile, 19 dof, 1% level
    }
}

TEST_CASE("check_zd_guarantee") {
    SUBCASE("orthonormal equal-power noiseless reduces to the coherence condition") {
        for (std::uint64_t seed = 100; seed < 120; ++seed) {
            auto inst = random_instance(seed, 64, 4, 5, 2, 1.0, 0.0, true);
            const GuaranteeReport rep =
                check_zd_guarantee(inst.matrix, inst.signal, 0.0);
            CHECK(rep.lhs == doctest::Approx(2.0).epsilon(1e-10));  // K equal-power blocks
            CHECK(rep.sigma_min == doctest::Approx(1.0).epsilon(1e-8));
            const bool coherence_condition = 2.0 < 0.5 * (1.0 / rep.mu_b + 1.0);
            // sigma_min = 1 for orthonormal blocks, so rhs matches exactly
            CHECK(rep.holds == coherence_condition);
        }
    }
    SUBCASE("large noise defeats the guarantee") {
        auto inst = random_instance(3, 64, 4, 5, 2, 1.0, 0.0, true);
        const GuaranteeReport clean = check_zd_guarantee(inst.matrix, inst.signal, 0.0);
        const GuaranteeReport noisy = check_zd_guarantee(inst.matrix, inst.signal, 1e6);
        CHECK(noisy.rhs < clean.rhs);
        CHECK(!noisy.holds);
    }
    SUBCASE("orthogonal blocks: zero coherence convention") {
        const BlockPartition p(6, {3, 3});
        CVec x = CVec::Zero(6);
        x(0) = 1.0;
        const GuaranteeReport rep = check_zd_guarantee(
            identity_matrix(p), BlockSparseSignal(x, p, 0.0), 0.5);
        CHECK(rep.mu_b == doctest::Approx(0.0));
        CHECK(rep.holds);
    }
    SUBCASE("degenerate signals are rejected") {
        const BlockPartition p(6, {3, 3});
        const SensingMatrix a = identity_matrix(p);
        CHECK_THROWS_AS(check_zd_guarantee(a, BlockSparseSignal(CVec::Zero(6), p, 1e-6), 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(check_zd_guarantee(a, BlockSparseSignal(CVec::Ones(6), p, 0.0), 0.0),
                        std::invalid_argument);
    }
    SUBCASE("soundness: holds implies an unused declaration (property)") {
        int holds_count = 0;
        for (std::uint64_t seed = 0; seed < 400; ++seed) {
            auto inst = random_instance(seed ^ 0xfeed, 48, 3, 6, 1 + seed % 3, 1.5,
                                        0.01 * (seed % 5), true);
            const GuaranteeReport rep =
                check_zd_guarantee(inst.matrix, inst.signal, *inst.y.noise_norm);
            if (!rep.holds) continue;
            ++holds_count;
            CHECK(contains(inst.signal.unused_blocks(),
                           zd_groth(inst.matrix, inst.y).declared_unused));
        }
        CHECK(holds_count >= 30);  // the corpus must actually exercise the guarantee
    }
}

TEST_CASE("appendix bound inequalities (property)") {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        auto inst = random_instance(seed ^ 0xcafe, 36, 3, 6, 2 + seed % 2, 3.0,
                                    0.05 * (seed % 4));
        const SignalStats stats = signal_stats(inst.signal);
        const double mu = block_coherence(inst.matrix);
        const double sigma_min = min_block_singular(inst.matrix);
        const double noise = *inst.y.noise_norm;
        double sum_norms = 0.0;
        for (const auto& [_, n] : stats.used_norms) sum_norms += n;

        double min_unused = std::numeric_limits<double>::infinity();
        for (int i : inst.signal.unused_blocks())
            min_unused = std::min(min_unused, block_correlation(inst.matrix, i, inst.y.values));
        CHECK(min_unused <= mu * sum_norms + noise + 1e-8);

        double min_used = std::numeric_limits<double>::infinity();
        for (int j : inst.signal.used_blocks())
            min_used = std::min(min_used, block_correlation(inst.matrix, j, inst.y.values));
        CHECK(min_used >= sigma_min * stats.min_used_norm - mu * sum_norms +
                              mu * stats.min_used_norm - noise - 1e-8);
    }
}

TEST_CASE("detections are deterministic and scale-invariant") {
    auto inst = random_instance(0x1234, 30, 3, 8, 3, 8.0, 0.2);
    const Detection zd1 = zd_groth(inst.matrix, inst.y);
    const Detection zd2 = zd_groth(inst.matrix, inst.y);
    CHECK(zd1.declared_unused == zd2.declared_unused);
    CHECK(zd1.scores == zd2.scores);
    const Detection l1 = lmp::lmp(inst.matrix, inst.y, 3);
    CHECK(l1.declared_unused == lmp::lmp(inst.matrix, inst.y, 3).declared_unused);

    // scaling a block leaves every decision unchanged
    CMat scaled = inst.matrix.entries();
    scaled.middleCols(inst.matrix.partition().block_offset(2), 3) *= 42.0;
    const SensingMatrix sm(scaled, inst.matrix.partition());
    CHECK(zd_groth(sm, inst.y).declared_unused == zd1.declared_unused);
    CHECK(lmp::lmp(sm, inst.y, 3).declared_unused == l1.declared_unused);
    CHECK(bomp_elimination(sm, inst.y).declared_unused ==
          bomp_elimination(inst.matrix, inst.y).declared_unused);
}
