#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oddcycle/error.hpp"
#include "oddcycle/parallel.hpp"
#include "oddcycle/spectral.hpp"
#include "oracles.hpp"

using namespace oddcycle;

TEST(SpectralProfile, CompleteGraph) {
    const SpectralProfile s = spectral_profile(complete_graph(4));
    EXPECT_NEAR(s.lambda1, 3.0, 1e-12);
    EXPECT_NEAR(s.lambda, 1.0, 1e-9);
    EXPECT_NEAR(s.lambda2, -1.0, 1e-9);
    EXPECT_NEAR(s.lambda_min, -1.0, 1e-9);
    EXPECT_TRUE(s.regular);
}

TEST(SpectralProfile, FiveCycle) {
    // Spectrum {2, 0.618 (x2), -1.618 (x2)}: lambda2 = 2cos(2pi/5) but the
    // smallest eigenvalue dominates in absolute value.
    const SpectralProfile s = spectral_profile(cycle_graph(5));
    EXPECT_NEAR(s.lambda2, 2.0 * std::cos(2.0 * std::numbers::pi / 5.0), 1e-8);
    EXPECT_NEAR(s.lambda_min, -2.0 * std::cos(std::numbers::pi / 5.0), 1e-8);
    EXPECT_NEAR(s.lambda, 2.0 * std::cos(std::numbers::pi / 5.0), 1e-8);
    EXPECT_NEAR(s.lambda, oracle::dense_lambda(cycle_graph(5)), 1e-8);
}

TEST(SpectralProfile, Paley13) {
    const SpectralProfile s = spectral_profile(gen_paley(13));
    EXPECT_NEAR(s.lambda, (1.0 + std::sqrt(13.0)) / 2.0, 1e-8);
    EXPECT_NEAR(s.lambda, oracle::dense_lambda(gen_paley(13)), 1e-8);
}

TEST(SpectralProfile, MatchesDenseOracleOnCorpus) {
    std::vector<Graph> corpus{petersen_graph(), path_graph(7), cycle_graph(8), complete_graph(2)};
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        corpus.push_back(oracle::random_gnp(10 + 2 * seed, 0.3, seed));
        corpus.push_back(gen_random_regular(20 + 2 * seed, 3 + seed % 4, seed));
    }
    // Disconnected instances: repeated top eigenvalue and isolated vertices.
    const std::vector<Edge> two_triangles{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    corpus.push_back(Graph::from_edges(6, two_triangles));
    corpus.push_back(Graph::from_edges(9, two_triangles));
    corpus.push_back(Graph::from_edges(5, std::vector<Edge>{}));
    for (const Graph& g : corpus) {
        const auto dense = oracle::dense_spectrum(g);
        const SpectralProfile s = spectral_profile(g);
        EXPECT_NEAR(s.lambda1, dense.front(), 1e-6) << "n=" << g.n();
        EXPECT_NEAR(s.lambda2, dense[1], 1e-6) << "n=" << g.n();
        EXPECT_NEAR(s.lambda_min, dense.back(), 1e-6) << "n=" << g.n();
        EXPECT_GE(s.lambda1, s.lambda2);
        EXPECT_GE(s.lambda2, s.lambda_min);
        EXPECT_LE(s.lambda, s.lambda1 + 1e-12);
    }
}

TEST(SpectralProfile, LargerRegularGraph) {
    const Graph g = gen_random_regular(500, 50, 1);
    const SpectralProfile s = spectral_profile(g);
    EXPECT_DOUBLE_EQ(s.lambda1, 50.0);
    EXPECT_NEAR(s.lambda, oracle::dense_lambda(g), 1e-6);
    EXPECT_LT(s.lambda, 2.0 * std::sqrt(49.0) + 2.0);
}

TEST(SpectralProfile, SingleVertexAndErrors) {
    const SpectralProfile s = spectral_profile(Graph::from_edges(1, std::vector<Edge>{}));
    EXPECT_EQ(s.lambda, 0.0);
    EXPECT_THROW(spectral_profile(Graph{}), ParameterError);
}

TEST(MixingToJumbled, Conversion) {
    const auto a = mixing_to_jumbled(10, 3, 2.0);
    EXPECT_DOUBLE_EQ(a.p, 0.3);
    EXPECT_DOUBLE_EQ(a.beta, 2.0);
    const auto b = mixing_to_jumbled(13, 6, 2.30278);
    EXPECT_DOUBLE_EQ(b.p, 6.0 / 13.0);
    EXPECT_DOUBLE_EQ(b.beta, 2.30278);
    EXPECT_DOUBLE_EQ(mixing_to_jumbled(10, 3, 0.0).beta, 0.0);
    EXPECT_THROW(mixing_to_jumbled(10, 3, -1.0), ParameterError);
}

TEST(CertifyJumbled, CompleteAndEmpty) {
    const auto k4 = certify_jumbled(complete_graph(4), {1.0, 0.0}, CertifyMode::Exhaustive);
    EXPECT_TRUE(k4.passed);
    EXPECT_EQ(k4.worst_ratio, 0.0);
    // 3^4 - 2*2^4 + 1 ordered disjoint pairs plus 2^4 - 1 single sets.
    EXPECT_EQ(k4.pairs_checked, 81U - 32U + 1U + 15U);
    const auto empty = certify_jumbled(Graph::from_edges(6, std::vector<Edge>{}), {0.0, 0.0}, CertifyMode::Exhaustive);
    EXPECT_TRUE(empty.passed);
}

TEST(CertifyJumbled, Paley13PassesWithMixingParams) {
    const Graph g = gen_paley(13);
    const auto r = certify_jumbled(g, {6.0 / 13.0, (1.0 + std::sqrt(13.0)) / 2.0}, CertifyMode::Exhaustive);
    EXPECT_TRUE(r.passed);
    EXPECT_GT(r.worst_ratio, 0.0);
}

TEST(CertifyJumbled, WorstPairMatchesDirectRecomputation) {
    const Graph g = oracle::random_gnp(9, 0.5, 4);
    const JumblednessParams params{0.5, 0.1};
    const auto r = certify_jumbled(g, params, CertifyMode::Exhaustive);
    EXPECT_FALSE(r.passed);
    double ratio = 0.0;
    if (r.worst_x == r.worst_y) {
        const double x = static_cast<double>(r.worst_x.size());
        ratio = std::abs(static_cast<double>(oracle::naive_edges_inside(g, r.worst_x)) - 0.5 * x * (x - 1) / 2) / x;
    } else {
        const double vol = static_cast<double>(r.worst_x.size() * r.worst_y.size());
        ratio = std::abs(static_cast<double>(oracle::naive_edges_between(g, r.worst_x, r.worst_y)) - 0.5 * vol) /
                std::sqrt(vol);
    }
    EXPECT_NEAR(ratio, r.worst_ratio, 1e-12);
}

TEST(CertifyJumbled, MixingLemmaOnRegularGraphs) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 8 + seed % 5;
        const std::size_t d = 2 + seed % 3 + ((n * (2 + seed % 3)) % 2);
        const Graph g = gen_random_regular(n, d, seed);
        const SpectralProfile s = spectral_profile(g);
        const auto r = certify_jumbled(g, mixing_to_jumbled(n, s.d, s.lambda), CertifyMode::Exhaustive);
        EXPECT_TRUE(r.passed) << "seed " << seed << " worst " << r.worst_ratio << " beta " << s.lambda;
    }
}

TEST(CertifyJumbled, SampledNeverExceedsExhaustive) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = oracle::random_gnp(12, 0.4, seed);
        const JumblednessParams params{0.4, 1.0};
        const auto full = certify_jumbled(g, params, CertifyMode::Exhaustive);
        const auto sampled = certify_jumbled(g, params, CertifyMode::Sampled, 500, seed);
        EXPECT_EQ(sampled.pairs_checked, 500U);
        EXPECT_LE(sampled.worst_ratio, full.worst_ratio);
        EXPECT_FALSE(sampled.worst_x.intersects(sampled.worst_y));
    }
}

TEST(CertifyJumbled, SampledIsThreadCountIndependent) {
    const Graph g = gen_random_regular(200, 10, 3);
    set_thread_limit(1);
    const auto one = certify_jumbled(g, {0.05, 3.0}, CertifyMode::Sampled, 2000, 11);
    set_thread_limit(4);
    const auto four = certify_jumbled(g, {0.05, 3.0}, CertifyMode::Sampled, 2000, 11);
    set_thread_limit(0);
    EXPECT_EQ(one.worst_ratio, four.worst_ratio);
    EXPECT_EQ(one.worst_x, four.worst_x);
    EXPECT_EQ(one.worst_y, four.worst_y);
}

TEST(CertifyJumbled, ExhaustiveRefusedAboveCap) {
    EXPECT_THROW(certify_jumbled(gen_paley(17), {0.5, 2.6}, CertifyMode::Exhaustive), ParameterError);
}

TEST(BetaBudget, Examples) {
    EXPECT_NEAR(theorem_beta_budget(std::numbers::e, 1.0, 1, 1.0), std::numbers::e, 1e-12);
    const double expected = std::pow(0.5, 4.0 / 3.0) * 100.0 / std::pow(std::log(100.0), 2.0);
    EXPECT_NEAR(theorem_beta_budget(100, 0.5, 2, 1.0), expected, 1e-12);
    EXPECT_NEAR(theorem_beta_budget(100, 0.5, 2, 1.0), 1.8713, 1e-4);
    EXPECT_EQ(theorem_beta_budget(100, 0.5, 2, 0.0), 0.0);
}

TEST(BetaBudget, MonotoneInGammaAndP) {
    double prev = 0.0;
    for (double gamma = 0.1; gamma < 2.0; gamma += 0.1) {
        const double b = theorem_beta_budget(1000, 0.3, 3, gamma);
        EXPECT_GT(b, prev);
        prev = b;
    }
    prev = 0.0;
    for (double p = 0.05; p <= 1.0; p += 0.05) {
        const double b = theorem_beta_budget(1000, p, 3, 0.5);
        EXPECT_GT(b, prev);
        prev = b;
    }
}
