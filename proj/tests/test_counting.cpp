#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oddcycle/counting.hpp"
#include "oddcycle/error.hpp"
#include "oracles.hpp"

using namespace oddcycle;

namespace {

LayerFrame standard(const BlowupGraph& h) { return LayerFrame::standard(h.k()); }

const VertexSet& layer_of(const BlowupGraph& h, Side side, std::size_t j) {
    return h.layer(standard(h), side, j);
}

// Number of (x, z)-paths found by walking every vertex sequence.
std::size_t naive_paths(const BlowupGraph& h, Side side, const VertexSet& x, Vertex z, std::size_t j) {
    std::size_t count = 0;
    auto rec = [&](auto&& self, Vertex at, std::size_t level) -> void {
        if (level == j) {
            count += at == z;
            return;
        }
        for (Vertex next : layer_of(h, side, level + 1)) {
            if (h.graph().has_edge(at, next)) self(self, next, level + 1);
        }
    };
    for (Vertex v : x) rec(rec, v, 1);
    return count;
}

VertexSet first_half(const VertexSet& s) {
    std::vector<Vertex> out(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2));
    return VertexSet(std::move(out));
}

Graph without_end_edges(const BlowupGraph& h) {
    const auto u = h.layer(standard(h), Side::U, h.k());
    const auto v = h.layer(standard(h), Side::V, h.k());
    std::vector<Edge> keep;
    for (auto [a, b] : h.graph().edges()) {
        const bool end = (u.contains(a) && v.contains(b)) || (u.contains(b) && v.contains(a));
        if (!end) keep.emplace_back(a, b);
    }
    return Graph::from_edges(h.n(), keep);
}

// H plus independent random host edges between U_k and V_k.
Graph host_with_extra_end_edges(const BlowupGraph& h, double prob, std::uint64_t seed) {
    std::vector<Edge> edges = h.graph().edges();
    SplitMix64 rng(seed);
    for (Vertex u : layer_of(h, Side::U, h.k())) {
        for (Vertex v : layer_of(h, Side::V, h.k())) {
            if (!h.graph().has_edge(u, v) && rng.bernoulli(prob)) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(h.n(), edges);
}

}  // namespace

TEST(PathCounts, CompleteBlowup) {
    for (std::size_t ell : {5U, 7U}) {
        const std::size_t m = 3;
        const BlowupGraph h = gen_blowup_cycle(ell, m, 1.0, 1);
        const auto table = path_counts(h, Side::U, layer_of(h, Side::U, 1));
        const std::size_t k = h.k();
        BigCount expected = 1;
        for (std::size_t j = 1; j < k; ++j) expected *= m;
        for (std::size_t i = 0; i < m; ++i) EXPECT_EQ(table.at(k, i), expected);
        EXPECT_FALSE(table.wide);
    }
}

TEST(PathCounts, EmptySeed) {
    const BlowupGraph h = gen_blowup_cycle(5, 4, 1.0, 1);
    const auto table = path_counts(h, Side::V, {});
    for (std::size_t j = 1; j <= 2; ++j) EXPECT_EQ(table.total(j), 0);
}

TEST(PathCounts, MatchesNaiveEnumeration) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const BlowupGraph h = gen_blowup_cycle(7, 10, 0.5, seed);
        for (Side side : {Side::U, Side::V}) {
            const VertexSet x = first_half(layer_of(h, side, 1));
            const auto table = path_counts(h, side, x);
            for (std::size_t j = 1; j <= 3; ++j) {
                const VertexSet& layer = layer_of(h, side, j);
                for (std::size_t i = 0; i < layer.size(); ++i) {
                    EXPECT_EQ(table.at(j, i), naive_paths(h, side, x, layer[i], j));
                }
            }
        }
    }
}

TEST(PathCounts, RejectsSeedOutsideFirstLayer) {
    const BlowupGraph h = gen_blowup_cycle(5, 4, 1.0, 1);
    EXPECT_THROW(path_counts(h, Side::U, layer_of(h, Side::U, 2)), ParameterError);
}

TEST(BucketPartition, CompleteBlowupHasOneBucket) {
    const std::size_t m = 10;
    const BlowupGraph h = gen_blowup_cycle(5, m, 1.0, 1);
    const auto bp = bucket_partition(h, Side::U, layer_of(h, Side::U, 1), 0.25);
    ASSERT_EQ(bp.levels[1].size(), 1U);
    const auto& z = bp.levels[1].front();
    EXPECT_EQ(z.prefix[1], static_cast<std::uint32_t>(std::ceil(std::log(10.0) / std::log(1.25))));
    EXPECT_EQ(z.members, layer_of(h, Side::U, 2));
    EXPECT_EQ(bp.l_eta, static_cast<std::size_t>(std::ceil(std::log(20.0) / std::log(1.25))) + 1);
    EXPECT_TRUE(bp.indices_within_l);
    EXPECT_TRUE(bp.index_power_within_8pm);
}

TEST(BucketPartition, EmptySeed) {
    const BlowupGraph h = gen_blowup_cycle(7, 6, 1.0, 1);
    const auto bp = bucket_partition(h, Side::V, {}, 0.5);
    for (const auto& level : bp.levels) EXPECT_TRUE(level.empty());
    EXPECT_EQ(pq_sums(bp).p, 0.0);
    EXPECT_EQ(pq_sums(bp).q, 0.0);
}

TEST(BucketPartition, DefinitionAndPartitionAudit) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const BlowupGraph h = gen_blowup_cycle(7, 12, 0.4 + 0.1 * static_cast<double>(seed % 3), seed);
        const double eta = seed % 2 ? 0.1 : 0.5;
        const VertexSet x = first_half(layer_of(h, Side::U, 1));
        const auto bp = bucket_partition(h, Side::U, x, eta);
        const auto table = path_counts(h, Side::U, x);
        for (std::size_t j = 2; j <= 3; ++j) {
            std::map<std::size_t, std::set<Vertex>> by_parent;
            std::set<Vertex> covered;
            for (const ZSet& z : bp.levels[j - 1]) {
                const ZSet& parent = bp.levels[j - 2][z.parent];
                ASSERT_EQ(std::vector<std::uint32_t>(z.prefix.begin(), z.prefix.end() - 1), parent.prefix);
                const double s = z.prefix.back();
                for (Vertex v : z.members) {
                    std::size_t back = 0;
                    for (Vertex y : parent.members) back += h.graph().has_edge(v, y);
                    EXPECT_LE(std::pow(1.0 + eta, s - 1.0), static_cast<double>(back));
                    EXPECT_LT(static_cast<double>(back), std::pow(1.0 + eta, s));
                    EXPECT_TRUE(by_parent[z.parent].insert(v).second) << "bucket overlap under one parent";
                    covered.insert(v);
                }
            }
            // Buckets under one parent cover exactly its neighborhood in layer j.
            for (std::size_t pi = 0; pi < bp.levels[j - 2].size(); ++pi) {
                std::set<Vertex> nbhd;
                for (Vertex y : bp.levels[j - 2][pi].members) {
                    for (Vertex v : layer_of(h, Side::U, j)) {
                        if (h.graph().has_edge(v, y)) nbhd.insert(v);
                    }
                }
                EXPECT_EQ(by_parent[pi], nbhd);
            }
            // All buckets together cover the vertices reached by some path.
            std::set<Vertex> reached;
            const VertexSet& layer = layer_of(h, Side::U, j);
            for (std::size_t i = 0; i < layer.size(); ++i) {
                if (table.at(j, i) > 0) reached.insert(layer[i]);
            }
            EXPECT_EQ(covered, reached);
        }
        for (const auto& row : level_sandwich(bp, table)) EXPECT_TRUE(row.holds) << "j=" << row.j;
    }
}

TEST(PqSums, SingleLevel) {
    const BlowupGraph h = gen_blowup_cycle(3, 9, 0.7, 2);
    const VertexSet x = first_half(layer_of(h, Side::U, 1));
    const auto sums = pq_sums(bucket_partition(h, Side::U, x, 0.25));
    EXPECT_DOUBLE_EQ(sums.p, static_cast<double>(x.size()));
    EXPECT_DOUBLE_EQ(sums.q, std::sqrt(static_cast<double>(x.size())));
}

TEST(PqSums, TwoLevelWindow) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const BlowupGraph h = gen_blowup_cycle(5, 30, 0.5, seed);
        ASSERT_TRUE(audit_degree_window(h).holds);
        const DegreeWindow& win = h.window();
        const double pm = win.p * 30.0;
        const double eta = 0.25;
        const VertexSet x = first_half(layer_of(h, Side::U, 1));
        const double px = pq_sums(bucket_partition(h, Side::U, x, eta)).p;
        const double size = static_cast<double>(x.size());
        EXPECT_LE(size * (win.alpha - win.eps) * pm, px + 1e-9);
        EXPECT_LE(px, size * (win.alpha + win.eps) * (1.0 + eta) * pm + 1e-9);
    }
}

TEST(ConnectCount, CompleteTriangleBlowup) {
    const std::size_t m = 6;
    const BlowupGraph h = gen_blowup_cycle(3, m, 1.0, 1);
    const auto s = connect_count_exact(h, h.graph(), layer_of(h, Side::U, 1), layer_of(h, Side::V, 1));
    EXPECT_EQ(s, m * m);
}

TEST(ConnectCount, NoEndLayerHostEdges) {
    const BlowupGraph h = gen_blowup_cycle(5, 5, 1.0, 1);
    const Graph host = without_end_edges(h);
    EXPECT_EQ(connect_count_exact(h, host, layer_of(h, Side::U, 1), layer_of(h, Side::V, 1)), 0);
}

TEST(ConnectCount, MatchesComposedPathEnumeration) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const BlowupGraph h = gen_blowup_cycle(5, 8, 0.5, seed);
        const Graph host = host_with_extra_end_edges(h, 0.3, seed + 100);
        const VertexSet x = first_half(layer_of(h, Side::U, 1));
        const VertexSet y = layer_of(h, Side::V, 1);
        std::size_t brute = 0;
        for (Vertex a : x)
            for (Vertex u : layer_of(h, Side::U, 2))
                for (Vertex v : layer_of(h, Side::V, 2))
                    for (Vertex b : y)
                        brute += h.graph().has_edge(a, u) && host.has_edge(u, v) && h.graph().has_edge(v, b);
        EXPECT_EQ(connect_count_exact(h, host, x, y), brute);
        const auto bounds = connect_bounds(h, host, x, y, 0.25, 0.0, standard(h));
        EXPECT_TRUE(bounds.sandwich_holds);
        EXPECT_EQ(bounds.exact, brute);
    }
}

TEST(CycleCount, CompleteTriangleBlowup) {
    const std::size_t m = 7;
    const BlowupGraph h = gen_blowup_cycle(3, m, 1.0, 1);
    const auto report = cycle_count(h, h.graph());
    EXPECT_EQ(report.exact_c, m * m * m);
    EXPECT_EQ(report.sandwich_violations, 0U);
}

TEST(CycleCount, IsolatedCenterLayer) {
    const BlowupGraph full = gen_blowup_cycle(5, 4, 1.0, 1);
    const VertexSet& w = full.w_layer(standard(full));
    std::vector<Edge> keep;
    for (auto [a, b] : full.graph().edges()) {
        if (!w.contains(a) && !w.contains(b)) keep.emplace_back(a, b);
    }
    const Graph g = Graph::from_edges(full.n(), keep);
    const BlowupGraph h(g, std::vector<VertexSet>(full.layers().begin(), full.layers().end()), full.window());
    EXPECT_EQ(cycle_count(h, full.graph()).exact_c, 0);
}

TEST(CycleCount, MatchesBruteForceAndSandwiches) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t ell = seed % 2 ? 5 : 3;
        const BlowupGraph h = gen_blowup_cycle(ell, 8, 0.5, seed);
        const Graph host = host_with_extra_end_edges(h, 0.4, seed);
        CountOptions options;
        options.eta = 0.1;
        options.per_vertex = true;
        const auto report = cycle_count(h, host, options);
        EXPECT_EQ(report.exact_c, oracle::brute_connecting_cycles(h, host)) << "seed " << seed;
        EXPECT_EQ(report.sandwich_violations, 0U);
        EXPECT_EQ(report.level_sandwich_violations, 0U);
        EXPECT_EQ(report.window_violations, 0U);
        EXPECT_EQ(report.per_vertex.size(), 8U);
        EXPECT_LE(report.bucket_lower, report.exact_c.convert_to<double>() + 1e-9);
    }
}

TEST(CycleCount, EscalatesPastSixtyFourBits) {
    // C_41(4): 4^41 transversal cycles, more than 2^64.
    const BlowupGraph h = gen_blowup_cycle(41, 4, 1.0, 1);
    CountOptions options;
    options.buckets = false;
    const auto report = cycle_count(h, h.graph(), options);
    BigCount expected = 1;
    for (int i = 0; i < 41; ++i) expected *= 4;
    EXPECT_EQ(report.exact_c, expected);
    EXPECT_TRUE(path_counts(h, Side::U, layer_of(h, Side::U, 1)).total(20) > 0);
}

TEST(SaturatedEdges, NoneAboveLoadScale) {
    const std::size_t m = 6;
    const BlowupGraph h = gen_blowup_cycle(3, m, 1.0, 1);
    const auto sat = saturated_edges(h, h.graph(), 2.0);
    EXPECT_DOUBLE_EQ(sat.threshold, 2.0 * m);
    EXPECT_EQ(sat.saturated_count, 0U);
    EXPECT_EQ(sat.max_load, m);
    EXPECT_EQ(sat.loads.size(), m * m);
}

TEST(SaturatedEdges, TinyMuSaturatesEveryLoadedEdge) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const BlowupGraph h = gen_blowup_cycle(5, 6, 0.6, seed);
        const Graph host = host_with_extra_end_edges(h, 0.5, seed);
        const auto sat = saturated_edges(h, host, 1e-9);
        const auto report = cycle_count(h, host);
        EXPECT_EQ(sat.s_count, report.exact_c);
        EXPECT_EQ(sat.total_load, report.exact_c);
        for (const auto& e : sat.loads) EXPECT_EQ(e.saturated, e.load > 0);
        EXPECT_TRUE(sat.renamed_bounds_hold);
    }
}

TEST(SaturatedEdges, PlantedHeavyEdge) {
    const std::size_t m = 20;
    BlowupGraph base = gen_blowup_cycle(3, m, 0.2, 7);
    const auto& layers = base.layers();
    const Vertex u0 = layers[0][0];
    const Vertex v0 = layers[2][0];
    std::vector<Edge> edges = base.graph().edges();
    for (Vertex w : layers[1]) {
        edges.emplace_back(u0, w);
        edges.emplace_back(v0, w);
    }
    edges.emplace_back(u0, v0);
    Graph g = Graph::from_edges(base.n(), edges);
    const BlowupGraph h(g, std::vector<VertexSet>(layers.begin(), layers.end()), DegreeWindow{1.0, 0.2, 1.0});
    const auto sat = saturated_edges(h, g, 10.0);

    // Loads recomputed by counting common W-neighbors.
    std::set<Edge> expected;
    for (Vertex u : layers[0]) {
        for (Vertex v : layers[2]) {
            if (!g.has_edge(u, v)) continue;
            std::size_t load = 0;
            for (Vertex w : layers[1]) load += g.has_edge(u, w) && g.has_edge(v, w);
            if (static_cast<double>(load) >= sat.threshold) expected.emplace(u, v);
        }
    }
    std::set<Edge> flagged;
    for (const auto& e : sat.loads) {
        if (e.saturated) flagged.emplace(e.u, e.v);
    }
    EXPECT_EQ(flagged, expected);
    EXPECT_EQ(flagged, (std::set<Edge>{{u0, v0}}));
}

TEST(SaturatedEdges, MonotoneInMu) {
    const BlowupGraph h = gen_blowup_cycle(5, 8, 0.7, 3);
    const Graph host = host_with_extra_end_edges(h, 0.5, 3);
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double mu = 0.1; mu < 2.0; mu += 0.1) {
        const auto sat = saturated_edges(h, host, mu);
        EXPECT_LE(sat.saturated_count, prev);
        prev = sat.saturated_count;
    }
}

TEST(ErrorTermAudit, SingleLevel) {
    const BlowupGraph h = gen_blowup_cycle(3, 10, 1.0, 1);
    const VertexSet x = first_half(layer_of(h, Side::U, 1));
    const VertexSet y = layer_of(h, Side::V, 1);
    const auto audit = error_term_audit(h, {1.0, 0.0}, x, y, 0.25, 0.01, 0.1);
    EXPECT_DOUBLE_EQ(audit.q_x, std::sqrt(5.0));
    EXPECT_DOUBLE_EQ(audit.q_y, std::sqrt(10.0));
    EXPECT_EQ(audit.error_term, 0.0);
    EXPECT_TRUE(audit.passes);
    for (const auto& t : audit.tuples) EXPECT_EQ(t.which_case, 'a');
}

TEST(ErrorTermAudit, RecomputedTupleTerms) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Graph host = gen_random_regular(70, 40, seed);
        const auto profile = spectral_profile(host);
        const JumblednessParams params = mixing_to_jumbled(70, profile.d, profile.lambda);
        // Layers from a fixed split of the host's vertices.
        std::vector<VertexSet> layers;
        for (Vertex pos = 0; pos < 5; ++pos) layers.push_back(VertexSet::range(pos * 14, pos * 14 + 14));
        const BlowupGraph h = BlowupGraph::from_host(host, layers, DegreeWindow{1.0, params.p, 0.5});
        const auto& std_frame = standard(h);
        const VertexSet& w = h.w_layer(std_frame);
        std::vector<Vertex> xs;
        std::vector<Vertex> ys;
        for (Vertex v : h.graph().neighbors(w[0])) {
            if (h.layer(std_frame, Side::U, 1).contains(v)) xs.push_back(v);
            if (h.layer(std_frame, Side::V, 1).contains(v)) ys.push_back(v);
        }
        const VertexSet x(xs);
        const VertexSet y(ys);
        const double eta = 0.25;
        const auto audit = error_term_audit(h, params, x, y, eta, 0.5, 0.2);
        const auto bx = bucket_partition(h, Side::U, x, eta);
        const auto by = bucket_partition(h, Side::V, y, eta);
        std::vector<double> expected;
        for (const auto* bp : {&bx, &by}) {
            for (const ZSet& z : bp->levels[1]) {
                double sum = 0.0;
                for (auto s : z.prefix) sum += s;
                expected.push_back(std::sqrt(static_cast<double>(z.members.size())) * std::pow(1.0 + eta, sum));
            }
        }
        ASSERT_EQ(audit.tuples.size(), expected.size());
        double qsum_x = 0.0;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            EXPECT_NEAR(audit.tuples[i].q, expected[i], 1e-9 * expected[i]);
            if (audit.tuples[i].side == Side::U) qsum_x += expected[i];
            if (audit.tuples[i].which_case == 'b') EXPECT_TRUE(audit.tuples[i].product_matches);
        }
        EXPECT_NEAR(audit.q_x, qsum_x, 1e-9 * qsum_x);
        EXPECT_NEAR(audit.error_term, params.beta * audit.q_x * audit.q_y, 1e-9 * audit.error_term);
    }
}

TEST(BruteForceCycles, SmallGraphs) {
    EXPECT_EQ(brute_force_cycles(cycle_graph(5), 5, 100).cycles.size(), 1U);
    EXPECT_EQ(brute_force_cycles(complete_graph(4), 3, 100).cycles.size(), 4U);
    EXPECT_EQ(brute_force_cycles(petersen_graph(), 5, 100).cycles.size(), 12U);
    EXPECT_TRUE(brute_force_cycles(path_graph(6), 3, 100).cycles.empty());
    EXPECT_THROW(brute_force_cycles(cycle_graph(5), 2, 10), ParameterError);
}

TEST(BruteForceCycles, CapTruncates) {
    const auto capped = brute_force_cycles(complete_graph(5), 3, 2);
    EXPECT_EQ(capped.cycles.size(), 2U);
    EXPECT_TRUE(capped.truncated);
    const auto exact = brute_force_cycles(complete_graph(5), 3, 10);
    EXPECT_EQ(exact.cycles.size(), 10U);
    EXPECT_FALSE(exact.truncated);
}

TEST(BruteForceCycles, AgreesWithOracleAndVerifies) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = oracle::random_gnp(12, 0.35, seed);
        for (std::size_t ell : {3U, 4U, 5U, 7U}) {
            const auto list = brute_force_cycles(g, ell, 1'000'000);
            EXPECT_EQ(list.cycles.size(), oracle::brute_cycles(g, ell));
            std::set<std::vector<Vertex>> seen;
            for (const auto& c : list.cycles) {
                EXPECT_TRUE(is_cycle_of(g, c));
                EXPECT_TRUE(oracle::is_cycle_in(g, c));
                EXPECT_TRUE(seen.insert(c).second);
            }
        }
    }
}

TEST(IsCycleOf, RejectsBrokenCycles) {
    const Graph g = complete_graph(4);
    EXPECT_TRUE(is_cycle_of(g, {0, 1, 2}));
    EXPECT_FALSE(is_cycle_of(g, {0, 1}));
    EXPECT_FALSE(is_cycle_of(g, {0, 1, 0}));
    EXPECT_FALSE(is_cycle_of(cycle_graph(5), {0, 1, 3}));
}
