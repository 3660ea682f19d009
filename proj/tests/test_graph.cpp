#include <gtest/gtest.h>

#include <sstream>

#include "oddcycle/blowup.hpp"
#include "oddcycle/error.hpp"
#include "oddcycle/graph.hpp"
#include "oddcycle/rng.hpp"
#include "oracles.hpp"

using namespace oddcycle;

TEST(EdgesBetween, CompleteGraphCountsAllPairs) {
    EXPECT_EQ(edges_between(complete_graph(4), {0, 1}, {2, 3}), 4U);
}

TEST(EdgesBetween, CycleNonNeighbors) {
    EXPECT_EQ(edges_between(cycle_graph(5), {0}, {2, 3}), 0U);
}

TEST(EdgesBetween, RejectsOverlap) {
    EXPECT_THROW(edges_between(complete_graph(4), {0, 1}, {1, 2}), ParameterError);
}

TEST(EdgesBetween, MatchesNaiveCountOnRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Graph g = oracle::random_gnp(20, 0.3, seed);
        SplitMix64 rng(seed + 1000);
        std::vector<Vertex> ids(20);
        for (Vertex v = 0; v < 20; ++v) ids[v] = v;
        rng.shuffle(std::span<Vertex>(ids));
        const VertexSet x(std::vector<Vertex>(ids.begin(), ids.begin() + 5));
        const VertexSet y(std::vector<Vertex>(ids.begin() + 5, ids.begin() + 10));
        EXPECT_EQ(edges_between(g, x, y), oracle::naive_edges_between(g, x, y));
        EXPECT_EQ(edges_inside(g, x), oracle::naive_edges_inside(g, x));
    }
}

TEST(EdgesInside, Examples) {
    EXPECT_EQ(edges_inside(complete_graph(4), {0, 1, 2}), 3U);
    EXPECT_EQ(edges_inside(complete_graph(4), {2}), 0U);
    EXPECT_EQ(edges_inside(complete_graph(4), {}), 0U);
    EXPECT_EQ(edges_inside(petersen_graph(), VertexSet::range(0, 10)), 15U);
}

TEST(Graph, StructuralInvariants) {
    const Graph g = oracle::random_gnp(40, 0.2, 3);
    std::size_t degree_sum = 0;
    for (Vertex u = 0; u < g.n(); ++u) {
        auto row = g.neighbors(u);
        degree_sum += row.size();
        for (std::size_t i = 0; i < row.size(); ++i) {
            EXPECT_NE(row[i], u);
            if (i > 0) EXPECT_LT(row[i - 1], row[i]);
            EXPECT_TRUE(g.has_edge(row[i], u));
        }
    }
    EXPECT_EQ(degree_sum, 2 * g.edge_count());
}

TEST(Graph, FromEdgesRejectsBadInput) {
    const std::vector<Edge> loop{{1, 1}};
    EXPECT_THROW(Graph::from_edges(3, loop), ParameterError);
    const std::vector<Edge> out_of_range{{0, 3}};
    EXPECT_THROW(Graph::from_edges(3, out_of_range), ParameterError);
    const std::vector<Edge> dup{{0, 1}, {1, 0}, {0, 1}};
    EXPECT_EQ(Graph::from_edges(3, dup).edge_count(), 1U);
}

TEST(RandomRegular, K4IsUnique) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EXPECT_EQ(gen_random_regular(4, 3, seed), complete_graph(4));
    }
}

TEST(RandomRegular, DegreeAudit) {
    for (auto [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{{10, 3}, {12, 4}, {100, 7}, {500, 50}}) {
        const Graph g = gen_random_regular(n, d, 1);
        for (Vertex v = 0; v < n; ++v) {
            ASSERT_EQ(g.degree(v), d) << "n=" << n << " d=" << d;
        }
    }
}

TEST(RandomRegular, DeterministicPerSeed) {
    EXPECT_EQ(gen_random_regular(30, 5, 9), gen_random_regular(30, 5, 9));
    EXPECT_NE(gen_random_regular(30, 5, 9), gen_random_regular(30, 5, 10));
}

TEST(RandomRegular, RejectsInfeasible) {
    EXPECT_THROW(gen_random_regular(5, 3, 1), ParameterError);
    EXPECT_THROW(gen_random_regular(4, 4, 1), ParameterError);
}

TEST(Paley, SmallCases) {
    EXPECT_EQ(gen_paley(5), cycle_graph(5));
    const Graph g = gen_paley(13);
    EXPECT_EQ(g.n(), 13U);
    for (Vertex v = 0; v < 13; ++v) EXPECT_EQ(g.degree(v), 6U);
    EXPECT_THROW(gen_paley(7), ParameterError);
    EXPECT_THROW(gen_paley(9), ParameterError);
}

TEST(Paley, AllDegreesEqual) {
    for (std::uint64_t q : {17, 29, 37, 41, 101}) {
        const Graph g = gen_paley(q);
        for (Vertex v = 0; v < q; ++v) ASSERT_EQ(g.degree(v), (q - 1) / 2);
    }
}

TEST(BlowupCycle, FullAndEmpty) {
    const BlowupGraph full = gen_blowup_cycle(5, 4, 1.0, 1);
    EXPECT_EQ(full.graph().edge_count(), 5U * 16U);
    for (std::size_t pos = 0; pos < 5; ++pos) {
        for (Vertex v : full.layer(pos)) {
            EXPECT_EQ(full.degree_into(v, (pos + 1) % 5), 4U);
            EXPECT_EQ(full.degree_into(v, (pos + 4) % 5), 4U);
        }
    }
    EXPECT_DOUBLE_EQ(full.window().eps, 0.0);
    EXPECT_EQ(gen_blowup_cycle(5, 4, 0.0, 1).graph().edge_count(), 0U);
}

TEST(BlowupCycle, DegreesConcentrate) {
    const BlowupGraph h = gen_blowup_cycle(5, 30, 0.4, 7);
    double total = 0;
    std::size_t count = 0;
    for (std::size_t pos = 0; pos < 5; ++pos) {
        for (Vertex v : h.layer(pos)) {
            total += static_cast<double>(h.degree_into(v, (pos + 1) % 5));
            ++count;
        }
    }
    EXPECT_NEAR(total / static_cast<double>(count), 12.0, 1.0);
    const WindowAudit audit = audit_degree_window(h);
    EXPECT_TRUE(audit.holds);
    EXPECT_EQ(audit.checked, 2U * 150U);
}

TEST(BlowupGraph, RejectsNonConsecutiveEdges) {
    std::vector<VertexSet> layers{{0}, {1}, {2}, {3}, {4}};
    const std::vector<Edge> chord{{0, 2}};
    EXPECT_THROW(BlowupGraph(Graph::from_edges(5, chord), layers, {}), ParameterError);
    const BlowupGraph h = BlowupGraph::from_host(complete_graph(5), layers, {});
    EXPECT_EQ(h.graph(), cycle_graph(5));
}

TEST(LayerFrame, StandardAndRenamedPositions) {
    const std::size_t k = 2, ell = 5;
    const LayerFrame s = LayerFrame::standard(k);
    EXPECT_EQ(s.w(), 2U);
    EXPECT_EQ(s.position(Side::U, 1, ell), 1U);
    EXPECT_EQ(s.position(Side::U, 2, ell), 0U);
    EXPECT_EQ(s.position(Side::V, 1, ell), 3U);
    EXPECT_EQ(s.position(Side::V, 2, ell), 4U);
    const LayerFrame r = LayerFrame::renamed();
    // W~ = U_k, U~_j = U_{k-j}, U~_k = W, V~_j = V_{k+1-j}
    EXPECT_EQ(r.w(), s.position(Side::U, k, ell));
    EXPECT_EQ(r.position(Side::U, 1, ell), s.position(Side::U, 1, ell));
    EXPECT_EQ(r.position(Side::U, 2, ell), s.w());
    EXPECT_EQ(r.position(Side::V, 1, ell), s.position(Side::V, 2, ell));
    EXPECT_EQ(r.position(Side::V, 2, ell), s.position(Side::V, 1, ell));
}

TEST(EdgeList, ParsesPath) {
    std::istringstream in("0 1\n1 2\n");
    EXPECT_EQ(parse_edge_list(in), path_graph(3));
}

TEST(EdgeList, CommentsHeaderAndRoundTrip) {
    std::istringstream in("# sample\nn=6\n\n3 1 # trailing\n0 2\n1 3\n");
    const Graph g = parse_edge_list(in);
    EXPECT_EQ(g.n(), 6U);
    EXPECT_EQ(g.edge_count(), 2U);
    const std::string canon = to_edge_list_string(g);
    EXPECT_EQ(canon, "n=6\n0 2\n1 3\n");
    std::istringstream again(canon);
    EXPECT_EQ(to_edge_list_string(parse_edge_list(again)), canon);
}

TEST(EdgeList, RoundTripOnRandomGraphs) {
    const Graph g = gen_random_regular(50, 4, 2);
    std::istringstream in(to_edge_list_string(g));
    EXPECT_EQ(parse_edge_list(in), g);
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            parse_edge_list(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("0 1\n2 2\n"), 2U);
    EXPECT_EQ(line_of("0 1\n1 x\n"), 2U);
    EXPECT_EQ(line_of("0 1 2\n"), 1U);
    EXPECT_EQ(line_of("n=3\n0 1\n1 3\n"), 3U);
    EXPECT_EQ(line_of("0 1\nn=3\n"), 2U);
    EXPECT_EQ(line_of("-1 2\n"), 1U);
}
