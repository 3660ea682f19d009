#include <algorithm>
#include <string>

#include "oddcycle/error.hpp"
#include "oddcycle/graph.hpp"
#include "oddcycle/rng.hpp"

namespace oddcycle {

namespace {

constexpr std::size_t kMaxRestarts = 10000;

// One attempt at pairing all n*d points. Returns false on a dead end (no
// admissible pair among the remaining points).
bool try_pairing(std::size_t n, std::size_t d, SplitMix64& rng, std::vector<Edge>& edges) {
    std::vector<Vertex> points;
    points.reserve(n * d);
    for (Vertex v = 0; v < n; ++v) {
        points.insert(points.end(), d, v);
    }
    std::vector<std::vector<Vertex>> adj(n);
    for (auto& row : adj) {
        row.reserve(d);
    }
    auto adjacent = [&](Vertex a, Vertex b) {
        const auto& row = adj[a].size() < adj[b].size() ? adj[a] : adj[b];
        const Vertex other = adj[a].size() < adj[b].size() ? b : a;
        return std::find(row.begin(), row.end(), other) != row.end();
    };
    auto take = [&](std::size_t i, std::size_t j) {
        const Vertex a = points[i];
        const Vertex b = points[j];
        if (i < j) {
            std::swap(i, j);
        }
        points[i] = points.back();
        points.pop_back();
        points[j] = points.back();
        points.pop_back();
        adj[a].push_back(b);
        adj[b].push_back(a);
        edges.emplace_back(a, b);
    };

    edges.clear();
    while (!points.empty()) {
        bool paired = false;
        for (int attempt = 0; attempt < 64 && !paired; ++attempt) {
            const auto i = static_cast<std::size_t>(rng.below(points.size()));
            const auto j = static_cast<std::size_t>(rng.below(points.size()));
            if (i != j && points[i] != points[j] && !adjacent(points[i], points[j])) {
                take(i, j);
                paired = true;
            }
        }
        if (paired) {
            continue;
        }
        // Random probing keeps failing: enumerate the admissible point pairs
        // and pick one uniformly, or give up if there are none.
        std::vector<std::pair<std::size_t, std::size_t>> admissible;
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t j = i + 1; j < points.size(); ++j) {
                if (points[i] != points[j] && !adjacent(points[i], points[j])) {
                    admissible.emplace_back(i, j);
                }
            }
        }
        if (admissible.empty()) {
            return false;
        }
        const auto [i, j] = admissible[static_cast<std::size_t>(rng.below(admissible.size()))];
        take(i, j);
    }
    return true;
}

}  // namespace

Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (d >= n) {
        throw ParameterError("random regular graph needs d < n (got n=" + std::to_string(n) +
                             ", d=" + std::to_string(d) + ")");
    }
    if ((n * d) % 2 != 0) {
        throw ParameterError("random regular graph needs n*d even (got n=" + std::to_string(n) +
                             ", d=" + std::to_string(d) + ")");
    }
    SplitMix64 rng(seed);
    std::vector<Edge> edges;
    for (std::size_t restart = 0; restart < kMaxRestarts; ++restart) {
        if (try_pairing(n, d, rng, edges)) {
            return Graph::from_edges(n, edges);
        }
    }
    throw ParameterError("random regular graph: no simple pairing found after " +
                         std::to_string(kMaxRestarts) + " restarts");
}

bool is_prime(std::uint64_t q) noexcept {
    if (q < 2) {
        return false;
    }
    for (std::uint64_t f = 2; f * f <= q; ++f) {
        if (q % f == 0) {
            return false;
        }
    }
    return true;
}

Graph gen_paley(std::uint64_t q) {
    if (!is_prime(q)) {
        throw ParameterError("Paley graph order must be prime (got " + std::to_string(q) + ")");
    }
    if (q % 4 != 1) {
        throw ParameterError("Paley graph order must be 1 mod 4 (got " + std::to_string(q) + ")");
    }
    std::vector<bool> residue(q, false);
    for (std::uint64_t x = 1; x < q; ++x) {
        residue[(x * x) % q] = true;
    }
    std::vector<Edge> edges;
    for (std::uint64_t u = 0; u < q; ++u) {
        for (std::uint64_t v = u + 1; v < q; ++v) {
            if (residue[v - u]) {
                edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
            }
        }
    }
    return Graph::from_edges(q, edges);
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, edges);
}

Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) {
        edges.emplace_back(v, static_cast<Vertex>((v + 1) % n));
    }
    return Graph::from_edges(n, edges);
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) {
        edges.emplace_back(v, v + 1);
    }
    return Graph::from_edges(n, edges);
}

Graph petersen_graph() {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);          // outer pentagon
        edges.emplace_back(i, i + 5);                // spokes
        edges.emplace_back(i + 5, (i + 2) % 5 + 5);  // inner pentagram
    }
    return Graph::from_edges(10, edges);
}

}  // namespace oddcycle
