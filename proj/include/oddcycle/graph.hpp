#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oddcycle {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Sorted, duplicate-free list of vertex ids.
class VertexSet {
public:
    VertexSet() = default;

    // Sorts `members`; throws ParameterError on duplicates.
    explicit VertexSet(std::vector<Vertex> members);
    VertexSet(std::initializer_list<Vertex> members);

    static VertexSet range(Vertex begin, Vertex end);

    std::span<const Vertex> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }
    Vertex operator[](std::size_t i) const noexcept { return members_[i]; }

    bool contains(Vertex v) const noexcept;
    bool intersects(const VertexSet& other) const noexcept;
    VertexSet minus(const VertexSet& other) const;

    // Throws ParameterError if any member is >= n.
    void check_universe(std::size_t n) const;

    // Word-packed membership over the universe [0, n).
    std::vector<std::uint64_t> bitmask(std::size_t n) const;

    bool operator==(const VertexSet&) const = default;

private:
    std::vector<Vertex> members_;
};

inline bool test_bit(const std::vector<std::uint64_t>& mask, Vertex v) noexcept {
    return (mask[v >> 6] >> (v & 63)) & 1U;
}

// Undirected simple graph in compressed sparse row form. Neighbor lists are
// sorted; the structure is immutable once built and safe to share across
// threads.
class Graph {
public:
    Graph() = default;

    // Builds from an edge list over vertices [0, n). Duplicate edges (in either
    // orientation) collapse; self-loops and out-of-range ids throw
    // ParameterError.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    std::size_t n() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(Vertex u, Vertex v) const noexcept;

    // Canonical edge list: u < v, lexicographically sorted.
    std::vector<Edge> edges() const;

    // Same vertex ids, only the edges with both ends in `keep`.
    Graph induced(const VertexSet& keep) const;

    bool is_regular() const noexcept;
    double average_degree() const noexcept;

    bool operator==(const Graph&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> adjacency_;
};

// e(X, Y) for disjoint X, Y; throws ParameterError if they overlap.
std::size_t edges_between(const Graph& g, const VertexSet& x, const VertexSet& y);

// e(X): edges with both endpoints in X.
std::size_t edges_inside(const Graph& g, const VertexSet& x);

// Degree of every member of `within` inside G[within], indexed like
// within.members().
std::vector<std::size_t> induced_degrees(const Graph& g, const VertexSet& within);

// Simple d-regular graph on n vertices, deterministic per seed. Pairs points
// of the configuration model one at a time, only accepting pairs that keep the
// graph simple, and restarts when no admissible pair is left.
Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed);

// Paley graph on Z_q for a prime q = 1 (mod 4).
Graph gen_paley(std::uint64_t q);

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph petersen_graph();

bool is_prime(std::uint64_t q) noexcept;

// Edge-list text format: optional header "n=<count>", then one "u v" pair of
// 0-based ids per line; '#' starts a comment. Without a header n is one more
// than the largest id seen.
Graph parse_edge_list(std::istream& in);
Graph load_edge_list(const std::filesystem::path& path);

// Canonical form: "n=<count>" header, then edges u < v in lexicographic order.
void write_edge_list(const Graph& g, std::ostream& out);
std::string to_edge_list_string(const Graph& g);
void save_edge_list(const Graph& g, const std::filesystem::path& path);

}  // namespace oddcycle
