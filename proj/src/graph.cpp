#include "oddcycle/graph.hpp"

#include <algorithm>
#include <numeric>

#include "oddcycle/error.hpp"

namespace oddcycle {

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw ParameterError("vertex set contains a duplicate id");
    }
}

VertexSet::VertexSet(std::initializer_list<Vertex> members)
    : VertexSet(std::vector<Vertex>(members)) {}

VertexSet VertexSet::range(Vertex begin, Vertex end) {
    std::vector<Vertex> ids(end > begin ? end - begin : 0);
    std::iota(ids.begin(), ids.end(), begin);
    VertexSet out;
    out.members_ = std::move(ids);
    return out;
}

bool VertexSet::contains(Vertex v) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), v);
}

bool VertexSet::intersects(const VertexSet& other) const noexcept {
    auto a = members_.begin();
    auto b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
        if (*a == *b) {
            return true;
        }
        if (*a < *b) {
            ++a;
        } else {
            ++b;
        }
    }
    return false;
}

VertexSet VertexSet::minus(const VertexSet& other) const {
    VertexSet out;
    std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out.members_));
    return out;
}

void VertexSet::check_universe(std::size_t n) const {
    if (!members_.empty() && members_.back() >= n) {
        throw ParameterError("vertex id " + std::to_string(members_.back()) +
                             " outside graph of order " + std::to_string(n));
    }
}

std::vector<std::uint64_t> VertexSet::bitmask(std::size_t n) const {
    check_universe(n);
    std::vector<std::uint64_t> mask((n + 63) / 64, 0);
    for (Vertex v : members_) {
        mask[v >> 6] |= std::uint64_t{1} << (v & 63);
    }
    return mask;
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    std::vector<Edge> canonical;
    canonical.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u == v) {
            throw ParameterError("self-loop at vertex " + std::to_string(u));
        }
        if (u >= n || v >= n) {
            throw ParameterError("edge endpoint outside graph of order " + std::to_string(n));
        }
        canonical.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canonical.begin(), canonical.end());
    canonical.erase(std::unique(canonical.begin(), canonical.end()), canonical.end());

    Graph g;
    g.n_ = n;
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : canonical) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.adjacency_.resize(2 * canonical.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    // Canonical order fills every row in ascending order: pairs (u, x) with
    // u < x precede pairs (x, v).
    for (auto [u, v] : canonical) {
        g.adjacency_[fill[u]++] = v;
        g.adjacency_[fill[v]++] = u;
    }
    return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
    if (u >= n_ || v >= n_) {
        return false;
    }
    if (degree(u) > degree(v)) {
        std::swap(u, v);
    }
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < n_; ++u) {
        for (Vertex v : neighbors(u)) {
            if (u < v) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

Graph Graph::induced(const VertexSet& keep) const {
    const auto mask = keep.bitmask(n_);
    std::vector<Edge> kept;
    for (Vertex u : keep) {
        for (Vertex v : neighbors(u)) {
            if (u < v && test_bit(mask, v)) {
                kept.emplace_back(u, v);
            }
        }
    }
    return from_edges(n_, kept);
}

bool Graph::is_regular() const noexcept {
    for (Vertex v = 1; v < n_; ++v) {
        if (degree(v) != degree(0)) {
            return false;
        }
    }
    return true;
}

double Graph::average_degree() const noexcept {
    return n_ == 0 ? 0.0 : static_cast<double>(adjacency_.size()) / static_cast<double>(n_);
}

std::size_t edges_between(const Graph& g, const VertexSet& x, const VertexSet& y) {
    if (x.intersects(y)) {
        throw ParameterError("edges_between requires disjoint vertex sets");
    }
    const VertexSet& scan = x.size() <= y.size() ? x : y;
    const VertexSet& other = x.size() <= y.size() ? y : x;
    const auto mask = other.bitmask(g.n());
    scan.check_universe(g.n());
    std::size_t count = 0;
    for (Vertex u : scan) {
        for (Vertex v : g.neighbors(u)) {
            count += test_bit(mask, v);
        }
    }
    return count;
}

std::size_t edges_inside(const Graph& g, const VertexSet& x) {
    const auto mask = x.bitmask(g.n());
    std::size_t twice = 0;
    for (Vertex u : x) {
        for (Vertex v : g.neighbors(u)) {
            twice += test_bit(mask, v);
        }
    }
    return twice / 2;
}

std::vector<std::size_t> induced_degrees(const Graph& g, const VertexSet& within) {
    const auto mask = within.bitmask(g.n());
    std::vector<std::size_t> degrees;
    degrees.reserve(within.size());
    for (Vertex u : within) {
        std::size_t d = 0;
        for (Vertex v : g.neighbors(u)) {
            d += test_bit(mask, v);
        }
        degrees.push_back(d);
    }
    return degrees;
}

}  // namespace oddcycle
