#include "oddcycle/blowup.hpp"

#include <cmath>
#include <string>

#include "oddcycle/error.hpp"
#include "oddcycle/rng.hpp"

namespace oddcycle {

namespace {

bool consecutive(std::size_t a, std::size_t b, std::size_t ell) noexcept {
    return (a + 1) % ell == b || (b + 1) % ell == a;
}

std::vector<BlowupGraph::Slot> build_slots(std::size_t n, std::span<const VertexSet> layers) {
    std::vector<BlowupGraph::Slot> slots(n);
    for (std::size_t pos = 0; pos < layers.size(); ++pos) {
        layers[pos].check_universe(n);
        for (std::size_t off = 0; off < layers[pos].size(); ++off) {
            auto& slot = slots[layers[pos][off]];
            if (slot.position != BlowupGraph::kNoLayer) {
                throw ParameterError("blow-up layers overlap at vertex " +
                                     std::to_string(layers[pos][off]));
            }
            slot = {static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(off)};
        }
    }
    return slots;
}

void check_shape(std::span<const VertexSet> layers) {
    if (layers.size() < 3 || layers.size() % 2 == 0) {
        throw ParameterError("blow-up needs an odd number of layers >= 3 (got " +
                             std::to_string(layers.size()) + ")");
    }
    for (const auto& layer : layers) {
        if (layer.size() != layers.front().size()) {
            throw ParameterError("blow-up layers must have equal sizes");
        }
    }
}

}  // namespace

BlowupGraph::BlowupGraph(Graph h, std::vector<VertexSet> layers, DegreeWindow window)
    : h_(std::move(h)), layers_(std::move(layers)), window_(window) {
    check_shape(layers_);
    slots_ = build_slots(h_.n(), layers_);
    for (Vertex u = 0; u < h_.n(); ++u) {
        for (Vertex v : h_.neighbors(u)) {
            const auto a = slots_[u].position;
            const auto b = slots_[v].position;
            if (a == kNoLayer || b == kNoLayer || !consecutive(a, b, layers_.size())) {
                throw ParameterError("blow-up graph has an edge " + std::to_string(u) + "-" +
                                     std::to_string(v) + " outside consecutive layers");
            }
        }
    }
}

BlowupGraph BlowupGraph::from_host(const Graph& g, std::vector<VertexSet> layers,
                                   DegreeWindow window) {
    check_shape(layers);
    const auto slots = build_slots(g.n(), layers);
    std::vector<Edge> kept;
    for (std::size_t pos = 0; pos < layers.size(); ++pos) {
        const std::size_t next = (pos + 1) % layers.size();
        for (Vertex u : layers[pos]) {
            for (Vertex v : g.neighbors(u)) {
                if (slots[v].position == next) {
                    kept.emplace_back(u, v);
                }
            }
        }
    }
    return BlowupGraph(Graph::from_edges(g.n(), kept), std::move(layers), window);
}

std::size_t BlowupGraph::degree_into(Vertex v, std::size_t position) const noexcept {
    std::size_t d = 0;
    for (Vertex u : h_.neighbors(v)) {
        d += slots_[u].position == position;
    }
    return d;
}

WindowAudit audit_degree_window(const BlowupGraph& h, const DegreeWindow& window) {
    WindowAudit audit;
    const auto m = static_cast<double>(h.m());
    const double scale = window.p * m;
    const std::size_t ell = h.ell();
    for (std::size_t pos = 0; pos < ell; ++pos) {
        for (Vertex v : h.layer(pos)) {
            for (std::size_t into : {(pos + ell - 1) % ell, (pos + 1) % ell}) {
                const std::size_t d = h.degree_into(v, into);
                ++audit.checked;
                if (scale > 0) {
                    const double dev = std::abs(static_cast<double>(d) - window.alpha * scale) / scale;
                    audit.max_relative_deviation = std::max(audit.max_relative_deviation, dev);
                }
                if (!window.contains(static_cast<double>(d), m)) {
                    audit.holds = false;
                    audit.violations.push_back({v, into, d});
                }
            }
        }
    }
    return audit;
}

BlowupGraph gen_blowup_cycle(std::size_t ell, std::size_t m, double keep_prob, std::uint64_t seed) {
    if (ell < 3 || ell % 2 == 0) {
        throw ParameterError("blow-up cycle length must be odd and >= 3");
    }
    if (m < 1) {
        throw ParameterError("blow-up class size must be positive");
    }
    if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) {
        throw ParameterError("keep probability must lie in [0, 1]");
    }
    SplitMix64 rng(seed);
    std::vector<VertexSet> layers;
    for (std::size_t pos = 0; pos < ell; ++pos) {
        layers.push_back(VertexSet::range(static_cast<Vertex>(pos * m), static_cast<Vertex>((pos + 1) * m)));
    }
    std::vector<Edge> edges;
    for (std::size_t pos = 0; pos < ell; ++pos) {
        const std::size_t next = (pos + 1) % ell;
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                if (rng.bernoulli(keep_prob)) {
                    edges.emplace_back(static_cast<Vertex>(pos * m + a), static_cast<Vertex>(next * m + b));
                }
            }
        }
    }
    BlowupGraph h(Graph::from_edges(ell * m, edges), std::move(layers), DegreeWindow{1.0, keep_prob, 0.0});
    h.set_window(DegreeWindow{1.0, keep_prob, audit_degree_window(h).max_relative_deviation});
    return h;
}

}  // namespace oddcycle
