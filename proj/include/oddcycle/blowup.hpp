#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "oddcycle/graph.hpp"

namespace oddcycle {

// The (alpha, p, eps) degree window: every inter-layer degree must lie in
// [(alpha - eps) p m, (alpha + eps) p m].
struct DegreeWindow {
    double alpha = 1.0;
    double p = 1.0;
    double eps = 0.0;

    double lower(double m) const noexcept { return (alpha - eps) * p * m; }
    double upper(double m) const noexcept { return (alpha + eps) * p * m; }
    bool contains(double degree, double m) const noexcept {
        return degree >= lower(m) && degree <= upper(m);
    }
    bool operator==(const DegreeWindow&) const = default;
};

enum class Side { U, V };

// Assigns the roles U_k..U_1, W, V_1..V_k to cycle positions 0..ell-1. W sits
// at `center`; U_j at center - j*direction and V_j at center + j*direction
// (mod ell). The standard frame puts W in the middle (position k); the renamed
// frame used for saturation audits puts W~ = U_k at position 0 and walks
// U~_j = U_{k-j} forwards, V~_j = V_{k+1-j} backwards.
struct LayerFrame {
    std::size_t center = 0;
    int direction = 1;

    static LayerFrame standard(std::size_t k) noexcept { return {k, 1}; }
    static LayerFrame renamed() noexcept { return {0, -1}; }

    std::size_t w() const noexcept { return center; }
    std::size_t position(Side side, std::size_t j, std::size_t ell) const noexcept {
        const auto step = static_cast<std::int64_t>(j) * direction * (side == Side::U ? -1 : 1);
        const auto e = static_cast<std::int64_t>(ell);
        return static_cast<std::size_t>(((static_cast<std::int64_t>(center) + step) % e + e) % e);
    }

    bool operator==(const LayerFrame&) const = default;
};

// A C_ell(m)-graph: ell disjoint layers of size m in cycle order
// (U_k, ..., U_1, W, V_1, ..., V_k) and a graph H whose edges only join
// consecutive layers (including the closing pair U_k V_k). Vertex ids live in
// the host's id space; a dense id -> (position, offset) table gives O(1)
// layer lookup.
class BlowupGraph {
public:
    static constexpr std::uint32_t kNoLayer = std::numeric_limits<std::uint32_t>::max();

    struct Slot {
        std::uint32_t position = kNoLayer;
        std::uint32_t offset = 0;
        bool operator==(const Slot&) const = default;
    };

    BlowupGraph() = default;

    // Validates the layer structure; throws ParameterError if ell is not an
    // odd number >= 3, layers differ in size, overlap, fall outside h, or if h
    // has an edge that does not join consecutive layers.
    BlowupGraph(Graph h, std::vector<VertexSet> layers, DegreeWindow window);

    // Keeps exactly the edges of g that join consecutive layers.
    static BlowupGraph from_host(const Graph& g, std::vector<VertexSet> layers, DegreeWindow window);

    std::size_t ell() const noexcept { return layers_.size(); }
    std::size_t k() const noexcept { return (layers_.size() - 1) / 2; }
    std::size_t m() const noexcept { return layers_.empty() ? 0 : layers_.front().size(); }
    std::size_t n() const noexcept { return h_.n(); }

    const Graph& graph() const noexcept { return h_; }
    const DegreeWindow& window() const noexcept { return window_; }
    void set_window(DegreeWindow window) noexcept { window_ = window; }

    std::span<const VertexSet> layers() const noexcept { return layers_; }
    const VertexSet& layer(std::size_t position) const noexcept { return layers_[position]; }
    const VertexSet& layer(const LayerFrame& frame, Side side, std::size_t j) const noexcept {
        return layers_[frame.position(side, j, ell())];
    }
    const VertexSet& w_layer(const LayerFrame& frame) const noexcept { return layers_[frame.w()]; }

    Slot slot(Vertex v) const noexcept { return v < slots_.size() ? slots_[v] : Slot{}; }

    // Number of H-neighbors of v inside the layer at `position`.
    std::size_t degree_into(Vertex v, std::size_t position) const noexcept;

    bool operator==(const BlowupGraph&) const = default;

private:
    Graph h_;
    std::vector<VertexSet> layers_;
    std::vector<Slot> slots_;
    DegreeWindow window_;
};

struct WindowViolation {
    Vertex vertex = 0;
    std::size_t into_position = 0;
    std::size_t degree = 0;
};

struct WindowAudit {
    bool holds = true;
    std::size_t checked = 0;
    std::vector<WindowViolation> violations;
    // Largest |deg - alpha p m| / (p m) over all checked degrees.
    double max_relative_deviation = 0.0;
};

// Checks every vertex's degree into both neighboring layers against `window`.
WindowAudit audit_degree_window(const BlowupGraph& h, const DegreeWindow& window);
inline WindowAudit audit_degree_window(const BlowupGraph& h) {
    return audit_degree_window(h, h.window());
}

// Random spanning subgraph of the full blow-up C_ell(m): each edge between
// consecutive classes is kept independently with probability keep_prob.
// Vertex ids are position * m + offset. The window is (1, keep_prob, eps) with
// eps the smallest value that the realized degrees satisfy.
BlowupGraph gen_blowup_cycle(std::size_t ell, std::size_t m, double keep_prob, std::uint64_t seed);

}  // namespace oddcycle
