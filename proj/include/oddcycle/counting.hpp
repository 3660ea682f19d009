#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "oddcycle/blowup.hpp"
#include "oddcycle/graph.hpp"
#include "oddcycle/spectral.hpp"

namespace oddcycle {

// Exact path and cycle counts. Hot loops run in 64-bit arithmetic with
// overflow checks and redo the computation with arbitrary precision when a
// check trips.
using BigCount = boost::multiprecision::cpp_int;

// Number of (X, z)-paths for every z in layers 1..k of one side, where a path
// takes one vertex per layer and X lies in layer 1.
struct PathCountTable {
    Side side = Side::U;
    LayerFrame frame;
    std::size_t k = 0;
    // counts[j-1][i] belongs to the i-th member of layer j.
    std::vector<std::vector<BigCount>> counts;
    // Some count did not fit in 64 bits.
    bool wide = false;

    const BigCount& at(std::size_t j, std::size_t offset) const { return counts.at(j - 1).at(offset); }
    // Paths from X to the whole layer j.
    BigCount total(std::size_t j) const;
};

PathCountTable path_counts(const BlowupGraph& h, Side side, const VertexSet& x, const LayerFrame& frame);
inline PathCountTable path_counts(const BlowupGraph& h, Side side, const VertexSet& x) {
    return path_counts(h, side, x, LayerFrame::standard(h.k()));
}

// One bucket Z(s_j, X): the vertices of layer j whose back-degree into the
// parent bucket Z(s_{j-1}, X) lies in [(1+eta)^(s_j - 1), (1+eta)^s_j).
struct ZSet {
    std::vector<std::uint32_t> prefix;  // s_1 = 0, s_2, ..., s_j
    VertexSet members;
    double weight = 1.0;  // (1+eta)^(s_1 + ... + s_j)
    std::size_t parent = 0;  // index of Z(s_{j-1}, X) in the previous level
};

struct BucketPartition {
    Side side = Side::U;
    LayerFrame frame;
    std::size_t k = 0;
    double eta = 0.25;
    double pm = 0.0;
    // ceil(log_{1+eta}(2pm)) + 1, at least 1.
    std::size_t l_eta = 1;
    VertexSet base;
    // levels[j-1] lists the nonempty buckets in layer j by increasing prefix.
    std::vector<std::vector<ZSet>> levels;

    std::uint32_t max_index = 0;
    // Every realized index lies in [1, L_eta].
    bool indices_within_l = true;
    // (1+eta)^s_j <= 8pm for every realized index.
    bool index_power_within_8pm = true;

    // Sum over level-j buckets of |Z| (1+eta)^(sum of prefix).
    double weighted_size(std::size_t j) const;
};

BucketPartition bucket_partition(const BlowupGraph& h, Side side, const VertexSet& x, double eta,
                                 const LayerFrame& frame);
inline BucketPartition bucket_partition(const BlowupGraph& h, Side side, const VertexSet& x, double eta) {
    return bucket_partition(h, side, x, eta, LayerFrame::standard(h.k()));
}

struct PqSums {
    double p = 0.0;  // sum over full-length buckets of |Z| (1+eta)^(sum s)
    double q = 0.0;  // same with sqrt|Z|
};
PqSums pq_sums(const BucketPartition& bp);

// Per-level check of the bucket sandwich
// (1+eta)^-(j-1) W_j <= pi(U_j, X) <= W_j, W_j = weighted_size(j).
struct LevelSandwich {
    std::size_t j = 0;
    double lower = 0.0;
    double upper = 0.0;
    BigCount exact;
    bool holds = true;
};
std::vector<LevelSandwich> level_sandwich(const BucketPartition& bp, const PathCountTable& table);

// Path-count window |X|((alpha-eps)pm)^(j-1) <= pi(U_j, X) <= |X|((alpha+eps)pm)^(j-1),
// meaningful when h satisfies its degree window.
struct LevelWindow {
    std::size_t j = 0;
    double lower = 0.0;
    double upper = 0.0;
    BigCount exact;
    bool holds = true;
};
std::vector<LevelWindow> path_count_window(const BlowupGraph& h, const PathCountTable& table, std::size_t x_size);

// S(X, Y): composed paths X -> u in U_k, v in V_k -> Y joined by a host edge uv.
BigCount connect_count_exact(const BlowupGraph& h, const Graph& host, const VertexSet& x, const VertexSet& y,
                             const LayerFrame& frame);
inline BigCount connect_count_exact(const BlowupGraph& h, const Graph& host, const VertexSet& x,
                                    const VertexSet& y) {
    return connect_count_exact(h, host, x, y, LayerFrame::standard(h.k()));
}

// S(X, Y) with its bucket sandwich and the jumbledness-based estimate terms.
struct ConnectBounds {
    BigCount exact;
    // sum over bucket pairs of e_host(Z_s, Z_t)(1+eta)^(sum s + sum t), divided
    // by (1+eta)^(2(k-1)) for the lower value.
    double bucket_lower = 0.0;
    double bucket_upper = 0.0;
    bool sandwich_holds = true;
    PqSums px;
    PqSums py;
    double main_term = 0.0;   // p P(X) P(Y)
    double error_term = 0.0;  // beta Q(X) Q(Y)
};
ConnectBounds connect_bounds(const BlowupGraph& h, const Graph& host, const VertexSet& x, const VertexSet& y,
                             double eta, double beta, const LayerFrame& frame);

struct CountOptions {
    double eta = 0.25;
    // Host jumbledness parameter used for the error term; 0 skips it.
    double beta = 0.0;
    // Also build buckets and check both sandwiches for every w.
    bool buckets = true;
    bool per_vertex = false;
    // Fill the saturation summary for this mu.
    std::optional<double> mu;
};

struct VertexCount {
    Vertex w = 0;
    BigCount exact;
    double bucket_lower = 0.0;
    double bucket_upper = 0.0;
    PqSums px;
    PqSums py;
    double error_term = 0.0;
};

struct SaturationSummary {
    double mu = 0.0;
    double threshold = 0.0;
    std::size_t saturated_edges = 0;
    BigCount saturated_cycles;  // |S(mu, H, host)|
    BigCount max_load;
};

struct CountReport {
    std::size_t k = 0;
    std::size_t m = 0;
    double p = 0.0;
    double eta = 0.0;
    double beta = 0.0;
    // |C(H, host)|: partition-respecting (2k+1)-cycles with every edge in H
    // except the U_k V_k edge, which only has to be a host edge.
    BigCount exact_c;
    double bucket_lower = 0.0;
    double bucket_upper = 0.0;
    // Sums over w in W of P(X_w), Q(X_w), P(Y_w), Q(Y_w).
    double p_x = 0.0;
    double q_x = 0.0;
    double p_y = 0.0;
    double q_y = 0.0;
    double main_term = 0.0;
    double error_term = 0.0;
    std::size_t sandwich_violations = 0;
    std::size_t level_sandwich_violations = 0;
    // Levels checked against the path-count window, and failures among them.
    std::size_t window_levels_checked = 0;
    std::size_t window_violations = 0;
    bool degree_window_holds = false;
    std::vector<VertexCount> per_vertex;
    std::optional<SaturationSummary> saturation;
};

CountReport cycle_count(const BlowupGraph& h, const Graph& host, const CountOptions& options = {});

struct EdgeLoad {
    Vertex u = 0;  // in U_k
    Vertex v = 0;  // in V_k
    BigCount load;
    bool saturated = false;
};

// Saturation seen from a vertex w~ of U_k after renaming the partition so
// that U_k plays the role of W and V_k the role of V_1.
struct RenamedSaturation {
    Vertex w = 0;
    std::size_t d_size = 0;           // |D_mu(w~)|
    BigCount saturated_cycles;         // saturated cycles through w~
    BigCount connection_bound;         // S~(N_H(w~) cap U~_1, D_mu(w~))
    bool bound_holds = true;
};

struct SaturationResult {
    double mu = 0.0;
    double threshold = 0.0;  // p (mu p m)^(2k-1)
    // Every host edge between U_k and V_k, ordered by (u, v).
    std::vector<EdgeLoad> loads;
    std::size_t saturated_count = 0;
    BigCount s_count;     // sum of loads over saturated edges
    BigCount total_load;  // sum of all loads; equals |C(H, host)|
    BigCount max_load;
    std::vector<RenamedSaturation> renamed;  // one entry per vertex of U_k
    bool renamed_bounds_hold = true;
};

// Loads and saturation of the host edges between the end layers, in the
// standard orientation, plus the per-vertex view in the renamed partition.
SaturationResult saturated_edges(const BlowupGraph& h, const Graph& host, double mu);

struct TupleAudit {
    Side side = Side::U;
    std::vector<std::uint32_t> prefix;
    std::size_t z_size = 0;
    double q = 0.0;  // sqrt|Z| (1+eta)^(sum s)
    char which_case = 'a';
    // Case (a): every intermediate bucket is smaller than p^(1/(2k-1)) m.
    std::vector<double> m_factors;  // M_2..M_k
    double case_a_bound = 0.0;      // (1+eta)^k sqrt|X| prod M_j
    // Case (b): split at the first j with a large bucket.
    std::size_t split_j = 0;
    double r1 = 0.0;
    double r2 = 0.0;
    double r1_bound = 0.0;
    double r2_bound = 0.0;
    bool product_matches = true;  // R1 R2 reproduces q
    bool case_bound_holds = true;
    double small_q_bound = 0.0;   // 2^(4k) p^(k - 1/(2(2k-1))) m^((2k-1)/2)
    bool small_q_holds = true;
};

struct ErrorTermAudit {
    std::size_t k = 0;
    std::size_t m = 0;
    double p = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    double xi = 0.0;
    double nu = 0.0;
    double size_cap = 0.0;  // (alpha + eps) p m
    bool precondition_met = true;
    double q_x = 0.0;
    double q_y = 0.0;
    double error_term = 0.0;  // beta Q(X) Q(Y)
    double bound = 0.0;       // xi p (pm)^(2k)
    bool passes = false;
    // xi (ln(1+eta))^(2k) / (2^(8k) nu)
    double gamma_schedule = 0.0;
    std::vector<TupleAudit> tuples;
    std::size_t small_q_violations = 0;
    std::size_t case_bound_violations = 0;
};

ErrorTermAudit error_term_audit(const BlowupGraph& h, const JumblednessParams& host_params, const VertexSet& x,
                         const VertexSet& y, double eta, double xi, double nu);

struct CycleList {
    std::vector<std::vector<Vertex>> cycles;
    bool truncated = false;
};

// Simple cycles of length ell, each listed once: rooted at its smallest
// vertex and oriented so the second vertex is smaller than the last. Stops
// after `cap` cycles (truncated is then set if another one exists).
CycleList brute_force_cycles(const Graph& g, std::size_t ell, std::size_t cap);

// True if `cycle` is a simple cycle of g of its own length (>= 3).
bool is_cycle_of(const Graph& g, const std::vector<Vertex>& cycle);

std::string to_string(const BigCount& value);

}  // namespace oddcycle
