#include "oddcycle/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "oddcycle/error.hpp"
#include "oddcycle/parallel.hpp"

namespace oddcycle {

namespace {

struct Overflow {};

void add_into(std::uint64_t& a, std::uint64_t b) {
    if (__builtin_add_overflow(a, b, &a)) throw Overflow{};
}
void add_into(BigCount& a, const BigCount& b) { a += b; }

std::uint64_t times(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw Overflow{};
    return out;
}
BigCount times(const BigCount& a, const BigCount& b) { return a * b; }

BigCount widen(std::uint64_t v) { return BigCount(v); }
BigCount widen(const BigCount& v) { return v; }

double to_double(const BigCount& v) { return v.convert_to<double>(); }

// Runs fn with 64-bit counters, or with big integers if that overflows.
template <typename Fn>
auto checked(Fn&& fn) {
    try {
        return fn(std::uint64_t{0});
    } catch (const Overflow&) {
        return fn(BigCount{0});
    }
}

// a <= b up to floating-point rounding in b.
bool at_most(double a, double b) { return a <= b + 1e-9 * std::max(1.0, std::abs(b)); }

void require_host(const BlowupGraph& h, const Graph& host) {
    if (host.n() < h.n()) {
        throw ParameterError("host has " + std::to_string(host.n()) + " vertices but the blow-up uses " +
                             std::to_string(h.n()));
    }
}

void require_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in (0, 1]");
}

template <typename T>
using Layered = std::vector<std::vector<T>>;

template <typename T>
Layered<T> layered_counts(const BlowupGraph& h, Side side, const VertexSet& x, const LayerFrame& frame) {
    const std::size_t k = h.k();
    const std::size_t ell = h.ell();
    Layered<T> counts(k, std::vector<T>(h.m(), T{0}));
    const auto first = frame.position(side, 1, ell);
    for (Vertex v : x) {
        const auto slot = h.slot(v);
        if (slot.position != first) {
            throw ParameterError("vertex " + std::to_string(v) + " is not in the first layer of its side");
        }
        counts[0][slot.offset] = T{1};
    }
    const Graph& g = h.graph();
    for (std::size_t j = 2; j <= k; ++j) {
        const auto prev = frame.position(side, j - 1, ell);
        const VertexSet& layer = h.layer(frame.position(side, j, ell));
        for (std::size_t i = 0; i < layer.size(); ++i) {
            T sum{0};
            for (Vertex y : g.neighbors(layer[i])) {
                const auto slot = h.slot(y);
                if (slot.position == prev) add_into(sum, counts[j - 2][slot.offset]);
            }
            counts[j - 1][i] = sum;
        }
    }
    return counts;
}

template <typename T>
T connect_from_counts(const BlowupGraph& h, const Graph& host, const LayerFrame& frame, const std::vector<T>& cu,
                      const std::vector<T>& cv) {
    const std::size_t k = h.k();
    const auto vk = frame.position(Side::V, k, h.ell());
    const VertexSet& uk = h.layer(frame.position(Side::U, k, h.ell()));
    T total{0};
    for (std::size_t i = 0; i < uk.size(); ++i) {
        if (cu[i] == 0) continue;
        for (Vertex v : host.neighbors(uk[i])) {
            const auto slot = h.slot(v);
            if (slot.position == vk) add_into(total, times(cu[i], cv[slot.offset]));
        }
    }
    return total;
}

template <typename T>
std::vector<BigCount> level_totals(const Layered<T>& counts) {
    std::vector<BigCount> out;
    for (const auto& level : counts) {
        BigCount sum = 0;
        for (const auto& c : level) sum += widen(c);
        out.push_back(sum);
    }
    return out;
}

std::uint32_t bucket_index(std::size_t degree, double eta) {
    const double d = static_cast<double>(degree);
    const double base = 1.0 + eta;
    auto s = static_cast<std::int64_t>(std::floor(std::log(d) / std::log1p(eta))) + 1;
    s = std::max<std::int64_t>(s, 1);
    while (s > 1 && std::pow(base, static_cast<double>(s - 1)) > d) --s;
    while (std::pow(base, static_cast<double>(s)) <= d) ++s;
    return static_cast<std::uint32_t>(s);
}

// Bucket weight of every member of the last level: sum of (1+eta)^(sum s)
// over the level-k buckets containing it, indexed by layer offset.
std::vector<double> end_weights(const BlowupGraph& h, const BucketPartition& bp) {
    std::vector<double> w(h.m(), 0.0);
    if (bp.levels.size() < bp.k) return w;
    for (const ZSet& z : bp.levels[bp.k - 1]) {
        for (Vertex v : z.members) w[h.slot(v).offset] += z.weight;
    }
    return w;
}

double bucket_connection(const BlowupGraph& h, const Graph& host, const LayerFrame& frame,
                         const std::vector<double>& wx, const std::vector<double>& wy) {
    const auto vk = frame.position(Side::V, h.k(), h.ell());
    const VertexSet& uk = h.layer(frame.position(Side::U, h.k(), h.ell()));
    double total = 0.0;
    for (std::size_t i = 0; i < uk.size(); ++i) {
        if (wx[i] == 0.0) continue;
        for (Vertex v : host.neighbors(uk[i])) {
            const auto slot = h.slot(v);
            if (slot.position == vk) total += wx[i] * wy[slot.offset];
        }
    }
    return total;
}

VertexSet neighbors_in(const BlowupGraph& h, Vertex w, std::size_t position) {
    std::vector<Vertex> out;
    for (Vertex x : h.graph().neighbors(w)) {
        if (h.slot(x).position == position) out.push_back(x);
    }
    return VertexSet(std::move(out));
}

}  // namespace

BigCount PathCountTable::total(std::size_t j) const {
    BigCount sum = 0;
    for (const auto& c : counts.at(j - 1)) sum += c;
    return sum;
}

PathCountTable path_counts(const BlowupGraph& h, Side side, const VertexSet& x, const LayerFrame& frame) {
    PathCountTable table;
    table.side = side;
    table.frame = frame;
    table.k = h.k();
    checked([&](auto zero) {
        using T = decltype(zero);
        const auto counts = layered_counts<T>(h, side, x, frame);
        table.wide = std::is_same_v<T, BigCount>;
        table.counts.clear();
        for (const auto& level : counts) {
            std::vector<BigCount> row;
            row.reserve(level.size());
            for (const auto& c : level) row.push_back(widen(c));
            table.counts.push_back(std::move(row));
        }
        return 0;
    });
    return table;
}

double BucketPartition::weighted_size(std::size_t j) const {
    double sum = 0.0;
    if (j == 0 || j > levels.size()) return sum;
    for (const ZSet& z : levels[j - 1]) sum += static_cast<double>(z.members.size()) * z.weight;
    return sum;
}

BucketPartition bucket_partition(const BlowupGraph& h, Side side, const VertexSet& x, double eta,
                                 const LayerFrame& frame) {
    require_eta(eta);
    BucketPartition bp;
    bp.side = side;
    bp.frame = frame;
    bp.k = h.k();
    bp.eta = eta;
    bp.pm = h.window().p * static_cast<double>(h.m());
    bp.base = x;
    if (2.0 * bp.pm > 1.0) {
        bp.l_eta = static_cast<std::size_t>(std::ceil(std::log(2.0 * bp.pm) / std::log1p(eta))) + 1;
    }
    bp.levels.resize(bp.k);

    const std::size_t ell = h.ell();
    const auto first = frame.position(side, 1, ell);
    for (Vertex v : x) {
        if (h.slot(v).position != first) {
            throw ParameterError("vertex " + std::to_string(v) + " is not in the first layer of its side");
        }
    }
    if (!x.empty()) bp.levels[0].push_back(ZSet{{0}, x, 1.0, 0});

    const Graph& g = h.graph();
    std::vector<std::size_t> back(h.m(), 0);
    for (std::size_t j = 2; j <= bp.k; ++j) {
        const auto pos = frame.position(side, j, ell);
        const VertexSet& layer = h.layer(pos);
        const auto& parents = bp.levels[j - 2];
        for (std::size_t pi = 0; pi < parents.size(); ++pi) {
            std::fill(back.begin(), back.end(), 0);
            for (Vertex y : parents[pi].members) {
                for (Vertex z : g.neighbors(y)) {
                    const auto slot = h.slot(z);
                    if (slot.position == pos) ++back[slot.offset];
                }
            }
            std::map<std::uint32_t, std::vector<Vertex>> groups;
            for (std::size_t i = 0; i < layer.size(); ++i) {
                if (back[i] > 0) groups[bucket_index(back[i], eta)].push_back(layer[i]);
            }
            for (auto& [s, members] : groups) {
                bp.max_index = std::max(bp.max_index, s);
                if (s > bp.l_eta) bp.indices_within_l = false;
                const double power = std::pow(1.0 + eta, static_cast<double>(s));
                if (power > 8.0 * bp.pm) bp.index_power_within_8pm = false;
                ZSet z;
                z.prefix = parents[pi].prefix;
                z.prefix.push_back(s);
                z.members = VertexSet(std::move(members));
                z.weight = parents[pi].weight * power;
                z.parent = pi;
                bp.levels[j - 1].push_back(std::move(z));
            }
        }
    }
    return bp;
}

PqSums pq_sums(const BucketPartition& bp) {
    PqSums out;
    if (bp.k == 0) return out;
    for (const ZSet& z : bp.levels[bp.k - 1]) {
        out.p += static_cast<double>(z.members.size()) * z.weight;
        out.q += std::sqrt(static_cast<double>(z.members.size())) * z.weight;
    }
    return out;
}

std::vector<LevelSandwich> level_sandwich(const BucketPartition& bp, const PathCountTable& table) {
    std::vector<LevelSandwich> out;
    for (std::size_t j = 1; j <= bp.k; ++j) {
        LevelSandwich row;
        row.j = j;
        row.upper = bp.weighted_size(j);
        row.lower = row.upper / std::pow(1.0 + bp.eta, static_cast<double>(j - 1));
        row.exact = table.total(j);
        const double exact = to_double(row.exact);
        row.holds = at_most(row.lower, exact) && at_most(exact, row.upper);
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<LevelWindow> path_count_window(const BlowupGraph& h, const PathCountTable& table, std::size_t x_size) {
    const DegreeWindow& win = h.window();
    const double pm = win.p * static_cast<double>(h.m());
    std::vector<LevelWindow> out;
    for (std::size_t j = 1; j <= table.k; ++j) {
        LevelWindow row;
        row.j = j;
        const double e = static_cast<double>(j - 1);
        row.lower = static_cast<double>(x_size) * std::pow((win.alpha - win.eps) * pm, e);
        row.upper = static_cast<double>(x_size) * std::pow((win.alpha + win.eps) * pm, e);
        row.exact = table.total(j);
        const double exact = to_double(row.exact);
        row.holds = at_most(row.lower, exact) && at_most(exact, row.upper);
        out.push_back(std::move(row));
    }
    return out;
}

BigCount connect_count_exact(const BlowupGraph& h, const Graph& host, const VertexSet& x, const VertexSet& y,
                             const LayerFrame& frame) {
    require_host(h, host);
    return checked([&](auto zero) {
        using T = decltype(zero);
        const auto cu = layered_counts<T>(h, Side::U, x, frame);
        const auto cv = layered_counts<T>(h, Side::V, y, frame);
        return widen(connect_from_counts<T>(h, host, frame, cu.back(), cv.back()));
    });
}

ConnectBounds connect_bounds(const BlowupGraph& h, const Graph& host, const VertexSet& x, const VertexSet& y,
                             double eta, double beta, const LayerFrame& frame) {
    ConnectBounds out;
    out.exact = connect_count_exact(h, host, x, y, frame);
    const BucketPartition bx = bucket_partition(h, Side::U, x, eta, frame);
    const BucketPartition by = bucket_partition(h, Side::V, y, eta, frame);
    out.bucket_upper = bucket_connection(h, host, frame, end_weights(h, bx), end_weights(h, by));
    out.bucket_lower = out.bucket_upper / std::pow(1.0 + eta, 2.0 * static_cast<double>(h.k() - 1));
    const double exact = to_double(out.exact);
    out.sandwich_holds = at_most(out.bucket_lower, exact) && at_most(exact, out.bucket_upper);
    out.px = pq_sums(bx);
    out.py = pq_sums(by);
    out.main_term = h.window().p * out.px.p * out.py.p;
    out.error_term = beta * out.px.q * out.py.q;
    return out;
}

CountReport cycle_count(const BlowupGraph& h, const Graph& host, const CountOptions& options) {
    require_host(h, host);
    require_eta(options.eta);
    CountReport report;
    report.k = h.k();
    report.m = h.m();
    report.p = h.window().p;
    report.eta = options.eta;
    report.beta = options.beta;
    report.degree_window_holds = audit_degree_window(h).holds;

    const LayerFrame frame = LayerFrame::standard(h.k());
    const std::size_t ell = h.ell();
    const VertexSet& w_layer = h.w_layer(frame);
    const auto u1 = frame.position(Side::U, 1, ell);
    const auto v1 = frame.position(Side::V, 1, ell);

    struct PerW {
        VertexCount count;
        std::size_t sandwich_bad = 0;
        std::size_t level_bad = 0;
        std::size_t window_checked = 0;
        std::size_t window_bad = 0;
    };
    std::vector<PerW> rows(w_layer.size());
    parallel_for(0, w_layer.size(), [&](std::size_t i) {
        PerW& row = rows[i];
        const Vertex w = w_layer[i];
        const VertexSet x = neighbors_in(h, w, u1);
        const VertexSet y = neighbors_in(h, w, v1);
        row.count.w = w;
        std::vector<BigCount> totals_x;
        std::vector<BigCount> totals_y;
        row.count.exact = checked([&](auto zero) {
            using T = decltype(zero);
            const auto cu = layered_counts<T>(h, Side::U, x, frame);
            const auto cv = layered_counts<T>(h, Side::V, y, frame);
            totals_x = level_totals(cu);
            totals_y = level_totals(cv);
            return widen(connect_from_counts<T>(h, host, frame, cu.back(), cv.back()));
        });
        if (report.degree_window_holds) {
            const DegreeWindow& win = h.window();
            const double pm = win.p * static_cast<double>(h.m());
            auto check = [&](const std::vector<BigCount>& totals, std::size_t size) {
                for (std::size_t j = 1; j <= totals.size(); ++j) {
                    const double e = static_cast<double>(j - 1);
                    const double lo = static_cast<double>(size) * std::pow((win.alpha - win.eps) * pm, e);
                    const double hi = static_cast<double>(size) * std::pow((win.alpha + win.eps) * pm, e);
                    const double exact = to_double(totals[j - 1]);
                    ++row.window_checked;
                    if (!(at_most(lo, exact) && at_most(exact, hi))) ++row.window_bad;
                }
            };
            check(totals_x, x.size());
            check(totals_y, y.size());
        }
        if (!options.buckets) return;
        const BucketPartition bx = bucket_partition(h, Side::U, x, options.eta, frame);
        const BucketPartition by = bucket_partition(h, Side::V, y, options.eta, frame);
        auto level_check = [&](const BucketPartition& bp, const std::vector<BigCount>& totals) {
            for (std::size_t j = 1; j <= bp.k; ++j) {
                const double upper = bp.weighted_size(j);
                const double lower = upper / std::pow(1.0 + bp.eta, static_cast<double>(j - 1));
                const double exact = to_double(totals[j - 1]);
                if (!(at_most(lower, exact) && at_most(exact, upper))) ++row.level_bad;
            }
        };
        level_check(bx, totals_x);
        level_check(by, totals_y);
        row.count.bucket_upper = bucket_connection(h, host, frame, end_weights(h, bx), end_weights(h, by));
        row.count.bucket_lower =
            row.count.bucket_upper / std::pow(1.0 + options.eta, 2.0 * static_cast<double>(h.k() - 1));
        const double exact = to_double(row.count.exact);
        if (!(at_most(row.count.bucket_lower, exact) && at_most(exact, row.count.bucket_upper))) {
            ++row.sandwich_bad;
        }
        row.count.px = pq_sums(bx);
        row.count.py = pq_sums(by);
        row.count.error_term = options.beta * row.count.px.q * row.count.py.q;
    });

    for (PerW& row : rows) {
        report.exact_c += row.count.exact;
        report.bucket_lower += row.count.bucket_lower;
        report.bucket_upper += row.count.bucket_upper;
        report.p_x += row.count.px.p;
        report.q_x += row.count.px.q;
        report.p_y += row.count.py.p;
        report.q_y += row.count.py.q;
        report.main_term += report.p * row.count.px.p * row.count.py.p;
        report.error_term += row.count.error_term;
        report.sandwich_violations += row.sandwich_bad;
        report.level_sandwich_violations += row.level_bad;
        report.window_levels_checked += row.window_checked;
        report.window_violations += row.window_bad;
        if (options.per_vertex) report.per_vertex.push_back(std::move(row.count));
    }

    if (options.mu) {
        const SaturationResult sat = saturated_edges(h, host, *options.mu);
        report.saturation = SaturationSummary{sat.mu, sat.threshold, sat.saturated_count, sat.s_count, sat.max_load};
    }
    return report;
}

SaturationResult saturated_edges(const BlowupGraph& h, const Graph& host, double mu) {
    require_host(h, host);
    if (!(mu > 0.0)) throw ParameterError("mu must be positive");
    const std::size_t k = h.k();
    const std::size_t ell = h.ell();
    const LayerFrame frame = LayerFrame::standard(k);
    const double p = h.window().p;
    const double pm = p * static_cast<double>(h.m());

    SaturationResult out;
    out.mu = mu;
    out.threshold = p * std::pow(mu * pm, 2.0 * static_cast<double>(k) - 1.0);

    const VertexSet& w_layer = h.w_layer(frame);
    const VertexSet& uk = h.layer(frame.position(Side::U, k, ell));
    const auto vk = frame.position(Side::V, k, ell);
    const auto u1 = frame.position(Side::U, 1, ell);
    const auto v1 = frame.position(Side::V, 1, ell);
    for (std::size_t i = 0; i < uk.size(); ++i) {
        for (Vertex v : host.neighbors(uk[i])) {
            if (h.slot(v).position == vk) out.loads.push_back(EdgeLoad{uk[i], v, 0, false});
        }
    }

    // Path-count matrices A[w][u] and B[w][v], then one dot product per edge.
    std::vector<BigCount> loads = checked([&](auto zero) {
        using T = decltype(zero);
        std::vector<std::vector<T>> a(w_layer.size());
        std::vector<std::vector<T>> b(w_layer.size());
        parallel_for(0, w_layer.size(), [&](std::size_t i) {
            const Vertex w = w_layer[i];
            a[i] = layered_counts<T>(h, Side::U, neighbors_in(h, w, u1), frame).back();
            b[i] = layered_counts<T>(h, Side::V, neighbors_in(h, w, v1), frame).back();
        });
        std::vector<T> raw(out.loads.size(), T{0});
        parallel_for(0, out.loads.size(), [&](std::size_t e) {
            const auto iu = h.slot(out.loads[e].u).offset;
            const auto iv = h.slot(out.loads[e].v).offset;
            T sum{0};
            for (std::size_t i = 0; i < w_layer.size(); ++i) add_into(sum, times(a[i][iu], b[i][iv]));
            raw[e] = sum;
        });
        std::vector<BigCount> wide;
        wide.reserve(raw.size());
        for (const auto& r : raw) wide.push_back(widen(r));
        return wide;
    });

    for (std::size_t e = 0; e < out.loads.size(); ++e) {
        EdgeLoad& edge = out.loads[e];
        edge.load = std::move(loads[e]);
        edge.saturated = to_double(edge.load) >= out.threshold;
        out.total_load += edge.load;
        if (edge.load > out.max_load) out.max_load = edge.load;
        if (edge.saturated) {
            ++out.saturated_count;
            out.s_count += edge.load;
        }
    }

    // Renamed partition: U_k becomes W~ and V_k becomes V~_1.
    const LayerFrame renamed = LayerFrame::renamed();
    const auto tilde_u1 = renamed.position(Side::U, 1, ell);
    std::size_t e = 0;
    for (std::size_t i = 0; i < uk.size(); ++i) {
        RenamedSaturation row;
        row.w = uk[i];
        std::vector<Vertex> d;
        for (; e < out.loads.size() && out.loads[e].u == uk[i]; ++e) {
            if (!out.loads[e].saturated) continue;
            d.push_back(out.loads[e].v);
            row.saturated_cycles += out.loads[e].load;
        }
        row.d_size = d.size();
        if (!d.empty()) {
            row.connection_bound =
                connect_count_exact(h, host, neighbors_in(h, uk[i], tilde_u1), VertexSet(std::move(d)), renamed);
        }
        row.bound_holds = row.saturated_cycles <= row.connection_bound;
        out.renamed_bounds_hold = out.renamed_bounds_hold && row.bound_holds;
        out.renamed.push_back(std::move(row));
    }
    return out;
}

ErrorTermAudit error_term_audit(const BlowupGraph& h, const JumblednessParams& host_params, const VertexSet& x,
                         const VertexSet& y, double eta, double xi, double nu) {
    require_eta(eta);
    if (!(xi > 0.0)) throw ParameterError("xi must be positive");
    if (!(nu > 0.0)) throw ParameterError("nu must be positive");
    if (!(host_params.p > 0.0 && host_params.p <= 1.0)) throw ParameterError("p must lie in (0, 1]");

    ErrorTermAudit out;
    out.k = h.k();
    out.m = h.m();
    out.p = host_params.p;
    out.beta = host_params.beta;
    out.eta = eta;
    out.xi = xi;
    out.nu = nu;
    const double p = out.p;
    const double m = static_cast<double>(out.m);
    const double pm = p * m;
    const double kd = static_cast<double>(out.k);
    out.size_cap = (h.window().alpha + h.window().eps) * pm;
    out.precondition_met = static_cast<double>(x.size()) <= out.size_cap && static_cast<double>(y.size()) <= out.size_cap;

    const BucketPartition bx = bucket_partition(h, Side::U, x, eta);
    const BucketPartition by = bucket_partition(h, Side::V, y, eta);
    out.q_x = pq_sums(bx).q;
    out.q_y = pq_sums(by).q;
    out.error_term = out.beta * out.q_x * out.q_y;
    out.bound = xi * p * std::pow(pm, 2.0 * kd);
    out.passes = out.error_term < out.bound;
    out.gamma_schedule = xi * std::pow(std::log1p(eta), 2.0 * kd) / (std::pow(2.0, 8.0 * kd) * nu);

    const double base = 1.0 + eta;
    const double large = std::pow(p, 1.0 / (2.0 * kd - 1.0)) * m;
    const double small_q = std::pow(2.0, 4.0 * kd) * std::pow(p, kd - 1.0 / (2.0 * (2.0 * kd - 1.0))) *
                           std::pow(m, (2.0 * kd - 1.0) / 2.0);

    auto audit_side = [&](const BucketPartition& bp, Side side) {
        if (bp.levels.empty()) return;
        for (std::size_t idx = 0; idx < bp.levels[out.k - 1].size(); ++idx) {
            // Chain of bucket sizes |Z(s_1)|, ..., |Z(s_k)| along this tuple.
            std::vector<double> sizes(out.k);
            std::size_t at = idx;
            for (std::size_t j = out.k; j >= 1; --j) {
                const ZSet& z = bp.levels[j - 1][at];
                sizes[j - 1] = static_cast<double>(z.members.size());
                at = z.parent;
            }
            const ZSet& last = bp.levels[out.k - 1][idx];
            TupleAudit t;
            t.side = side;
            t.prefix = last.prefix;
            t.z_size = last.members.size();
            t.q = std::sqrt(sizes.back()) * last.weight;
            t.small_q_bound = small_q;
            t.small_q_holds = at_most(t.q, small_q);

            std::size_t split = 0;
            for (std::size_t j = 2; j <= out.k; ++j) {
                if (sizes[j - 1] >= large) {
                    split = j;
                    break;
                }
            }
            if (split == 0) {
                t.which_case = 'a';
                double prod = 1.0;
                for (std::size_t j = 2; j <= out.k; ++j) {
                    const double mj = 2.0 * std::max(out.beta, p * std::sqrt(sizes[j - 1] * sizes[j - 2]));
                    t.m_factors.push_back(mj);
                    prod *= mj;
                }
                t.case_a_bound = std::pow(base, kd) * std::sqrt(sizes[0]) * prod;
                t.case_bound_holds = at_most(t.q, t.case_a_bound);
            } else {
                t.which_case = 'b';
                t.split_j = split;
                double sum_sj = 0.0;
                for (std::size_t j = 1; j <= split; ++j) sum_sj += last.prefix[j - 1];
                t.r1 = std::sqrt(sizes[split - 1]) * std::pow(base, sum_sj);
                t.r2 = 1.0;
                for (std::size_t r = split; r < out.k; ++r) {
                    t.r2 *= std::sqrt(sizes[r] / sizes[r - 1]) * std::pow(base, static_cast<double>(last.prefix[r]));
                }
                const double jd = static_cast<double>(split);
                t.r1_bound = std::pow(4.0, jd) * std::pow(p, jd - 1.0 / (2.0 * (2.0 * kd - 1.0))) *
                             std::pow(m, (2.0 * jd - 1.0) / 2.0);
                t.r2_bound = std::pow(6.0 * pm, kd - jd);
                t.product_matches = std::abs(t.r1 * t.r2 - t.q) <= 1e-9 * std::max(1.0, t.q);
                t.case_bound_holds = at_most(t.r1, t.r1_bound) && at_most(t.r2, t.r2_bound);
            }
            if (!t.small_q_holds) ++out.small_q_violations;
            if (!t.case_bound_holds) ++out.case_bound_violations;
            out.tuples.push_back(std::move(t));
        }
    };
    audit_side(bx, Side::U);
    audit_side(by, Side::V);
    return out;
}

CycleList brute_force_cycles(const Graph& g, std::size_t ell, std::size_t cap) {
    if (ell < 3) throw ParameterError("cycle length must be at least 3");
    CycleList out;
    std::vector<Vertex> path;
    std::vector<char> on_path(g.n(), 0);
    bool stop = false;

    auto dfs = [&](auto&& self, Vertex root) -> void {
        const Vertex last = path.back();
        if (path.size() == ell) {
            if (path[1] < last && g.has_edge(last, root)) {
                if (out.cycles.size() >= cap) {
                    out.truncated = true;
                    stop = true;
                    return;
                }
                out.cycles.push_back(path);
            }
            return;
        }
        for (Vertex next : g.neighbors(last)) {
            if (next <= root || on_path[next]) continue;
            path.push_back(next);
            on_path[next] = 1;
            self(self, root);
            on_path[next] = 0;
            path.pop_back();
            if (stop) return;
        }
    };

    for (Vertex root = 0; root < g.n() && !stop; ++root) {
        path.assign(1, root);
        on_path[root] = 1;
        dfs(dfs, root);
        on_path[root] = 0;
    }
    return out;
}

bool is_cycle_of(const Graph& g, const std::vector<Vertex>& cycle) {
    if (cycle.size() < 3) return false;
    std::vector<Vertex> sorted = cycle;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (sorted.back() >= g.n()) return false;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (!g.has_edge(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
    }
    return true;
}

std::string to_string(const BigCount& value) { return value.str(); }

}  // namespace oddcycle
