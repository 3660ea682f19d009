#include "oddcycle/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "oddcycle/error.hpp"
#include "oddcycle/parallel.hpp"
#include "oddcycle/regularize.hpp"
#include "oddcycle/rng.hpp"
#include "oddcycle/spectral.hpp"

namespace oddcycle {

namespace {

InequalityCheck at_least(std::string name, double value, double bound) {
    return {std::move(name), value, bound, value - bound, value >= bound};
}

InequalityCheck at_most(std::string name, double value, double bound) {
    return {std::move(name), value, bound, bound - value, value <= bound};
}

double host_density(const Graph& host, const TheoremParams& params) {
    if (params.p > 0.0) return params.p;
    if (host.n() == 0) throw ParameterError("empty host graph");
    return host.average_degree() / static_cast<double>(host.n());
}

bool is_subgraph(const Graph& sub, const Graph& host) {
    if (sub.n() != host.n()) return false;
    for (Vertex u = 0; u < sub.n(); ++u) {
        for (Vertex v : sub.neighbors(u)) {
            if (u < v && !host.has_edge(u, v)) return false;
        }
    }
    return true;
}

VertexSet neighbors_at(const BlowupGraph& h, Vertex w, std::size_t position) {
    std::vector<Vertex> out;
    for (Vertex x : h.graph().neighbors(w)) {
        if (h.slot(x).position == position) out.push_back(x);
    }
    return VertexSet(std::move(out));
}

// Walks back from `end` (layer k of `side`) to layer 1 through the
// smallest-id neighbor with a positive path count. Returns layer-1..k order.
std::vector<Vertex> walk_back(const BlowupGraph& h, const PathCountTable& table, Side side, Vertex end) {
    const LayerFrame& frame = table.frame;
    const std::size_t ell = h.ell();
    std::vector<Vertex> path{end};
    for (std::size_t j = table.k; j >= 2; --j) {
        const auto prev = frame.position(side, j - 1, ell);
        Vertex pick = end;
        bool found = false;
        for (Vertex y : h.graph().neighbors(path.back())) {
            const auto slot = h.slot(y);
            if (slot.position == prev && table.at(j - 1, slot.offset) > 0) {
                pick = y;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("path count table is inconsistent with the blow-up");
        path.push_back(pick);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::optional<std::vector<Vertex>> witness_cycle(const BlowupGraph& h) {
    const std::size_t k = h.k();
    const std::size_t ell = h.ell();
    const LayerFrame frame = LayerFrame::standard(k);
    const VertexSet& uk = h.layer(frame, Side::U, k);
    const auto vk = frame.position(Side::V, k, ell);
    const auto u1 = frame.position(Side::U, 1, ell);
    const auto v1 = frame.position(Side::V, 1, ell);
    for (Vertex w : h.w_layer(frame)) {
        const VertexSet x = neighbors_at(h, w, u1);
        const VertexSet y = neighbors_at(h, w, v1);
        if (x.empty() || y.empty()) continue;
        const PathCountTable cu = path_counts(h, Side::U, x, frame);
        const PathCountTable cv = path_counts(h, Side::V, y, frame);
        for (std::size_t i = 0; i < uk.size(); ++i) {
            if (cu.at(k, i) == 0) continue;
            for (Vertex v : h.graph().neighbors(uk[i])) {
                const auto slot = h.slot(v);
                if (slot.position != vk || cv.at(k, slot.offset) == 0) continue;
                const auto left = walk_back(h, cu, Side::U, uk[i]);
                const auto right = walk_back(h, cv, Side::V, v);
                // u_k, ..., u_1, w, v_1, ..., v_k
                std::vector<Vertex> cycle(left.rbegin(), left.rend());
                cycle.push_back(w);
                cycle.insert(cycle.end(), right.begin(), right.end());
                return cycle;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::string to_string(ParamMode mode) { return mode == ParamMode::Paper ? "paper" : "practical"; }

ParamMode param_mode_from_string(const std::string& name) {
    if (name == "paper") return ParamMode::Paper;
    if (name == "practical") return ParamMode::Practical;
    throw ParameterError("unknown mode '" + name + "' (expected paper or practical)");
}

double TheoremParams::paper_eps() const {
    return delta / (4.0 + 32.0 * static_cast<double>(k) + std::pow(6.0, 2.0 * static_cast<double>(k) + 1.0));
}

double TheoremParams::eps() const {
    if (eps_override) return *eps_override;
    return mode == ParamMode::Paper ? paper_eps() : 3.6 * alpha0();
}

double TheoremParams::gamma1() const {
    CleanupParams cp;
    cp.alpha = alpha0();
    cp.eps = eps() / 4.0;
    cp.rho = rho();
    cp.mu = mu;
    return cp.gamma();
}

double TheoremParams::gamma2() const {
    const double kd = static_cast<double>(k);
    const double xi = std::pow(eps() / 4.0, 4.0 * kd);
    const double eta_sched = std::min(eps() / (4.0 * alpha0()), 1.0);
    return xi * std::pow(std::log1p(eta_sched), 2.0 * kd) / (std::pow(2.0, 8.0 * kd) * nu());
}

double TheoremParams::gamma() const { return std::min({gamma1(), gamma2(), delta * nu() / 4.0}); }

void TheoremParams::validate() const {
    if (k < 1) throw ParameterError("k must be at least 1");
    if (!(delta > 0.0 && delta <= 0.5)) throw ParameterError("delta must lie in (0, 1/2]");
    if (!(eps() > 0.0)) throw ParameterError("eps must be positive");
    if (mode == ParamMode::Paper && !(eps() < alpha0())) throw ParameterError("eps must be below alpha0");
    if (!(eps() / 4.0 < alpha0())) throw ParameterError("eps/4 must be below alpha0");
    if (!(mu > 0.0 && mu <= 1.0)) throw ParameterError("mu must lie in (0, 1]");
    if (!(nu() > 0.0 && nu() <= 1.0)) throw ParameterError("nu must lie in (0, 1]");
    if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in (0, 1]");
    if (p < 0.0 || p > 1.0) throw ParameterError("p must lie in [0, 1]");
}

MaxCut max_cut_bipartite(const Graph& g, std::uint64_t seed) {
    const std::size_t n = g.n();
    MaxCut out;
    out.side.assign(n, 0);
    std::vector<Vertex> roots(n);
    std::iota(roots.begin(), roots.end(), Vertex{0});
    if (seed != 0) {
        SplitMix64 rng(seed);
        rng.shuffle(std::span<Vertex>(roots));
    }

    std::vector<char> placed(n, 0);
    std::vector<char> queued(n, 0);
    std::deque<Vertex> queue;
    for (Vertex root : roots) {
        if (queued[root]) continue;
        queued[root] = 1;
        queue.push_back(root);
        while (!queue.empty()) {
            const Vertex v = queue.front();
            queue.pop_front();
            std::size_t on[2] = {0, 0};
            for (Vertex x : g.neighbors(v)) {
                if (placed[x]) ++on[out.side[x]];
                if (!queued[x]) {
                    queued[x] = 1;
                    queue.push_back(x);
                }
            }
            out.side[v] = on[1] < on[0] ? 1 : 0;
            placed[v] = 1;
        }
    }

    bool moved = true;
    while (moved) {
        moved = false;
        for (Vertex v = 0; v < n; ++v) {
            std::size_t same = 0;
            for (Vertex x : g.neighbors(v)) same += out.side[x] == out.side[v];
            if (2 * same > g.degree(v)) {
                out.side[v] ^= 1;
                moved = true;
            }
        }
    }
    for (auto [u, v] : g.edges()) out.cut_edges += out.side[u] != out.side[v];
    return out;
}

Graph cut_subgraph(const Graph& g, const MaxCut& cut) {
    std::vector<Edge> keep;
    for (auto [u, v] : g.edges()) {
        if (cut.side[u] != cut.side[v]) keep.emplace_back(u, v);
    }
    return Graph::from_edges(g.n(), keep);
}

bool is_bipartite(const Graph& g) {
    std::vector<int> color(g.n(), -1);
    std::deque<Vertex> queue;
    for (Vertex s = 0; s < g.n(); ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        queue.push_back(s);
        while (!queue.empty()) {
            const Vertex v = queue.front();
            queue.pop_front();
            for (Vertex x : g.neighbors(v)) {
                if (color[x] < 0) {
                    color[x] = 1 - color[v];
                    queue.push_back(x);
                } else if (color[x] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

CycleCountAudit audit_cycle_counts(const Graph& host, const BlowupGraph& h, const TheoremParams& params) {
    CycleCountAudit a;
    a.k = h.k();
    a.m = h.m();
    a.alpha = h.window().alpha;
    a.p = h.window().p;
    a.delta = params.delta;
    // The window H actually satisfies around alpha.
    a.eps = audit_degree_window(h).max_relative_deviation;

    const double kd = static_cast<double>(a.k);
    const double pm = a.p * static_cast<double>(a.m);
    const double pm2 = pm * static_cast<double>(a.m);
    const SaturationResult sat = saturated_edges(h, host, a.alpha + 2.0 * a.eps);
    a.exact_c = sat.total_load;
    a.saturated_c = sat.s_count;
    a.e_host_end = sat.loads.size();
    BigCount over_f = 0;
    for (const EdgeLoad& e : sat.loads) {
        const bool in_h = h.graph().has_edge(e.u, e.v);
        a.e_h_end += in_h;
        if (e.load > 0) {
            ++a.f_size;
            over_f += e.load;
            a.f_meets_h = a.f_meets_h || in_h;
        }
    }
    a.conservation_holds = over_f == a.exact_c;

    const double c = a.exact_c.convert_to<double>();
    const double s = a.saturated_c.convert_to<double>();
    const double f = static_cast<double>(a.f_size);
    const double am = a.alpha - 2.0 * a.eps;
    const double ap = a.alpha + 2.0 * a.eps;
    const double t_value = std::pow(am, 2.0 * kd) / std::pow(ap, 2.0 * kd - 1.0);

    a.checks.push_back(at_least("F", f, (a.alpha - a.delta / 2.0) * pm2));
    a.checks.push_back(at_least("F_from_counts", f, (c - s) / (a.p * std::pow(ap * pm, 2.0 * kd - 1.0))));
    a.checks.push_back(at_least("cC", c, std::pow(am, 2.0 * kd) * std::pow(pm, 2.0 * kd + 1.0)));
    a.checks.push_back(at_most("cO", s, std::pow(3.0 * a.eps, 2.0 * kd) * std::pow(pm, 2.0 * kd + 1.0)));
    a.checks.push_back(at_least("T", t_value, a.alpha - 2.0 * a.eps - 16.0 * kd * a.eps));
    a.checks.push_back(at_least("eH_end", static_cast<double>(a.e_h_end), (a.alpha - a.delta / 2.0) * pm2));
    a.checks.push_back(at_most("eHost_end", static_cast<double>(a.e_host_end), (1.0 + a.delta / 2.0) * pm2));
    a.premises_hold = a.checks[0].holds && a.checks[5].holds && a.checks[6].holds;

    a.goal_d_bound = std::pow(a.eps, 2.0 * kd) * pm;
    for (const RenamedSaturation& row : sat.renamed) {
        ++a.goal_d_checked;
        a.max_d = std::max(a.max_d, row.d_size);
        if (static_cast<double>(row.d_size) > a.goal_d_bound) a.goal_d_failures.push_back(row.w);
    }
    return a;
}

ExtremalReport find_odd_cycle(const Graph& host, const Graph& sub, const TheoremParams& params,
                              std::uint64_t seed) {
    params.validate();
    if (!is_subgraph(sub, host)) throw ParameterError("sub is not a subgraph of host");

    ExtremalReport r;
    r.params = params;
    r.n = host.n();
    r.k = params.k;
    r.host_edges = host.edge_count();
    r.sub_edges = sub.edge_count();
    r.p = host_density(host, params);
    const double pairs = static_cast<double>(r.n) * (static_cast<double>(r.n) - 1.0) / 2.0;
    r.threshold = params.alpha0() * r.p * pairs;
    r.density_ratio = pairs > 0 ? static_cast<double>(r.sub_edges) / (r.p * pairs) : 0.0;
    r.retained_fraction =
        r.host_edges > 0 ? static_cast<double>(r.sub_edges) / static_cast<double>(r.host_edges) : 0.0;
    r.precondition_met = static_cast<double>(r.sub_edges) >= r.threshold;
    r.lower_bound_edges = max_cut_bipartite(host, seed).cut_edges;
    r.sub_bipartite = is_bipartite(sub);
    r.host_odd_cycle_free = is_bipartite(host);
    r.beta_budget = r.n > 1 && r.p > 0.0 ? theorem_beta_budget(static_cast<double>(r.n), r.p, params.k, params.gamma())
                                          : 0.0;

    if (!r.precondition_met) {
        r.stage = "precondition";
        r.message = "subgraph density is below (1/2 + delta) p C(n, 2)";
    } else {
        ExtractionParams ep;
        ep.k = params.k;
        ep.p = r.p;
        ep.alpha0 = params.alpha0();
        ep.eps = params.eps();
        ep.mu = params.mu;
        ep.nu = params.nu();
        ep.rho = params.rho();
        ep.retries = params.retries;
        ep.seed = seed;
        ep.max_rounds = params.max_rounds;
        ep.xi_override = params.xi_override;
        ep.t_star_override = params.t_star_override;
        try {
            ExtractionResult ex = extract_blowup(host, sub, ep);
            ExtractionSummary summary;
            summary.alpha = ex.alpha;
            summary.m = ex.h.m();
            summary.rounds = ex.rounds.size();
            summary.attempts = ex.attempts;
            summary.trimmed = ex.trimmed;
            summary.window_eps1_holds = ex.window_eps1_holds;
            summary.window_2eps1_holds = ex.window_2eps1_holds;
            summary.realized_eps = audit_degree_window(ex.h).max_relative_deviation;
            summary.failure_bound = ex.failure_bound;
            for (const auto& round : ex.rounds) summary.traces.push_back(round.trace);
            r.extraction = summary;
            r.audit = audit_cycle_counts(host, ex.h, params);
            if (auto cycle = witness_cycle(ex.h)) {
                r.cycle = std::move(cycle);
                r.stage = "found";
                r.method = "blowup";
            } else {
                r.stage = "no-witness";
                r.message = "no H edge between U_k and V_k closes a cycle";
            }
        } catch (const ExtractionError& e) {
            r.stage = e.stage();
            r.message = e.what();
            r.failure_stats = e.stats();
        } catch (const DegenerateError& e) {
            r.stage = "degenerate";
            r.message = e.what();
        }
    }

    if (!r.cycle) {
        if (r.sub_bipartite) {
            r.fallback_exhaustive = true;
        } else if (r.n <= params.fallback_max_n) {
            r.fallback_used = true;
            CycleList found = brute_force_cycles(sub, params.ell(), 1);
            if (!found.cycles.empty()) {
                r.cycle = std::move(found.cycles.front());
                r.method = "fallback";
            } else {
                r.fallback_exhaustive = true;
            }
        }
    }
    if (r.cycle) {
        r.cycle_verified = r.cycle->size() == params.ell() && is_cycle_of(sub, *r.cycle);
        if (!r.cycle_verified) throw std::logic_error("constructed cycle failed verification");
    }
    return r;
}

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::MaxCut: return "maxcut";
        case Strategy::MaxCutReturns: return "maxcut-returns";
        case Strategy::Uniform: return "uniform";
    }
    return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "maxcut") return Strategy::MaxCut;
    if (name == "maxcut-returns") return Strategy::MaxCutReturns;
    if (name == "uniform") return Strategy::Uniform;
    throw ParameterError("unknown strategy '" + name + "' (expected maxcut, maxcut-returns or uniform)");
}

Graph adversarial_subgraph(const Graph& host, Strategy strategy, double delta, const ExperimentOptions& options,
                           std::uint64_t seed) {
    const double p = host.n() > 0 ? host.average_degree() / static_cast<double>(host.n()) : 0.0;
    const double pairs = static_cast<double>(host.n()) * (static_cast<double>(host.n()) - 1.0) / 2.0;
    const double target = (0.5 + delta + options.margin) * p * pairs;
    SplitMix64 rng(seed);

    if (strategy == Strategy::Uniform) {
        const double keep = std::min(1.0, 0.5 + delta + options.margin);
        std::vector<Edge> kept;
        for (auto e : host.edges()) {
            if (rng.bernoulli(keep)) kept.push_back(e);
        }
        return Graph::from_edges(host.n(), kept);
    }

    const MaxCut cut = max_cut_bipartite(host, seed);
    if (strategy == Strategy::MaxCut) return cut_subgraph(host, cut);

    std::vector<Edge> kept;
    std::vector<Edge> removed;
    for (auto [u, v] : host.edges()) (cut.side[u] != cut.side[v] ? kept : removed).emplace_back(u, v);
    rng.shuffle(std::span<Edge>(removed));
    const auto at_least_returned =
        static_cast<std::size_t>(std::ceil(options.return_fraction * static_cast<double>(removed.size())));
    std::size_t returned = 0;
    while (returned < removed.size() &&
           (returned < at_least_returned || static_cast<double>(kept.size()) < target)) {
        kept.push_back(removed[returned++]);
    }
    return Graph::from_edges(host.n(), kept);
}

std::vector<ExtremalReport> turan_experiment(const Graph& host, const std::vector<Strategy>& strategies,
                                             const TheoremParams& params, std::uint64_t seed,
                                             const ExperimentOptions& options) {
    params.validate();
    std::vector<ExtremalReport> out(strategies.size());
    double lambda = -1.0;
    if (options.spectral && !strategies.empty() && host.n() > 0) lambda = spectral_profile(host).lambda;
    parallel_for(0, strategies.size(), [&](std::size_t i) {
        const std::uint64_t s = derive_seed(seed, i);
        const Graph sub = adversarial_subgraph(host, strategies[i], params.delta, options, s);
        out[i] = find_odd_cycle(host, sub, params, s);
        out[i].strategy = to_string(strategies[i]);
        out[i].host_beta = lambda;
    });
    return out;
}

}  // namespace oddcycle
