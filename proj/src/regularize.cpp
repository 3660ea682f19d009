#include "oddcycle/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "oddcycle/error.hpp"
#include "oddcycle/parallel.hpp"
#include "oddcycle/rng.hpp"

namespace oddcycle {

namespace {

double choose2(std::size_t n) { return static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0; }

VertexSet set_union(const std::vector<VertexSet>& sets) {
    std::vector<Vertex> all;
    for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
    return VertexSet(std::move(all));
}

}  // namespace

double density_ratio(const Graph& g, const VertexSet& u, double p) {
    if (u.size() < 2 || p <= 0.0) return 0.0;
    return static_cast<double>(edges_inside(g, u)) / (p * choose2(u.size()));
}

double CleanupParams::xi() const { return xi_override ? *xi_override : 8.0 * eps * eps / 625.0; }

std::size_t CleanupParams::t_star() const {
    if (t_star_override) return *t_star_override;
    if (rho <= 0.0) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(std::floor(1.0 / (2.0 * rho) + 1.0));
}

double CleanupParams::gamma() const {
    if (gamma_override) return *gamma_override;
    const double t = static_cast<double>(std::min<std::size_t>(t_star(), 4096));
    return mu * mu * eps * eps * xi() / std::pow(2.0, 4.0 * t + 1.0);
}

void CleanupParams::validate() const {
    if (!(eps > 0.0 && eps < alpha && alpha <= 1.0)) {
        throw ParameterError("cleanup needs 0 < eps < alpha <= 1 (got eps=" + std::to_string(eps) +
                             ", alpha=" + std::to_string(alpha) + ")");
    }
    if (!(xi() > 0.0)) throw ParameterError("cleanup needs xi > 0");
    if (t_star() < 1) throw ParameterError("cleanup needs t* >= 1");
    if (rho < 0.0) throw ParameterError("cleanup needs rho >= 0");
    if (!(mu > 0.0)) throw ParameterError("cleanup needs mu > 0");
}

std::string to_string(CleanupKind kind) { return kind == CleanupKind::Regular ? "regular" : "denser"; }

VertexSet min_degree_prune(const Graph& g, const VertexSet& vertices, double p, double alpha, double xi) {
    const auto mask = vertices.bitmask(g.n());
    std::vector<std::size_t> degree(g.n(), 0);
    std::vector<bool> alive(g.n(), false);
    std::set<std::pair<std::size_t, Vertex>> queue;
    for (Vertex v : vertices) {
        for (Vertex u : g.neighbors(v)) degree[v] += test_bit(mask, u);
        alive[v] = true;
        queue.emplace(degree[v], v);
    }
    std::size_t t = vertices.size();
    const double rate = (alpha - xi) * p;
    while (!queue.empty()) {
        const auto [d, v] = *queue.begin();
        if (static_cast<double>(d) >= rate * static_cast<double>(t)) break;
        queue.erase(queue.begin());
        alive[v] = false;
        --t;
        for (Vertex u : g.neighbors(v)) {
            if (u < alive.size() && alive[u]) {
                queue.erase({degree[u], u});
                --degree[u];
                queue.emplace(degree[u], u);
            }
        }
    }
    std::vector<Vertex> kept;
    kept.reserve(t);
    for (Vertex v : vertices) {
        if (alive[v]) kept.push_back(v);
    }
    return VertexSet(std::move(kept));
}

double degree_cascade_bound(double beta, std::size_t y_size, double threshold, double p) {
    const double expected = p * static_cast<double>(y_size);
    if (!(threshold > expected)) {
        throw ParameterError("cascade bound needs threshold > p|Y| (threshold=" + std::to_string(threshold) +
                             ", p|Y|=" + std::to_string(expected) + ")");
    }
    const double gap = threshold - expected;
    return beta * beta * static_cast<double>(y_size) / (gap * gap);
}

std::vector<VertexSet> high_degree_cascade(const Graph& g, const VertexSet& w, double p, double alpha, double eps,
                                           std::size_t t_star) {
    std::vector<VertexSet> out;
    if (w.empty() || t_star == 0) return out;
    const double m = static_cast<double>(w.size());
    const auto degrees = induced_degrees(g, w);
    std::vector<Vertex> first;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (static_cast<double>(degrees[i]) >= (alpha + 0.8 * eps) * p * m) first.push_back(w[i]);
    }
    if (first.empty()) return out;
    out.emplace_back(std::move(first));

    std::vector<bool> removed(g.n(), false);
    for (Vertex v : out.back()) removed[v] = true;
    for (std::size_t t = 2; t <= t_star; ++t) {
        const double threshold = eps / std::pow(2.0, static_cast<double>(t) + 2.0) * p * m;
        const auto prev = out.back().bitmask(g.n());
        std::vector<Vertex> next;
        for (Vertex u : w) {
            if (removed[u]) continue;
            std::size_t d = 0;
            for (Vertex x : g.neighbors(u)) d += test_bit(prev, x);
            if (static_cast<double>(d) >= threshold) next.push_back(u);
        }
        if (next.empty()) break;
        for (Vertex v : next) removed[v] = true;
        out.emplace_back(std::move(next));
    }
    return out;
}

CleanupOutcome cleanup(const Graph& g, const VertexSet& vertices, double p, const CleanupParams& params) {
    params.validate();
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("cleanup needs p in (0, 1]");
    vertices.check_universe(g.n());

    CleanupOutcome out;
    out.params = params;
    out.p = p;
    out.input_density_ratio = density_ratio(g, vertices, p);
    out.precondition_met = out.input_density_ratio >= params.alpha;

    const VertexSet w = min_degree_prune(g, vertices, p, params.alpha, params.xi());
    out.trace.push_back(w.size());
    if (w.empty()) {
        throw DegenerateError("cleanup: minimum-degree pruning removed every vertex", out.trace);
    }
    const auto cascade = high_degree_cascade(g, w, p, params.alpha, params.eps, params.t_star());
    for (const auto& x : cascade) out.trace.push_back(x.size());
    const VertexSet u = cascade.empty() ? w : w.minus(set_union(cascade));

    const double target = params.denser_target();
    const double w_ratio = density_ratio(g, w, p);
    const std::size_t x1 = cascade.empty() ? 0 : cascade.front().size();
    out.x1_bound = params.eps / 25.0 * static_cast<double>(w.size());
    out.x1_audit_applicable = w_ratio < target;
    out.x1_audit_holds = !out.x1_audit_applicable || static_cast<double>(x1) <= out.x1_bound;

    auto violations_of = [&](const VertexSet& set) {
        std::vector<DegreeViolation> bad;
        const double scale = p * static_cast<double>(set.size());
        const auto deg = induced_degrees(g, set);
        for (std::size_t i = 0; i < set.size(); ++i) {
            const auto d = static_cast<double>(deg[i]);
            if (d < (params.alpha - params.eps) * scale || d > (params.alpha + params.eps) * scale) {
                bad.push_back({set[i], deg[i]});
            }
        }
        return bad;
    };

    if (!u.empty()) {
        out.u = u;
        out.density_ratio = density_ratio(g, u, p);
        out.degree_violations = violations_of(u);
        if (out.degree_violations.empty()) {
            out.kind = CleanupKind::Regular;
            return out;
        }
        if (out.density_ratio >= target) {
            out.kind = CleanupKind::Denser;
            return out;
        }
    }
    if (w_ratio >= target) {
        // W itself already carries the density increment.
        out.kind = CleanupKind::Denser;
        out.u = w;
        out.density_ratio = w_ratio;
        out.degree_violations = violations_of(w);
        return out;
    }
    if (u.empty()) {
        throw DegenerateError("cleanup: high-degree cascade removed every vertex", out.trace);
    }

    // Neither certificate: report the closer one, measured in units of p|U|.
    double regular_gap = 0.0;
    const double scale = p * static_cast<double>(u.size());
    for (const auto& v : out.degree_violations) {
        const auto d = static_cast<double>(v.degree);
        const double miss = std::max((params.alpha - params.eps) * scale - d, d - (params.alpha + params.eps) * scale);
        regular_gap = std::max(regular_gap, miss / scale);
    }
    const double denser_gap = target - out.density_ratio;
    out.kind = regular_gap <= denser_gap ? CleanupKind::Regular : CleanupKind::Denser;
    out.certified = false;
    return out;
}

double hyper_tail_bound(double expectation, double eta) {
    if (!(eta > 0.0 && eta <= 1.5)) {
        throw ParameterError("hypergeometric tail bound needs 0 < eta <= 3/2 (got " + std::to_string(eta) + ")");
    }
    if (expectation < 0.0) throw ParameterError("hypergeometric tail bound needs a non-negative expectation");
    return std::min(1.0, 2.0 * std::exp(-eta * expectation / 3.0));
}

std::size_t ExtractionParams::resolved_max_rounds() const {
    if (max_rounds > 0) return max_rounds;
    const double e1 = eps1();
    return static_cast<std::size_t>(std::ceil(100.0 / (e1 * e1)));
}

namespace {

bool window_holds(const Graph& g, const VertexSet& u, double p, double alpha, double eps) {
    const double scale = p * static_cast<double>(u.size());
    const auto deg = induced_degrees(g, u);
    return std::all_of(deg.begin(), deg.end(), [&](std::size_t d) {
        const auto x = static_cast<double>(d);
        return x >= (alpha - eps) * scale && x <= (alpha + eps) * scale;
    });
}

}  // namespace

ExtractionResult extract_blowup(const Graph& host, const Graph& g, const ExtractionParams& params) {
    const std::size_t ell = params.ell();
    const double p = params.p;
    if (params.k < 1) throw ParameterError("extraction needs k >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("extraction needs p in (0, 1]");
    if (!(params.eps > 0.0)) throw ParameterError("extraction needs eps > 0");
    if (host.n() != g.n()) throw ParameterError("subgraph and host must share the vertex set");
    for (auto [u, v] : g.edges()) {
        if (!host.has_edge(u, v)) {
            throw ParameterError("edge " + std::to_string(u) + "-" + std::to_string(v) + " is not in the host");
        }
    }

    ExtractionResult result;
    ExtractionStats stats;
    const double start_ratio = density_ratio(g, VertexSet::range(0, static_cast<Vertex>(g.n())), p);
    if (start_ratio < params.alpha0) {
        throw ExtractionError("precondition",
                              "e(G) = " + std::to_string(g.edge_count()) + " is below alpha0 p C(n,2) (density ratio " +
                                  std::to_string(start_ratio) + " < " + std::to_string(params.alpha0) + ")",
                              stats);
    }

    const double eps1 = params.eps1();
    CleanupParams cp;
    cp.alpha = params.alpha0;
    cp.eps = eps1;
    cp.rho = params.resolved_rho();
    cp.mu = params.mu;
    cp.xi_override = params.xi_override;
    cp.t_star_override = params.t_star_override;

    VertexSet current = VertexSet::range(0, static_cast<Vertex>(g.n()));
    bool regular = false;
    const std::size_t max_rounds = params.resolved_max_rounds();
    for (std::size_t round = 0; round < max_rounds && !regular; ++round) {
        stats.cleanup_rounds = round + 1;
        if (cp.alpha > 1.0 || eps1 >= cp.alpha) {
            throw ExtractionError("cleanup", "density parameter left the valid range (alpha=" +
                                                 std::to_string(cp.alpha) + ")", stats);
        }
        CleanupOutcome outcome = cleanup(g, current, p, cp);
        result.rounds.push_back(outcome);
        if (outcome.kind == CleanupKind::Regular && outcome.certified) {
            regular = true;
            current = outcome.u;
            break;
        }
        // The next round works on U with alpha raised by at least the
        // guaranteed increment, or further to U's average degree over p|U|.
        // That is the pair density scaled by (|U|-1)/|U|, so an exactly
        // regular U survives the next pruning pass.
        const double u_size = static_cast<double>(outcome.u.size());
        const double degree_ratio = outcome.density_ratio * (u_size - 1.0) / u_size;
        // alpha is measured against the host density p and cannot pass 1; a
        // second Denser outcome at 1 means G is locally denser than its host.
        if (cp.alpha >= 1.0) {
            throw ExtractionError("cleanup", "density ratio exceeds 1 after alpha reached 1", stats);
        }
        const double next_alpha = std::min(1.0, std::max(cp.alpha + eps1 * eps1 / 125.0, degree_ratio));
        if (!outcome.certified && outcome.density_ratio < next_alpha && outcome.u == current) {
            throw ExtractionError("cleanup", "no progress: neither certificate holds and the vertex set is stable",
                                  stats);
        }
        current = outcome.u;
        cp.alpha = next_alpha;
    }
    if (!regular) {
        throw ExtractionError("cleanup", "no Regular outcome within " + std::to_string(max_rounds) + " rounds",
                              stats);
    }

    const double alpha = cp.alpha;
    result.alpha = alpha;
    result.u = current;
    result.window_eps1_holds = window_holds(g, current, p, alpha, eps1);
    result.window_2eps1_holds = window_holds(g, current, p, alpha, 2.0 * eps1);

    const std::size_t m = current.size() / ell;
    const std::size_t min_m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(params.resolved_nu() * static_cast<double>(g.n()) - 1e-9)));
    if (m < min_m) {
        throw ExtractionError("size", "Regular set of " + std::to_string(current.size()) +
                                          " vertices gives classes of " + std::to_string(m) + " < " +
                                          std::to_string(min_m),
                              stats);
    }
    const std::vector<Vertex> keep(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(m * ell));
    result.trimmed = current.size() - m * ell;

    const double pm = p * static_cast<double>(m);
    const double eta = std::min(1.5, (params.eps - 2.0 * eps1) / (alpha + 2.0 * eps1));
    const double expectation = std::max(0.0, (alpha - 2.0 * eps1) * pm);
    result.failure_bound =
        eta > 0.0 ? std::min(1.0, static_cast<double>(ell * keep.size()) * 2.0 * std::exp(-eta * expectation / 3.0))
                  : 1.0;
    stats.failure_bound = result.failure_bound;

    std::vector<std::uint32_t> part(g.n(), BlowupGraph::kNoLayer);
    std::vector<char> bad(keep.size(), 0);
    stats.best_bad_vertices = keep.size();
    const DegreeWindow window{alpha, p, params.eps};
    for (std::size_t attempt = 0; attempt < params.retries; ++attempt) {
        stats.attempts = attempt + 1;
        result.attempts = attempt + 1;
        std::vector<Vertex> order = keep;
        SplitMix64 rng(derive_seed(params.seed, attempt));
        rng.shuffle(std::span<Vertex>(order));
        for (std::size_t i = 0; i < order.size(); ++i) part[order[i]] = static_cast<std::uint32_t>(i / m);

        parallel_for(0, keep.size(), [&](std::size_t idx) {
            const Vertex v = keep[idx];
            std::vector<std::size_t> into(ell, 0);
            for (Vertex x : g.neighbors(v)) {
                if (part[x] != BlowupGraph::kNoLayer) ++into[part[x]];
            }
            char is_bad = 0;
            for (std::size_t j = 0; j < ell; ++j) {
                if (j != part[v] && !window.contains(static_cast<double>(into[j]), static_cast<double>(m))) is_bad = 1;
            }
            bad[idx] = is_bad;
        });
        const auto bad_count = static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
        result.bad_per_attempt.push_back(bad_count);
        stats.best_bad_vertices = std::min(stats.best_bad_vertices, bad_count);
        if (bad_count == 0) {
            std::vector<std::vector<Vertex>> layers(ell);
            for (Vertex v : keep) layers[part[v]].push_back(v);
            std::vector<VertexSet> sets;
            for (auto& layer : layers) sets.emplace_back(std::move(layer));
            result.h = BlowupGraph::from_host(g, std::move(sets), window);
            return result;
        }
        for (Vertex v : keep) part[v] = BlowupGraph::kNoLayer;
    }
    throw ExtractionError("partition",
                          "every one of " + std::to_string(params.retries) +
                              " equipartitions left bad vertices (best: " + std::to_string(stats.best_bad_vertices) +
                              ")",
                          stats);
}

}  // namespace oddcycle
