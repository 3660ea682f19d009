#include "oddcycle/report.hpp"

#include <algorithm>
#include <limits>

#include "oddcycle/error.hpp"

namespace oddcycle {

namespace {

template <class T>
Json optional_json(const std::optional<T>& value) {
    return value ? Json(*value) : Json(nullptr);
}

}  // namespace

Json count_json(const BigCount& value) {
    if (value >= 0 && value <= std::numeric_limits<std::uint64_t>::max()) {
        return Json(value.convert_to<std::uint64_t>());
    }
    return Json(to_string(value));
}

void to_json(Json& j, const VertexSet& s) { j = std::vector<Vertex>(s.begin(), s.end()); }

void to_json(Json& j, const SpectralProfile& s) {
    j = Json{{"n", s.n},           {"d", s.d},
             {"regular", s.regular}, {"lambda1", s.lambda1},
             {"lambda2", s.lambda2}, {"lambda_min", s.lambda_min},
             {"lambda", s.lambda},   {"tol", s.tol},
             {"residual", s.residual}, {"matvecs", s.matvecs}};
}

void to_json(Json& j, const JumblednessParams& s) { j = Json{{"p", s.p}, {"beta", s.beta}}; }

void to_json(Json& j, const JumblednessReport& s) {
    j = Json{{"mode", to_string(s.mode)}, {"pairs_checked", s.pairs_checked}, {"worst_ratio", s.worst_ratio},
             {"worst_x", s.worst_x},      {"worst_y", s.worst_y},             {"params", s.params},
             {"passed", s.passed}};
}

void to_json(Json& j, const CleanupParams& s) {
    j = Json{{"alpha", s.alpha},     {"eps", s.eps},
             {"rho", s.rho},         {"mu", s.mu},
             {"xi", s.xi()},         {"t_star", s.t_star()},
             {"gamma", s.gamma()},   {"denser_target", s.denser_target()},
             {"xi_override", optional_json(s.xi_override)},
             {"t_star_override", optional_json(s.t_star_override)},
             {"gamma_override", optional_json(s.gamma_override)}};
}

void to_json(Json& j, const CleanupOutcome& s) {
    Json violations = Json::array();
    for (const auto& v : s.degree_violations) violations.push_back({{"vertex", v.vertex}, {"degree", v.degree}});
    j = Json{{"kind", to_string(s.kind)},
             {"certified", s.certified},
             {"u", s.u},
             {"u_size", s.u.size()},
             {"density_ratio", s.density_ratio},
             {"degree_violations", violations},
             {"trace", s.trace},
             {"precondition_met", s.precondition_met},
             {"input_density_ratio", s.input_density_ratio},
             {"x1_audit_applicable", s.x1_audit_applicable},
             {"x1_audit_holds", s.x1_audit_holds},
             {"x1_bound", s.x1_bound},
             {"params", s.params},
             {"p", s.p}};
}

void to_json(Json& j, const DegreeWindow& s) { j = Json{{"alpha", s.alpha}, {"p", s.p}, {"eps", s.eps}}; }

void to_json(Json& j, const WindowAudit& s) {
    Json violations = Json::array();
    for (const auto& v : s.violations) {
        violations.push_back({{"vertex", v.vertex}, {"into_position", v.into_position}, {"degree", v.degree}});
    }
    j = Json{{"holds", s.holds},
             {"checked", s.checked},
             {"violations", violations},
             {"max_relative_deviation", s.max_relative_deviation}};
}

void to_json(Json& j, const BlowupGraph& s) {
    Json layers = Json::array();
    for (const auto& layer : s.layers()) layers.push_back(layer);
    Json edges = Json::array();
    for (auto [u, v] : s.graph().edges()) edges.push_back({u, v});
    j = Json{{"ell", s.ell()}, {"k", s.k()},         {"m", s.m()},         {"n", s.n()},
             {"layers", layers}, {"window", s.window()}, {"edges", edges}, {"edge_count", s.graph().edge_count()},
             {"window_audit", audit_degree_window(s)}};
}

void to_json(Json& j, const ExtractionParams& s) {
    j = Json{{"k", s.k},
             {"p", s.p},
             {"alpha0", s.alpha0},
             {"eps", s.eps},
             {"eps1", s.eps1()},
             {"mu", s.mu},
             {"nu", s.resolved_nu()},
             {"rho", s.resolved_rho()},
             {"retries", s.retries},
             {"seed", s.seed},
             {"max_rounds", s.resolved_max_rounds()},
             {"xi_override", optional_json(s.xi_override)},
             {"t_star_override", optional_json(s.t_star_override)}};
}

void to_json(Json& j, const ExtractionResult& s) {
    j = Json{{"blowup", s.h},
             {"alpha", s.alpha},
             {"rounds", s.rounds},
             {"u", s.u},
             {"trimmed", s.trimmed},
             {"window_eps1_holds", s.window_eps1_holds},
             {"window_2eps1_holds", s.window_2eps1_holds},
             {"attempts", s.attempts},
             {"bad_per_attempt", s.bad_per_attempt},
             {"failure_bound", s.failure_bound}};
}

void to_json(Json& j, const PqSums& s) { j = Json{{"p", s.p}, {"q", s.q}}; }

void to_json(Json& j, const VertexCount& s) {
    j = Json{{"w", s.w},   {"exact", count_json(s.exact)}, {"bucket_lower", s.bucket_lower},
             {"bucket_upper", s.bucket_upper}, {"px", s.px},  {"py", s.py},
             {"error_term", s.error_term}};
}

void to_json(Json& j, const SaturationSummary& s) {
    j = Json{{"mu", s.mu},
             {"threshold", s.threshold},
             {"saturated_edges", s.saturated_edges},
             {"saturated_cycles", count_json(s.saturated_cycles)},
             {"max_load", count_json(s.max_load)}};
}

void to_json(Json& j, const CountReport& s) {
    j = Json{{"k", s.k},
             {"m", s.m},
             {"p", s.p},
             {"eta", s.eta},
             {"beta", s.beta},
             {"exact_c", count_json(s.exact_c)},
             {"bucket_lower", s.bucket_lower},
             {"bucket_upper", s.bucket_upper},
             {"p_x", s.p_x},
             {"q_x", s.q_x},
             {"p_y", s.p_y},
             {"q_y", s.q_y},
             {"main_term", s.main_term},
             {"error_term", s.error_term},
             {"sandwich_violations", s.sandwich_violations},
             {"level_sandwich_violations", s.level_sandwich_violations},
             {"window_levels_checked", s.window_levels_checked},
             {"window_violations", s.window_violations},
             {"degree_window_holds", s.degree_window_holds},
             {"per_vertex", s.per_vertex},
             {"saturation", optional_json(s.saturation)}};
}

void to_json(Json& j, const EdgeLoad& s) {
    j = Json{{"u", s.u}, {"v", s.v}, {"load", count_json(s.load)}, {"saturated", s.saturated}};
}

void to_json(Json& j, const RenamedSaturation& s) {
    j = Json{{"w", s.w},
             {"d_size", s.d_size},
             {"saturated_cycles", count_json(s.saturated_cycles)},
             {"connection_bound", count_json(s.connection_bound)},
             {"bound_holds", s.bound_holds}};
}

void to_json(Json& j, const SaturationResult& s) {
    Json flagged = Json::array();
    for (const auto& e : s.loads) {
        if (e.saturated) flagged.push_back({e.u, e.v});
    }
    j = Json{{"mu", s.mu},
             {"threshold", s.threshold},
             {"orientation", Json{{"loads", "standard"}, {"renamed", "w_tilde=U_k"}}},
             {"loads", s.loads},
             {"saturated", flagged},
             {"saturated_count", s.saturated_count},
             {"s_count", count_json(s.s_count)},
             {"total_load", count_json(s.total_load)},
             {"max_load", count_json(s.max_load)},
             {"renamed", s.renamed},
             {"renamed_bounds_hold", s.renamed_bounds_hold}};
}

void to_json(Json& j, const TupleAudit& s) {
    j = Json{{"side", s.side == Side::U ? "U" : "V"},
             {"prefix", s.prefix},
             {"z_size", s.z_size},
             {"q", s.q},
             {"case", std::string(1, s.which_case)},
             {"m_factors", s.m_factors},
             {"case_a_bound", s.case_a_bound},
             {"split_j", s.split_j},
             {"r1", s.r1},
             {"r2", s.r2},
             {"r1_bound", s.r1_bound},
             {"r2_bound", s.r2_bound},
             {"product_matches", s.product_matches},
             {"case_bound_holds", s.case_bound_holds},
             {"small_q_bound", s.small_q_bound},
             {"small_q_holds", s.small_q_holds}};
}

void to_json(Json& j, const ErrorTermAudit& s) {
    j = Json{{"k", s.k},
             {"m", s.m},
             {"p", s.p},
             {"beta", s.beta},
             {"eta", s.eta},
             {"xi", s.xi},
             {"nu", s.nu},
             {"size_cap", s.size_cap},
             {"precondition_met", s.precondition_met},
             {"q_x", s.q_x},
             {"q_y", s.q_y},
             {"error_term", s.error_term},
             {"bound", s.bound},
             {"passes", s.passes},
             {"gamma_schedule", s.gamma_schedule},
             {"tuples", s.tuples},
             {"small_q_violations", s.small_q_violations},
             {"case_bound_violations", s.case_bound_violations}};
}

void to_json(Json& j, const CycleList& s) {
    j = Json{{"cycles", s.cycles}, {"count", s.cycles.size()}, {"truncated", s.truncated}};
}

void to_json(Json& j, const MaxCut& s) {
    std::vector<int> side(s.side.begin(), s.side.end());
    j = Json{{"side", side}, {"cut_edges", s.cut_edges}};
}

void to_json(Json& j, const TheoremParams& s) {
    j = Json{{"k", s.k},
             {"delta", s.delta},
             {"mode", to_string(s.mode)},
             {"ell", s.ell()},
             {"rho", s.rho()},
             {"alpha0", s.alpha0()},
             {"eps", s.eps()},
             {"paper_eps", s.paper_eps()},
             {"eps_override", optional_json(s.eps_override)},
             {"mu", s.mu},
             {"nu", s.nu()},
             {"eta", s.eta},
             {"retries", s.retries},
             {"max_rounds", s.max_rounds},
             {"xi_override", optional_json(s.xi_override)},
             {"t_star_override", optional_json(s.t_star_override)},
             {"p", s.p},
             {"fallback_max_n", s.fallback_max_n},
             {"gamma1", s.gamma1()},
             {"gamma2", s.gamma2()},
             {"gamma", s.gamma()}};
}

void to_json(Json& j, const InequalityCheck& s) {
    j = Json{{"name", s.name}, {"value", s.value}, {"bound", s.bound}, {"slack", s.slack}, {"holds", s.holds}};
}

void to_json(Json& j, const CycleCountAudit& s) {
    j = Json{{"k", s.k},
             {"m", s.m},
             {"alpha", s.alpha},
             {"eps", s.eps},
             {"p", s.p},
             {"delta", s.delta},
             {"f_size", s.f_size},
             {"exact_c", count_json(s.exact_c)},
             {"saturated_c", count_json(s.saturated_c)},
             {"e_h_end", s.e_h_end},
             {"e_host_end", s.e_host_end},
             {"checks", s.checks},
             {"conservation_holds", s.conservation_holds},
             {"premises_hold", s.premises_hold},
             {"f_meets_h", s.f_meets_h},
             {"goal_d_bound", s.goal_d_bound},
             {"goal_d_checked", s.goal_d_checked},
             {"max_d", s.max_d},
             {"goal_d_failures", s.goal_d_failures}};
}

void to_json(Json& j, const ExtractionSummary& s) {
    j = Json{{"alpha", s.alpha},
             {"m", s.m},
             {"rounds", s.rounds},
             {"attempts", s.attempts},
             {"trimmed", s.trimmed},
             {"window_eps1_holds", s.window_eps1_holds},
             {"window_2eps1_holds", s.window_2eps1_holds},
             {"realized_eps", s.realized_eps},
             {"failure_bound", s.failure_bound},
             {"traces", s.traces}};
}

void to_json(Json& j, const ExtremalReport& s) {
    Json failure = nullptr;
    if (s.failure_stats) {
        failure = Json{{"attempts", s.failure_stats->attempts},
                       {"best_bad_vertices", s.failure_stats->best_bad_vertices},
                       {"cleanup_rounds", s.failure_stats->cleanup_rounds},
                       {"failure_bound", s.failure_stats->failure_bound}};
    }
    j = Json{{"strategy", s.strategy},
             {"n", s.n},
             {"k", s.k},
             {"host_edges", s.host_edges},
             {"sub_edges", s.sub_edges},
             {"p", s.p},
             {"threshold", s.threshold},
             {"density_ratio", s.density_ratio},
             {"retained_fraction", s.retained_fraction},
             {"precondition_met", s.precondition_met},
             {"lower_bound_edges", s.lower_bound_edges},
             {"cycle", optional_json(s.cycle)},
             {"cycle_found", s.cycle.has_value()},
             {"cycle_verified", s.cycle_verified},
             {"stage", s.stage},
             {"method", s.method},
             {"message", s.message},
             {"fallback_used", s.fallback_used},
             {"fallback_exhaustive", s.fallback_exhaustive},
             {"sub_bipartite", s.sub_bipartite},
             {"host_odd_cycle_free", s.host_odd_cycle_free},
             {"host_beta", s.host_beta < 0.0 ? Json(nullptr) : Json(s.host_beta)},
             {"beta_budget", s.beta_budget},
             {"extraction", optional_json(s.extraction)},
             {"extraction_failure", failure},
             {"audit", optional_json(s.audit)},
             {"params", s.params}};
}

BlowupGraph blowup_from_json(const Json& j) {
    const Json& b = j.contains("blowup") && j.at("blowup").is_object() ? j.at("blowup") : j;
    try {
        const auto n = b.at("n").get<std::size_t>();
        std::vector<VertexSet> layers;
        for (const auto& layer : b.at("layers")) layers.emplace_back(layer.get<std::vector<Vertex>>());
        std::vector<Edge> edges;
        for (const auto& e : b.at("edges")) {
            const auto pair = e.get<std::vector<Vertex>>();
            if (pair.size() != 2) throw ParseError(0, "blow-up edge must have two endpoints");
            if (pair[0] >= n || pair[1] >= n) throw ParseError(0, "blow-up edge endpoint out of range");
            edges.emplace_back(pair[0], pair[1]);
        }
        const Json& w = b.at("window");
        const DegreeWindow window{w.at("alpha").get<double>(), w.at("p").get<double>(), w.at("eps").get<double>()};
        return BlowupGraph(Graph::from_edges(n, edges), std::move(layers), window);
    } catch (const Json::exception& e) {
        throw ParseError(0, std::string("malformed blow-up: ") + e.what());
    }
}

void write_loads_csv(const SaturationResult& s, std::ostream& out) {
    out << "u,v,load,saturated\n";
    for (const auto& e : s.loads) out << e.u << ',' << e.v << ',' << to_string(e.load) << ',' << e.saturated << '\n';
}

void write_extremal_csv(const std::vector<ExtremalReport>& reports, std::ostream& out) {
    out << "strategy,n,k,density_ratio,precondition_met,cycle_found,method,stage,min_slack,f_meets_h\n";
    for (const auto& r : reports) {
        out << r.strategy << ',' << r.n << ',' << r.k << ',' << Json(r.density_ratio).dump() << ','
            << r.precondition_met << ',' << r.cycle.has_value() << ',' << r.method << ',' << r.stage << ',';
        if (r.audit && !r.audit->checks.empty()) {
            double slack = r.audit->checks.front().slack;
            for (const auto& c : r.audit->checks) slack = std::min(slack, c.slack);
            out << Json(slack).dump();
        }
        out << ',';
        if (r.audit) out << r.audit->f_meets_h;
        out << '\n';
    }
}

}  // namespace oddcycle
