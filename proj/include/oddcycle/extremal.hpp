#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oddcycle/blowup.hpp"
#include "oddcycle/counting.hpp"
#include "oddcycle/error.hpp"
#include "oddcycle/graph.hpp"

namespace oddcycle {

enum class ParamMode { Paper, Practical };
std::string to_string(ParamMode mode);
ParamMode param_mode_from_string(const std::string& name);

// Constants for the odd-cycle theorem. Paper mode uses the proof's schedule
// everywhere; practical mode keeps alpha0 = 1/2 + delta but extracts with a
// wide degree window (eps = 3.6 alpha0 unless overridden) so that extraction
// succeeds at a few hundred vertices.
struct TheoremParams {
    std::size_t k = 1;
    double delta = 0.05;
    ParamMode mode = ParamMode::Practical;

    std::optional<double> eps_override;
    double mu = 0.1;
    std::optional<double> nu_override;
    double eta = 0.25;
    std::size_t retries = 20;
    std::size_t max_rounds = 0;  // 0 means the extraction default
    std::optional<double> xi_override;
    std::optional<std::size_t> t_star_override;
    // Edge density of the host; 0 means average degree / n.
    double p = 0.0;
    // Exhaustive search for a cycle when the pipeline does not produce one,
    // on inputs with at most this many vertices.
    std::size_t fallback_max_n = 300;

    std::size_t ell() const { return 2 * k + 1; }
    double rho() const { return 1.0 / static_cast<double>(ell()); }
    double alpha0() const { return 0.5 + delta; }
    // delta / (4 + 32k + 6^(2k+1))
    double paper_eps() const;
    double eps() const;
    double nu() const { return nu_override ? *nu_override : mu / static_cast<double>(ell()); }
    // The three terms of gamma = min{gamma1, gamma2, delta nu / 4}: gamma1
    // from the cleanup schedule, gamma2 from the error-term schedule with
    // xi = (eps/4)^(4k) and eta = min{eps / (4 alpha0), 1}.
    double gamma1() const;
    double gamma2() const;
    double gamma() const;

    // Throws ParameterError unless k >= 1, 0 < delta <= 1/2 and the window
    // is usable (eps < alpha0 in paper mode, eps/4 < alpha0 in practical).
    void validate() const;
};

struct MaxCut {
    std::vector<std::uint8_t> side;  // 0 or 1 per vertex
    std::size_t cut_edges = 0;
};

// Greedy placement in breadth-first order (each vertex joins the side with
// fewer already-placed neighbors), then single-vertex moves until no move
// gains. Component roots are scanned in natural order for seed 0 and in a
// seeded random order otherwise.
MaxCut max_cut_bipartite(const Graph& g, std::uint64_t seed = 0);

// Graph keeping exactly the edges that cross the cut.
Graph cut_subgraph(const Graph& g, const MaxCut& cut);

bool is_bipartite(const Graph& g);

struct InequalityCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    double slack = 0.0;  // signed distance to the bound, positive when it holds
    bool holds = false;
};

struct CycleCountAudit {
    std::size_t k = 0;
    std::size_t m = 0;
    double alpha = 0.0;
    double eps = 0.0;
    double p = 0.0;
    double delta = 0.0;
    std::size_t f_size = 0;  // end-layer host edges on some connecting cycle
    BigCount exact_c;
    BigCount saturated_c;   // |S(alpha + 2 eps, H, host)|
    std::size_t e_h_end = 0;
    std::size_t e_host_end = 0;
    std::vector<InequalityCheck> checks;
    // Sum of loads over F reproduces |C(H, host)|.
    bool conservation_holds = true;
    bool premises_hold = false;  // the three counting inequalities behind the intersection argument
    bool f_meets_h = false;      // some H edge between U_k and V_k lies on a connecting cycle
    double goal_d_bound = 0.0;   // eps^(2k) p m
    std::size_t goal_d_checked = 0;
    std::size_t max_d = 0;
    std::vector<Vertex> goal_d_failures;
};

CycleCountAudit audit_cycle_counts(const Graph& host, const BlowupGraph& h, const TheoremParams& params);

struct ExtractionSummary {
    double alpha = 0.0;
    std::size_t m = 0;
    std::size_t rounds = 0;
    std::size_t attempts = 0;
    std::size_t trimmed = 0;
    bool window_eps1_holds = false;
    bool window_2eps1_holds = false;
    double realized_eps = 0.0;
    double failure_bound = 1.0;
    std::vector<std::vector<std::size_t>> traces;
};

struct ExtremalReport {
    std::string strategy;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t host_edges = 0;
    std::size_t sub_edges = 0;
    double p = 0.0;
    double threshold = 0.0;        // (1/2 + delta) p C(n, 2)
    double density_ratio = 0.0;    // e(sub) / (p C(n, 2))
    double retained_fraction = 0.0;
    bool precondition_met = false;
    std::size_t lower_bound_edges = 0;  // max-cut witness in the host
    std::optional<std::vector<Vertex>> cycle;
    bool cycle_verified = false;
    // "found", "precondition", "cleanup", "size", "partition", "degenerate"
    // or "no-witness" for the pipeline; the cycle may still come from the
    // fallback search.
    std::string stage;
    // "blowup", "fallback" or "none".
    std::string method = "none";
    std::string message;
    bool fallback_used = false;
    // The fallback searched the whole subgraph and found no cycle.
    bool fallback_exhaustive = false;
    bool sub_bipartite = false;
    bool host_odd_cycle_free = false;
    double host_beta = -1.0;  // lambda of the host when computed
    double beta_budget = 0.0;
    std::optional<ExtractionSummary> extraction;
    // Retry and round statistics when extraction failed.
    std::optional<ExtractionStats> failure_stats;
    std::optional<CycleCountAudit> audit;
    TheoremParams params;
};

// Extraction, then a cycle through the blow-up read off the exact path
// counts, checked edge by edge against `sub`. The smallest w in W with an H
// edge uv between U_k and V_k carrying paths from both sides is used, and
// each path is walked back through smallest-id predecessors.
ExtremalReport find_odd_cycle(const Graph& host, const Graph& sub, const TheoremParams& params,
                              std::uint64_t seed);

enum class Strategy { MaxCut, MaxCutReturns, Uniform };
std::string to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

struct ExperimentOptions {
    double margin = 0.02;
    // Fraction of the edges removed by the cut that the max-cut-plus-returns
    // strategy adds back at least.
    double return_fraction = 0.1;
    // Compute the host's lambda and the beta budget for the report.
    bool spectral = true;
};

// Adversarial subgraph for one strategy.
Graph adversarial_subgraph(const Graph& host, Strategy strategy, double delta, const ExperimentOptions& options,
                           std::uint64_t seed);

std::vector<ExtremalReport> turan_experiment(const Graph& host, const std::vector<Strategy>& strategies,
                                             const TheoremParams& params, std::uint64_t seed,
                                             const ExperimentOptions& options = {});

}  // namespace oddcycle
