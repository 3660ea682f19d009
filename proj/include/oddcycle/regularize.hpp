#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oddcycle/blowup.hpp"
#include "oddcycle/graph.hpp"

namespace oddcycle {

// e(G[U]) / (p * C(|U|, 2)); 0 when |U| < 2.
double density_ratio(const Graph& g, const VertexSet& u, double p);

struct CleanupParams {
    double alpha = 0.5;
    double eps = 0.1;
    double rho = 1.0 / 3.0;
    double mu = 0.1;
    std::optional<double> xi_override;
    std::optional<std::size_t> t_star_override;
    std::optional<double> gamma_override;

    // 8 eps^2 / 25^2 unless overridden.
    double xi() const;
    // floor(1/(2 rho) + 1) unless overridden; rho = 0 means no cap.
    std::size_t t_star() const;
    // mu^2 eps^2 xi / 2^(4 t* + 1) unless overridden. Reported only.
    double gamma() const;
    // alpha + eps^2 / 125, the density a Denser outcome must reach.
    double denser_target() const { return alpha + eps * eps / 125.0; }

    // Throws ParameterError unless 0 < eps < alpha <= 1, xi > 0, t* >= 1.
    void validate() const;
};

enum class CleanupKind { Regular, Denser };
std::string to_string(CleanupKind kind);

struct DegreeViolation {
    Vertex vertex = 0;
    std::size_t degree = 0;
};

struct CleanupOutcome {
    CleanupKind kind = CleanupKind::Regular;
    // False when neither certificate holds and `kind` names the closer one.
    bool certified = true;
    VertexSet u;
    double density_ratio = 0.0;
    // Members of U whose degree in G[U] lies outside (alpha +- eps) p |U|.
    std::vector<DegreeViolation> degree_violations;
    // |W|, |X_1|, ..., |X_t|.
    std::vector<std::size_t> trace;

    // e(G) >= alpha p C(n', 2) on the input vertex set.
    bool precondition_met = true;
    double input_density_ratio = 0.0;

    // |X_1| <= (eps/25)|W| is asserted whenever e(G[W]) falls short of the
    // Denser target.
    bool x1_audit_applicable = false;
    bool x1_audit_holds = true;
    double x1_bound = 0.0;

    CleanupParams params;
    double p = 0.0;
};

// Repeatedly deletes the current minimum-degree vertex (ties: smallest id)
// while its degree in the surviving set is below (alpha - xi) p t, t being
// the surviving set size. The result may be empty.
VertexSet min_degree_prune(const Graph& g, const VertexSet& vertices, double p, double alpha, double xi);

// beta^2 |Y| / (threshold - p |Y|)^2: the most vertices outside Y that can
// each send at least `threshold` edges into Y in a (p, beta)-jumbled graph.
// Throws ParameterError unless threshold > p |Y|.
double degree_cascade_bound(double beta, std::size_t y_size, double threshold, double p);

// X_1 = {u in W : deg_W(u) >= (alpha + 4 eps/5) p m} with m = |W|, then
// X_t = {u in W minus X_1..X_{t-1} : deg(u, X_{t-1}) >= (eps / 2^(t+2)) p m}
// until a set comes out empty or t reaches t_star. Returns the nonempty
// prefix.
std::vector<VertexSet> high_degree_cascade(const Graph& g, const VertexSet& w, double p, double alpha, double eps,
                                           std::size_t t_star);

// Pruning, cascade, classification. `vertices` is V(G); g may carry edges
// outside it, which are ignored. Throws DegenerateError when W or U is empty.
CleanupOutcome cleanup(const Graph& g, const VertexSet& vertices, double p, const CleanupParams& params);
inline CleanupOutcome cleanup(const Graph& g, double p, const CleanupParams& params) {
    return cleanup(g, VertexSet::range(0, static_cast<Vertex>(g.n())), p, params);
}

// min(1, 2 exp(-eta E / 3)); eta must lie in (0, 3/2].
double hyper_tail_bound(double expectation, double eta);

struct ExtractionParams {
    std::size_t k = 1;
    double p = 0.0;
    double alpha0 = 0.55;
    double eps = 0.4;
    double mu = 0.1;
    // 0 means mu / ell.
    double nu = 0.0;
    double rho = 0.0;  // 0 means 1 / ell
    std::size_t retries = 20;
    std::uint64_t seed = 0;
    // 0 means ceil(100 / eps1^2).
    std::size_t max_rounds = 0;
    std::optional<double> xi_override;
    std::optional<std::size_t> t_star_override;

    std::size_t ell() const { return 2 * k + 1; }
    double eps1() const { return eps / 4.0; }
    double resolved_nu() const { return nu > 0.0 ? nu : mu / static_cast<double>(ell()); }
    double resolved_rho() const { return rho > 0.0 ? rho : 1.0 / static_cast<double>(ell()); }
    std::size_t resolved_max_rounds() const;
};

struct ExtractionResult {
    BlowupGraph h;
    double alpha = 0.0;
    std::vector<CleanupOutcome> rounds;
    VertexSet u;                  // the Regular set before trimming
    std::size_t trimmed = 0;      // vertices dropped so ell divides |U|
    bool window_eps1_holds = false;
    bool window_2eps1_holds = false;
    std::size_t attempts = 0;     // equipartitions drawn
    std::vector<std::size_t> bad_per_attempt;
    double failure_bound = 1.0;   // union bound on a bad vertex per attempt
};

// Iterated cleanup with eps1 = eps/4 on nested vertex sets until a Regular
// outcome, then random equipartitions into ell = 2k+1 layers until no vertex
// is bad, keeping only consecutive-layer edges. Throws ExtractionError with
// stage "precondition", "cleanup", "size" or "partition"; DegenerateError
// from cleanup propagates.
ExtractionResult extract_blowup(const Graph& host, const Graph& g, const ExtractionParams& params);

}  // namespace oddcycle
