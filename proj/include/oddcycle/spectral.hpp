#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "oddcycle/graph.hpp"

namespace oddcycle {

struct SpectralProfile {
    std::size_t n = 0;
    double d = 0.0;  // average degree
    bool regular = false;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda_min = 0.0;
    double lambda = 0.0;  // max(lambda2, |lambda_min|)
    double tol = 0.0;
    // Largest Ritz residual among the reported eigenvalues and the number of
    // operator applications spent.
    double residual = 0.0;
    std::size_t matvecs = 0;
};

// Extreme adjacency eigenvalues by Lanczos iteration with full
// reorthogonalization, using only adjacency-vector products. For regular
// graphs lambda1 = d and the all-ones vector is projected out before the
// iteration; otherwise the top Ritz vector is found first and deflated for a
// second run. Throws ParameterError on an empty graph and ConvergenceError
// when the budget (10n products, 3 restarts) runs out.
SpectralProfile spectral_profile(const Graph& g, double tol = 1e-8);

struct JumblednessParams {
    double p = 0.0;
    double beta = 0.0;
};

// An (n, d, lambda)-graph is (d/n, lambda)-jumbled.
JumblednessParams mixing_to_jumbled(std::size_t n, double d, double lambda);

enum class CertifyMode { Exhaustive, Sampled };

std::string to_string(CertifyMode mode);
CertifyMode certify_mode_from_string(const std::string& name);

struct JumblednessReport {
    CertifyMode mode = CertifyMode::Exhaustive;
    std::size_t pairs_checked = 0;
    // max |e - p*vol| / sqrt(vol) over checked pairs; for a single set X the
    // numerator is |e(X) - p*C(|X|,2)| and the denominator |X|, and the
    // reported pair is (X, X).
    double worst_ratio = 0.0;
    VertexSet worst_x;
    VertexSet worst_y;
    JumblednessParams params;
    bool passed = true;
};

inline constexpr std::size_t kExhaustiveCap = 14;

// Exhaustive: every ordered pair of disjoint nonempty sets and every nonempty
// single set (3^n assignments); refused with ParameterError above
// `exhaustive_cap`. Sampled: `samples` random disjoint pairs with sizes drawn
// log-uniformly from [1, n/2], one derived seed per trial.
JumblednessReport certify_jumbled(const Graph& g, const JumblednessParams& params, CertifyMode mode,
                                  std::size_t samples = 0, std::uint64_t seed = 0,
                                  std::size_t exhaustive_cap = kExhaustiveCap);

// gamma * p^(1 + 1/(2k-1)) * n * (ln n)^(-2(k-1)).
double theorem_beta_budget(double n, double p, std::size_t k, double gamma);

}  // namespace oddcycle
