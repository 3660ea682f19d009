#include "oddcycle/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "oddcycle/error.hpp"
#include "oddcycle/parallel.hpp"
#include "oddcycle/rng.hpp"

namespace oddcycle {

namespace {

using Vec = std::vector<double>;

constexpr std::size_t kMaxBasis = 600;
constexpr std::size_t kMaxRestarts = 3;
constexpr std::uint64_t kStartSeed = 0x5EED5EED5EEDULL;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void scale(Vec& x, double a) {
    for (double& v : x) v *= a;
}

void apply_adjacency(const Graph& g, const Vec& x, Vec& y) {
    for (Vertex u = 0; u < g.n(); ++u) {
        double s = 0.0;
        for (Vertex v : g.neighbors(u)) s += x[v];
        y[u] = s;
    }
}

void project_out(const std::vector<Vec>& basis, Vec& w) {
    for (const Vec& q : basis) axpy(-dot(q, w), q, w);
}

struct Extremes {
    double max = 0.0;
    double min = 0.0;
    Vec max_vector;
    double residual = 0.0;
};

// Largest and smallest eigenvalue of the adjacency operator restricted to
// the orthogonal complement of the orthonormal vectors in `deflate`.
Extremes lanczos_extremes(const Graph& g, const std::vector<Vec>& deflate, double tol,
                          std::size_t& matvecs, std::size_t budget, bool want_vector) {
    const std::size_t n = g.n();
    const std::size_t n_eff = n - deflate.size();
    const std::size_t cap = std::min(n_eff, kMaxBasis);

    // A fresh stream per deflation depth: reusing the first start vector would
    // leave it with no component in the rest of a repeated top eigenspace.
    Vec start(n);
    SplitMix64 rng(derive_seed(kStartSeed, deflate.size()));
    for (double& v : start) v = rng.uniform() - 0.5;

    double last_residual = 0.0;
    for (std::size_t restart = 0; restart <= kMaxRestarts; ++restart) {
        project_out(deflate, start);
        project_out(deflate, start);
        scale(start, 1.0 / std::sqrt(dot(start, start)));

        std::vector<Vec> basis{start};
        Vec alpha, beta;
        Vec w(n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        std::size_t next_check = 4;

        for (std::size_t j = 0;; ++j) {
            if (matvecs >= budget) {
                throw ConvergenceError("eigensolver exhausted " + std::to_string(budget) +
                                           " operator applications",
                                       last_residual);
            }
            apply_adjacency(g, basis[j], w);
            ++matvecs;
            project_out(deflate, w);
            alpha.push_back(dot(basis[j], w));
            // Full reorthogonalization, done twice to stay orthogonal to
            // working precision.
            project_out(basis, w);
            project_out(basis, w);
            project_out(deflate, w);
            const double b = std::sqrt(dot(w, w));

            const std::size_t size = j + 1;
            const bool exhausted = size >= cap;
            const bool check = exhausted || size >= next_check || b <= 1e-9;
            if (!check) {
                beta.push_back(b);
                scale(w, 1.0 / b);
                basis.push_back(w);
                continue;
            }
            next_check = size + std::max<std::size_t>(4, size / 8);

            Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(size));
            Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(size - 1));
            tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            const auto& theta = tri.eigenvalues();
            const auto& s = tri.eigenvectors();
            const auto last = static_cast<Eigen::Index>(size - 1);
            const double theta_min = theta(0);
            const double theta_max = theta(last);
            const double res_min = b * std::abs(s(last, 0));
            const double res_max = b * std::abs(s(last, last));
            const double norm_scale = std::max({1.0, std::abs(theta_min), std::abs(theta_max)});
            last_residual = std::max(res_min, res_max) / norm_scale;
            const bool breakdown = b <= 1e-9 * norm_scale;

            auto ritz = [&](Eigen::Index col) {
                Vec v(n, 0.0);
                for (std::size_t i = 0; i < size; ++i) axpy(s(static_cast<Eigen::Index>(i), col), basis[i], v);
                return v;
            };

            if (breakdown || last_residual <= tol) {
                Extremes out{theta_max, theta_min, {}, last_residual};
                if (want_vector) {
                    out.max_vector = ritz(last);
                    scale(out.max_vector, 1.0 / std::sqrt(dot(out.max_vector, out.max_vector)));
                }
                return out;
            }
            if (exhausted) {
                // Explicit restart from the two extreme Ritz vectors.
                start = ritz(last);
                axpy(1.0, ritz(0), start);
                break;
            }
            beta.push_back(b);
            scale(w, 1.0 / b);
            basis.push_back(w);
        }
    }
    throw ConvergenceError("eigensolver did not converge after " + std::to_string(kMaxRestarts) +
                               " restarts",
                           last_residual);
}

double pair_ratio(std::size_t e, std::size_t a, std::size_t b, double p) {
    const double vol = static_cast<double>(a) * static_cast<double>(b);
    return std::abs(static_cast<double>(e) - p * vol) / std::sqrt(vol);
}

double single_ratio(std::size_t e, std::size_t a, double p) {
    const double x = static_cast<double>(a);
    return std::abs(static_cast<double>(e) - p * x * (x - 1.0) / 2.0) / x;
}

VertexSet mask_to_set(std::uint32_t mask) {
    std::vector<Vertex> ids;
    for (; mask != 0; mask &= mask - 1) ids.push_back(static_cast<Vertex>(std::countr_zero(mask)));
    return VertexSet(std::move(ids));
}

JumblednessReport certify_exhaustive(const Graph& g, const JumblednessParams& params) {
    const std::size_t n = g.n();
    const std::uint32_t full = n == 0 ? 0U : static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
    std::vector<std::uint32_t> adj(n, 0);
    for (auto [u, v] : g.edges()) {
        adj[u] |= 1U << v;
        adj[v] |= 1U << u;
    }

    JumblednessReport report;
    report.mode = CertifyMode::Exhaustive;
    report.params = params;
    std::uint32_t worst_x = 0, worst_y = 0;
    double worst = -1.0;
    auto consider = [&](double ratio, std::uint32_t x, std::uint32_t y) {
        ++report.pairs_checked;
        if (ratio > worst) {
            worst = ratio;
            worst_x = x;
            worst_y = y;
        }
    };

    const std::size_t masks = std::size_t{1} << n;
    std::vector<std::size_t> inside(masks, 0);   // e(X) for every mask X
    std::vector<std::size_t> between(masks, 0);  // e(X, Y) for the current X
    std::vector<std::size_t> back(n, 0);
    for (std::uint32_t x = 1; x <= full && x != 0; ++x) {
        const std::uint32_t rest = x & (x - 1);
        const int low = std::countr_zero(x);
        inside[x] = inside[rest] + static_cast<std::size_t>(std::popcount(adj[low] & rest));
        const auto size_x = static_cast<std::size_t>(std::popcount(x));
        consider(single_ratio(inside[x], size_x, params.p), x, x);

        for (std::size_t v = 0; v < n; ++v) back[v] = static_cast<std::size_t>(std::popcount(adj[v] & x));
        const std::uint32_t comp = full & ~x;
        for (std::uint32_t y = (0U - comp) & comp; y != 0; y = (y - comp) & comp) {
            between[y] = between[y & (y - 1)] + back[static_cast<std::size_t>(std::countr_zero(y))];
            consider(pair_ratio(between[y], size_x, static_cast<std::size_t>(std::popcount(y)), params.p), x, y);
        }
    }
    if (worst >= 0.0) {
        report.worst_ratio = worst;
        report.worst_x = mask_to_set(worst_x);
        report.worst_y = mask_to_set(worst_y);
    }
    return report;
}

std::size_t log_uniform_size(SplitMix64& rng, std::size_t hi) {
    const double draw = std::floor(std::exp(rng.uniform() * std::log(static_cast<double>(hi) + 1.0)));
    return std::clamp<std::size_t>(static_cast<std::size_t>(draw), 1, hi);
}

JumblednessReport certify_sampled(const Graph& g, const JumblednessParams& params, std::size_t samples,
                                  std::uint64_t seed) {
    JumblednessReport report;
    report.mode = CertifyMode::Sampled;
    report.params = params;
    const std::size_t n = g.n();
    const std::size_t hi = n / 2;
    if (hi == 0 || samples == 0) {
        return report;
    }

    struct Trial {
        double ratio = 0.0;
        VertexSet x, y;
    };
    std::vector<Trial> trials(samples);
    parallel_for(0, samples, [&](std::size_t i) {
        SplitMix64 rng(derive_seed(seed, i));
        const std::size_t a = log_uniform_size(rng, hi);
        const std::size_t b = log_uniform_size(rng, hi);
        std::vector<Vertex> ids(n);
        std::iota(ids.begin(), ids.end(), Vertex{0});
        for (std::size_t t = 0; t < a + b; ++t) {
            std::swap(ids[t], ids[t + static_cast<std::size_t>(rng.below(n - t))]);
        }
        Trial& trial = trials[i];
        trial.x = VertexSet(std::vector<Vertex>(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(a)));
        trial.y = VertexSet(std::vector<Vertex>(ids.begin() + static_cast<std::ptrdiff_t>(a),
                                                ids.begin() + static_cast<std::ptrdiff_t>(a + b)));
        trial.ratio = pair_ratio(edges_between(g, trial.x, trial.y), a, b, params.p);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < samples; ++i) {
        if (trials[i].ratio > trials[best].ratio) best = i;
    }
    report.pairs_checked = samples;
    report.worst_ratio = trials[best].ratio;
    report.worst_x = trials[best].x;
    report.worst_y = trials[best].y;
    return report;
}

}  // namespace

SpectralProfile spectral_profile(const Graph& g, double tol) {
    if (g.n() == 0) {
        throw ParameterError("spectral profile of an empty graph");
    }
    if (!(tol > 0.0)) {
        throw ParameterError("eigensolver tolerance must be positive");
    }
    SpectralProfile out;
    out.n = g.n();
    out.d = g.average_degree();
    out.regular = g.is_regular();
    out.tol = tol;
    const std::size_t n = g.n();
    const std::size_t budget = 10 * n;

    if (n == 1) {
        return out;
    }
    if (out.regular) {
        out.lambda1 = out.d;
        const std::vector<Vec> ones{Vec(n, 1.0 / std::sqrt(static_cast<double>(n)))};
        const Extremes rest = lanczos_extremes(g, ones, tol, out.matvecs, budget, false);
        out.lambda2 = std::min(rest.max, out.lambda1);
        out.lambda_min = std::min(rest.min, out.lambda2);
        out.residual = rest.residual;
    } else {
        const Extremes top = lanczos_extremes(g, {}, tol, out.matvecs, budget, true);
        out.lambda1 = top.max;
        const Extremes rest = lanczos_extremes(g, {top.max_vector}, tol, out.matvecs, budget, false);
        out.lambda2 = std::min(rest.max, out.lambda1);
        out.lambda_min = std::min({top.min, rest.min, out.lambda2});
        out.residual = std::max(top.residual, rest.residual);
    }
    out.lambda = std::max(out.lambda2, std::abs(out.lambda_min));
    return out;
}

JumblednessParams mixing_to_jumbled(std::size_t n, double d, double lambda) {
    if (n == 0 || d < 0.0 || d > static_cast<double>(n)) {
        throw ParameterError("mixing conversion needs 0 <= d <= n");
    }
    if (lambda < 0.0) {
        throw ParameterError("second eigenvalue bound must be non-negative");
    }
    return {d / static_cast<double>(n), lambda};
}

std::string to_string(CertifyMode mode) { return mode == CertifyMode::Exhaustive ? "exhaustive" : "sampled"; }

CertifyMode certify_mode_from_string(const std::string& name) {
    if (name == "exhaustive") return CertifyMode::Exhaustive;
    if (name == "sampled") return CertifyMode::Sampled;
    throw ParameterError("unknown certification mode '" + name + "'");
}

JumblednessReport certify_jumbled(const Graph& g, const JumblednessParams& params, CertifyMode mode,
                                  std::size_t samples, std::uint64_t seed, std::size_t exhaustive_cap) {
    if (!(params.p >= 0.0 && params.p <= 1.0) || !(params.beta >= 0.0)) {
        throw ParameterError("jumbledness parameters need p in [0,1] and beta >= 0");
    }
    JumblednessReport report;
    if (mode == CertifyMode::Exhaustive) {
        if (g.n() > exhaustive_cap || g.n() > 31) {
            throw ParameterError("exhaustive certification enumerates 3^n set pairs; n=" + std::to_string(g.n()) +
                                 " exceeds the cap of " + std::to_string(std::min<std::size_t>(exhaustive_cap, 31)) +
                                 " (use sampled mode)");
        }
        report = certify_exhaustive(g, params);
    } else {
        report = certify_sampled(g, params, samples, seed);
    }
    report.passed = report.worst_ratio <= params.beta;
    return report;
}

double theorem_beta_budget(double n, double p, std::size_t k, double gamma) {
    if (!(n > 1.0)) throw ParameterError("budget needs n > 1 so that ln n > 0");
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("budget needs p in (0, 1]");
    if (k < 1) throw ParameterError("budget needs k >= 1");
    if (!(gamma >= 0.0)) throw ParameterError("budget needs gamma >= 0");
    const double kk = static_cast<double>(k);
    return gamma * std::pow(p, 1.0 + 1.0 / (2.0 * kk - 1.0)) * n * std::pow(std::log(n), -2.0 * (kk - 1.0));
}

}  // namespace oddcycle
