#include "oddcycle/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "oddcycle/blowup.hpp"
#include "oddcycle/counting.hpp"
#include "oddcycle/error.hpp"
#include "oddcycle/extremal.hpp"
#include "oddcycle/graph.hpp"
#include "oddcycle/parallel.hpp"
#include "oddcycle/regularize.hpp"
#include "oddcycle/report.hpp"
#include "oddcycle/spectral.hpp"

namespace oddcycle {

namespace {

const std::vector<std::string> kCommands = {"gen",     "spectrum", "certify",    "maxcut",     "extract",
                                            "count",   "saturate", "find-cycle", "experiment", "audit"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Flat key=value lines; '#' starts a comment. Keys are long option names.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open config '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (key == "config") throw ParseError(line_no, "config files cannot include other config files");
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

// Pulls --config out of the argument list and splices its entries in right
// after the subcommand name, so later command-line flags override them.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file name");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    if (!path) return args;
    const auto entries = read_config(*path);
    auto at = std::find_first_of(args.begin(), args.end(), kCommands.begin(), kCommands.end());
    if (at == args.end()) throw CLI::ArgumentMismatch("--config needs a subcommand");
    std::vector<std::string> inserted;
    for (const auto& [key, value] : entries) inserted.push_back("--" + key + "=" + value);
    args.insert(at + 1, inserted.begin(), inserted.end());
    return args;
}

Json typed_value(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.empty()) return nullptr;
    // Numbers stay numbers when they round-trip through the parser unchanged.
    try {
        std::size_t used = 0;
        const long long i = std::stoll(s, &used);
        if (used == s.size()) return i;
        const double d = std::stod(s, &used);
        if (used == s.size() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    return s;
}

// Every option of `app` with its effective value (given or default).
Json resolved_options(const CLI::App& app) {
    Json config = Json::object();
    for (const CLI::Option* opt : app.get_options()) {
        const auto& lnames = opt->get_lnames();
        std::string key = lnames.empty() ? opt->get_name() : lnames.front();
        if (key == "help" || key == "threads" || key == "deterministic" || key == "output") continue;
        if (opt->count() > 0) {
            const auto& results = opt->results();
            if (opt->get_expected_max() > 1) {
                Json list = Json::array();
                for (const auto& r : results) list.push_back(typed_value(r));
                config[key] = list;
            } else {
                config[key] = typed_value(results.empty() ? std::string("true") : results.back());
            }
        } else {
            config[key] = typed_value(opt->get_default_str());
        }
    }
    return config;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

struct Runtime {
    bool deterministic = false;
    unsigned threads = 0;
    std::string output;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void emit(const Json& report, const Runtime& rt, std::ostream& out) {
    const std::string text = report.dump(2) + "\n";
    if (rt.output.empty() || rt.output == "-") {
        out << text;
        return;
    }
    std::ofstream f(rt.output, std::ios::binary);
    if (!f) throw ParseError(0, "cannot write report '" + rt.output + "'");
    f << text;
}

Json envelope(const std::string& command, const CLI::App& sub, const Runtime& rt) {
    Json j;
    j["command"] = command;
    j["config"] = resolved_options(sub);
    if (!rt.deterministic) {
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - rt.start);
        j["runtime"] = Json{{"generated_at", utc_timestamp()},
                            {"elapsed_ms", ms.count()},
                            {"threads", rt.threads == 0 ? thread_limit() : rt.threads}};
    }
    return j;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(0, "'" + path + "' is not valid JSON: " + e.what());
    }
}

// Options shared by the commands that run the odd-cycle pipeline.
struct TheoremOptions {
    TheoremParams params;
    std::string mode = "practical";
    std::optional<double> eps;
    std::optional<double> nu;
    std::optional<double> xi;
    std::optional<std::size_t> t_star;

    void add(CLI::App* app, bool with_k = true) {
        if (with_k) app->add_option("--k", params.k, "cycle length is 2k+1")->capture_default_str();
        app->add_option("--delta", params.delta, "density margin above 1/2")->capture_default_str();
        app->add_option("--mode", mode, "constant schedule")
            ->check(CLI::IsMember({"paper", "practical"}))
            ->capture_default_str();
        app->add_option("--eps", eps, "degree-window width (default from mode)");
        app->add_option("--mu", params.mu)->capture_default_str();
        app->add_option("--nu", nu, "layer size fraction (default mu/ell)");
        app->add_option("--eta", params.eta, "bucket ratio")->capture_default_str();
        app->add_option("--retries", params.retries, "equipartition attempts")->capture_default_str();
        app->add_option("--max-rounds", params.max_rounds, "cleanup rounds, 0 for ceil(100/eps1^2)")
            ->capture_default_str();
        app->add_option("--xi", xi, "pruning slack override");
        app->add_option("--t-star", t_star, "cascade length override");
        app->add_option("--p", params.p, "host density, 0 for average degree / n")->capture_default_str();
        app->add_option("--fallback-max-n", params.fallback_max_n, "exhaustive search size limit")
            ->capture_default_str();
    }

    TheoremParams resolve() const {
        TheoremParams t = params;
        t.mode = param_mode_from_string(mode);
        t.eps_override = eps;
        t.nu_override = nu;
        t.xi_override = xi;
        t.t_star_override = t_star;
        t.validate();
        return t;
    }
};

std::vector<Strategy> parse_strategies(const std::string& list) {
    std::vector<Strategy> out;
    std::stringstream s(list);
    std::string item;
    while (std::getline(s, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(strategy_from_string(item));
    }
    return out;
}

void require_same_order(const Graph& host, const Graph& other, const std::string& what) {
    if (host.n() != other.n()) {
        throw ParameterError(what + " has " + std::to_string(other.n()) + " vertices but the host has " +
                             std::to_string(host.n()));
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral certification, blow-up extraction and odd-cycle counting on graphs", "oddcycle"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();

    Runtime rt;
    app.add_option("--threads", rt.threads, "worker threads, 0 for all cores")->capture_default_str();
    app.add_flag("--deterministic", rt.deterministic, "omit timestamps and timings from reports");
    app.add_option("-o,--output", rt.output, "report file (default stdout)");

    std::uint64_t seed = 0;
    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", seed, "random seed")->capture_default_str(); };

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph (edge list) or blow-up (JSON)");
    std::string gen_kind;
    std::uint64_t gen_q = 13;
    std::size_t gen_n = 0, gen_d = 0, gen_ell = 3, gen_m = 10;
    double gen_keep = 1.0;
    std::string gen_edges;
    gen->add_option("kind,--kind", gen_kind, "paley | regular | blowup")
        ->required()
        ->check(CLI::IsMember({"paley", "regular", "blowup"}));
    gen->add_option("--q", gen_q, "Paley prime, 1 mod 4")->capture_default_str();
    gen->add_option("--n", gen_n, "vertices (regular)")->capture_default_str();
    gen->add_option("--d", gen_d, "degree (regular)")->capture_default_str();
    gen->add_option("--ell", gen_ell, "cycle length (blowup)")->capture_default_str();
    gen->add_option("--m", gen_m, "layer size (blowup)")->capture_default_str();
    gen->add_option("--keep", gen_keep, "edge retention probability (blowup)")->capture_default_str();
    gen->add_option("--edges", gen_edges, "also write the blow-up's edge list here");
    add_seed(gen);

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "extreme eigenvalues and the mixing-lemma (p, beta)");
    std::string graph_path;
    double tol = 1e-8;
    spectrum->add_option("graph,--graph", graph_path, "edge list")->required();
    spectrum->add_option("--tol", tol, "eigensolver tolerance")->capture_default_str();

    // certify
    auto* certify = app.add_subcommand("certify", "check (p, beta)-jumbledness");
    std::optional<double> cert_p, cert_beta;
    std::string cert_mode = "exhaustive";
    std::size_t cert_samples = 1000, cert_cap = kExhaustiveCap;
    certify->add_option("graph,--graph", graph_path, "edge list")->required();
    certify->add_option("--p", cert_p, "density (default d/n)");
    certify->add_option("--beta", cert_beta, "jumbledness (default lambda)");
    certify->add_option("--mode", cert_mode)->check(CLI::IsMember({"exhaustive", "sampled"}))->capture_default_str();
    certify->add_option("--samples", cert_samples, "pairs in sampled mode")->capture_default_str();
    certify->add_option("--cap", cert_cap, "largest n for exhaustive mode")->capture_default_str();
    add_seed(certify);

    // maxcut
    auto* maxcut = app.add_subcommand("maxcut", "bipartite subgraph with at least half the edges");
    std::string cut_out;
    maxcut->add_option("graph,--graph", graph_path, "edge list")->required();
    maxcut->add_option("--sub-out", cut_out, "write the cut subgraph's edge list here");
    add_seed(maxcut);

    // extract
    auto* extract = app.add_subcommand("extract", "degree-regular odd-cycle blow-up from a dense subgraph");
    std::string host_path, sub_path, blowup_path;
    TheoremOptions extract_opts;
    std::optional<double> alpha0;
    extract->add_option("--host", host_path, "host edge list")->required();
    extract->add_option("--sub", sub_path, "subgraph edge list (default: the host)");
    extract->add_option("--alpha0", alpha0, "starting density ratio (default 1/2 + delta)");
    extract_opts.add(extract);
    add_seed(extract);

    // count
    auto* count = app.add_subcommand("count", "exact and bucket-bounded connecting-cycle counts");
    CountOptions count_opts;
    std::optional<double> count_mu;
    count->add_option("blowup,--blowup", blowup_path, "blow-up JSON")->required();
    count->add_option("--host", host_path, "host edge list (default: the blow-up graph)");
    count->add_option("--eta", count_opts.eta)->capture_default_str();
    count->add_option("--beta", count_opts.beta, "host jumbledness for the error term")->capture_default_str();
    count->add_flag("--per-vertex", count_opts.per_vertex, "list the count for every w");
    count->add_option("--mu", count_mu, "also summarize mu-saturation");

    // saturate
    auto* saturate = app.add_subcommand("saturate", "per-edge loads and mu-saturated edges");
    double sat_mu = 0.5;
    std::string csv_path;
    saturate->add_option("blowup,--blowup", blowup_path, "blow-up JSON")->required();
    saturate->add_option("--host", host_path, "host edge list (default: the blow-up graph)");
    saturate->add_option("--mu", sat_mu)->capture_default_str();
    saturate->add_option("--csv", csv_path, "write u,v,load,saturated here");

    // find-cycle
    auto* find = app.add_subcommand("find-cycle", "explicit odd cycle in a dense subgraph");
    TheoremOptions find_opts;
    find->add_option("--host", host_path, "host edge list")->required();
    find->add_option("--sub", sub_path, "subgraph edge list")->required();
    find_opts.add(find);
    add_seed(find);

    // experiment
    auto* experiment = app.add_subcommand("experiment", "adversarial subgraphs against the odd-cycle threshold");
    TheoremOptions exp_opts;
    ExperimentOptions exp_extra;
    std::string strategies = "maxcut,maxcut-returns,uniform";
    bool no_spectral = false;
    experiment->add_option("--host", host_path, "host edge list")->required();
    experiment->add_option("--strategies", strategies, "comma-separated list")->capture_default_str();
    experiment->add_option("--margin", exp_extra.margin)->capture_default_str();
    experiment->add_option("--return-fraction", exp_extra.return_fraction)->capture_default_str();
    experiment->add_flag("--no-spectral", no_spectral, "skip the host's lambda");
    experiment->add_option("--csv", csv_path, "write a one-line-per-strategy summary here");
    exp_opts.add(experiment);
    add_seed(experiment);

    // audit
    auto* audit = app.add_subcommand("audit", "inequality audit of a blow-up inside its host");
    TheoremOptions audit_opts;
    std::optional<double> audit_beta;
    double audit_xi = 0.0;
    audit->add_option("blowup,--blowup", blowup_path, "blow-up JSON")->required();
    audit->add_option("--host", host_path, "host edge list (default: the blow-up graph)");
    audit->add_option("--beta", audit_beta, "host jumbledness (default lambda of the host)");
    audit->add_option("--claim-xi", audit_xi, "xi for the error-term check, 0 for (eps/4)^(4k)")
        ->capture_default_str();
    audit_opts.add(audit, false);

    std::vector<std::string> args;
    try {
        args = expand_config(raw_args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    set_thread_limit(rt.threads);
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();

    try {
        if (name == "gen") {
            if (gen_kind == "blowup") {
                const BlowupGraph b = gen_blowup_cycle(gen_ell, gen_m, gen_keep, seed);
                if (!gen_edges.empty()) save_edge_list(b.graph(), gen_edges);
                Json j = b;
                emit(j, rt, out);
                return kExitOk;
            }
            const Graph g = gen_kind == "paley" ? gen_paley(gen_q) : gen_random_regular(gen_n, gen_d, seed);
            if (rt.output.empty() || rt.output == "-") {
                write_edge_list(g, out);
            } else {
                save_edge_list(g, rt.output);
            }
            return kExitOk;
        }

        if (name == "spectrum") {
            const Graph g = load_edge_list(graph_path);
            const SpectralProfile s = spectral_profile(g, tol);
            Json j = envelope(name, *sub, rt);
            j["spectrum"] = s;
            j["lambda"] = s.lambda;
            j["jumbled"] = mixing_to_jumbled(s.n, s.d, s.lambda);
            j["edges"] = g.edge_count();
            emit(j, rt, out);
            return kExitOk;
        }

        if (name == "certify") {
            const Graph g = load_edge_list(graph_path);
            JumblednessParams jp;
            std::optional<SpectralProfile> s;
            if (!cert_p || !cert_beta) s = spectral_profile(g);
            jp.p = cert_p ? *cert_p : (s->d / static_cast<double>(g.n()));
            jp.beta = cert_beta ? *cert_beta : s->lambda;
            const auto mode = certify_mode_from_string(cert_mode);
            const JumblednessReport r = certify_jumbled(g, jp, mode, cert_samples, seed, cert_cap);
            Json j = envelope(name, *sub, rt);
            j["certificate"] = r;
            j["passed"] = r.passed;
            if (s) j["spectrum"] = *s;
            emit(j, rt, out);
            return r.passed ? kExitOk : kExitFailure;
        }

        if (name == "maxcut") {
            const Graph g = load_edge_list(graph_path);
            const MaxCut cut = max_cut_bipartite(g, seed);
            const Graph sub_graph = cut_subgraph(g, cut);
            if (!cut_out.empty()) save_edge_list(sub_graph, cut_out);
            Json j = envelope(name, *sub, rt);
            j["cut"] = cut;
            j["cut_edges"] = cut.cut_edges;
            j["edges"] = g.edge_count();
            j["half_bound"] = (g.edge_count() + 1) / 2;
            j["meets_half_bound"] = 2 * cut.cut_edges >= g.edge_count();
            j["cut_bipartite"] = is_bipartite(sub_graph);
            emit(j, rt, out);
            return kExitOk;
        }

        if (name == "extract") {
            const Graph host = load_edge_list(host_path);
            const Graph g = sub_path.empty() ? host : load_edge_list(sub_path);
            require_same_order(host, g, "sub");
            const TheoremParams t = extract_opts.resolve();
            ExtractionParams ep;
            ep.k = t.k;
            ep.p = t.p > 0.0 ? t.p : host.average_degree() / static_cast<double>(host.n());
            ep.alpha0 = alpha0 ? *alpha0 : t.alpha0();
            ep.eps = t.eps();
            ep.mu = t.mu;
            ep.nu = t.nu();
            ep.rho = t.rho();
            ep.retries = t.retries;
            ep.seed = seed;
            ep.max_rounds = t.max_rounds;
            ep.xi_override = t.xi_override;
            ep.t_star_override = t.t_star_override;
            Json body;
            int code = kExitOk;
            try {
                const ExtractionResult r = extract_blowup(host, g, ep);
                body["extraction"] = r;
                body["blowup"] = r.h;
                body["error"] = nullptr;
            } catch (const ExtractionError& e) {
                body["error"] = Json{{"stage", e.stage()},
                                  {"message", e.what()},
                                  {"attempts", e.stats().attempts},
                                  {"best_bad_vertices", e.stats().best_bad_vertices},
                                  {"cleanup_rounds", e.stats().cleanup_rounds},
                                  {"failure_bound", e.stats().failure_bound}};
                code = kExitFailure;
            } catch (const DegenerateError& e) {
                body["error"] = Json{{"stage", "degenerate"}, {"message", e.what()}, {"trace", e.trace()}};
                code = kExitFailure;
            }
            Json j = envelope(name, *sub, rt);
            j.update(body);
            j["params"] = ep;
            emit(j, rt, out);
            return code;
        }

        if (name == "count" || name == "saturate" || name == "audit") {
            const BlowupGraph h = blowup_from_json(load_json(blowup_path));
            const Graph host = host_path.empty() ? h.graph() : load_edge_list(host_path);
            require_same_order(host, h.graph(), "blow-up");
            Json j = envelope(name, *sub, rt);
            j["window_audit"] = audit_degree_window(h);

            if (name == "count") {
                count_opts.mu = count_mu;
                const CountReport r = cycle_count(h, host, count_opts);
                j["count"] = r;
                emit(j, rt, out);
                return kExitOk;
            }
            if (name == "saturate") {
                const SaturationResult r = saturated_edges(h, host, sat_mu);
                j["saturation"] = r;
                CountOptions exact_only;
                exact_only.buckets = false;
                j["conservation_holds"] = r.total_load == cycle_count(h, host, exact_only).exact_c;
                if (!csv_path.empty()) {
                    std::ofstream f(csv_path);
                    if (!f) throw ParseError(0, "cannot write '" + csv_path + "'");
                    write_loads_csv(r, f);
                }
                emit(j, rt, out);
                return kExitOk;
            }

            TheoremParams t = audit_opts.resolve();
            t.k = h.k();
            const CycleCountAudit a = audit_cycle_counts(host, h, t);
            j["cycle_counts"] = a;
            const double beta = audit_beta ? *audit_beta : spectral_profile(host).lambda;
            const double xi = audit_xi > 0.0 ? audit_xi : std::pow(t.eps() / 4.0, 4.0 * static_cast<double>(t.k));
            const LayerFrame f = LayerFrame::standard(h.k());
            const auto u1 = f.position(Side::U, 1, h.ell());
            const auto v1 = f.position(Side::V, 1, h.ell());
            Json claim = nullptr;
            for (Vertex w : h.w_layer(f)) {
                std::vector<Vertex> x, y;
                for (Vertex z : h.graph().neighbors(w)) {
                    const auto pos = h.slot(z).position;
                    if (pos == u1) x.push_back(z);
                    if (pos == v1) y.push_back(z);
                }
                if (x.empty() || y.empty()) continue;
                Json c = error_term_audit(h, {h.window().p, beta}, VertexSet(x), VertexSet(y), t.eta, xi, t.nu());
                c["w"] = w;
                claim = c;
                break;
            }
            j["error_term"] = claim;
            const bool implication_ok = !a.premises_hold || a.f_meets_h;
            j["intersection_implication_holds"] = implication_ok;
            emit(j, rt, out);
            return implication_ok ? kExitOk : kExitFailure;
        }

        if (name == "find-cycle") {
            const Graph host = load_edge_list(host_path);
            const Graph g = load_edge_list(sub_path);
            require_same_order(host, g, "sub");
            const ExtremalReport r = find_odd_cycle(host, g, find_opts.resolve(), seed);
            Json j = envelope(name, *sub, rt);
            j["report"] = r;
            j["cycle"] = r.cycle ? Json(*r.cycle) : Json("absent");
            emit(j, rt, out);
            return r.cycle ? kExitOk : kExitFailure;
        }

        if (name == "experiment") {
            const Graph host = load_edge_list(host_path);
            exp_extra.spectral = !no_spectral;
            const auto reports = turan_experiment(host, parse_strategies(strategies), exp_opts.resolve(), seed, exp_extra);
            Json j = envelope(name, *sub, rt);
            j["reports"] = reports;
            bool ok = true;
            // Above the threshold every subgraph must end with a cycle or a
            // proof that it has none; a bipartite subgraph above the threshold
            // is reported, not treated as a tool failure.
            for (const auto& r : reports) {
                ok = ok && (!r.precondition_met || r.cycle.has_value() || r.fallback_exhaustive);
            }
            j["all_above_threshold_decided"] = ok;
            if (!csv_path.empty()) {
                std::ofstream f(csv_path);
                if (!f) throw ParseError(0, "cannot write '" + csv_path + "'");
                write_extremal_csv(reports, f);
            }
            emit(j, rt, out);
            return ok ? kExitOk : kExitFailure;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    err << "error: unknown command '" << name << "'\n";
    return kExitUsage;
}

}  // namespace oddcycle
