#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include "oddcycle/error.hpp"
#include "oddcycle/graph.hpp"

namespace oddcycle {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<std::uint64_t> parse_id(std::string_view token) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

Graph parse_edge_list(std::istream& in) {
    std::optional<std::uint64_t> header_n;
    std::vector<Edge> edges;
    std::uint64_t max_id = 0;
    bool any_edge = false;
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.starts_with("n=")) {
            if (header_n || any_edge) {
                throw ParseError(line_no, "header must appear once, before any edge");
            }
            header_n = parse_id(trim(line.substr(2)));
            if (!header_n) {
                throw ParseError(line_no, "malformed header '" + std::string(line) + "'");
            }
            continue;
        }

        std::vector<std::string_view> tokens;
        std::size_t pos = 0;
        while (pos < line.size()) {
            const auto start = line.find_first_not_of(" \t", pos);
            if (start == std::string_view::npos) {
                break;
            }
            const auto stop = line.find_first_of(" \t", start);
            tokens.push_back(line.substr(start, stop == std::string_view::npos ? stop : stop - start));
            pos = stop == std::string_view::npos ? line.size() : stop;
        }
        if (tokens.size() != 2) {
            throw ParseError(line_no, "expected 'u v', got '" + std::string(line) + "'");
        }
        const auto u = parse_id(tokens[0]);
        const auto v = parse_id(tokens[1]);
        if (!u || !v || *u > 0xFFFFFFFEULL || *v > 0xFFFFFFFEULL) {
            throw ParseError(line_no, "malformed vertex id in '" + std::string(line) + "'");
        }
        if (*u == *v) {
            throw ParseError(line_no, "self-loop at vertex " + std::to_string(*u));
        }
        if (header_n && (*u >= *header_n || *v >= *header_n)) {
            throw ParseError(line_no, "vertex id exceeds header n=" + std::to_string(*header_n));
        }
        max_id = std::max({max_id, *u, *v});
        any_edge = true;
        edges.emplace_back(static_cast<Vertex>(*u), static_cast<Vertex>(*v));
    }

    const std::uint64_t n = header_n ? *header_n : (any_edge ? max_id + 1 : 0);
    return Graph::from_edges(n, edges);
}

Graph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, "cannot open edge list '" + path.string() + "'");
    }
    return parse_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << "n=" << g.n() << '\n';
    for (auto [u, v] : g.edges()) {
        out << u << ' ' << v << '\n';
    }
}

std::string to_edge_list_string(const Graph& g) {
    std::ostringstream out;
    write_edge_list(g, out);
    return out.str();
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError(0, "cannot write edge list '" + path.string() + "'");
    }
    write_edge_list(g, out);
}

}  // namespace oddcycle
