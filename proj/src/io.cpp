#include "fpinc/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fpinc/errors.hpp"

namespace fpinc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& raw, const std::string& where) {
    const std::string s = trim(raw);
    FPINC_REQUIRE(!s.empty(), "empty number in " + where);
    for (char c : s) {
        FPINC_REQUIRE(c >= '0' && c <= '9', "bad integer '" + s + "' in " + where);
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    FPINC_REQUIRE(errno == 0 && end == s.c_str() + s.size(),
                  "bad integer '" + s + "' in " + where);
    return v;
}

std::vector<std::vector<std::uint64_t>> load_rows(const PlaneContext& ctx,
                                                  const std::string& path,
                                                  std::size_t width) {
    std::ifstream in(path);
    FPINC_REQUIRE(in.good(), "cannot open " + path);
    std::vector<std::vector<std::uint64_t>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<std::uint64_t> row;
        std::stringstream ss(t);
        std::string cell;
        const std::string where = path + ":" + std::to_string(lineno);
        while (std::getline(ss, cell, ',')) row.push_back(parse_u64(cell, where));
        FPINC_REQUIRE(row.size() == width,
                      "expected " + std::to_string(width) + " fields in " + where);
        for (std::uint64_t v : row) {
            FPINC_REQUIRE(v < ctx.p(), "value out of field range in " + where);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    FPINC_REQUIRE(out.good(), "cannot open " + path + " for writing");
    out << body;
    FPINC_REQUIRE(out.good(), "failed writing " + path);
}

} // namespace

PointSet load_points(const PlaneContext& ctx, const std::string& path) {
    const auto rows = load_rows(ctx, path, 2);
    std::vector<AffinePoint> pts;
    pts.reserve(rows.size());
    for (const auto& r : rows) pts.push_back(AffinePoint{r[0], r[1]});
    PointSet out(pts);
    FPINC_REQUIRE(out.size() == pts.size(), "duplicate point in " + path);
    return out;
}

LineSet load_lines(const PlaneContext& ctx, const std::string& path) {
    const auto rows = load_rows(ctx, path, 3);
    std::vector<AffLine> lns;
    lns.reserve(rows.size());
    for (const auto& r : rows) {
        lns.push_back(canonical_line(ctx, r[0], r[1], r[2]));
    }
    LineSet out(lns);
    FPINC_REQUIRE(out.size() == lns.size(),
                  "duplicate line (after canonicalization) in " + path);
    return out;
}

void save_points(const PointSet& P, const std::string& path) {
    std::string body;
    for (const AffinePoint& q : P.items()) {
        body += std::to_string(q.x) + "," + std::to_string(q.y) + "\n";
    }
    write_text(path, body);
}

void save_lines(const LineSet& L, const std::string& path) {
    std::string body;
    for (const AffLine& l : L.items()) {
        body += std::to_string(l.a) + "," + std::to_string(l.b) + "," +
                std::to_string(l.c) + "\n";
    }
    write_text(path, body);
}

LoadedGrid load_grid(const std::string& path) {
    std::ifstream in(path);
    FPINC_REQUIRE(in.good(), "cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("bad JSON in " + path + ": " + e.what());
    }
    FPINC_REQUIRE(j.is_object(), "grid file must hold a JSON object");
    FPINC_REQUIRE(j.contains("p") && j.contains("A") && j.contains("B") &&
                      j.contains("G"),
                  "grid file needs fields p, A, B, G");
    try {
        LoadedGrid out;
        out.p = j.at("p").get<std::uint64_t>();
        const PlaneContext ctx(out.p);
        std::vector<Fe> A = j.at("A").get<std::vector<Fe>>();
        std::vector<Fe> B = j.at("B").get<std::vector<Fe>>();
        std::vector<std::pair<Fe, Fe>> G;
        for (const auto& e : j.at("G")) {
            FPINC_REQUIRE(e.is_array() && e.size() == 2,
                          "grid edges must be [a, b] pairs");
            G.emplace_back(e[0].get<Fe>(), e[1].get<Fe>());
        }
        const Fe lambda = j.contains("lambda") ? j.at("lambda").get<Fe>() : 1;
        out.grid = GridInstance(ctx, std::move(A), std::move(B), std::move(G),
                                lambda);
        return out;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError("bad grid file " + path + ": " + e.what());
    }
}

void save_grid(const GridInstance& g, const std::string& path) {
    ordered_json j;
    j["p"] = g.p();
    j["A"] = g.a_values();
    j["B"] = g.b_values();
    ordered_json edges = ordered_json::array();
    for (const auto& [a, b] : g.edges()) {
        edges.push_back(ordered_json::array({a, b}));
    }
    j["G"] = edges;
    j["lambda"] = g.lambda();
    write_text(path, j.dump() + "\n");
}

} // namespace fpinc
