#pragma once

// Arc certificates: a modulus, a point list and optional machine-checkable
// claims, serialized as JSON. Points are sorted lexicographically on write
// and the field order is fixed, so output is byte-stable.

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arcs/arc_model.hpp"
#include "arcs/solver.hpp"

namespace arcs {

struct Claims {
    std::optional<bool> arc;
    std::optional<bool> complete;
    std::optional<bool> maximum;

    bool any() const { return arc || complete || maximum; }
};

struct Certificate {
    int n = 2;
    std::vector<std::pair<int, int>> points; // sorted (x, y)
    Claims claims;
};

inline Certificate from_arc_set(const ArcSet& X, Claims claims = {}) {
    Certificate c;
    c.n = X.modulus().value();
    for (const Point& p : X.points()) c.points.emplace_back(p.x.value(), p.y.value());
    std::sort(c.points.begin(), c.points.end());
    c.claims = claims;
    return c;
}

inline ArcSet to_arc_set(const Certificate& c) {
    Modulus m(c.n);
    std::vector<Point> pts;
    pts.reserve(c.points.size());
    for (auto& [x, y] : c.points) pts.emplace_back(x, y, c.n);
    return {m, std::move(pts)};
}

inline std::string certificate_json(const Certificate& c) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    auto pts = c.points;
    std::sort(pts.begin(), pts.end());
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto& [x, y] : pts) arr.push_back({x, y});
    j["points"] = std::move(arr);
    if (c.claims.any()) {
        nlohmann::ordered_json cl = nlohmann::ordered_json::object();
        if (c.claims.arc) cl["arc"] = *c.claims.arc;
        if (c.claims.complete) cl["complete"] = *c.claims.complete;
        if (c.claims.maximum) cl["maximum"] = *c.claims.maximum;
        j["claims"] = std::move(cl);
    }
    return j.dump(2) + "\n";
}

inline Certificate parse_certificate(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw malformed_certificate(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer() ||
        !j.contains("points") || !j["points"].is_array())
        throw malformed_certificate("certificate must carry integer `n` and array `points`");
    Certificate c;
    c.n = j["n"].get<int>();
    if (c.n < 2 || c.n > kMaxModulus)
        throw malformed_certificate("modulus out of range [2, 64]");
    for (const auto& e : j["points"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw malformed_certificate("points must be [x, y] integer pairs");
        int x = e[0].get<int>(), y = e[1].get<int>();
        if (x < 0 || x >= c.n || y < 0 || y >= c.n)
            throw malformed_certificate("point coordinate out of range");
        c.points.emplace_back(x, y);
    }
    std::sort(c.points.begin(), c.points.end());
    if (std::adjacent_find(c.points.begin(), c.points.end()) != c.points.end())
        throw malformed_certificate("duplicate points");
    if (j.contains("claims")) {
        const auto& cl = j["claims"];
        if (!cl.is_object()) throw malformed_certificate("claims must be an object");
        auto read_flag = [&](const char* key) -> std::optional<bool> {
            if (!cl.contains(key)) return std::nullopt;
            if (!cl[key].is_boolean()) throw malformed_certificate("claims must be booleans");
            return cl[key].get<bool>();
        };
        c.claims.arc = read_flag("arc");
        c.claims.complete = read_flag("complete");
        c.claims.maximum = read_flag("maximum");
    }
    return c;
}

inline Certificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_failure("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_certificate(text);
}

inline void save_certificate(const Certificate& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_failure("cannot open " + path + " for writing");
    out << certificate_json(c);
    if (!out) throw io_failure("write to " + path + " failed");
}

/// Certificate for a finished search: arc always holds, completeness is
/// recomputed, maximality is claimed only for exhausted searches.
inline Certificate certify(const SearchResult& result) {
    if (!is_arc(result.best)) throw not_an_arc("search result is not an arc");
    Claims claims;
    claims.arc = true;
    claims.complete = is_complete(result.best);
    claims.maximum = result.proven_optimal;
    return from_arc_set(result.best, claims);
}

} // namespace arcs
