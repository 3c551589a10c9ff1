#pragma once

// Lines of Z_n^2 and collinearity tests.
//
// A line is the image under coordinatewise reduction of an integer line
// {(a+uk, b+vk)} with gcd(u,v) = 1; equivalently a coset of the cyclic
// subgroup generated by a primitive direction (gcd(u,v,n) = 1).
//
// For squarefree n collinearity is equivalent to the determinant test.
// With a square factor the determinant vanishing is necessary but not
// sufficient, so the general test splits the modulus into prime-power
// factors and searches for a common direction in each factor directly.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "arcs/modular.hpp"

namespace arcs {

/// A canonical primitive direction: the lexicographically least pair among
/// all unit multiples. Two primitive pairs generate the same cyclic subgroup
/// iff they canonicalize identically.
struct Direction {
    int u, v;
    int n;

    bool operator==(const Direction& o) const { return u == o.u && v == o.v && n == o.n; }
    bool operator<(const Direction& o) const { return std::pair(u, v) < std::pair(o.u, o.v); }
};

inline bool is_primitive(int u, int v, int n) {
    return std::gcd(std::gcd(mod_norm(u, n), mod_norm(v, n)), n) == 1;
}

inline Direction canonical_direction(int u, int v, const Modulus& m) {
    int n = m.value();
    u = mod_norm(u, n);
    v = mod_norm(v, n);
    if (!is_primitive(u, v, n))
        throw not_primitive("(" + std::to_string(u) + "," + std::to_string(v) +
                            ") is not primitive mod " + std::to_string(n));
    int bu = u, bv = v;
    for (int w : units(n)) {
        int cu = u * w % n, cv = v * w % n;
        if (std::pair(cu, cv) < std::pair(bu, bv)) { bu = cu; bv = cv; }
    }
    return {bu, bv, n};
}

/// One representative per unit-multiple class; for prime p there are p+1.
inline std::vector<Direction> primitive_directions(const Modulus& m) {
    int n = m.value();
    std::vector<Direction> out;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (!is_primitive(u, v, n)) continue;
            Direction d = canonical_direction(u, v, m);
            if (d.u == u && d.v == v) out.push_back(d);
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// A full line: n points, stored sorted. Identity is the point set.
struct Line {
    Point base;
    Direction dir;
    std::vector<Point> points; // sorted
    std::vector<int> cells;    // sorted row-major indices
};

inline Line line_from(const Point& base, const Direction& dir) {
    int n = base.modulus();
    if (dir.n != n) throw mixed_moduli("direction and base point mix moduli");
    if (!is_primitive(dir.u, dir.v, n)) throw not_primitive("direction is not primitive");
    std::vector<int> cells;
    cells.reserve(n);
    for (int k = 0; k < n; ++k) {
        Point p(mod_norm(base.x.value() + k * dir.u, n),
                mod_norm(base.y.value() + k * dir.v, n), n);
        cells.push_back(p.cell());
    }
    std::sort(cells.begin(), cells.end());
    std::vector<Point> pts;
    pts.reserve(n);
    for (int c : cells) pts.push_back(Point::from_cell(c, n));
    std::sort(pts.begin(), pts.end());
    return {base, dir, std::move(pts), std::move(cells)};
}

/// Every distinct line of Z_n^2 plus a per-cell incidence index. Line ids are
/// assigned in lexicographic order of the sorted cell sets, which keeps ILP
/// row naming and the `lines` dump stable.
class LineTable {
public:
    explicit LineTable(const Modulus& m) : n_(m) {
        int n = m.value();
        int cells = n * n;
        std::map<std::vector<int>, Line> seen;
        for (const Direction& d : primitive_directions(m)) {
            std::vector<char> covered(cells, 0);
            for (int c = 0; c < cells; ++c) {
                if (covered[c]) continue;
                Line l = line_from(Point::from_cell(c, n), d);
                for (int lc : l.cells) covered[lc] = 1;
                seen.emplace(l.cells, std::move(l));
            }
        }
        lines_.reserve(seen.size());
        for (auto& [key, l] : seen) lines_.push_back(std::move(l));
        incidence_.resize(cells);
        words_ = (cells + 63) / 64;
        masks_.assign(lines_.size(), std::vector<uint64_t>(words_, 0));
        for (int id = 0; id < static_cast<int>(lines_.size()); ++id)
            for (int c : lines_[id].cells) {
                incidence_[c].push_back(id);
                masks_[id][c >> 6] |= uint64_t{1} << (c & 63);
            }
    }

    const Modulus& modulus() const { return n_; }
    int line_count() const { return static_cast<int>(lines_.size()); }
    const Line& line(int id) const { return lines_[id]; }
    const std::vector<Line>& lines() const { return lines_; }
    const std::vector<int>& lines_through(int cell) const { return incidence_[cell]; }
    const std::vector<uint64_t>& line_mask(int id) const { return masks_[id]; }
    int words() const { return words_; }

    /// Ids of all lines containing both cells (sorted lists intersected).
    std::vector<int> common_lines(int a, int b) const {
        std::vector<int> out;
        const auto& la = incidence_[a];
        const auto& lb = incidence_[b];
        std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                              std::back_inserter(out));
        return out;
    }

    bool collinear_cells(int a, int b, int c) const {
        for (int id : common_lines(a, b)) {
            const auto& lc = lines_[id].cells;
            if (std::binary_search(lc.begin(), lc.end(), c)) return true;
        }
        return false;
    }

private:
    Modulus n_;
    std::vector<Line> lines_;
    std::vector<std::vector<int>> incidence_;
    std::vector<std::vector<uint64_t>> masks_;
    int words_ = 0;
};

inline LineTable enumerate_lines(const Modulus& m) { return LineTable(m); }

namespace detail {

/// Per prime-power modulus m: canonical directions and, for each, the cell
/// set of its cyclic subgroup. Built once, shared, immutable afterwards.
struct PrimePowerTables {
    int m;
    std::vector<Direction> dirs;
    std::vector<std::vector<char>> member; // member[k][cell of d] == 1 iff d in <dirs[k]>
};

inline const PrimePowerTables& prime_power_tables(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<PrimePowerTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[m];
    if (!slot) {
        auto t = std::make_unique<PrimePowerTables>();
        t->m = m;
        t->dirs = primitive_directions(Modulus(m));
        t->member.assign(t->dirs.size(), std::vector<char>(m * m, 0));
        for (size_t k = 0; k < t->dirs.size(); ++k)
            for (int mult = 0; mult < m; ++mult) {
                int dx = mult * t->dirs[k].u % m;
                int dy = mult * t->dirs[k].v % m;
                t->member[k][dy * m + dx] = 1;
            }
        slot = std::move(t);
    }
    return *slot;
}

/// True iff both difference vectors lie in one maximal cyclic subgroup of
/// Z_m^2, i.e. the three preimages are collinear mod m.
inline bool differences_share_direction(int m, int d1x, int d1y, int d2x, int d2y) {
    int c1 = d1y * m + d1x, c2 = d2y * m + d2x;
    if (c1 == 0 || c2 == 0 || c1 == c2) return true;
    const PrimePowerTables& t = prime_power_tables(m);
    for (size_t k = 0; k < t.dirs.size(); ++k)
        if (t.member[k][c1] && t.member[k][c2]) return true;
    return false;
}

} // namespace detail

/// Determinant collinearity test; sound and complete only for squarefree n.
inline bool collinear_det(const Point& a, const Point& b, const Point& c) {
    if (a.modulus() != b.modulus() || a.modulus() != c.modulus())
        throw mixed_moduli("collinear_det arguments mix moduli");
    Modulus m(a.modulus());
    if (!m.squarefree())
        throw not_squarefree("determinant test unsound: " + std::to_string(m.value()) +
                             " has a square factor");
    return det3(a, b, c).value() == 0;
}

/// General collinearity, valid for any n. Triples with a repeated point are
/// collinear by convention.
inline bool collinear(const Point& a, const Point& b, const Point& c) {
    if (a.modulus() != b.modulus() || a.modulus() != c.modulus())
        throw mixed_moduli("collinear arguments mix moduli");
    if (a == b || a == c || b == c) return true;
    int n = a.modulus();
    long long d = det3_raw(a.x.value(), a.y.value(), b.x.value(), b.y.value(),
                           c.x.value(), c.y.value());
    Modulus m(n);
    if (m.squarefree()) return mod_norm(d, n) == 0;
    for (auto& [p, e] : m.factorization()) {
        if (e == 1) {
            if (mod_norm(d, p) != 0) return false;
            continue;
        }
        int q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        if (!detail::differences_share_direction(
                q, mod_norm(b.x.value() - a.x.value(), q), mod_norm(b.y.value() - a.y.value(), q),
                mod_norm(c.x.value() - a.x.value(), q), mod_norm(c.y.value() - a.y.value(), q)))
            return false;
    }
    return true;
}

/// Collinearity answered from a prebuilt line table.
inline bool collinear(const Point& a, const Point& b, const Point& c, const LineTable& table) {
    if (a.modulus() != b.modulus() || a.modulus() != c.modulus())
        throw mixed_moduli("collinear arguments mix moduli");
    if (a == b || a == c || b == c) return true;
    return table.collinear_cells(a.cell(), b.cell(), c.cell());
}

/// All cells collinear with the pair {a, b}, excluding a and b themselves.
inline std::vector<Point> blocked_points(const Point& a, const Point& b) {
    if (a == b) throw error("blocked_points requires two distinct points");
    int n = a.modulus();
    Modulus m(n);
    std::vector<Point> out;
    for (int c = 0; c < n * n; ++c) {
        Point p = Point::from_cell(c, n);
        if (p == a || p == b) continue;
        bool hit = m.squarefree()
                       ? mod_norm(det3_raw(a.x.value(), a.y.value(), b.x.value(), b.y.value(),
                                           p.x.value(), p.y.value()), n) == 0
                       : collinear(a, b, p);
        if (hit) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Point> blocked_points(const Point& a, const Point& b, const LineTable& table) {
    if (a == b) throw error("blocked_points requires two distinct points");
    int n = a.modulus();
    std::vector<char> mark(n * n, 0);
    for (int id : table.common_lines(a.cell(), b.cell()))
        for (int c : table.line(id).cells) mark[c] = 1;
    mark[a.cell()] = mark[b.cell()] = 0;
    std::vector<Point> out;
    for (int c = 0; c < n * n; ++c)
        if (mark[c]) out.push_back(Point::from_cell(c, n));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace arcs
