#pragma once

// Exact arithmetic over Z_n for small n: extended gcd, modular inverses,
// factorization, coordinatewise projections and the collinearity determinant.
// Moduli are capped at 64 so a coordinate always fits a machine word and a
// torus row fits a single 64-bit mask.

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "arcs/errors.hpp"

namespace arcs {

inline constexpr int kMaxModulus = 64;

struct EgcdResult {
    long long g; // gcd, always >= 0
    long long s;
    long long t; // g == s*a + t*b
};

/// Extended Euclid. egcd(0, 0) is (0, 0, 0) by convention.
inline EgcdResult egcd(long long a, long long b) {
    if (a == 0 && b == 0) return {0, 0, 0};
    long long old_r = a, r = b;
    long long old_s = 1, s = 0;
    long long old_t = 0, t = 1;
    while (r != 0) {
        long long q = old_r / r;
        long long tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
    return {old_r, old_s, old_t};
}

inline int mod_norm(long long v, int n) {
    long long r = v % n;
    if (r < 0) r += n;
    return static_cast<int>(r);
}

/// A modulus n in [2, 64] with its factorization cached.
class Modulus {
public:
    explicit Modulus(int n) : n_(n) {
        if (n < 2 || n > kMaxModulus)
            throw invalid_modulus("modulus must be in [2, " + std::to_string(kMaxModulus) +
                                  "], got " + std::to_string(n));
        int m = n;
        for (int p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                int e = 0;
                while (m % p == 0) { m /= p; ++e; }
                factors_.emplace_back(p, e);
            }
        }
        if (m > 1) factors_.emplace_back(m, 1);
    }

    int value() const { return n_; }
    const std::vector<std::pair<int, int>>& factorization() const { return factors_; }

    bool squarefree() const {
        for (auto& [p, e] : factors_) if (e > 1) return false;
        return true;
    }
    bool prime() const { return factors_.size() == 1 && factors_[0].second == 1; }

    bool operator==(const Modulus& o) const { return n_ == o.n_; }
    bool operator!=(const Modulus& o) const { return n_ != o.n_; }

private:
    int n_;
    std::vector<std::pair<int, int>> factors_;
};

inline std::vector<std::pair<int, int>> factorize(const Modulus& n) { return n.factorization(); }
inline bool is_squarefree(const Modulus& n) { return n.squarefree(); }
inline bool is_prime(int n) { return n >= 2 && n <= kMaxModulus && Modulus(n).prime(); }

/// A residue in [0, n). Arithmetic between residues of different moduli throws.
class Residue {
public:
    Residue(long long value, int modulus) : n_(check(modulus)), v_(mod_norm(value, modulus)) {}

    int value() const { return v_; }
    int modulus() const { return n_; }
    bool unit() const { return std::gcd(v_, n_) == 1; }

    Residue operator+(const Residue& o) const { return {static_cast<long long>(v_) + same(o).v_, n_}; }
    Residue operator-(const Residue& o) const { return {static_cast<long long>(v_) - same(o).v_, n_}; }
    Residue operator*(const Residue& o) const { return {static_cast<long long>(v_) * same(o).v_, n_}; }
    Residue operator-() const { return {-static_cast<long long>(v_), n_}; }

    bool operator==(const Residue& o) const { return v_ == o.v_ && n_ == o.n_; }
    bool operator!=(const Residue& o) const { return !(*this == o); }

private:
    static int check(int n) {
        if (n < 2 || n > kMaxModulus) throw invalid_modulus("residue modulus out of range");
        return n;
    }
    const Residue& same(const Residue& o) const {
        if (o.n_ != n_) throw mixed_moduli("residues have different moduli");
        return o;
    }
    int n_;
    int v_;
};

/// Inverse of a unit; throws not_a_unit otherwise.
inline Residue mod_inv(const Residue& a) {
    auto [g, s, t] = egcd(a.value(), a.modulus());
    if (g != 1)
        throw not_a_unit(std::to_string(a.value()) + " is not a unit mod " +
                         std::to_string(a.modulus()));
    return {s, a.modulus()};
}

/// A point of the torus grid Z_n x Z_n.
struct Point {
    Residue x, y;

    Point(const Residue& px, const Residue& py) : x(px), y(py) {
        if (px.modulus() != py.modulus()) throw mixed_moduli("point coordinates mix moduli");
    }
    Point(int px, int py, int n) : x(px, n), y(py, n) {}

    int modulus() const { return x.modulus(); }
    /// Row-major cell index (y major, x minor).
    int cell() const { return y.value() * modulus() + x.value(); }
    static Point from_cell(int cell, int n) { return {cell % n, cell / n, n}; }

    Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
    Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }

    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Point& o) const { return !(*this == o); }
    bool operator<(const Point& o) const {
        if (x.value() != o.x.value()) return x.value() < o.x.value();
        return y.value() < o.y.value();
    }
};

/// Unreduced integer value of the 3x3 determinant with a row of ones atop the
/// two coordinate rows, expanded after translating a to the origin.
inline long long det3_raw(int ax, int ay, int bx, int by, int cx, int cy) {
    return static_cast<long long>(bx - ax) * (cy - ay) -
           static_cast<long long>(cx - ax) * (by - ay);
}

/// Collinearity determinant reduced mod n.
inline Residue det3(const Point& a, const Point& b, const Point& c) {
    if (a.modulus() != b.modulus() || a.modulus() != c.modulus())
        throw mixed_moduli("det3 arguments mix moduli");
    long long d = det3_raw(a.x.value(), a.y.value(), b.x.value(), b.y.value(),
                           c.x.value(), c.y.value());
    return {d, a.modulus()};
}

/// Coordinatewise reduction to a divisor m of n.
inline Point project(const Point& p, int m) {
    int n = p.modulus();
    if (m < 2 || m > n || n % m != 0)
        throw not_a_divisor(std::to_string(m) + " does not divide " + std::to_string(n));
    return {p.x.value() % m, p.y.value() % m, m};
}

inline std::vector<int> divisors(int n) {
    std::vector<int> out;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

inline std::vector<int> units(int n) {
    std::vector<int> out;
    for (int w = 1; w < n; ++w)
        if (std::gcd(w, n) == 1) out.push_back(w);
    return out;
}

} // namespace arcs
