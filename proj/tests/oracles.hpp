#pragma once

// Reference computations written independently of the library, used to
// check it. Nothing here calls into vhb beyond plain data types.

#include "vhb/rational.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

using vhb::Point;
using vhb::Rational;

// Vertices traced from the origin along a letter word.
inline std::vector<Point> trace(const std::string& word, const std::vector<Rational>& lengths) {
    std::vector<Point> pts;
    Rational x = 0, y = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        pts.push_back({x, y});
        switch (word[i]) {
            case 'E': x += lengths[i]; break;
            case 'W': x -= lengths[i]; break;
            case 'N': y += lengths[i]; break;
            case 'S': y -= lengths[i]; break;
        }
    }
    return pts;
}

inline Rational shoelace(const std::vector<Point>& pts) {
    Rational twice = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % pts.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return twice / 2;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Even-odd test with a horizontal ray to +x; points on edges count as
// boundary. Edge pairs are axis-parallel.
enum class Where { Inside, Boundary, Outside };

inline Where locate(const std::vector<Point>& poly, const Point& p) {
    bool inside = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        const Rational xlo = a.x < b.x ? a.x : b.x, xhi = a.x < b.x ? b.x : a.x;
        const Rational ylo = a.y < b.y ? a.y : b.y, yhi = a.y < b.y ? b.y : a.y;
        if (p.x >= xlo && p.x <= xhi && p.y >= ylo && p.y <= yhi) return Where::Boundary;
        if (a.x == b.x && a.x > p.x && p.y >= ylo && p.y < yhi) inside = !inside;
    }
    return inside ? Where::Inside : Where::Outside;
}

// Closed segment intersection for axis-parallel segments.
inline bool segments_touch(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
    auto lo = [](const Rational& u, const Rational& v) { return u < v ? u : v; };
    auto hi = [](const Rational& u, const Rational& v) { return u < v ? v : u; };
    return lo(a0.x, a1.x) <= hi(b0.x, b1.x) && lo(b0.x, b1.x) <= hi(a0.x, a1.x) && lo(a0.y, a1.y) <= hi(b0.y, b1.y) &&
           lo(b0.y, b1.y) <= hi(a0.y, a1.y);
}

// Simple iff only cyclically adjacent sides meet.
inline bool is_simple(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_touch(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return false;
        }
    }
    return true;
}

inline bool on_lattice(const Rational& v, std::int64_t d) {
    return boost::multiprecision::denominator(Rational(v * d)) == 1;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Period-2W tent map folding the real line onto [0, W].
inline double fold(double x, double w) {
    double r = std::fmod(x, 2.0 * w);
    if (r < 0) r += 2.0 * w;
    return r <= w ? r : 2.0 * w - r;
}

// Direction sign after folding: +1 on the rising branch.
inline int fold_sign(double x, double w) {
    double r = std::fmod(x, 2.0 * w);
    if (r < 0) r += 2.0 * w;
    return r < w ? 1 : -1;
}

// Earliest exit time of the ray p + s v (s > 0) through a list of closed
// axis-parallel segments, by brute force over all of them.
struct Hit {
    double t = INFINITY;
    std::size_t segment = 0;
};

inline Hit first_hit(const std::vector<std::pair<std::array<double, 2>, std::array<double, 2>>>& segs, double px,
                     double py, double vx, double vy) {
    Hit best;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& [a, b] = segs[i];
        double t;
        if (a[0] == b[0]) {
            if (vx == 0) continue;
            t = (a[0] - px) / vx;
            const double y = py + vy * t;
            if (y < std::min(a[1], b[1]) - 1e-12 || y > std::max(a[1], b[1]) + 1e-12) continue;
        } else {
            if (vy == 0) continue;
            t = (a[1] - py) / vy;
            const double x = px + vx * t;
            if (x < std::min(a[0], b[0]) - 1e-12 || x > std::max(a[0], b[0]) + 1e-12) continue;
        }
        if (t > 1e-15 && t < best.t) best = {t, i};
    }
    return best;
}

}  // namespace oracle
