#include "vhb/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace vhb {

namespace mp = boost::multiprecision;

const char* to_string(GeometryError::Code code) {
    using C = GeometryError::Code;
    switch (code) {
        case C::BadAlphabet: return "BadAlphabet";
        case C::TooShort: return "TooShort";
        case C::OddLength: return "OddLength";
        case C::NoAlternation: return "NoAlternation";
        case C::BadTurning: return "BadTurning";
        case C::LengthCountMismatch: return "LengthCountMismatch";
        case C::NonPositiveLength: return "NonPositiveLength";
        case C::ClosureViolated: return "ClosureViolated";
        case C::SelfIntersecting: return "SelfIntersecting";
        case C::BadOrientation: return "BadOrientation";
        case C::HoleNotInterior: return "HoleNotInterior";
        case C::HolesOverlap: return "HolesOverlap";
        case C::EtaTooSmall: return "EtaTooSmall";
        case C::CombinatoricsMismatch: return "CombinatoricsMismatch";
        case C::BadFormat: return "BadFormat";
    }
    return "Unknown";
}

const char* to_string(Location loc) {
    switch (loc) {
        case Location::Interior: return "Interior";
        case Location::Boundary: return "Boundary";
        case Location::Exterior: return "Exterior";
    }
    return "Unknown";
}

namespace {

using Code = GeometryError::Code;

std::array<int, 2> step_of(Letter l) {
    switch (l) {
        case Letter::E: return {1, 0};
        case Letter::N: return {0, 1};
        case Letter::W: return {-1, 0};
        case Letter::S: return {0, -1};
    }
    return {0, 0};
}

int turn(Letter a, Letter b) {
    auto u = step_of(a);
    auto v = step_of(b);
    return u[0] * v[1] - u[1] * v[0];
}

// Index of the first letter (in text order) that can start a canonical word.
std::optional<std::size_t> canonical_start(const std::vector<Letter>& w, Orientation o) {
    const Letter bottom = o == Orientation::CounterClockwise ? Letter::E : Letter::W;
    const std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] == bottom && w[(i + n - 1) % n] == Letter::S && w[(i + 1) % n] == Letter::N) {
            return i;
        }
    }
    return std::nullopt;
}

template <typename T>
std::vector<T> rotate_copy(const std::vector<T>& v, std::size_t start) {
    std::vector<T> out;
    out.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(v[(start + k) % v.size()]);
    return out;
}

struct Box {
    Rational x0, x1, y0, y1;
};

Box box_of(const Point& a, const Point& b) {
    return {mp::min(a.x, b.x), mp::max(a.x, b.x), mp::min(a.y, b.y), mp::max(a.y, b.y)};
}

bool boxes_touch(const Box& a, const Box& b) {
    return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
    Box bx = box_of(a, b);
    return p.x >= bx.x0 && p.x <= bx.x1 && p.y >= bx.y0 && p.y <= bx.y1;
}

std::vector<Point> trace(const CombinatoricsWord& word, const std::vector<Rational>& lengths) {
    std::vector<Point> pts;
    pts.reserve(word.size());
    Point cur{0, 0};
    for (std::size_t i = 0; i < word.size(); ++i) {
        pts.push_back(cur);
        auto s = step_of(word[i]);
        cur.x += lengths[i] * s[0];
        cur.y += lengths[i] * s[1];
    }
    return pts;
}

// Closed polygon membership by crossing parity; boundary handled by caller.
bool inside_polygon(const std::vector<Point>& v, const Point& p) {
    bool inside = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        if (a.x != b.x) continue;
        if (a.x <= p.x) continue;
        const Rational& lo = mp::min(a.y, b.y);
        const Rational& hi = mp::max(a.y, b.y);
        if (lo <= p.y && p.y < hi) inside = !inside;
    }
    return inside;
}

bool on_polygon_boundary(const std::vector<Point>& v, const Point& p) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (on_segment(p, v[i], v[(i + 1) % v.size()])) return true;
    }
    return false;
}

Location locate_in_polygon(const std::vector<Point>& v, const Point& p) {
    if (on_polygon_boundary(v, p)) return Location::Boundary;
    return inside_polygon(v, p) ? Location::Interior : Location::Exterior;
}

std::vector<Point> translated(const std::vector<Point>& v, const Point& by) {
    std::vector<Point> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back({p.x + by.x, p.y + by.y});
    return out;
}

bool polygons_edges_touch(const std::vector<Point>& a, const std::vector<Point>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        Box ba = box_of(a[i], a[(i + 1) % a.size()]);
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (boxes_touch(ba, box_of(b[j], b[(j + 1) % b.size()]))) return true;
        }
    }
    return false;
}

std::optional<std::int64_t> to_int64(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        return std::nullopt;
    }
    return v.convert_to<std::int64_t>();
}

Rational round_to_grid(const Rational& x, std::int64_t denom) {
    Rational scaled = x * denom + Rational(1, 2);
    return floor_rational(scaled) / denom;
}

// Restores E/W and N/S balance by adding units of 1/denom to the longest
// sides of the deficient letter class (ties: earliest index).
void repair_closure(const CombinatoricsWord& word, std::vector<Rational>& lengths, std::int64_t denom) {
    const std::array<std::pair<Letter, Letter>, 2> classes{{{Letter::E, Letter::W}, {Letter::N, Letter::S}}};
    for (auto [a, b] : classes) {
        Rational sa = 0, sb = 0;
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (word[i] == a) sa += lengths[i];
            if (word[i] == b) sb += lengths[i];
        }
        if (sa == sb) continue;
        const Letter deficient = sa < sb ? a : b;
        Rational deficit = mp::abs(sa - sb);
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (word[i] == deficient) idx.push_back(i);
        }
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t i, std::size_t j) { return lengths[i] > lengths[j]; });
        const Rational unit(1, denom);
        for (std::size_t k = 0; deficit > 0; k = (k + 1) % idx.size()) {
            lengths[idx[k]] += unit;
            deficit -= unit;
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// CombinatoricsWord

CombinatoricsWord CombinatoricsWord::parse(std::string_view text) { return parse_with_offset(text).first; }

std::pair<CombinatoricsWord, std::size_t> CombinatoricsWord::parse_with_offset(std::string_view text) {
    std::vector<Letter> letters;
    letters.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'E': letters.push_back(Letter::E); break;
            case 'N': letters.push_back(Letter::N); break;
            case 'W': letters.push_back(Letter::W); break;
            case 'S': letters.push_back(Letter::S); break;
            default:
                throw GeometryError(Code::BadAlphabet,
                                    "letter '" + std::string(1, c) + "' not in {E,N,W,S}");
        }
    }
    const std::size_t n = letters.size();
    if (n < 4) throw GeometryError(Code::TooShort, "word '" + std::string(text) + "' has fewer than 4 letters");
    if (n % 2 != 0) throw GeometryError(Code::OddLength, "word '" + std::string(text) + "' has odd length");
    int turning = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Letter a = letters[i];
        Letter b = letters[(i + 1) % n];
        if (is_horizontal(a) == is_horizontal(b)) {
            throw GeometryError(Code::NoAlternation,
                                "word '" + std::string(text) + "' has adjacent parallel sides at " + std::to_string(i));
        }
        turning += turn(a, b);
    }
    Orientation o;
    if (turning == 4) {
        o = Orientation::CounterClockwise;
    } else if (turning == -4) {
        o = Orientation::Clockwise;
    } else {
        throw GeometryError(Code::BadTurning, "word '" + std::string(text) + "' has turning number " +
                                                  std::to_string(turning) + "/4, expected +-1");
    }
    auto start = canonical_start(letters, o);
    if (!start) {
        throw GeometryError(Code::BadTurning, "word '" + std::string(text) + "' has no bottom side");
    }
    return {CombinatoricsWord(rotate_copy(letters, *start), o), *start};
}

CombinatoricsWord parse_word(std::string_view text) { return CombinatoricsWord::parse(text); }

std::string CombinatoricsWord::str() const {
    std::string s;
    s.reserve(letters_.size());
    for (Letter l : letters_) s.push_back(static_cast<char>(l));
    return s;
}

CombinatoricsWord CombinatoricsWord::rotated(std::size_t start) const {
    auto letters = rotate_copy(letters_, start % letters_.size());
    if (canonical_start(letters, orientation_) != std::size_t{0}) {
        throw GeometryError(Code::BadTurning, "rotation does not start at a bottom side");
    }
    return CombinatoricsWord(std::move(letters), orientation_);
}

// ---------------------------------------------------------------------------
// VHPolygon

VHPolygon VHPolygon::build(const CombinatoricsWord& word, std::vector<Rational> lengths) {
    const std::size_t n = word.size();
    if (lengths.size() != n) {
        throw GeometryError(Code::LengthCountMismatch, "expected " + std::to_string(n) + " lengths, got " +
                                                           std::to_string(lengths.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (lengths[i] <= 0) {
            throw GeometryError(Code::NonPositiveLength, "length " + std::to_string(i) + " is not positive");
        }
    }
    Rational sum_e = 0, sum_w = 0, sum_n = 0, sum_s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        switch (word[i]) {
            case Letter::E: sum_e += lengths[i]; break;
            case Letter::W: sum_w += lengths[i]; break;
            case Letter::N: sum_n += lengths[i]; break;
            case Letter::S: sum_s += lengths[i]; break;
        }
    }
    if (sum_e != sum_w || sum_n != sum_s) {
        throw GeometryError(Code::ClosureViolated, "closure violated: E=" + to_string(sum_e) + " W=" +
                                                       to_string(sum_w) + " N=" + to_string(sum_n) +
                                                       " S=" + to_string(sum_s));
    }

    auto pts = trace(word, lengths);
    for (std::size_t i = 0; i < n; ++i) {
        Box bi = box_of(pts[i], pts[(i + 1) % n]);
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (boxes_touch(bi, box_of(pts[j], pts[(j + 1) % n]))) {
                throw GeometryError(Code::SelfIntersecting,
                                    "sides " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
            }
        }
    }

    Rational twice_area = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % n];
        twice_area += a.x * b.y - b.x * a.y;
    }
    const bool ccw = twice_area > 0;
    if (ccw != (word.orientation() == Orientation::CounterClockwise)) {
        throw GeometryError(Code::BadOrientation, "traced orientation disagrees with word turning");
    }

    // Rotate to the leftmost side on the lower edge of the bounding box.
    Rational ymin = pts[0].y;
    for (const auto& p : pts) ymin = mp::min(ymin, p.y);
    const Letter bottom = ccw ? Letter::E : Letter::W;
    std::optional<std::size_t> start;
    Rational best_x;
    for (std::size_t i = 0; i < n; ++i) {
        if (word[i] != bottom || pts[i].y != ymin) continue;
        Rational left = mp::min(pts[i].x, pts[(i + 1) % n].x);
        if (!start || left < best_x) {
            start = i;
            best_x = left;
        }
    }

    VHPolygon poly(word.rotated(*start));
    poly.lengths_ = rotate_copy(lengths, *start);
    poly.vertices_ = trace(poly.word_, poly.lengths_);
    Rational xmin = poly.vertices_[0].x, xmax = xmin, ymin2 = poly.vertices_[0].y, ymax = ymin2;
    for (const auto& p : poly.vertices_) {
        xmin = mp::min(xmin, p.x);
        xmax = mp::max(xmax, p.x);
        ymin2 = mp::min(ymin2, p.y);
        ymax = mp::max(ymax, p.y);
    }
    for (auto& p : poly.vertices_) {
        p.x -= xmin;
        p.y -= ymin2;
    }
    poly.width_ = xmax - xmin;
    poly.height_ = ymax - ymin2;
    poly.area_ = mp::abs(twice_area) / 2;
    return poly;
}

VHPolygon build_polygon(const CombinatoricsWord& word, std::vector<Rational> lengths) {
    return VHPolygon::build(word, std::move(lengths));
}

VHPolygon polygon_from_text(std::string_view word, std::vector<Rational> lengths) {
    auto [w, offset] = CombinatoricsWord::parse_with_offset(word);
    if (lengths.size() != w.size()) {
        throw GeometryError(Code::LengthCountMismatch, "expected " + std::to_string(w.size()) + " lengths, got " +
                                                           std::to_string(lengths.size()));
    }
    return VHPolygon::build(w, rotate_copy(lengths, offset));
}

// ---------------------------------------------------------------------------
// VHTable

VHTable VHTable::build(VHPolygon outer, std::vector<Hole> holes, bool inexact) {
    if (outer.orientation() != Orientation::CounterClockwise) {
        throw GeometryError(Code::BadOrientation, "outer boundary must be counter-clockwise");
    }
    std::vector<std::vector<Point>> hole_pts;
    for (std::size_t h = 0; h < holes.size(); ++h) {
        if (holes[h].polygon.orientation() != Orientation::Clockwise) {
            throw GeometryError(Code::BadOrientation, "hole " + std::to_string(h) + " must be clockwise");
        }
        hole_pts.push_back(translated(holes[h].polygon.vertices(), holes[h].anchor));
    }
    const auto& outer_pts = outer.vertices();
    for (std::size_t h = 0; h < holes.size(); ++h) {
        for (const auto& p : hole_pts[h]) {
            if (locate_in_polygon(outer_pts, p) != Location::Interior) {
                throw GeometryError(Code::HoleNotInterior,
                                    "hole " + std::to_string(h) + " is not inside the outer boundary");
            }
        }
        if (polygons_edges_touch(hole_pts[h], outer_pts)) {
            throw GeometryError(Code::HoleNotInterior,
                                "hole " + std::to_string(h) + " touches the outer boundary");
        }
        for (std::size_t g = 0; g < h; ++g) {
            if (polygons_edges_touch(hole_pts[h], hole_pts[g]) ||
                locate_in_polygon(hole_pts[g], hole_pts[h][0]) != Location::Exterior ||
                locate_in_polygon(hole_pts[h], hole_pts[g][0]) != Location::Exterior) {
                throw GeometryError(Code::HolesOverlap,
                                    "holes " + std::to_string(g) + " and " + std::to_string(h) + " overlap");
            }
        }
    }

    VHTable t(std::move(outer));
    t.holes_ = std::move(holes);
    t.inexact_ = inexact;
    t.area_ = t.outer_.area();
    for (const auto& h : t.holes_) t.area_ -= h.polygon.area();

    auto add_sides = [&](const std::vector<Point>& pts, const CombinatoricsWord& w, int poly) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            t.sides_.push_back(Side{pts[i], pts[(i + 1) % pts.size()], w[i], poly, static_cast<int>(i)});
        }
    };
    add_sides(t.outer_.vertices(), t.outer_.word(), -1);
    for (std::size_t h = 0; h < t.holes_.size(); ++h) {
        add_sides(hole_pts[h], t.holes_[h].polygon.word(), static_cast<int>(h));
    }
    return t;
}

std::vector<Point> VHTable::hole_vertices(std::size_t hole) const {
    return translated(holes_.at(hole).polygon.vertices(), holes_.at(hole).anchor);
}

VHTable VHTable::with_certificate(TilingCertificate cert) const {
    if (!lattice_admits(*this, cert.p, cert.q)) {
        throw GeometryError(Code::BadFormat, "certificate lattice does not contain every vertex");
    }
    VHTable copy = *this;
    copy.certificate_ = cert;
    return copy;
}

bool VHTable::same_combinatorics(const VHTable& other) const {
    if (!(outer_.word() == other.outer_.word()) || holes_.size() != other.holes_.size()) return false;
    for (std::size_t h = 0; h < holes_.size(); ++h) {
        if (!(holes_[h].polygon.word() == other.holes_[h].polygon.word())) return false;
    }
    return true;
}

Rational VHTable::parameter_distance(const VHTable& a, const VHTable& b) {
    if (!a.same_combinatorics(b)) {
        throw GeometryError(Code::CombinatoricsMismatch, "tables have different combinatorics");
    }
    Rational d = 0;
    auto fold = [&](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) d = mp::max(d, Rational(mp::abs(x[i] - y[i])));
    };
    fold(a.outer_.lengths(), b.outer_.lengths());
    for (std::size_t h = 0; h < a.holes_.size(); ++h) {
        fold(a.holes_[h].polygon.lengths(), b.holes_[h].polygon.lengths());
        d = mp::max(d, Rational(mp::abs(a.holes_[h].anchor.x - b.holes_[h].anchor.x)));
        d = mp::max(d, Rational(mp::abs(a.holes_[h].anchor.y - b.holes_[h].anchor.y)));
    }
    return d;
}

Rational table_area(const VHTable& table) { return table.area(); }

bool lattice_admits(const VHTable& table, std::int64_t p, std::int64_t q) {
    if (p <= 0 || q <= 0) return false;
    for (const auto& s : table.sides()) {
        if (mp::denominator(Rational(s.start.x * p)) != 1) return false;
        if (mp::denominator(Rational(s.start.y * q)) != 1) return false;
    }
    return true;
}

std::optional<TilingCertificate> tiling_parameters(const VHTable& table) {
    if (table.inexact()) return std::nullopt;
    BigInt p = 1, q = 1;
    for (const auto& s : table.sides()) {
        p = lcm(p, mp::denominator(s.start.x));
        q = lcm(q, mp::denominator(s.start.y));
    }
    auto p64 = to_int64(p);
    auto q64 = to_int64(q);
    if (!p64 || !q64) return std::nullopt;
    Rational count = table.area() * p * q;
    auto n64 = to_int64(mp::numerator(count));
    if (!n64 || mp::denominator(count) != 1) return std::nullopt;
    return TilingCertificate{*p64, *q64, *n64};
}

TilingCertificate refine_certificate(const TilingCertificate& cert, const Rational& area, std::int64_t min_pq) {
    auto up = [min_pq](std::int64_t v) { return v >= min_pq ? v : v * ((min_pq + v - 1) / v); };
    TilingCertificate out{up(cert.p), up(cert.q), 0};
    Rational count = area * out.p * out.q;
    out.tile_count = mp::numerator(count).convert_to<std::int64_t>();
    return out;
}

VHTable approximate_pq(const VHTable& table, std::int64_t Q, double eta) {
    if (Q < 1) throw GeometryError(Code::BadFormat, "Q must be a positive integer");
    if (!(eta > 0.0)) throw GeometryError(Code::EtaTooSmall, "eta must be positive");

    if (!table.inexact()) {
        if (auto cert = tiling_parameters(table)) {
            if (std::min(cert->p, cert->q) >= Q) return table.with_certificate(*cert);
            return table.with_certificate(refine_certificate(*cert, table.area(), Q));
        }
    }

    const Rational eta_r = rational_from_double(eta);
    constexpr std::int64_t kMaxDenominator = 1'000'000'000;
    for (std::int64_t k = 1; Q * k <= kMaxDenominator; k = k < 16 ? k + 1 : k * 2) {
        const std::int64_t denom = Q * k;
        try {
            auto snap_polygon = [denom](const VHPolygon& poly) {
                std::vector<Rational> lens;
                for (const auto& l : poly.lengths()) {
                    Rational r = round_to_grid(l, denom);
                    lens.push_back(r > 0 ? r : Rational(1, denom));
                }
                repair_closure(poly.word(), lens, denom);
                return VHPolygon::build(poly.word(), std::move(lens));
            };
            VHPolygon outer = snap_polygon(table.outer());
            std::vector<Hole> holes;
            for (const auto& h : table.holes()) {
                holes.push_back(Hole{snap_polygon(h.polygon),
                                     Point{round_to_grid(h.anchor.x, denom), round_to_grid(h.anchor.y, denom)}});
            }
            VHTable out = VHTable::build(std::move(outer), std::move(holes), false);
            if (!out.same_combinatorics(table)) continue;
            if (VHTable::parameter_distance(out, table) > eta_r) continue;
            auto cert = tiling_parameters(out);
            if (!cert) continue;
            return out.with_certificate(refine_certificate(*cert, out.area(), Q));
        } catch (const GeometryError&) {
            continue;
        }
    }
    throw GeometryError(Code::EtaTooSmall, "no lattice repair within eta=" + std::to_string(eta));
}

// ---------------------------------------------------------------------------
// Point location

Location contains_point(const VHTable& table, const Point& point) {
    for (const auto& s : table.sides()) {
        if (on_segment(point, s.start, s.end)) return Location::Boundary;
    }
    if (!inside_polygon(table.outer().vertices(), point)) return Location::Exterior;
    for (std::size_t h = 0; h < table.holes().size(); ++h) {
        if (inside_polygon(table.hole_vertices(h), point)) return Location::Exterior;
    }
    return Location::Interior;
}

Location contains_point(const VHTable& table, Vec2 point, double eps) {
    bool inside = false;
    for (const auto& s : table.sides()) {
        const double x0 = to_double(s.start.x), y0 = to_double(s.start.y);
        const double x1 = to_double(s.end.x), y1 = to_double(s.end.y);
        const double lo_x = std::min(x0, x1), hi_x = std::max(x0, x1);
        const double lo_y = std::min(y0, y1), hi_y = std::max(y0, y1);
        const double dx = std::max({lo_x - point.x, 0.0, point.x - hi_x});
        const double dy = std::max({lo_y - point.y, 0.0, point.y - hi_y});
        if (dx <= eps && dy <= eps) return Location::Boundary;
        // Each closed boundary component toggles parity; holes flip it back.
        if (s.vertical() && x0 > point.x && lo_y <= point.y && point.y < hi_y) inside = !inside;
    }
    return inside ? Location::Interior : Location::Exterior;
}

}  // namespace vhb
