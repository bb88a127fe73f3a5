#pragma once

/// Exact model of axis-parallel billiard tables.
///
/// A table is an outer VH-polygon (all sides horizontal or vertical) with an
/// optional list of VH-polygon holes. Every coordinate is an exact rational.
/// Coordinates live in the table-local frame: the lower-left corner of the
/// outer bounding box is the origin. `placement_corner()` gives the (1,1)
/// offset used when the table is drawn as one of four reflected copies.

#include "vhb/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vhb {

class GeometryError : public std::runtime_error {
public:
    enum class Code {
        BadAlphabet,
        TooShort,
        OddLength,
        NoAlternation,
        BadTurning,
        LengthCountMismatch,
        NonPositiveLength,
        ClosureViolated,
        SelfIntersecting,
        BadOrientation,
        HoleNotInterior,
        HolesOverlap,
        EtaTooSmall,
        CombinatoricsMismatch,
        BadFormat,
    };

    GeometryError(Code code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

const char* to_string(GeometryError::Code code);

enum class Letter : char { E = 'E', N = 'N', W = 'W', S = 'S' };

inline bool is_horizontal(Letter l) { return l == Letter::E || l == Letter::W; }

/// Counter-clockwise words describe outer boundaries; clockwise words
/// describe holes (the table interior stays on the left either way).
enum class Orientation { CounterClockwise, Clockwise };

class CombinatoricsWord {
public:
    /// Validates and rotates to the canonical start: the first letter is the
    /// bottom-side letter (E for counter-clockwise, W for clockwise words)
    /// preceded by S and followed by N. Among several candidates the earliest
    /// one in `text` wins, so already-canonical text is returned unchanged.
    static CombinatoricsWord parse(std::string_view text);

    /// Same as parse(); also returns the index in `text` of the canonical
    /// first letter, so per-letter data can be rotated alongside.
    static std::pair<CombinatoricsWord, std::size_t> parse_with_offset(std::string_view text);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Orientation orientation() const { return orientation_; }
    std::string str() const;

    /// Cyclic rotation starting at `start`; the result must still satisfy the
    /// bottom-side pattern at index 0.
    CombinatoricsWord rotated(std::size_t start) const;

    friend bool operator==(const CombinatoricsWord& a, const CombinatoricsWord& b) {
        return a.letters_ == b.letters_;
    }

private:
    CombinatoricsWord(std::vector<Letter> letters, Orientation o)
        : letters_(std::move(letters)), orientation_(o) {}

    std::vector<Letter> letters_;
    Orientation orientation_ = Orientation::CounterClockwise;
};

CombinatoricsWord parse_word(std::string_view text);

/// A simple VH-polygon. Vertices are stored relative to the polygon's own
/// bounding-box lower-left corner; vertex i is the start of side i.
class VHPolygon {
public:
    /// Traces `lengths` along `word`, checks closure and simplicity exactly,
    /// then rotates to the geometric canonical start (leftmost segment on the
    /// lower side of the bounding box). The stored word/lengths may therefore
    /// be a rotation of the input.
    static VHPolygon build(const CombinatoricsWord& word, std::vector<Rational> lengths);

    const CombinatoricsWord& word() const { return word_; }
    const std::vector<Rational>& lengths() const { return lengths_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t size() const { return lengths_.size(); }
    Orientation orientation() const { return word_.orientation(); }

    const Rational& width() const { return width_; }
    const Rational& height() const { return height_; }
    /// Unsigned enclosed area.
    const Rational& area() const { return area_; }

    friend bool operator==(const VHPolygon& a, const VHPolygon& b) {
        return a.word_ == b.word_ && a.lengths_ == b.lengths_;
    }

private:
    VHPolygon(CombinatoricsWord w) : word_(std::move(w)) {}

    CombinatoricsWord word_;
    std::vector<Rational> lengths_;
    std::vector<Point> vertices_;
    Rational width_;
    Rational height_;
    Rational area_;
};

VHPolygon build_polygon(const CombinatoricsWord& word, std::vector<Rational> lengths);

/// Parses `word` and builds the polygon with `lengths` given in the order of
/// the letters in `word` (before canonical rotation).
VHPolygon polygon_from_text(std::string_view word, std::vector<Rational> lengths);

struct Hole {
    VHPolygon polygon;
    Point anchor;  ///< lower-left corner of the hole's bounding box (table frame)

    friend bool operator==(const Hole&, const Hole&) = default;
};

/// (p,q) lattice data: the table is a union of (1/p)x(1/q) tiles anchored at
/// the origin, tile_count = p*q*area.
struct TilingCertificate {
    std::int64_t p = 1;
    std::int64_t q = 1;
    std::int64_t tile_count = 0;

    friend bool operator==(const TilingCertificate&, const TilingCertificate&) = default;
};

/// One boundary side in the table frame, oriented so the table interior is
/// on its left.
struct Side {
    Point start;
    Point end;
    Letter letter = Letter::E;
    int polygon = -1;  ///< -1 for the outer boundary, else hole index
    int index = 0;     ///< position in that polygon's word

    bool vertical() const { return !is_horizontal(letter); }
};

class VHTable {
public:
    static VHTable build(VHPolygon outer, std::vector<Hole> holes = {}, bool inexact = false);

    const VHPolygon& outer() const { return outer_; }
    const std::vector<Hole>& holes() const { return holes_; }

    const Rational& width() const { return outer_.width(); }
    const Rational& height() const { return outer_.height(); }
    const Rational& area() const { return area_; }

    /// All sides: outer sides in word order, then each hole's sides.
    const std::vector<Side>& sides() const { return sides_; }
    std::vector<Point> hole_vertices(std::size_t hole) const;

    /// Set when any length or anchor came from a decimal literal. Such tables
    /// carry no tiling certificate until snapped by approximate_pq.
    bool inexact() const { return inexact_; }

    /// Certificate attached by approximate_pq (may be a refinement of the
    /// minimal one).
    const std::optional<TilingCertificate>& certificate() const { return certificate_; }
    VHTable with_certificate(TilingCertificate cert) const;

    /// Sup-norm distance between length vectors and hole anchors of two
    /// tables with the same combinatorics.
    static Rational parameter_distance(const VHTable& a, const VHTable& b);
    bool same_combinatorics(const VHTable& other) const;

    friend bool operator==(const VHTable& a, const VHTable& b) {
        return a.outer_ == b.outer_ && a.holes_ == b.holes_ && a.inexact_ == b.inexact_;
    }

private:
    VHTable(VHPolygon outer) : outer_(std::move(outer)) {}

    VHPolygon outer_;
    std::vector<Hole> holes_;
    std::vector<Side> sides_;
    Rational area_;
    bool inexact_ = false;
    std::optional<TilingCertificate> certificate_;
};

/// Lower-left corner of the outer bounding box in the reflected-copies frame.
inline Point placement_corner() { return Point{Rational(1), Rational(1)}; }

Rational table_area(const VHTable& table);

/// True when every vertex lies on the (1/p)Z x (1/q)Z lattice.
bool lattice_admits(const VHTable& table, std::int64_t p, std::int64_t q);

/// Minimal (p,q) certificate; empty for inexact tables or denominators that
/// do not fit in 64 bits.
std::optional<TilingCertificate> tiling_parameters(const VHTable& table);

/// Smallest certificate refinement with min(p,q) >= min_pq (p' a multiple of p).
TilingCertificate refine_certificate(const TilingCertificate& cert, const Rational& area,
                                     std::int64_t min_pq);

/// Returns a table with the same combinatorics, lengths within `eta`, and an
/// attached certificate with min(p,q) >= Q.
VHTable approximate_pq(const VHTable& table, std::int64_t Q, double eta);

enum class Location { Interior, Boundary, Exterior };

const char* to_string(Location loc);

/// Exact classification.
Location contains_point(const VHTable& table, const Point& point);

inline constexpr double kGeomEps = 1e-9;

/// Float classification; within `eps` of a side counts as Boundary.
Location contains_point(const VHTable& table, Vec2 point, double eps = kGeomEps);

}  // namespace vhb
