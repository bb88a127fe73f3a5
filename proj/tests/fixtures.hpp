#pragma once

#include "vhb/geometry.hpp"

namespace fixtures {

using vhb::Rational;

inline vhb::VHTable rectangle(Rational w, Rational h) {
    return vhb::VHTable::build(vhb::polygon_from_text("ENWS", {w, h, w, h}));
}

inline vhb::VHTable unit_square() { return rectangle(1, 1); }

inline vhb::VHTable lshape() { return vhb::VHTable::build(vhb::polygon_from_text("ENWNWS", {2, 1, 1, 1, 1, 2})); }

/// Unit square with a centered (1/2)x(1/2) hole.
inline vhb::VHTable holed_square() {
    const Rational h(1, 2);
    std::vector<vhb::Hole> holes{{vhb::polygon_from_text("WNES", {h, h, h, h}), {Rational(1, 4), Rational(1, 4)}}};
    return vhb::VHTable::build(vhb::polygon_from_text("ENWS", {1, 1, 1, 1}), std::move(holes));
}

/// L-shape refined to a (5,5) certificate.
inline vhb::VHTable lshape_55() { return vhb::approximate_pq(lshape(), 5, 0.1); }

}  // namespace fixtures
