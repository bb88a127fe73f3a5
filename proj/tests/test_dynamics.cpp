#include "fixtures.hpp"
#include "oracles.hpp"

#include "vhb/dynamics.hpp"
#include "vhb/orbit_export.hpp"
#include "vhb/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vhb;
using DCode = DynamicsError::Code;

namespace {

DCode dyn_error(auto&& fn) {
    try {
        fn();
    } catch (const DynamicsError& e) {
        return e.code();
    }
    FAIL("expected a DynamicsError");
    return DCode::BadTheta;
}

std::vector<std::pair<std::array<double, 2>, std::array<double, 2>>> flat_sides(const VHTable& t) {
    std::vector<std::pair<std::array<double, 2>, std::array<double, 2>>> out;
    for (const auto& s : t.sides()) {
        out.push_back({{to_double(s.start.x), to_double(s.start.y)}, {to_double(s.end.x), to_double(s.end.y)}});
    }
    return out;
}

}  // namespace

TEST_CASE("direction states") {
    const auto cls = direction_class(0.4);
    CHECK(cls[0].sx == 1);
    CHECK(cls[0].sy == 1);
    CHECK(cls[3].sx == -1);
    CHECK(cls[3].sy == -1);
    const Vec2 v = cls[1].velocity();
    CHECK(v.x == doctest::Approx(-std::cos(0.4)));
    CHECK(v.y == doctest::Approx(std::sin(0.4)));
    CHECK(std::hypot(v.x, v.y) == doctest::Approx(1.0));
    CHECK(dyn_error([] { (void)DirectionState::make(0.0, 1, 1); }) == DCode::BadTheta);
    CHECK(dyn_error([] { (void)DirectionState::make(std::numbers::pi / 2, 1, 1); }) == DCode::BadTheta);
    CHECK(dyn_error([] { (void)DirectionState::make(0.3, 0, 1); }) == DCode::BadTheta);
}

TEST_CASE("next_event: diagonal into a corner") {
    const VHTable sq = fixtures::unit_square();
    const PhasePoint s{{0.5, 0.5}, DirectionState::make(std::numbers::pi / 4, 1, 1)};
    CHECK(dyn_error([&] { (void)next_event(sq, s); }) == DCode::CornerHit);
}

TEST_CASE("next_event: closed-form hit on the right side") {
    const VHTable sq = fixtures::unit_square();
    const double theta = std::atan(0.5);
    const Event e = next_event(sq, {{0.5, 0.5}, DirectionState::make(theta, 1, 1)});
    CHECK(e.point.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.point.y == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(e.time == doctest::Approx(0.5 / std::cos(theta)).epsilon(1e-14));
    CHECK(sq.sides()[static_cast<std::size_t>(e.side)].letter == Letter::N);
    CHECK_FALSE(e.is_corner());
}

TEST_CASE("next_event agrees with brute-force segment intersection") {
    const VHTable l = fixtures::lshape();
    const auto segs = flat_sides(l);
    SUBCASE("L-shape, theta = pi/3") {
        const double theta = std::numbers::pi / 3;
        const Event e = next_event(l, {{0.5, 0.5}, DirectionState::make(theta, 1, 1)});
        const auto hit = oracle::first_hit(segs, 0.5, 0.5, std::cos(theta), std::sin(theta));
        CHECK(e.time == doctest::Approx(hit.t).epsilon(1e-13));
        CHECK(static_cast<std::size_t>(e.side) == hit.segment);
        CHECK(contains_point(l, e.point) == Location::Boundary);
    }
    SUBCASE("many random rays") {
        Billiard b(l);
        for (int i = 0; i < 500; ++i) {
            const double x = 0.05 + 1.9 * ((i * 37) % 101) / 101.0;
            const double y = 0.05 + 0.9 * ((i * 53) % 97) / 97.0;
            const double theta = 0.05 + 1.4 * ((i * 29) % 89) / 89.0;
            const int sx = i % 2 ? 1 : -1, sy = (i / 2) % 2 ? 1 : -1;
            const PhasePoint s{{x, y}, DirectionState::make(theta, sx, sy)};
            const auto hit = oracle::first_hit(segs, x, y, sx * std::cos(theta), sy * std::sin(theta));
            try {
                const Event e = b.next_event(s);
                CHECK(e.time == doctest::Approx(hit.t).epsilon(1e-12));
                CHECK(contains_point(l, e.point) == Location::Boundary);
            } catch (const DynamicsError& e) {
                CHECK(e.code() == DCode::CornerHit);
            }
        }
    }
}

TEST_CASE("next_event precondition errors") {
    const VHTable sq = fixtures::unit_square();
    CHECK(dyn_error([&] { (void)next_event(sq, {{1.5, 0.5}, DirectionState::make(0.3, 1, 1)}); }) ==
          DCode::OutsideTable);
    CHECK(dyn_error([&] { (void)next_event(sq, {{1.0, 0.5}, DirectionState::make(0.3, 1, 1)}); }) == DCode::NotInward);
    const Event e = next_event(sq, {{1.0, 0.5}, DirectionState::make(0.3, -1, 1)});
    CHECK(e.time > 0.0);
}

TEST_CASE("flow: t = 0 is the identity and negative t is rejected") {
    const VHTable l = fixtures::lshape();
    const PhasePoint s{{0.3, 0.7}, DirectionState::make(0.9, -1, 1)};
    const PhasePoint r = flow(l, s, 0.0);
    CHECK(r.position == s.position);
    CHECK(r.dir == s.dir);
    CHECK(dyn_error([&] { (void)flow(l, s, -1.0); }) == DCode::NegativeTime);
}

TEST_CASE("flow in the unit square matches the folding oracle") {
    const VHTable sq = fixtures::unit_square();
    const double theta = std::acos(0.6);
    const PhasePoint s{{0.25, 0.25}, DirectionState::make(theta, 1, 1)};
    Billiard b(sq);
    for (double t = 0.1; t < 60.0; t += 0.37) {
        const PhasePoint r = b.flow(s, t);
        CHECK(r.position.x == doctest::Approx(oracle::fold(0.25 + 0.6 * t, 1.0)).epsilon(1e-9));
        CHECK(r.position.y == doctest::Approx(oracle::fold(0.25 + 0.8 * t, 1.0)).epsilon(1e-9));
        CHECK(r.dir.sx == oracle::fold_sign(0.25 + 0.6 * t, 1.0));
        CHECK(r.dir.sy == oracle::fold_sign(0.25 + 0.8 * t, 1.0));
        CHECK(r.dir.theta == theta);
    }
}

TEST_CASE("flow: convex corners flip both signs, reflex corners are singular") {
    const VHTable sq = fixtures::unit_square();
    const PhasePoint s{{0.5, 0.5}, DirectionState::make(std::numbers::pi / 4, 1, 1)};
    const PhasePoint r = flow(sq, s, std::sqrt(0.5) + 0.1);
    CHECK(r.dir.sx == -1);
    CHECK(r.dir.sy == -1);
    CHECK(r.position.x == doctest::Approx(1.0 - 0.1 / std::sqrt(2.0)));

    const VHTable l = fixtures::lshape();
    const PhasePoint d{{0.25, 0.25}, DirectionState::make(std::numbers::pi / 4, 1, 1)};
    CHECK(dyn_error([&] { (void)flow(l, d, 2.0); }) == DCode::SingularOrbit);
}

TEST_CASE("flow from the boundary with outward velocity reflects first") {
    const VHTable sq = fixtures::unit_square();
    const PhasePoint s{{1.0, 0.5}, DirectionState::make(0.3, 1, 1)};
    const PhasePoint r = flow(sq, s, 0.1);
    CHECK(r.position.x == doctest::Approx(1.0 - 0.1 * std::cos(0.3)));
    CHECK(r.dir.sx == -1);
}

TEST_CASE("event budget") {
    const VHTable sq = fixtures::rectangle(Rational(1, 100), 1);
    const PhasePoint s{{0.005, 0.5}, DirectionState::make(0.3, 1, 1)};
    CHECK(dyn_error([&] { (void)Billiard(sq).flow(s, 100.0, 50); }) == DCode::EventBudgetExceeded);
}

TEST_CASE("orbit: periodic direction in the unit square returns to its start") {
    const VHTable sq = fixtures::unit_square();
    const double theta = std::atan(0.5);
    const PhasePoint s{{0.3, 0.1}, DirectionState::make(theta, 1, 1)};
    const double period = 4.0 / std::cos(theta);
    const OrbitSegmentList o = orbit(sq, s, period, 1000);
    CHECK_FALSE(o.singular);
    CHECK(o.total_time == doctest::Approx(period));
    CHECK(std::abs(o.final_state.position.x - 0.3) < 1e-9);
    CHECK(std::abs(o.final_state.position.y - 0.1) < 1e-9);
    CHECK(o.final_state.dir == s.dir);
    for (std::size_t i = 1; i < o.collisions.size(); ++i) CHECK(o.collisions[i].time > o.collisions[i - 1].time);
}

TEST_CASE("orbit: L-shape diagonal ends at the reflex corner") {
    const VHTable l = fixtures::lshape();
    const OrbitSegmentList o = orbit(l, {{0.25, 0.25}, DirectionState::make(std::numbers::pi / 4, 1, 1)}, 100.0, 1000);
    CHECK(o.singular);
    REQUIRE_FALSE(o.collisions.empty());
    for (const auto& c : o.collisions) CHECK(contains_point(l, c.point) == Location::Boundary);
    CHECK(o.collisions.back().vertex >= 0);
}

TEST_CASE("orbit: generic L-shape orbit stays on the boundary at every collision") {
    const VHTable l = fixtures::lshape();
    const OrbitSegmentList o = orbit(l, {{0.25, 0.25}, DirectionState::make(1.0, 1, 1)}, 200.0, 10000);
    CHECK_FALSE(o.singular);
    CHECK(o.collisions.size() > 50);
    for (const auto& c : o.collisions) {
        CHECK(contains_point(l, c.point) == Location::Boundary);
        CHECK(c.dir_after.theta == 1.0);
    }
}

TEST_CASE("orbit: max_events = 0 gives an empty list") {
    const OrbitSegmentList o = orbit(fixtures::lshape(), {{0.25, 0.25}, DirectionState::make(1.0, 1, 1)}, 10.0, 0);
    CHECK(o.collisions.empty());
    CHECK(o.total_time == 0.0);
}

TEST_CASE("unfolding") {
    const VHTable sq = fixtures::unit_square();
    SUBCASE("no reflection") {
        const OrbitSegmentList o = orbit(sq, {{0.5, 0.5}, DirectionState::make(0.4, 1, 1)}, 0.1, 10);
        const auto u = unfold_position(o);
        REQUIRE(u.size() == 2);
        CHECK(u[0].frame == UnfoldedFrame{1, 1});
        CHECK(u[1].frame == UnfoldedFrame{1, 1});
        CHECK(u[1].point.x == doctest::Approx(0.5 + 0.1 * std::cos(0.4)));
    }
    SUBCASE("one vertical reflection is collinear") {
        const double theta = std::atan(0.5);
        const OrbitSegmentList o = orbit(sq, {{0.5, 0.5}, DirectionState::make(theta, 1, 1)}, 1.0, 10);
        const auto u = unfold_position(o);
        REQUIRE(u.size() == 3);
        CHECK(u[2].frame == UnfoldedFrame{-1, 1});
        const double cross = (u[1].point.x - u[0].point.x) * (u[2].point.y - u[0].point.y) -
                             (u[1].point.y - u[0].point.y) * (u[2].point.x - u[0].point.x);
        CHECK(std::abs(cross) < 1e-12);
    }
    SUBCASE("rectangle: developed path is the straight line") {
        const VHTable r = fixtures::rectangle(Rational(3, 2), Rational(2, 3));
        const double theta = 0.77;
        const Vec2 p0{0.4, 0.3};
        const OrbitSegmentList o = orbit(r, {p0, DirectionState::make(theta, -1, 1)}, 40.0, 10000);
        for (const auto& u : unfold_position(o)) {
            CHECK(std::abs(u.point.x - (p0.x - std::cos(theta) * u.time)) < 1e-9);
            CHECK(std::abs(u.point.y - (p0.y + std::sin(theta) * u.time)) < 1e-9);
        }
    }
}

TEST_CASE("pi commensurability labels") {
    CHECK(is_pi_commensurable(std::numbers::pi / 4));
    CHECK(is_pi_commensurable(3.0 * std::numbers::pi / 7.0));
    CHECK_FALSE(is_pi_commensurable(1.0));
    CHECK_FALSE(is_pi_commensurable(0.7));
}

TEST_CASE("weak measure preservation on a grid") {
    const VHTable l = fixtures::lshape();
    const int m = 64;
    const QuadratureGrid grid(l, m);
    const Billiard b(l);
    const std::vector<Observable> hs{Observable::cosine({1, 0}, 2, 2), Observable::sine({1, 1}, 2, 2),
                                     Observable::cosine({0, 2}, 2, 2)};
    for (const auto& h : hs) {
        const double mean0 = inner(restrict(h, grid), characteristic(grid), grid);
        for (double t : {1.0, 5.0, 20.0}) {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& d : direction_class(1.0)) {
                for (const Vec2& z : grid.points()) {
                    PhasePoint s{z, d};
                    if (!b.advance(s, t)) continue;
                    sum += h(s.position);
                    ++n;
                }
            }
            CHECK(std::abs(sum / static_cast<double>(n) - mean0) <= h.lipschitz() / m);
        }
    }
}

TEST_CASE("orbit CSV and SVG export") {
    const VHTable sq = fixtures::unit_square();
    const OrbitSegmentList o = orbit(sq, {{0.5, 0.5}, DirectionState::make(std::numbers::pi / 4, 1, 1)}, 1.0, 10);
    const std::string csv = orbit_csv(o);
    CHECK(csv.rfind("t,x,y,sx,sy,side_id\n", 0) == 0);
    CHECK(csv.find(",v") != std::string::npos);
    const std::string svg = orbit_svg(sq, o);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}
