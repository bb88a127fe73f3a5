#include "fixtures.hpp"

#include "vhb/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vhb;
using SCode = SpectralError::Code;

namespace {

SCode spec_error(auto&& fn) {
    try {
        fn();
    } catch (const SpectralError& e) {
        return e.code();
    }
    FAIL("expected a SpectralError");
    return SCode::BadGrid;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("frequency order") {
    const auto f = frequency_order(6);
    REQUIRE(f.size() == 6);
    CHECK(f[0] == Frequency{0, 1});
    CHECK(f[1] == Frequency{1, -1});
    CHECK(f[2] == Frequency{1, 0});
    CHECK(f[3] == Frequency{1, 1});
    CHECK(f[4] == Frequency{0, 2});
    for (const auto& k : f) CHECK((k.kx > 0 || (k.kx == 0 && k.ky > 0)));
}

TEST_CASE("observables evaluate as real trig polynomials") {
    const Observable c = Observable::cosine({1, 0}, 1, 1);
    const Observable s = Observable::sine({1, 2}, 2, 3, 0.5);
    for (double x : {0.0, 0.13, 0.5, 0.77}) {
        for (double y : {0.0, 0.31, 0.9}) {
            CHECK(c(x, y) == doctest::Approx(std::cos(kTwoPi * x)));
            CHECK(s(x, y) == doctest::Approx(0.5 * std::sin(kTwoPi * (x / 2 + 2 * y / 3))));
        }
    }
    CHECK(c.lipschitz() == doctest::Approx(kTwoPi));
    CHECK(Observable::constant(3.0, 1, 1)(0.4, 0.4) == 3.0);
    CHECK(Observable::constant(3.0, 1, 1).lipschitz() == 0.0);
    CHECK(Observable::cosine({-1, 0}, 1, 1)(0.2, 0.0) == doctest::Approx(std::cos(kTwoPi * 0.2)));
    CHECK(spec_error([] { (void)Observable(0.0, 1.0); }) == SCode::BadObservable);
    CHECK(spec_error([] { (void)Observable::basis(0, 1, 1); }) == SCode::BadObservable);
}

TEST_CASE("basis is orthogonal on the rectangle") {
    const VHTable r = fixtures::rectangle(2, 1);
    const QuadratureGrid grid(r, 16);
    std::vector<SampledObservable> b;
    for (std::size_t j = 1; j <= 9; ++j) b.push_back(restrict(Observable::basis(j, r), grid));
    CHECK(inner(b[0], b[0], grid) == doctest::Approx(1.0));
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) CHECK(std::abs(inner(b[i], b[j], grid)) < 1e-12);
        if (i > 0) CHECK(inner(b[i], b[i], grid) == doctest::Approx(0.5));
    }
}

TEST_CASE("quadrature grid") {
    const VHTable l = fixtures::lshape();
    const QuadratureGrid g(l, 4);
    CHECK(g.size() == 3 * 16);
    CHECK(g.phase_size() == 4 * 3 * 16);
    CHECK(g.columns() == 8);
    CHECK(g.rows() == 8);
    CHECK(g.point(0).x == doctest::Approx(0.125));
    CHECK(g.point(0).y == doctest::Approx(0.125));
    CHECK(g.index_of(7, 7) == -1);
    CHECK(g.index_of(0, 7) >= 0);
    CHECK(g.weight() * static_cast<double>(g.phase_size()) == doctest::Approx(1.0));
    for (const Vec2& z : g.points()) CHECK(contains_point(l, z) == Location::Interior);
    const auto cert = *tiling_parameters(l);
    CHECK(g.aligned(cert));
    CHECK_FALSE(QuadratureGrid(fixtures::lshape_55(), 4).aligned(*fixtures::lshape_55().certificate()));
    CHECK(QuadratureGrid(l, 4).id() == g.id());
    CHECK(QuadratureGrid(l, 8).id() != g.id());
    CHECK(spec_error([&] { (void)QuadratureGrid(l, 0); }) == SCode::BadGrid);

    const QuadratureGrid holed(fixtures::holed_square(), 4);
    CHECK(holed.size() == 12);
}

TEST_CASE("inner products") {
    const VHTable sq = fixtures::unit_square();
    const QuadratureGrid g(sq, 8);
    const auto chi = characteristic(g);
    CHECK(inner(chi, chi, g) == doctest::Approx(1.0).epsilon(1e-15));
    const auto c = restrict(Observable::cosine({1, 0}, 1, 1), g);
    CHECK(inner(c, c, g) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(inner(c, chi, g)) < 1e-15);
    CHECK(norm(c, g) == doctest::Approx(std::sqrt(0.5)));
    const QuadratureGrid other(sq, 4);
    CHECK(spec_error([&] { (void)inner(c, characteristic(other), g); }) == SCode::GridMismatch);
}

TEST_CASE("tile average on the L-shape") {
    const VHTable l = fixtures::lshape();
    const auto cert = *tiling_parameters(l);
    REQUIRE(cert.tile_count == 3);
    const QuadratureGrid g(l, 4);
    const auto h = sample([](Vec2 z) { return z.x; }, g);
    const auto d = tile_average(h, cert, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec2 z = g.point(i);
        const double u = z.x - std::floor(z.x);
        CHECK(d.values[i] == doctest::Approx(u + 1.0 / 3.0));
    }
    SUBCASE("projector algebra") {
        const auto y = sample([](Vec2 z) { return std::sin(3 * z.y) + z.x * z.y; }, g);
        const auto dd = tile_average(d, cert, g);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(dd.values[i] == doctest::Approx(d.values[i]));
        CHECK(inner(d, y, g) == doctest::Approx(inner(h, tile_average(y, cert, g), g)));
        const auto chi = characteristic(g);
        const auto dchi = tile_average(chi, cert, g);
        for (double v : dchi.values) CHECK(v == doctest::Approx(1.0));
        CHECK(inner(d, chi, g) == doctest::Approx(inner(h, chi, g)));
    }
    SUBCASE("unaligned and mismatched certificates") {
        CHECK(spec_error([&] { (void)tile_average(h, {3, 1, 9}, g); }) == SCode::UnalignedGrid);
        CHECK(spec_error([&] { (void)tile_average(h, {2, 2, 13}, g); }) == SCode::BadCertificate);
    }
}

TEST_CASE("functional tile average matches the sampled one") {
    const VHTable t = fixtures::lshape_55();
    const auto cert = *t.certificate();
    const QuadratureGrid g(t, 10);
    const Observable h = Observable::cosine({1, 0}, 2, 2).add({1, 1}, {0.2, -0.3}).add({0, 3}, {0.0, 0.4});
    const TileAverage ta(h, t, cert);
    CHECK(ta.tile_corners().size() == static_cast<std::size_t>(cert.tile_count));
    const auto sampled = tile_average(restrict(h, g), cert, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(ta(g.point(i)) == doctest::Approx(sampled.values[i]).epsilon(1e-12));
    const auto hc = continuous_part(h, cert, g);
    const auto ha = restrict(h, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(hc.values[i] + sampled.values[i] == doctest::Approx(ha.values[i]));
}

TEST_CASE("unit-square correlation has a closed form") {
    const VHTable sq = fixtures::unit_square();
    const Observable h = Observable::cosine({1, 0}, 1, 1);
    const QuadratureGrid g(sq, 16);
    const double theta = 0.6;
    const auto t = time_grid(0.0, 20.0, 0.25);
    const CorrelationSeries s = correlation(sq, theta, h, t, g, {.workers = 1});
    REQUIRE(s.c.size() == t.size());
    CHECK(s.norm_sq == doctest::Approx(0.5));
    CHECK(s.c[0] == s.norm_sq);
    CHECK(std::abs(s.mean) < 1e-15);
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(std::abs(s.c[k] - 0.5 * std::cos(kTwoPi * std::cos(theta) * t[k])) < 1e-9);
    }
    SUBCASE("worker count does not change the result") {
        const CorrelationSeries s3 = correlation(sq, theta, h, t, g, {.workers = 3});
        CHECK(s3.c == s.c);
    }
    SUBCASE("Cesaro averages") {
        const auto ces = cesaro_gap(s);
        const auto gap = s.gap();
        double sq_sum = 0.0, abs_sum = 0.0;
        for (std::size_t k = 0; k < gap.size(); ++k) {
            sq_sum += gap[k] * gap[k];
            abs_sum += std::abs(gap[k]);
            CHECK(ces.squared[k] == doctest::Approx(sq_sum / static_cast<double>(k + 1)));
            CHECK(ces.absolute[k] == doctest::Approx(abs_sum / static_cast<double>(k + 1)));
        }
        const std::string csv = correlation_csv(s);
        CHECK(csv.rfind("t,C,gap,cesaro_sq,cesaro_abs\n", 0) == 0);
    }
}

TEST_CASE("characteristic function correlation is constant") {
    const VHTable l = fixtures::lshape();
    const QuadratureGrid g(l, 8);
    const auto t = time_grid(0.0, 10.0, 0.5);
    const auto s = correlation(l, 1.0, Observable::constant(1.0, 2, 2), t, g, {.workers = 1});
    for (double c : s.c) CHECK(c == doctest::Approx(1.0).epsilon(1e-15));
    for (double v : s.gap()) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("correlation errors") {
    const VHTable l = fixtures::lshape();
    const QuadratureGrid g(l, 8);
    const Observable h = Observable::cosine({1, 0}, 2, 2);
    CHECK(spec_error([] { (void)time_grid(1.0, 0.0, 0.1); }) == SCode::BadTimeGrid);
    const std::vector<double> bad{0.0, 1.0, 1.0};
    CHECK(spec_error([&] { (void)correlation(l, 1.0, h, bad, g); }) == SCode::BadTimeGrid);
    CHECK(spec_error([&] { (void)correlation(fixtures::unit_square(), 1.0, h, time_grid(0, 1, 1), g); }) ==
          SCode::GridMismatch);
    const auto t = time_grid(0.0, 10.0, 1.0);
    CHECK(spec_error([&] { (void)correlation(l, std::numbers::pi / 4, h, t, g, {.workers = 1}); }) ==
          SCode::TooManySingular);
    const auto s = correlation(l, std::numbers::pi / 4, h, t, g, {.workers = 1, .max_dropped_fraction = 1.0});
    CHECK(s.dropped_fraction > 1e-3);
    CHECK(s.c.size() == t.size());
    CorrelationSeries empty;
    CHECK(spec_error([&] { (void)cesaro_gap(empty); }) == SCode::EmptySeries);
}

TEST_CASE("correlation chain identities") {
    const VHTable t = fixtures::lshape_55();
    const auto cert = *t.certificate();
    const QuadratureGrid g(t, 10);
    const Observable h = Observable::cosine({1, 0}, 2, 2).add({1, 2}, {0.1, 0.2});
    for (double time : {0.0, 0.7, 3.0}) {
        const ChainReport r = correlation_chain_check(t, cert, 0.9, h, time, g, {.workers = 1});
        CHECK(r.identities_hold);
        CHECK(r.e4_holds);
        CHECK(r.line_discrepancy <= 1e-10);
        CHECK(r.e4_lhs <= r.e4_rhs + 1e-12);
    }
    const ChainReport r0 = correlation_chain_check(t, cert, 0.9, h, 0.0, g, {.workers = 1});
    CHECK(r0.lines[0] == doctest::Approx(r0.lines[1]).epsilon(1e-12));
    CHECK(spec_error([&] { (void)correlation_chain_check(t, cert, 0.9, h, 1.0, QuadratureGrid(t, 4)); }) ==
          SCode::UnalignedGrid);
}

TEST_CASE("oscillation bound") {
    const VHTable l = fixtures::lshape();
    const Observable h = Observable::cosine({1, 0}, 2, 2);
    SUBCASE("coarse lattice does not meet the hypothesis") {
        const QuadratureGrid g(l, 4);
        const auto r = oscillation_bound_check(h, *tiling_parameters(l), g, 0.1);
        CHECK(r.status == OscillationStatus::HypothesisNotMet);
        CHECK(std::string(to_string(r.status)) == "hypothesis not met");
    }
    SUBCASE("fine lattice holds") {
        const VHTable t = approximate_pq(l, 20, 0.05);
        const auto cert = *t.certificate();
        REQUIRE(cert.p == 20);
        REQUIRE(cert.q == 20);
        const QuadratureGrid g(t, 20);
        const auto r = oscillation_bound_check(h, cert, g, 0.5);
        CHECK(r.status == OscillationStatus::Holds);
        CHECK(r.pairs_checked > 0);
        CHECK(r.max_oscillation <= r.bound);
        CHECK(r.delta == doctest::Approx(0.5 / (r.lipschitz * r.norm)));
    }
}

TEST_CASE("pairwise sum and number formatting") {
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(pairwise_sum({}) == 0.0);
    CHECK(format_g17(0.5) == "0.5");
    CHECK(std::stod(format_g17(0.1)) == 0.1);
}
