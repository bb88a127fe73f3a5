#include "fixtures.hpp"

#include "vhb/lab.hpp"
#include "vhb/table_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>

using namespace vhb;
using LCode = LabError::Code;

namespace {

LCode lab_error(auto&& fn) {
    try {
        fn();
    } catch (const LabError& e) {
        return e.code();
    }
    FAIL("expected a LabError");
    return LCode::Io;
}

ExperimentConfig small_config(const std::string& observable) {
    ExperimentConfig c;
    c.table = fixtures::unit_square();
    c.theta_count = 12;
    c.N = 4;
    c.tau = 12;
    c.step = 1.0 / 16;
    c.observables = {observable};
    c.m = 4;
    return c;
}

GDeltaConfig small_gdelta() {
    GDeltaConfig g;
    g.Q_list = {2, 3};
    g.J = 2;
    g.N_list = {3, 4, 5};
    g.m = 4;
    g.theta_count = 4;
    g.eta_levels = 2;
    g.seed = 3;
    return g;
}

}  // namespace

TEST_CASE("observable selectors") {
    const VHTable l = fixtures::lshape();
    CHECK(parse_observable("basis:1", l)(0.3, 0.3) == doctest::Approx(1.0));
    CHECK(parse_observable("cos:1,0", l)(0.5, 0.0) == doctest::Approx(std::cos(std::numbers::pi * 0.5)));
    CHECK(parse_observable("sin:0,1", l)(0.0, 0.5) == doctest::Approx(std::sin(std::numbers::pi * 0.5)));
    CHECK(parse_observable("const:2.5", l)(1.0, 0.2) == 2.5);
    CHECK(parse_observable("chi", l)(1.0, 0.2) == 1.0);
    CHECK(lab_error([&] { (void)parse_observable("tan:1,0", l); }) == LCode::BadConfig);
    CHECK(lab_error([&] { (void)parse_observable("cos:1", l); }) == LCode::BadConfig);
}

TEST_CASE("experiment config") {
    const std::string text = R"({"table": {"outer": {"word": "ENWS", "lengths": [1, 1, 1, 1]}},
        "theta": {"count": 7, "sampler": "uniform", "seed": 9},
        "window": {"N": 5, "tau": 50, "step": 0.05},
        "observables": ["basis:2"], "m": 6})";
    const ExperimentConfig c = ExperimentConfig::from_json(text);
    CHECK(c.theta_count == 7);
    CHECK(c.sampler == ThetaSampler::Uniform);
    CHECK(c.seed == 9);
    CHECK(c.N == 5.0);
    CHECK(c.m == 6);
    CHECK(c.resolve_table() == fixtures::unit_square());
    const ExperimentConfig again = ExperimentConfig::from_json(c.to_json());
    CHECK(again.to_json() == c.to_json());

    ExperimentConfig bad = c;
    bad.step = 0.2;
    CHECK(lab_error([&] { bad.validate(); }) == LCode::BadConfig);
    bad = c;
    bad.tau = 5;
    CHECK(lab_error([&] { bad.validate(); }) == LCode::BadConfig);
    bad = c;
    bad.workers = 0;
    CHECK(lab_error([&] { bad.validate(); }) == LCode::BadConfig);
    CHECK(lab_error([] { (void)ExperimentConfig::from_json("{not json"); }) == LCode::BadConfig);
    CHECK(lab_error([] { (void)ExperimentConfig::load("/nonexistent/config.json"); }) == LCode::Io);
}

TEST_CASE("theta samplers") {
    const auto s = sample_thetas(ThetaSampler::Stratified, 50, 1);
    REQUIRE(s.size() == 50);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i] > i * (std::numbers::pi / 2) / 50);
        CHECK(s[i] < (i + 1) * (std::numbers::pi / 2) / 50);
    }
    CHECK(sample_thetas(ThetaSampler::Stratified, 50, 1) == s);
    CHECK(sample_thetas(ThetaSampler::Stratified, 50, 2) != s);
    for (double t : sample_thetas(ThetaSampler::Uniform, 100, 4)) {
        CHECK(t > 0.0);
        CHECK(t < std::numbers::pi / 2);
    }
}

TEST_CASE("window grid lies strictly inside (N, tau)") {
    const auto w = window_grid(10, 11, 0.25);
    REQUIRE(w.size() == 3);
    CHECK(w.front() == 10.25);
    CHECK(w.back() == 10.75);
}

TEST_CASE("sweep of the characteristic function hits everywhere") {
    const auto est = theta_sweep(small_config("chi")).front();
    CHECK(est.samples.size() == 12);
    CHECK(est.measure == 1.0);
    CHECK(est.hits == 12);
    for (const auto& s : est.samples) CHECK(s.first_hit_t == doctest::Approx(4.0 + 1.0 / 16));
}

TEST_CASE("sweep estimate is monotone in tau") {
    const auto est = theta_sweep(small_config("cos:1,0")).front();
    double prev = 0.0;
    for (double tau = 4.0; tau <= 12.0; tau += 0.5) {
        const double m = est.measure_at(tau);
        CHECK(m >= prev);
        prev = m;
    }
    CHECK(est.measure_at(12.0) == est.measure);
    CHECK(est.half_width > 0.0);
    CHECK(est.half_width < 0.5);
    const std::string csv = sweep_csv(est);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}

TEST_CASE("sweep output does not depend on the worker count") {
    ExperimentConfig c = small_config("cos:1,0");
    const auto a = theta_sweep(c);
    c.workers = 3;
    const auto b = theta_sweep(c);
    CHECK(sweep_json(c, fixtures::unit_square(), a) == sweep_json(c, fixtures::unit_square(), b));
    ExperimentConfig c1 = c;
    c1.workers = 1;
    CHECK(sweep_json(c1, fixtures::unit_square(), a) == sweep_json(c, fixtures::unit_square(), a));
}

TEST_CASE("continuity probe") {
    const VHTable a = fixtures::lshape();
    const Observable h = Observable::cosine({1, 0}, 2, 2);
    const std::vector<double> t{0.5, 1.5, 3.0};
    const auto same = continuity_probe(a, a, 1.0, h, t, 8, {.workers = 1});
    CHECK(same.distance == 0.0);
    CHECK(same.max_delta == 0.0);
    double prev = INFINITY;
    for (int k : {8, 32, 128}) {
        const VHTable b = perturb_length(a, 0, Rational(1, k));
        CHECK(to_double(VHTable::parameter_distance(a, b)) == doctest::Approx(1.0 / k));
        const auto r = continuity_probe(a, b, 1.0, h, t, 8, {.workers = 1});
        CHECK(r.distance == doctest::Approx(1.0 / k));
        CHECK(r.max_delta <= prev);
        prev = r.max_delta;
    }
    CHECK(prev < 0.05);
    CHECK_THROWS_AS((void)continuity_probe(a, fixtures::unit_square(), 1.0, h, t, 8), GeometryError);
}

TEST_CASE("gdelta config") {
    GDeltaConfig g = small_gdelta();
    g.validate();
    g.Q_list.clear();
    CHECK(lab_error([&] { g.validate(); }) == LCode::EmptyQList);
    g.Q_list = {5, 2};
    CHECK(lab_error([&] { g.validate(); }) == LCode::BadConfig);
    const GDeltaConfig r = GDeltaConfig::from_json(small_gdelta().to_json());
    CHECK(r.to_json() == small_gdelta().to_json());
}

TEST_CASE("gdelta demo ledger") {
    const GDeltaConfig g = small_gdelta();
    const GDeltaReport r = gdelta_demo(g);
    REQUIRE(r.tables.size() == 2);
    REQUIRE(r.rows.size() == 2 * 2 * 3);
    for (const auto& row : r.rows) {
        const auto cert = *r.tables[row.table_index].certificate();
        CHECK(std::min(cert.p, cert.q) >= row.Q);
        CHECK(row.p == cert.p);
        CHECK(row.tau_max == doctest::Approx(4.0 * row.N));
        CHECK(row.target == doctest::Approx(1.0 - 1.0 / (row.N * row.N)));
        CHECK(row.measure >= 0.0);
        CHECK(row.measure <= 1.0);
        CHECK(row.empirical_eta >= 0.0);
        const double area = to_double(r.tables[row.table_index].area());
        CHECK(area >= g.area_min - 1.0);
        CHECK(area <= g.area_max + 1.0);
    }
    const std::string csv = gdelta_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
    const auto j = nlohmann::json::parse(gdelta_json(g, r));
    CHECK(j["rows"] == 12);
    CHECK(j["tables"].size() == 2);

    GDeltaConfig g2 = g;
    g2.workers = 2;
    CHECK(gdelta_json(g2, gdelta_demo(g2)) == gdelta_json(g, r));
}
