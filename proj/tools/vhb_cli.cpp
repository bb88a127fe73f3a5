// vhb: command line front end for tables, orbits and correlation experiments.
//
// Exit codes: 0 success, 1 validation or usage error, 2 numerical abort.
// Errors are written to stderr as a single JSON object.

#include "vhb/dynamics.hpp"
#include "vhb/geometry.hpp"
#include "vhb/lab.hpp"
#include "vhb/orbit_export.hpp"
#include "vhb/spectral.hpp"
#include "vhb/table_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::json;

int report(const char* kind, const std::string& code, const std::string& message, int exit_code) {
    json j{{"error", code}, {"kind", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
    return exit_code;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
    } else {
        vhb::write_text(path, text);
    }
}

vhb::Observable observable_arg(const std::string& h, const std::string& selector, const vhb::VHTable& table) {
    if (!selector.empty()) return vhb::parse_observable(selector, table);
    return vhb::parse_observable("cos:" + h, table);
}

int cmd_validate(const std::string& path) {
    const vhb::VHTable t = vhb::read_table(path);
    std::cout << "word: " << t.outer().word().str() << "\n";
    std::cout << "holes: " << t.holes().size() << "\n";
    for (std::size_t i = 0; i < t.holes().size(); ++i) {
        std::cout << "hole " << i << ": " << t.holes()[i].polygon.word().str() << "\n";
    }
    std::cout << "area: " << t.area() << "\n";
    std::cout << "bounding box: " << t.width() << " x " << t.height() << "\n";
    if (auto cert = vhb::tiling_parameters(t)) {
        std::cout << "(p,q): (" << cert->p << "," << cert->q << ")\n";
        std::cout << "tiles: " << cert->tile_count << "\n";
    } else {
        std::cout << "(p,q): none (inexact table)\n";
    }
    std::cout << "hash: " << vhb::hex_hash(vhb::table_hash(t)) << "\n";
    return 0;
}

int cmd_tile(const std::string& path, bool list) {
    const vhb::VHTable t = vhb::read_table(path);
    const auto cert = vhb::tiling_parameters(t);
    if (!cert) {
        return report("geometry", "NoCertificate", "inexact table has no tiling certificate; run approximate", 1);
    }
    std::cout << "p: " << cert->p << "\nq: " << cert->q << "\ntiles: " << cert->tile_count << "\n";
    if (list) {
        const vhb::TileAverage avg(vhb::Observable::constant(0.0, 1.0, 1.0), t, *cert);
        for (const auto& c : avg.tile_corners()) std::cout << c.x << " " << c.y << "\n";
    }
    return 0;
}

int cmd_approximate(const std::string& path, std::int64_t Q, double eta, const std::string& out) {
    const vhb::VHTable t = vhb::read_table(path);
    const vhb::VHTable a = vhb::approximate_pq(t, Q, eta);
    const auto& cert = *a.certificate();
    std::cerr << "(p,q) = (" << cert.p << "," << cert.q << "), tiles = " << cert.tile_count
              << ", distance = " << vhb::VHTable::parameter_distance(a, t) << "\n";
    emit(vhb::table_to_json(a) + "\n", out);
    return 0;
}

struct OrbitArgs {
    std::string table;
    double theta = 1.0;
    double x = 0.0;
    double y = 0.0;
    int sx = 1;
    int sy = 1;
    double time = 10.0;
    std::uint64_t max_events = 100000;
    std::string svg;
    std::string csv;
};

int cmd_orbit(const OrbitArgs& a) {
    const vhb::VHTable t = vhb::read_table(a.table);
    const vhb::PhasePoint start{{a.x, a.y}, vhb::DirectionState::make(a.theta, a.sx, a.sy)};
    const vhb::OrbitSegmentList o = vhb::orbit(t, start, a.time, a.max_events);
    emit(vhb::orbit_csv(o), a.csv);
    if (!a.svg.empty()) vhb::write_text(a.svg, vhb::orbit_svg(t, o));
    if (o.singular) std::cerr << "orbit stopped at a reflex corner at t = " << o.total_time << "\n";
    return 0;
}

struct CorrelateArgs {
    std::string table;
    double theta = 1.0;
    std::string h = "1,0";
    std::string observable;
    double tmax = 50.0;
    double step = 0.25;
    int m = 64;
    unsigned workers = 0;
    std::string out;
};

int cmd_correlate(const CorrelateArgs& a) {
    const vhb::VHTable t = vhb::read_table(a.table);
    const vhb::Observable h = observable_arg(a.h, a.observable, t);
    const auto times = vhb::time_grid(0.0, a.tmax, a.step);
    vhb::CorrelationOptions opts;
    opts.workers = a.workers;
    const vhb::QuadratureGrid grid(t, a.m);
    const vhb::CorrelationSeries s = vhb::correlation(t, a.theta, h, times, grid, opts);
    const std::string csv = vhb::correlation_csv(s);
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        const std::filesystem::path dir = a.out;
        vhb::write_text(dir / "correlation.csv", csv);
        vhb::write_text(dir / "correlation.json", vhb::correlation_json(t, a.theta, h, a.m, s, 0));
        vhb::write_text(dir / "gap.svg", vhb::series_svg(s.t, {s.gap()}, {"gap"}, h.descriptor() + " correlation gap"));
    }
    return 0;
}

int cmd_theta_sweep(const std::string& config, std::optional<unsigned> workers, const std::string& out) {
    vhb::ExperimentConfig c = vhb::ExperimentConfig::load(config);
    if (workers) c.workers = *workers;
    if (!out.empty()) c.output_dir = out;
    const vhb::VHTable t = c.resolve_table();
    const auto est = vhb::run_theta_sweep(c);
    std::cout << vhb::sweep_json(c, t, est);
    return 0;
}

struct ContinuityArgs {
    std::string a;
    std::string b;
    double theta = 1.0;
    std::string h = "1,0";
    std::string observable;
    std::vector<double> t{5.0};
    int m = 64;
    std::string json_out;
};

int cmd_continuity(const ContinuityArgs& c) {
    const vhb::VHTable a = vhb::read_table(c.a);
    const vhb::VHTable b = vhb::read_table(c.b);
    const vhb::Observable h = observable_arg(c.h, c.observable, a);
    const vhb::ContinuityReport r = vhb::continuity_probe(a, b, c.theta, h, c.t, c.m);
    std::cout << vhb::continuity_csv(r);
    if (!c.json_out.empty()) vhb::write_text(c.json_out, vhb::continuity_json(a, b, c.theta, h, c.m, r));
    return 0;
}

int cmd_gdelta(const std::string& config, std::optional<unsigned> workers, const std::string& out) {
    vhb::GDeltaConfig c = vhb::GDeltaConfig::load(config);
    if (workers) c.workers = *workers;
    if (!out.empty()) c.output_dir = out;
    const auto r = vhb::run_gdelta_demo(c);
    std::cout << vhb::gdelta_csv(r);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional billiards on axis-parallel tables"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(vhb::version()));

    std::string table_path;
    auto* validate = app.add_subcommand("validate", "Check a table file and print its invariants");
    validate->add_option("table", table_path, "Table JSON file")->required();

    bool list_tiles = false;
    auto* tile = app.add_subcommand("tile", "Print the minimal (p,q) tiling certificate");
    tile->add_option("table", table_path, "Table JSON file")->required();
    tile->add_flag("--list", list_tiles, "List tile corners");

    std::int64_t Q = 1;
    double eta = 0.01;
    std::string out;
    auto* approx = app.add_subcommand("approximate", "Snap a table to a fine rational lattice");
    approx->add_option("table", table_path, "Table JSON file")->required();
    approx->add_option("--Q", Q, "Lower bound for min(p,q)")->required()->check(CLI::PositiveNumber);
    approx->add_option("--eta", eta, "Maximal parameter change")->required();
    approx->add_option("-o,--output", out, "Write the table here instead of stdout");

    OrbitArgs oa;
    auto* orbit = app.add_subcommand("orbit", "Trace one orbit and write its collisions as CSV");
    orbit->add_option("table", oa.table, "Table JSON file")->required();
    orbit->add_option("--theta", oa.theta, "Base angle in (0, pi/2)")->required();
    orbit->add_option("--x", oa.x, "Start x")->required();
    orbit->add_option("--y", oa.y, "Start y")->required();
    orbit->add_option("--sx", oa.sx, "Horizontal sign (+1/-1)");
    orbit->add_option("--sy", oa.sy, "Vertical sign (+1/-1)");
    orbit->add_option("--time", oa.time, "Flow time");
    orbit->add_option("--max-events", oa.max_events, "Collision cap");
    orbit->add_option("--svg", oa.svg, "Write an SVG drawing");
    orbit->add_option("--csv", oa.csv, "Write CSV here instead of stdout");

    CorrelateArgs ca;
    auto* correlate = app.add_subcommand("correlate", "Correlation series <U_t h, h> on a time grid");
    correlate->add_option("table", ca.table, "Table JSON file")->required();
    correlate->add_option("--theta", ca.theta, "Base angle in (0, pi/2)")->required();
    correlate->add_option("--h", ca.h, "Cosine frequency KX,KY over the bounding box");
    correlate->add_option("--observable", ca.observable, "Selector: basis:J, cos:KX,KY, sin:KX,KY, const:V, chi");
    correlate->add_option("--tmax", ca.tmax, "Last time");
    correlate->add_option("--step", ca.step, "Time step");
    correlate->add_option("--m", ca.m, "Grid cells per unit length");
    correlate->add_option("--workers", ca.workers, "Worker threads (0: all cores)");
    correlate->add_option("--out", ca.out, "Directory for CSV, JSON summary and plot");

    std::string config;
    std::optional<unsigned> workers;
    auto* sweep = app.add_subcommand("theta-sweep", "Estimate the measure of a direction set");
    sweep->add_option("config", config, "Experiment JSON config")->required();
    sweep->add_option("--workers", workers, "Override worker count");
    sweep->add_option("--out", out, "Override output directory");

    ContinuityArgs cc;
    auto* cont = app.add_subcommand("continuity", "Compare correlations of two nearby tables");
    cont->add_option("table_a", cc.a, "First table")->required();
    cont->add_option("table_b", cc.b, "Second table")->required();
    cont->add_option("--theta", cc.theta, "Base angle in (0, pi/2)");
    cont->add_option("--h", cc.h, "Cosine frequency KX,KY");
    cont->add_option("--observable", cc.observable, "Observable selector");
    cont->add_option("--t", cc.t, "Times (increasing)")->delimiter(',');
    cont->add_option("--m", cc.m, "Grid cells per unit length");
    cont->add_option("--json", cc.json_out, "Write a JSON summary");

    auto* gdelta = app.add_subcommand("gdelta-demo", "Tabulate sweeps and perturbation probes over a table sequence");
    gdelta->add_option("config", config, "Ledger JSON config")->required();
    gdelta->add_option("--workers", workers, "Override worker count");
    gdelta->add_option("--out", out, "Override output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", e.get_name(), e.what(), 1);
    }

    try {
        if (*validate) return cmd_validate(table_path);
        if (*tile) return cmd_tile(table_path, list_tiles);
        if (*approx) return cmd_approximate(table_path, Q, eta, out);
        if (*orbit) return cmd_orbit(oa);
        if (*correlate) return cmd_correlate(ca);
        if (*sweep) return cmd_theta_sweep(config, workers, out);
        if (*cont) return cmd_continuity(cc);
        if (*gdelta) return cmd_gdelta(config, workers, out);
    } catch (const vhb::GeometryError& e) {
        return report("geometry", vhb::to_string(e.code()), e.what(), 1);
    } catch (const vhb::LabError& e) {
        return report("lab", vhb::to_string(e.code()), e.what(), 1);
    } catch (const vhb::DynamicsError& e) {
        const int code = e.code() == vhb::DynamicsError::Code::BadTheta ||
                                 e.code() == vhb::DynamicsError::Code::OutsideTable ||
                                 e.code() == vhb::DynamicsError::Code::NotInward
                             ? 1
                             : 2;
        return report("dynamics", vhb::to_string(e.code()), e.what(), code);
    } catch (const vhb::SpectralError& e) {
        const int code = e.code() == vhb::SpectralError::Code::TooManySingular ? 2 : 1;
        return report("spectral", vhb::to_string(e.code()), e.what(), code);
    } catch (const std::exception& e) {
        return report("internal", "Exception", e.what(), 2);
    }
    return 0;
}
