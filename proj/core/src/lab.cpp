#include "vhb/lab.hpp"

#include "parallel.hpp"
#include "vhb/generators.hpp"
#include "vhb/orbit_export.hpp"
#include "vhb/table_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#ifndef VHB_VERSION
#define VHB_VERSION "0.0.0"
#endif

namespace vhb {

using ojson = nlohmann::ordered_json;
using LCode = LabError::Code;

const char* to_string(LabError::Code code) {
    switch (code) {
        case LCode::BadConfig: return "BadConfig";
        case LCode::EmptyQList: return "EmptyQList";
        case LCode::Io: return "Io";
    }
    return "Unknown";
}

const char* version() { return VHB_VERSION; }

namespace {

[[noreturn]] void bad_config(const std::string& what) { throw LabError(LCode::BadConfig, what); }

Frequency parse_frequency(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) bad_config("frequency must be KX,KY: " + s);
    try {
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        bad_config("frequency must be KX,KY: " + s);
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LabError(LCode::Io, "cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ojson parse_json(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const ojson::exception& e) {
        bad_config(std::string("invalid JSON: ") + e.what());
    }
}

template <class T>
T get_or(const ojson& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const ojson::exception&) {
        bad_config(std::string("bad value for '") + key + "'");
    }
}

ojson table_object(const VHTable& table) { return ojson::parse(table_to_json(table, -1)); }

double wilson_half_width(std::size_t hits, std::size_t n) {
    if (n == 0) return 0.0;
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double denom = 1.0 + z * z / nn;
    return z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
}

}  // namespace

Observable parse_observable(const std::string& selector, const VHTable& table) {
    const double w = to_double(table.width()), h = to_double(table.height());
    if (selector == "chi") return Observable::constant(1.0, w, h);
    const auto colon = selector.find(':');
    if (colon == std::string::npos) bad_config("unknown observable selector: " + selector);
    const std::string kind = selector.substr(0, colon), arg = selector.substr(colon + 1);
    try {
        if (kind == "basis") {
            const long j = std::stol(arg);
            if (j < 1) bad_config("basis index must be >= 1");
            return Observable::basis(static_cast<std::size_t>(j), w, h);
        }
        if (kind == "const") return Observable::constant(std::stod(arg), w, h);
    } catch (const std::logic_error&) {
        bad_config("bad observable argument: " + selector);
    }
    if (kind == "cos") return Observable::cosine(parse_frequency(arg), w, h);
    if (kind == "sin") return Observable::sine(parse_frequency(arg), w, h);
    bad_config("unknown observable selector: " + selector);
}

// --- config -----------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const std::string& text, const std::filesystem::path& base) {
    const ojson j = parse_json(text);
    if (!j.is_object()) bad_config("config must be a JSON object");
    ExperimentConfig c;
    if (!j.contains("table")) bad_config("config needs a 'table'");
    const auto& t = j["table"];
    if (t.is_string()) {
        const std::filesystem::path p = t.get<std::string>();
        c.table_path = p.is_absolute() || base.empty() ? p : base / p;
    } else if (t.is_object()) {
        c.table = table_from_json(t.dump());
    } else {
        bad_config("'table' must be a path or an inline table");
    }
    if (j.contains("theta")) {
        const auto& th = j["theta"];
        c.theta_count = get_or<std::size_t>(th, "count", c.theta_count);
        c.seed = get_or<std::uint64_t>(th, "seed", c.seed);
        const auto sampler = get_or<std::string>(th, "sampler", "stratified");
        if (sampler == "stratified") {
            c.sampler = ThetaSampler::Stratified;
        } else if (sampler == "uniform") {
            c.sampler = ThetaSampler::Uniform;
        } else {
            bad_config("unknown sampler: " + sampler);
        }
    }
    if (j.contains("window")) {
        const auto& w = j["window"];
        c.N = get_or<double>(w, "N", c.N);
        c.tau = get_or<double>(w, "tau", c.tau);
        c.step = get_or<double>(w, "step", 1.0 / (4.0 * c.N));
    }
    c.observables = get_or<std::vector<std::string>>(j, "observables", c.observables);
    c.m = get_or<int>(j, "m", c.m);
    c.workers = get_or<unsigned>(j, "workers", c.workers);
    if (j.contains("output")) {
        const std::filesystem::path p = get_or<std::string>(j, "output", "");
        c.output_dir = p.is_absolute() || base.empty() ? p : base / p;
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    return from_json(read_file(path), path.parent_path());
}

std::string ExperimentConfig::to_json() const {
    ojson j;
    if (table) {
        j["table"] = table_object(*table);
    } else {
        j["table"] = table_path.string();
    }
    j["theta"] = {{"count", theta_count},
                  {"sampler", sampler == ThetaSampler::Stratified ? "stratified" : "uniform"},
                  {"seed", seed}};
    j["window"] = {{"N", N}, {"tau", tau}, {"step", step}};
    j["observables"] = observables;
    j["m"] = m;
    j["workers"] = workers;
    if (!output_dir.empty()) j["output"] = output_dir.string();
    return j.dump(2);
}

void ExperimentConfig::validate() const {
    if (!(N > 0.0)) bad_config("N must be positive");
    if (!(N < tau)) bad_config("N must be smaller than tau");
    if (theta_count == 0) bad_config("theta count must be positive");
    if (!(step > 0.0)) bad_config("step must be positive");
    if (step > 1.0 / (4.0 * N) * (1.0 + 1e-12)) bad_config("step must not exceed 1/(4N)");
    if (m < 1) bad_config("grid resolution m must be positive");
    if (observables.empty()) bad_config("at least one observable is required");
    if (workers == 0) bad_config("workers must be positive");
}

VHTable ExperimentConfig::resolve_table() const {
    if (table) return *table;
    if (table_path.empty()) bad_config("no table given");
    return read_table(table_path);
}

// --- theta sweep ------------------------------------------------------------

std::vector<double> sample_thetas(ThetaSampler sampler, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(count);
    const double half_pi = std::numbers::pi / 2;
    for (std::size_t i = 0; i < count; ++i) {
        double u = uniform01(rng);
        while (u == 0.0) u = uniform01(rng);
        const double x = sampler == ThetaSampler::Stratified ? (static_cast<double>(i) + u) / static_cast<double>(count) : u;
        out.push_back(std::min(x * half_pi, std::nextafter(half_pi, 0.0)));
    }
    return out;
}

std::vector<double> window_grid(double N, double tau, double step) {
    std::vector<double> out;
    for (std::size_t k = 1;; ++k) {
        const double t = N + static_cast<double>(k) * step;
        if (!(t < tau)) break;
        out.push_back(t);
    }
    return out;
}

double ThetaSetEstimate::measure_at(double tau_prime) const {
    if (samples.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto& s : samples) {
        if (s.hit() && s.first_hit_t < tau_prime) ++n;
    }
    return static_cast<double>(n) / static_cast<double>(samples.size());
}

ThetaSetEstimate theta_sweep(const VHTable& table, const Observable& h, std::span<const double> thetas, double N,
                             double tau, double step, int m, unsigned workers) {
    ThetaSetEstimate est;
    est.observable = h.descriptor();
    est.N = N;
    est.tau = tau;
    est.step = step;
    const std::vector<double> times = window_grid(N, tau, step);
    if (times.empty()) bad_config("time window (N, tau) contains no grid point");
    const Billiard billiard(table);
    const QuadratureGrid grid(table, m);
    est.samples.resize(thetas.size());
    const double threshold = 1.0 / N;
    detail::parallel_for(thetas.size(), workers, [&](std::size_t i) {
        CorrelationOptions opts;
        opts.workers = 1;
        const CorrelationSeries s = correlation(billiard, thetas[i], h, times, grid, opts);
        const auto gap = s.gap();
        ThetaSample& out = est.samples[i];
        out.theta = thetas[i];
        out.commensurable = is_pi_commensurable(thetas[i]);
        out.dropped_fraction = s.dropped_fraction;
        out.min_gap = gap[0];
        out.argmin_t = times[0];
        for (std::size_t k = 0; k < gap.size(); ++k) {
            if (gap[k] < out.min_gap) {
                out.min_gap = gap[k];
                out.argmin_t = times[k];
            }
            if (out.first_hit_t < 0.0 && gap[k] < threshold) out.first_hit_t = times[k];
        }
    });
    for (const auto& s : est.samples) est.hits += s.hit() ? 1 : 0;
    est.measure = static_cast<double>(est.hits) / static_cast<double>(est.samples.size());
    est.half_width = wilson_half_width(est.hits, est.samples.size());
    return est;
}

std::vector<ThetaSetEstimate> theta_sweep(const ExperimentConfig& config) {
    config.validate();
    const VHTable table = config.resolve_table();
    const auto thetas = sample_thetas(config.sampler, config.theta_count, config.seed);
    std::vector<ThetaSetEstimate> out;
    for (const auto& sel : config.observables) {
        out.push_back(theta_sweep(table, parse_observable(sel, table), thetas, config.N, config.tau, config.step,
                                  config.m, config.workers));
    }
    return out;
}

// --- continuity -------------------------------------------------------------

ContinuityReport continuity_probe(const VHTable& a, const VHTable& b, double theta, const Observable& h,
                                  std::span<const double> t_list, int m, const CorrelationOptions& opts) {
    if (!a.same_combinatorics(b)) {
        throw GeometryError(GeometryError::Code::CombinatoricsMismatch, "tables have different combinatorics");
    }
    ContinuityReport r;
    r.distance = to_double(VHTable::parameter_distance(a, b));
    r.t.assign(t_list.begin(), t_list.end());
    if (a == b) {
        const CorrelationSeries s = correlation(a, theta, h, t_list, QuadratureGrid(a, m), opts);
        r.c_a = s.c;
        r.c_b = s.c;
    } else {
        r.c_a = correlation(a, theta, h, t_list, QuadratureGrid(a, m), opts).c;
        r.c_b = correlation(b, theta, h, t_list, QuadratureGrid(b, m), opts).c;
    }
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        r.delta.push_back(std::abs(r.c_a[k] - r.c_b[k]));
        r.max_delta = std::max(r.max_delta, r.delta.back());
    }
    r.modulus = r.distance > 0.0 ? r.max_delta / r.distance : 0.0;
    return r;
}

VHTable perturb_length(const VHTable& table, std::size_t index, const Rational& delta) {
    const VHPolygon& outer = table.outer();
    if (index >= outer.size()) bad_config("side index out of range");
    auto lengths = outer.lengths();
    const Letter l = outer.word()[index];
    const Letter opposite = l == Letter::E ? Letter::W : l == Letter::W ? Letter::E : l == Letter::N ? Letter::S : Letter::N;
    std::size_t best = outer.size();
    for (std::size_t i = 0; i < outer.size(); ++i) {
        if (outer.word()[i] == opposite && (best == outer.size() || lengths[i] > lengths[best])) best = i;
    }
    lengths[index] += delta;
    lengths[best] += delta;
    return VHTable::build(VHPolygon::build(outer.word(), std::move(lengths)), table.holes(), table.inexact());
}

// --- G-delta ledger ---------------------------------------------------------

GDeltaConfig GDeltaConfig::from_json(const std::string& text, const std::filesystem::path& base) {
    const ojson j = parse_json(text);
    if (!j.is_object()) bad_config("config must be a JSON object");
    GDeltaConfig c;
    c.word = get_or<std::string>(j, "word", c.word);
    if (j.contains("area")) {
        const auto band = get_or<std::vector<double>>(j, "area", {});
        if (band.size() != 2) bad_config("'area' must be [min, max]");
        c.area_min = band[0];
        c.area_max = band[1];
    }
    c.Q_list = get_or<std::vector<std::int64_t>>(j, "Q_list", {});
    c.J = get_or<std::size_t>(j, "J", c.J);
    c.N_list = get_or<std::vector<double>>(j, "N_list", c.N_list);
    c.m = get_or<int>(j, "m", c.m);
    c.theta_count = get_or<std::size_t>(j, "theta_count", c.theta_count);
    c.tau_factor = get_or<double>(j, "tau_factor", c.tau_factor);
    c.eta_levels = get_or<std::size_t>(j, "eta_levels", c.eta_levels);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.workers = get_or<unsigned>(j, "workers", c.workers);
    if (j.contains("output")) {
        const std::filesystem::path p = get_or<std::string>(j, "output", "");
        c.output_dir = p.is_absolute() || base.empty() ? p : base / p;
    }
    c.validate();
    return c;
}

GDeltaConfig GDeltaConfig::load(const std::filesystem::path& path) {
    return from_json(read_file(path), path.parent_path());
}

std::string GDeltaConfig::to_json() const {
    ojson j;
    j["word"] = word;
    j["area"] = {area_min, area_max};
    j["Q_list"] = Q_list;
    j["J"] = J;
    j["N_list"] = N_list;
    j["m"] = m;
    j["theta_count"] = theta_count;
    j["tau_factor"] = tau_factor;
    j["eta_levels"] = eta_levels;
    j["seed"] = seed;
    j["workers"] = workers;
    if (!output_dir.empty()) j["output"] = output_dir.string();
    return j.dump(2);
}

void GDeltaConfig::validate() const {
    if (Q_list.empty()) throw LabError(LCode::EmptyQList, "Q_list must not be empty");
    for (std::size_t i = 0; i < Q_list.size(); ++i) {
        if (Q_list[i] < 1) bad_config("Q values must be positive");
        if (i > 0 && Q_list[i] <= Q_list[i - 1]) bad_config("Q_list must be increasing");
    }
    if (J < 1) bad_config("J must be >= 1");
    if (N_list.empty()) bad_config("N_list must not be empty");
    for (double n : N_list) {
        if (!(n > 0.0)) bad_config("N values must be positive");
    }
    if (!(area_min > 0.0) || !(area_max >= area_min)) bad_config("area band must satisfy 0 < min <= max");
    if (m < 1 || theta_count < 1 || workers < 1) bad_config("m, theta_count and workers must be positive");
    if (!(tau_factor > 1.0)) bad_config("tau_factor must exceed 1");
    (void)parse_word(word);
}

namespace {

VHTable random_table_in_band(const GDeltaConfig& c, Rng& rng) {
    const CombinatoricsWord word = parse_word(c.word);
    const auto max_units = static_cast<std::int64_t>(std::ceil(std::sqrt(c.area_max) * 1000.0));
    for (int attempt = 0; attempt < 10000; ++attempt) {
        VHPolygon poly = random_polygon_for_word(word, rng, 1000, max_units);
        const double area = to_double(poly.area());
        if (area >= c.area_min && area <= c.area_max) return VHTable::build(std::move(poly), {}, true);
    }
    bad_config("no random table with area in the requested band");
}

double first_probe_delta(const VHTable& a, const VHTable& b, double theta, const Observable& h, double t, int m) {
    const std::array<double, 1> times{t};
    CorrelationOptions opts;
    opts.workers = 1;
    return continuity_probe(a, b, theta, h, times, m, opts).max_delta;
}

}  // namespace

GDeltaReport gdelta_demo(const GDeltaConfig& config) {
    config.validate();
    Rng rng(config.seed);
    GDeltaReport report;
    for (std::size_t i = 0; i < config.Q_list.size(); ++i) {
        const std::int64_t Q = config.Q_list[i];
        const VHTable raw = random_table_in_band(config, rng);
        const VHTable a = approximate_pq(raw, Q, 1.0 / static_cast<double>(Q));
        report.tables.push_back(a);
        const TilingCertificate cert = *a.certificate();
        const std::string hash = hex_hash(table_hash(a));

        Rational cap = 0;
        for (const auto& l : a.outer().lengths()) cap = std::max(cap, l);
        std::vector<Rational> ladder{cap};
        for (std::size_t l = 0; l < config.eta_levels; ++l) {
            ladder.emplace_back(1, Q * (std::int64_t{1} << l));
        }
        const auto thetas = sample_thetas(ThetaSampler::Stratified, config.theta_count, config.seed + i);

        for (std::size_t j = 1; j <= config.J; ++j) {
            const Observable h = Observable::basis(j, a);
            for (double N : config.N_list) {
                GDeltaRow row;
                row.table_index = i;
                row.Q = Q;
                row.p = cert.p;
                row.q = cert.q;
                row.table_hash = hash;
                row.j = j;
                row.observable = h.descriptor();
                row.N = N;
                row.tau_max = config.tau_factor * N;
                row.target = 1.0 - 1.0 / (N * N);
                const ThetaSetEstimate est =
                    theta_sweep(a, h, thetas, N, row.tau_max, 1.0 / (4.0 * N), config.m, config.workers);
                row.measure = est.measure;
                row.half_width = est.half_width;
                for (double tau = 2.0 * N; tau <= row.tau_max * (1.0 + 1e-12); tau *= 2.0) {
                    if (est.measure_at(tau) >= row.target) {
                        row.empirical_tau = tau;
                        break;
                    }
                }
                if (row.empirical_tau < 0.0 && est.measure >= row.target) row.empirical_tau = row.tau_max;

                struct Probe {
                    double theta;
                    double t;
                };
                std::vector<Probe> probes;
                for (const auto& s : est.samples) {
                    if (s.hit() && probes.size() < 3) probes.push_back({s.theta, s.first_hit_t});
                }
                if (probes.empty()) probes.push_back({est.samples[0].theta, est.samples[0].argmin_t});
                const double allowed = 1.0 / (2.0 * N);
                for (std::size_t r = 0; r < ladder.size(); ++r) {
                    bool ok = true;
                    try {
                        const VHTable b = perturb_length(a, 0, ladder[r]);
                        for (const auto& pr : probes) {
                            if (first_probe_delta(a, b, pr.theta, h, pr.t, config.m) > allowed) {
                                ok = false;
                                break;
                            }
                        }
                    } catch (const GeometryError&) {
                        ok = false;
                    }
                    if (ok) {
                        row.empirical_eta = to_double(ladder[r]);
                        row.eta_capped = r == 0;
                        break;
                    }
                }
                report.rows.push_back(row);
            }
        }
    }
    return report;
}

// --- writers ----------------------------------------------------------------

std::string sweep_csv(const ThetaSetEstimate& est) {
    std::ostringstream os;
    os << "theta,min_gap,argmin_t,first_hit_t,hit,commensurable,dropped_fraction\n";
    for (const auto& s : est.samples) {
        os << format_g17(s.theta) << ',' << format_g17(s.min_gap) << ',' << format_g17(s.argmin_t) << ','
           << (s.hit() ? format_g17(s.first_hit_t) : std::string()) << ',' << (s.hit() ? 1 : 0) << ','
           << (s.commensurable ? 1 : 0) << ',' << format_g17(s.dropped_fraction) << '\n';
    }
    return os.str();
}

std::string sweep_json(const ExperimentConfig& config, const VHTable& table,
                       const std::vector<ThetaSetEstimate>& estimates) {
    ojson j;
    j["tool"] = "vhb";
    j["version"] = version();
    j["table"] = table_object(table);
    j["table_hash"] = hex_hash(table_hash(table));
    j["seed"] = config.seed;
    j["sampler"] = config.sampler == ThetaSampler::Stratified ? "stratified" : "uniform";
    j["theta_count"] = config.theta_count;
    j["N"] = config.N;
    j["tau"] = config.tau;
    j["step"] = config.step;
    j["m"] = config.m;
    ojson list = ojson::array();
    for (const auto& e : estimates) {
        list.push_back({{"observable", e.observable},
                        {"hits", e.hits},
                        {"samples", e.samples.size()},
                        {"measure", e.measure},
                        {"half_width", e.half_width}});
    }
    j["estimates"] = list;
    return j.dump(2) + "\n";
}

std::string correlation_json(const VHTable& table, double theta, const Observable& h, int m,
                             const CorrelationSeries& series, std::uint64_t seed) {
    ojson j;
    j["tool"] = "vhb";
    j["version"] = version();
    j["table"] = table_object(table);
    j["table_hash"] = hex_hash(table_hash(table));
    j["theta"] = theta;
    j["theta_commensurable"] = is_pi_commensurable(theta);
    j["observable"] = h.descriptor();
    j["m"] = m;
    j["seed"] = seed;
    j["samples"] = series.c.size();
    j["mean"] = series.mean;
    j["reference"] = series.reference;
    j["norm_sq"] = series.norm_sq;
    j["dropped_fraction"] = series.dropped_fraction;
    return j.dump(2) + "\n";
}

std::string continuity_csv(const ContinuityReport& r) {
    std::ostringstream os;
    os << "t,C_a,C_b,delta\n";
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        os << format_g17(r.t[k]) << ',' << format_g17(r.c_a[k]) << ',' << format_g17(r.c_b[k]) << ','
           << format_g17(r.delta[k]) << '\n';
    }
    return os.str();
}

std::string continuity_json(const VHTable& a, const VHTable& b, double theta, const Observable& h, int m,
                            const ContinuityReport& r) {
    ojson j;
    j["tool"] = "vhb";
    j["version"] = version();
    j["table_a"] = table_object(a);
    j["table_b"] = table_object(b);
    j["theta"] = theta;
    j["observable"] = h.descriptor();
    j["m"] = m;
    j["distance"] = r.distance;
    j["max_delta"] = r.max_delta;
    j["modulus"] = r.modulus;
    return j.dump(2) + "\n";
}

std::string gdelta_csv(const GDeltaReport& r) {
    std::ostringstream os;
    os << "table,Q,p,q,table_hash,j,observable,N,tau_max,measure,half_width,target,empirical_tau,empirical_eta,"
          "eta_capped\n";
    for (const auto& row : r.rows) {
        os << row.table_index << ',' << row.Q << ',' << row.p << ',' << row.q << ',' << row.table_hash << ','
           << row.j << ',' << '"' << row.observable << '"' << ',' << format_g17(row.N) << ','
           << format_g17(row.tau_max) << ',' << format_g17(row.measure) << ',' << format_g17(row.half_width) << ','
           << format_g17(row.target) << ',' << (row.empirical_tau >= 0.0 ? format_g17(row.empirical_tau) : "")
           << ',' << format_g17(row.empirical_eta) << ',' << (row.eta_capped ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string gdelta_json(const GDeltaConfig& config, const GDeltaReport& r) {
    ojson j;
    j["tool"] = "vhb";
    j["version"] = version();
    j["config"] = ojson::parse(config.to_json());
    j["config"].erase("workers");
    j["config"].erase("output");
    ojson tables = ojson::array();
    for (const auto& t : r.tables) {
        ojson e = table_object(t);
        e["hash"] = hex_hash(table_hash(t));
        e["p"] = t.certificate()->p;
        e["q"] = t.certificate()->q;
        tables.push_back(e);
    }
    j["tables"] = tables;
    j["rows"] = r.rows.size();
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LabError(LCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw LabError(LCode::Io, "write failed for " + path.string());
}

std::vector<ThetaSetEstimate> run_theta_sweep(const ExperimentConfig& config) {
    const VHTable table = config.resolve_table();
    auto estimates = theta_sweep(config);
    if (!config.output_dir.empty()) {
        write_text(config.output_dir / "sweep.json", sweep_json(config, table, estimates));
        for (std::size_t k = 0; k < estimates.size(); ++k) {
            const auto& e = estimates[k];
            write_text(config.output_dir / ("sweep_" + std::to_string(k) + ".csv"), sweep_csv(e));
            std::vector<double> th, gap;
            for (const auto& s : e.samples) {
                th.push_back(s.theta);
                gap.push_back(s.min_gap);
            }
            write_text(config.output_dir / ("sweep_" + std::to_string(k) + ".svg"),
                       series_svg(th, {gap}, {"min gap"}, e.observable + ": min gap over window vs theta"));
        }
    }
    return estimates;
}

GDeltaReport run_gdelta_demo(const GDeltaConfig& config) {
    GDeltaReport r = gdelta_demo(config);
    if (!config.output_dir.empty()) {
        write_text(config.output_dir / "ledger.csv", gdelta_csv(r));
        write_text(config.output_dir / "ledger.json", gdelta_json(config, r));
    }
    return r;
}

}  // namespace vhb
