#pragma once

/// Experiment drivers: direction-set sweeps, table-perturbation probes and
/// the table-sequence ledger, with deterministic CSV/JSON writers.

#include "vhb/dynamics.hpp"
#include "vhb/geometry.hpp"
#include "vhb/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhb {

class LabError : public std::runtime_error {
public:
    enum class Code { BadConfig, EmptyQList, Io };

    LabError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

const char* to_string(LabError::Code code);

/// Library version string.
const char* version();

/// Observable selectors: "basis:J", "cos:KX,KY", "sin:KX,KY", "const:V" or
/// "chi". Frequencies refer to the outer bounding box of `table`.
Observable parse_observable(const std::string& selector, const VHTable& table);

enum class ThetaSampler { Stratified, Uniform };

struct ExperimentConfig {
    std::filesystem::path table_path;
    std::optional<VHTable> table;  ///< inline table; wins over table_path
    std::size_t theta_count = 100;
    ThetaSampler sampler = ThetaSampler::Stratified;
    std::uint64_t seed = 1;
    double N = 10.0;
    double tau = 200.0;
    double step = 0.025;
    std::vector<std::string> observables{"basis:1"};
    int m = 16;
    std::filesystem::path output_dir;
    unsigned workers = 1;

    /// Parses the JSON config format; relative paths resolve against `base`.
    static ExperimentConfig from_json(const std::string& text, const std::filesystem::path& base = {});
    static ExperimentConfig load(const std::filesystem::path& path);
    std::string to_json() const;

    /// N < tau, positive counts, step <= 1/(4N).
    void validate() const;
    VHTable resolve_table() const;
};

/// Direction samples in (0, pi/2), deterministic in (sampler, count, seed).
std::vector<double> sample_thetas(ThetaSampler sampler, std::size_t count, std::uint64_t seed);

struct ThetaSample {
    double theta = 0.0;
    double min_gap = 0.0;        ///< over the window grid
    double argmin_t = 0.0;
    double first_hit_t = -1.0;   ///< first window time with gap < 1/N, or -1
    bool commensurable = false;  ///< theta/pi rational within tolerance
    double dropped_fraction = 0.0;

    bool hit() const { return first_hit_t >= 0.0; }
};

struct ThetaSetEstimate {
    std::string observable;
    double N = 0.0;
    double tau = 0.0;
    double step = 0.0;
    std::vector<ThetaSample> samples;
    std::size_t hits = 0;
    double measure = 0.0;     ///< hits / samples
    double half_width = 0.0;  ///< 95% Wilson score half-width

    /// Estimate restricted to the window (N, tau_prime), tau_prime <= tau.
    double measure_at(double tau_prime) const;
};

/// Times N + k*step strictly inside (N, tau).
std::vector<double> window_grid(double N, double tau, double step);

ThetaSetEstimate theta_sweep(const VHTable& table, const Observable& h, std::span<const double> thetas, double N,
                             double tau, double step, int m, unsigned workers);
/// One estimate per configured observable.
std::vector<ThetaSetEstimate> theta_sweep(const ExperimentConfig& config);

struct ContinuityReport {
    double distance = 0.0;  ///< sup-norm parameter distance
    std::vector<double> t;
    std::vector<double> c_a;
    std::vector<double> c_b;
    std::vector<double> delta;  ///< |C_a - C_b|
    double max_delta = 0.0;
    double modulus = 0.0;  ///< max_delta / distance (0 when distance is 0)
};

/// Throws GeometryError(CombinatoricsMismatch) when the words differ.
ContinuityReport continuity_probe(const VHTable& a, const VHTable& b, double theta, const Observable& h,
                                  std::span<const double> t_list, int m, const CorrelationOptions& opts = {});

/// Adds `delta` to outer side `index` and the same amount to the longest
/// side of the opposite letter (earliest on ties), keeping closure and holes.
VHTable perturb_length(const VHTable& table, std::size_t index, const Rational& delta);

struct GDeltaConfig {
    std::string word = "ENWNWS";
    double area_min = 1.0;
    double area_max = 10.0;
    std::vector<std::int64_t> Q_list;
    std::size_t J = 1;
    std::vector<double> N_list{10.0};
    int m = 8;
    std::size_t theta_count = 16;
    double tau_factor = 4.0;  ///< tau_max = tau_factor * N
    std::size_t eta_levels = 4;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::filesystem::path output_dir;

    static GDeltaConfig from_json(const std::string& text, const std::filesystem::path& base = {});
    static GDeltaConfig load(const std::filesystem::path& path);
    std::string to_json() const;
    void validate() const;
};

struct GDeltaRow {
    std::size_t table_index = 0;
    std::int64_t Q = 0;
    std::int64_t p = 0;
    std::int64_t q = 0;
    std::string table_hash;
    std::size_t j = 0;
    std::string observable;
    double N = 0.0;
    double tau_max = 0.0;
    double measure = 0.0;
    double half_width = 0.0;
    double target = 0.0;            ///< 1 - 1/N^2
    double empirical_tau = -1.0;    ///< smallest ladder tau reaching target, or -1
    double empirical_eta = 0.0;     ///< largest ladder d keeping |dC| <= 1/(2N)
    bool eta_capped = false;        ///< the cap rung passed
};

struct GDeltaReport {
    std::vector<VHTable> tables;
    std::vector<GDeltaRow> rows;
};

GDeltaReport gdelta_demo(const GDeltaConfig& config);

// --- writers (byte-deterministic) -------------------------------------------

std::string sweep_csv(const ThetaSetEstimate& est);
std::string sweep_json(const ExperimentConfig& config, const VHTable& table,
                       const std::vector<ThetaSetEstimate>& estimates);
std::string correlation_json(const VHTable& table, double theta, const Observable& h, int m,
                             const CorrelationSeries& series, std::uint64_t seed);
std::string continuity_csv(const ContinuityReport& r);
std::string continuity_json(const VHTable& a, const VHTable& b, double theta, const Observable& h, int m,
                            const ContinuityReport& r);
std::string gdelta_csv(const GDeltaReport& r);
std::string gdelta_json(const GDeltaConfig& config, const GDeltaReport& r);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Runs the sweep and writes sweep_<k>.csv, sweep.json and gap plots into
/// config.output_dir (when set).
std::vector<ThetaSetEstimate> run_theta_sweep(const ExperimentConfig& config);
GDeltaReport run_gdelta_demo(const GDeltaConfig& config);

}  // namespace vhb
