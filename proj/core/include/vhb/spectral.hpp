#pragma once

/// Observables, quadrature, the tile-averaging projector and correlation
/// series for the directional flow.
///
/// The phase space for a direction class [theta] is the table times the four
/// velocity labels. Measures are normalized to total mass one, so <chi, chi> = 1
/// regardless of the table's area.

#include "vhb/dynamics.hpp"
#include "vhb/geometry.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhb {

class SpectralError : public std::runtime_error {
public:
    enum class Code {
        GridMismatch,
        UnalignedGrid,
        BadGrid,
        BadTimeGrid,
        TooManySingular,
        EmptySeries,
        BadObservable,
        BadCertificate,
    };

    SpectralError(Code code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

const char* to_string(SpectralError::Code code);

struct Frequency {
    int kx = 0;
    int ky = 0;

    auto operator<=>(const Frequency&) const = default;
};

/// Representatives k > 0 (lexicographically) of the pairs {k, -k}, ordered by
/// max(|kx|,|ky|) and then lexicographically. Returns the first `count`.
std::vector<Frequency> frequency_order(std::size_t count);

/// Real trigonometric polynomial
///   h(x,y) = sum_k c_k exp(2 pi i (kx x / W + ky y / H))
/// over the outer bounding box W x H, extended periodically to the plane.
/// Coefficients are kept Hermitian (c_{-k} = conj(c_k)).
class Observable {
public:
    Observable(double width, double height);

    static Observable constant(double value, double width, double height);
    static Observable cosine(Frequency k, double width, double height, double amplitude = 1.0);
    static Observable sine(Frequency k, double width, double height, double amplitude = 1.0);

    /// Basis function h_j, j >= 1: h_1 = 1, then cos and sin for each
    /// frequency of frequency_order() in turn.
    static Observable basis(std::size_t j, double width, double height);
    static Observable basis(std::size_t j, const VHTable& table);

    /// Adds c at k and conj(c) at -k (only the real part at k = 0).
    Observable& add(Frequency k, std::complex<double> c);

    double operator()(double x, double y) const;
    double operator()(Vec2 z) const { return (*this)(z.x, z.y); }

    /// Sup of |grad h|, from the coefficients.
    double lipschitz() const;

    std::complex<double> coefficient(Frequency k) const;
    const std::map<Frequency, std::complex<double>>& coefficients() const { return coeffs_; }
    double width() const { return width_; }
    double height() const { return height_; }
    const std::string& descriptor() const { return descriptor_; }

private:
    friend class TileAverage;

    struct Term {
        double fx;  ///< 2 pi kx / W
        double fy;  ///< 2 pi ky / H
        std::complex<double> c;  ///< coefficient at the representative k
    };

    void rebuild();

    double width_;
    double height_;
    std::map<Frequency, std::complex<double>> coeffs_;
    double constant_ = 0.0;
    std::vector<Term> terms_;
    std::string descriptor_ = "0";
};

using Field = std::function<double(Vec2)>;

/// Zero outside the closed table.
Field restrict(Field f, const VHTable& table);

/// Midpoint rule on the cells of side 1/m whose centers lie inside the table.
/// Each (cell, velocity label) pair carries weight 1/(4 * size()).
class QuadratureGrid {
public:
    QuadratureGrid(const VHTable& table, int m);

    const VHTable& table() const { return table_; }
    int resolution() const { return m_; }
    std::size_t size() const { return points_.size(); }
    std::size_t phase_size() const { return 4 * points_.size(); }
    Vec2 point(std::size_t i) const { return points_[i]; }
    const std::vector<Vec2>& points() const { return points_; }
    std::array<int, 2> cell(std::size_t i) const { return cells_[i]; }
    int columns() const { return columns_; }
    int rows() const { return rows_; }
    /// Grid index of cell (i, j), or -1 when that cell is not in the table.
    long index_of(int i, int j) const;
    double weight() const { return 0.25 / static_cast<double>(points_.size()); }
    std::uint64_t id() const { return id_; }

    /// m divisible by p and q, and the table lies on the (1/p, 1/q) lattice.
    bool aligned(const TilingCertificate& cert) const;

private:
    VHTable table_;
    int m_;
    int columns_ = 0;
    int rows_ = 0;
    std::vector<Vec2> points_;
    std::vector<std::array<int, 2>> cells_;
    std::vector<long> lookup_;
    std::uint64_t id_;
};

/// Values of a label-independent function at the grid points.
struct SampledObservable {
    std::uint64_t grid_id = 0;
    std::vector<double> values;
};

SampledObservable sample(const Field& f, const QuadratureGrid& grid);
/// h_a: h at the grid points (every grid point lies in the table).
SampledObservable restrict(const Observable& h, const QuadratureGrid& grid);
SampledObservable characteristic(const QuadratureGrid& grid);

/// Weighted sum over all (point, label) pairs; blocked pairwise summation in
/// index order, so the result does not depend on threading.
double inner(const SampledObservable& a, const SampledObservable& b, const QuadratureGrid& grid);
double norm(const SampledObservable& a, const QuadratureGrid& grid);

/// Discrete tile average on an aligned grid: each point gets the mean of h_a
/// over its N lattice translates inside the table.
SampledObservable tile_average(const SampledObservable& h_a, const TilingCertificate& cert,
                               const QuadratureGrid& grid);

/// h_c = h_a - (h_d restricted to the table), sampled.
SampledObservable continuous_part(const Observable& h, const TilingCertificate& cert, const QuadratureGrid& grid);

/// h^d as a function on the plane: (1/N) sum over tiles T of h(corner_T + u)
/// where u is z reduced into the fundamental tile [0,1/p) x [0,1/q).
class TileAverage {
public:
    TileAverage(const Observable& h, const VHTable& table, const TilingCertificate& cert);

    double operator()(Vec2 z) const;
    Vec2 reduce(Vec2 z) const;
    const std::vector<Point>& tile_corners() const { return corners_; }
    const TilingCertificate& certificate() const { return cert_; }

private:
    TilingCertificate cert_;
    std::vector<Point> corners_;
    double constant_ = 0.0;
    std::vector<Observable::Term> terms_;  ///< coefficients already tile-averaged
};

struct CorrelationOptions {
    std::uint64_t event_budget = kMaxEventsPerFlow;
    unsigned workers = 0;  ///< 0: hardware concurrency
    double max_dropped_fraction = 1e-3;
};

struct CorrelationSeries {
    std::vector<double> t;
    std::vector<double> c;        ///< <U_t h_a, h_a>
    double mean = 0.0;            ///< <h_a, chi>
    double reference = 0.0;       ///< |<h_a, chi>|^2
    double norm_sq = 0.0;         ///< <h_a, h_a>
    double dropped_fraction = 0.0;

    std::vector<double> gap() const;
};

/// (f, g): accumulates <U_t f, g> = sum w f(phi_t x) g(x).
struct FieldPair {
    Field evolved;
    Field fixed;
};

struct CrossCorrelation {
    std::vector<std::vector<double>> values;  ///< [pair][time index]
    double dropped_fraction = 0.0;
};

/// Flows every (grid point, label) through `t_grid` incrementally. Points
/// whose orbit reaches a reflex corner are dropped from the whole series and
/// the remaining mass renormalized. Deterministic for any worker count.
CrossCorrelation correlate_fields(const Billiard& billiard, double theta, const QuadratureGrid& grid,
                                  std::span<const FieldPair> pairs, std::span<const double> t_grid,
                                  const CorrelationOptions& opts = {});

CorrelationSeries correlation(const Billiard& billiard, double theta, const Observable& h,
                              std::span<const double> t_grid, const QuadratureGrid& grid,
                              const CorrelationOptions& opts = {});
CorrelationSeries correlation(const VHTable& table, double theta, const Observable& h,
                              std::span<const double> t_grid, const QuadratureGrid& grid,
                              const CorrelationOptions& opts = {});

/// Uniform grid start, start+step, ... up to and including `stop` (within
/// step/1e6).
std::vector<double> time_grid(double start, double stop, double step);

struct ChainReport {
    double t = 0.0;
    double mean = 0.0;       ///< <h_a, chi>
    double reference = 0.0;  ///< <h_a, chi>^2
    std::array<double, 4> lines{};
    double cross_term = 0.0;  ///< <U_t h_c,a, h_d,a>
    double e4_lhs = 0.0;         ///< |<U_t g, h_a>| with g = h_d,a - <h_a,chi> chi
    double e4_rhs = 0.0;         ///< ||U_t g|| ||h_a||, both over the retained grid points
    double e4_rhs_static = 0.0;  ///< ||g|| ||h_a||; equals e4_rhs up to quadrature error
    double e4_slack = 0.0;       ///< e4_rhs - e4_lhs
    double evolved_norm = 0.0;  ///< ||U_t (h_d,a - <h_a,chi> chi)|| on the grid
    double line_discrepancy = 0.0;
    bool identities_hold = false;
    bool e4_holds = false;
    double dropped_fraction = 0.0;
};

/// Evaluates the four-line decomposition of <U_t h_a, h_a> - |<h_a,chi>|^2
/// into discrete and continuous parts, and the Cauchy-Schwarz bound on the
/// discrete term. Lines 1-3 must agree within `tolerance`; line 4 differs
/// from line 3 by exactly the cross term. e4_holds compares against
/// e4_rhs, for which the bound is exact on the grid.
ChainReport correlation_chain_check(const VHTable& table, const TilingCertificate& cert, double theta,
                                    const Observable& h, double t, const QuadratureGrid& grid,
                                    const CorrelationOptions& opts = {}, double tolerance = 1e-10);

enum class OscillationStatus { Holds, Violated, HypothesisNotMet };

const char* to_string(OscillationStatus s);

struct OscillationReport {
    OscillationStatus status = OscillationStatus::HypothesisNotMet;
    double lipschitz = 0.0;
    double norm = 0.0;   ///< ||h_a||
    double delta = 0.0;  ///< eps / (lipschitz * norm)
    double bound = 0.0;  ///< eps / norm
    double max_oscillation = 0.0;
    std::size_t pairs_checked = 0;
};

/// Samples the fundamental tile on an n x n midpoint lattice (n >= 24) and
/// scans every pair closer than delta, with distances taken modulo the tile
/// periods; compares the oscillation of h_d with eps/||h||. Requires
/// max(1/p, 1/q) < delta; otherwise reports HypothesisNotMet.
OscillationReport oscillation_bound_check(const Observable& h, const TilingCertificate& cert,
                                          const QuadratureGrid& grid, double eps);

struct CesaroAverages {
    std::vector<double> squared;   ///< (1/K) sum gap^2
    std::vector<double> absolute;  ///< (1/K) sum |gap|
};

CesaroAverages cesaro_gap(const CorrelationSeries& series);

/// `t,C,gap,cesaro_sq,cesaro_abs` with %.17g values.
std::string correlation_csv(const CorrelationSeries& series);

/// printf %.17g.
std::string format_g17(double v);

/// Fixed-order pairwise sum.
double pairwise_sum(std::span<const double> values);

}  // namespace vhb
