#include "vhb/spectral.hpp"

#include "parallel.hpp"
#include "vhb/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

namespace vhb {

const char* to_string(SpectralError::Code code) {
    using C = SpectralError::Code;
    switch (code) {
        case C::GridMismatch: return "GridMismatch";
        case C::UnalignedGrid: return "UnalignedGrid";
        case C::BadGrid: return "BadGrid";
        case C::BadTimeGrid: return "BadTimeGrid";
        case C::TooManySingular: return "TooManySingular";
        case C::EmptySeries: return "EmptySeries";
        case C::BadObservable: return "BadObservable";
        case C::BadCertificate: return "BadCertificate";
    }
    return "Unknown";
}

const char* to_string(OscillationStatus s) {
    switch (s) {
        case OscillationStatus::Holds: return "holds";
        case OscillationStatus::Violated: return "violated";
        case OscillationStatus::HypothesisNotMet: return "hypothesis not met";
    }
    return "unknown";
}

using SCode = SpectralError::Code;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kBlock = 512;
constexpr int kTileScan = 24;

bool positive_rep(Frequency k) { return k.kx > 0 || (k.kx == 0 && k.ky > 0); }

}  // namespace

std::vector<Frequency> frequency_order(std::size_t count) {
    std::vector<Frequency> out;
    for (int r = 1; out.size() < count; ++r) {
        for (int kx = -r; kx <= r && out.size() < count; ++kx) {
            for (int ky = -r; ky <= r && out.size() < count; ++ky) {
                if (std::max(std::abs(kx), std::abs(ky)) != r) continue;
                const Frequency k{kx, ky};
                if (positive_rep(k)) out.push_back(k);
            }
        }
    }
    return out;
}

// --- Observable -------------------------------------------------------------

Observable::Observable(double width, double height) : width_(width), height_(height) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw SpectralError(SCode::BadObservable, "observable box must have positive size");
    }
}

Observable Observable::constant(double value, double width, double height) {
    Observable h(width, height);
    h.add({0, 0}, value);
    h.descriptor_ = "const(" + format_g17(value) + ")";
    return h;
}

Observable Observable::cosine(Frequency k, double width, double height, double amplitude) {
    Observable h(width, height);
    if (k == Frequency{}) {
        h.add(k, amplitude);
    } else {
        h.add(k, 0.5 * amplitude);
    }
    h.descriptor_ = "cos(" + std::to_string(k.kx) + "," + std::to_string(k.ky) + ")";
    if (amplitude != 1.0) h.descriptor_ = format_g17(amplitude) + "*" + h.descriptor_;
    return h;
}

Observable Observable::sine(Frequency k, double width, double height, double amplitude) {
    Observable h(width, height);
    h.add(k, {0.0, -0.5 * amplitude});
    h.descriptor_ = "sin(" + std::to_string(k.kx) + "," + std::to_string(k.ky) + ")";
    if (amplitude != 1.0) h.descriptor_ = format_g17(amplitude) + "*" + h.descriptor_;
    return h;
}

Observable Observable::basis(std::size_t j, double width, double height) {
    if (j == 0) throw SpectralError(SCode::BadObservable, "basis indices start at 1");
    Observable h(width, height);
    if (j == 1) {
        h = constant(1.0, width, height);
    } else {
        const std::size_t idx = j - 2;
        const Frequency k = frequency_order(idx / 2 + 1).back();
        h = idx % 2 == 0 ? cosine(k, width, height) : sine(k, width, height);
    }
    h.descriptor_ = "h" + std::to_string(j) + "=" + h.descriptor_;
    return h;
}

Observable Observable::basis(std::size_t j, const VHTable& table) {
    return basis(j, to_double(table.width()), to_double(table.height()));
}

Observable& Observable::add(Frequency k, std::complex<double> c) {
    if (k == Frequency{}) {
        coeffs_[k] += c.real();
    } else if (positive_rep(k)) {
        coeffs_[k] += c;
    } else {
        coeffs_[{-k.kx, -k.ky}] += std::conj(c);
    }
    descriptor_ = "custom";
    rebuild();
    return *this;
}

void Observable::rebuild() {
    constant_ = 0.0;
    terms_.clear();
    for (const auto& [k, c] : coeffs_) {
        if (k == Frequency{}) {
            constant_ = c.real();
        } else if (c != 0.0) {
            terms_.push_back({kTwoPi * k.kx / width_, kTwoPi * k.ky / height_, c});
        }
    }
}

double Observable::operator()(double x, double y) const {
    double s = constant_;
    for (const auto& t : terms_) {
        const double phi = t.fx * x + t.fy * y;
        s += 2.0 * (t.c.real() * std::cos(phi) - t.c.imag() * std::sin(phi));
    }
    return s;
}

double Observable::lipschitz() const {
    double l = 0.0;
    for (const auto& t : terms_) l += 2.0 * std::abs(t.c) * std::hypot(t.fx, t.fy);
    return l;
}

std::complex<double> Observable::coefficient(Frequency k) const {
    if (k == Frequency{} || positive_rep(k)) {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? std::complex<double>{} : it->second;
    }
    auto it = coeffs_.find({-k.kx, -k.ky});
    return it == coeffs_.end() ? std::complex<double>{} : std::conj(it->second);
}

Field restrict(Field f, const VHTable& table) {
    auto billiard = std::make_shared<Billiard>(table);
    return [f = std::move(f), billiard](Vec2 z) {
        return billiard->locate(z) == Location::Exterior ? 0.0 : f(z);
    };
}

// --- QuadratureGrid ---------------------------------------------------------

QuadratureGrid::QuadratureGrid(const VHTable& table, int m) : table_(table), m_(m) {
    if (m < 1) throw SpectralError(SCode::BadGrid, "grid resolution must be positive");
    const Rational cols = table.width() * m;
    const Rational rows = table.height() * m;
    const Rational total = cols * rows;
    if (total > Rational(200'000'000)) throw SpectralError(SCode::BadGrid, "grid is too large");
    columns_ = static_cast<int>(-floor_rational(-cols));
    rows_ = static_cast<int>(-floor_rational(-rows));

    std::vector<const Side*> verticals;
    for (const auto& s : table.sides()) {
        if (s.vertical()) verticals.push_back(&s);
    }
    lookup_.assign(static_cast<std::size_t>(columns_) * static_cast<std::size_t>(rows_), -1);
    std::vector<Rational> xs;
    for (int j = 0; j < rows_; ++j) {
        const Rational yc(2 * j + 1, 2 * m);
        xs.clear();
        for (const Side* s : verticals) {
            const Rational& lo = s->start.y < s->end.y ? s->start.y : s->end.y;
            const Rational& hi = s->start.y < s->end.y ? s->end.y : s->start.y;
            if (lo <= yc && yc < hi) xs.push_back(s->start.x);
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // cells with xs[k] < (2i+1)/(2m) < xs[k+1]
            const Rational a = (xs[k] * (2 * m) - 1) / 2;
            const Rational b = (xs[k + 1] * (2 * m) - 1) / 2;
            const auto i_min = static_cast<int>(floor_rational(a)) + 1;
            const auto i_max = static_cast<int>(-floor_rational(-b)) - 1;
            for (int i = std::max(i_min, 0); i <= std::min(i_max, columns_ - 1); ++i) {
                lookup_[static_cast<std::size_t>(j) * static_cast<std::size_t>(columns_) + static_cast<std::size_t>(i)] =
                    static_cast<long>(points_.size());
                points_.push_back({(2.0 * i + 1.0) / (2.0 * m), (2.0 * j + 1.0) / (2.0 * m)});
                cells_.push_back({i, j});
            }
        }
    }
    // Row-major order by (j, i) is what the scan produced; keep it.
    if (points_.empty()) throw SpectralError(SCode::BadGrid, "no grid cell center lies inside the table");

    std::uint64_t h = table_hash(table);
    h ^= static_cast<std::uint64_t>(m) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    id_ = h;
}

long QuadratureGrid::index_of(int i, int j) const {
    if (i < 0 || j < 0 || i >= columns_ || j >= rows_) return -1;
    return lookup_[static_cast<std::size_t>(j) * static_cast<std::size_t>(columns_) + static_cast<std::size_t>(i)];
}

bool QuadratureGrid::aligned(const TilingCertificate& cert) const {
    return cert.p > 0 && cert.q > 0 && m_ % cert.p == 0 && m_ % cert.q == 0 &&
           lattice_admits(table_, cert.p, cert.q);
}

// --- sampled observables ----------------------------------------------------

namespace {

void check_grid(const SampledObservable& a, const QuadratureGrid& grid) {
    if (a.grid_id != grid.id() || a.values.size() != grid.size()) {
        throw SpectralError(SCode::GridMismatch, "sampled observable belongs to a different grid");
    }
}

// Mean over all (label, point) pairs of f(idx), idx = label * n + point,
// summed pairwise inside fixed blocks, then pairwise across blocks.
template <class F>
double blocked_mean(std::size_t n_points, F&& f) {
    const std::size_t total = 4 * n_points;
    const std::size_t blocks = (total + kBlock - 1) / kBlock;
    std::vector<double> partial(blocks);
    std::vector<double> buf;
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * kBlock, hi = std::min(total, lo + kBlock);
        buf.clear();
        for (std::size_t idx = lo; idx < hi; ++idx) buf.push_back(f(idx % n_points));
        partial[b] = pairwise_sum(buf);
    }
    return pairwise_sum(partial) / static_cast<double>(total);
}

}  // namespace

SampledObservable sample(const Field& f, const QuadratureGrid& grid) {
    SampledObservable out{grid.id(), {}};
    out.values.reserve(grid.size());
    for (const Vec2& z : grid.points()) out.values.push_back(f(z));
    return out;
}

SampledObservable restrict(const Observable& h, const QuadratureGrid& grid) {
    SampledObservable out{grid.id(), {}};
    out.values.reserve(grid.size());
    for (const Vec2& z : grid.points()) out.values.push_back(h(z));
    return out;
}

SampledObservable characteristic(const QuadratureGrid& grid) {
    return SampledObservable{grid.id(), std::vector<double>(grid.size(), 1.0)};
}

double inner(const SampledObservable& a, const SampledObservable& b, const QuadratureGrid& grid) {
    check_grid(a, grid);
    check_grid(b, grid);
    return blocked_mean(grid.size(), [&](std::size_t i) { return a.values[i] * b.values[i]; });
}

double norm(const SampledObservable& a, const QuadratureGrid& grid) { return std::sqrt(inner(a, a, grid)); }

SampledObservable tile_average(const SampledObservable& h_a, const TilingCertificate& cert,
                               const QuadratureGrid& grid) {
    check_grid(h_a, grid);
    if (!grid.aligned(cert)) {
        throw SpectralError(SCode::UnalignedGrid, "grid resolution " + std::to_string(grid.resolution()) +
                                                      " is not aligned to the (" + std::to_string(cert.p) + "," +
                                                      std::to_string(cert.q) + ") lattice");
    }
    const int sp = grid.resolution() / static_cast<int>(cert.p);
    const int sq = grid.resolution() / static_cast<int>(cert.q);
    const std::size_t offsets = static_cast<std::size_t>(sp) * static_cast<std::size_t>(sq);
    std::vector<double> sum(offsets, 0.0);
    std::vector<std::int64_t> count(offsets, 0);
    auto offset_of = [&](std::size_t i) {
        const auto c = grid.cell(i);
        return static_cast<std::size_t>(c[1] % sq) * static_cast<std::size_t>(sp) + static_cast<std::size_t>(c[0] % sp);
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t o = offset_of(i);
        sum[o] += h_a.values[i];
        ++count[o];
    }
    for (std::size_t o = 0; o < offsets; ++o) {
        if (count[o] != cert.tile_count) {
            throw SpectralError(SCode::BadCertificate, "tile count does not match the certificate");
        }
    }
    SampledObservable out{grid.id(), std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t o = offset_of(i);
        out.values[i] = sum[o] / static_cast<double>(count[o]);
    }
    return out;
}

SampledObservable continuous_part(const Observable& h, const TilingCertificate& cert, const QuadratureGrid& grid) {
    SampledObservable out = restrict(h, grid);
    const SampledObservable hd = tile_average(out, cert, grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= hd.values[i];
    return out;
}

// --- TileAverage ------------------------------------------------------------

TileAverage::TileAverage(const Observable& h, const VHTable& table, const TilingCertificate& cert) : cert_(cert) {
    if (cert.p <= 0 || cert.q <= 0 || !lattice_admits(table, cert.p, cert.q)) {
        throw SpectralError(SCode::BadCertificate, "table does not lie on the (1/p,1/q) lattice");
    }
    const auto nx = static_cast<std::int64_t>(floor_rational(table.width() * cert.p));
    const auto ny = static_cast<std::int64_t>(floor_rational(table.height() * cert.q));
    for (std::int64_t j = 0; j < ny; ++j) {
        for (std::int64_t i = 0; i < nx; ++i) {
            const Point center{Rational(2 * i + 1, 2 * cert.p), Rational(2 * j + 1, 2 * cert.q)};
            if (contains_point(table, center) == Location::Interior) {
                corners_.push_back({Rational(i, cert.p), Rational(j, cert.q)});
            }
        }
    }
    if (static_cast<std::int64_t>(corners_.size()) != cert.tile_count) {
        throw SpectralError(SCode::BadCertificate, "tile count does not match the certificate");
    }
    constant_ = h.constant_;
    std::vector<Vec2> corners;
    for (const auto& c : corners_) corners.push_back({to_double(c.x), to_double(c.y)});
    const double n = static_cast<double>(corners.size());
    for (const auto& t : h.terms_) {
        std::vector<double> re, im;
        for (const auto& c : corners) {
            const double phi = t.fx * c.x + t.fy * c.y;
            re.push_back(std::cos(phi));
            im.push_back(std::sin(phi));
        }
        const std::complex<double> s{pairwise_sum(re) / n, pairwise_sum(im) / n};
        terms_.push_back({t.fx, t.fy, t.c * s});
    }
}

Vec2 TileAverage::reduce(Vec2 z) const {
    const double p = static_cast<double>(cert_.p), q = static_cast<double>(cert_.q);
    return {z.x - std::floor(z.x * p) / p, z.y - std::floor(z.y * q) / q};
}

double TileAverage::operator()(Vec2 z) const {
    const Vec2 u = reduce(z);
    double s = constant_;
    for (const auto& t : terms_) {
        const double phi = t.fx * u.x + t.fy * u.y;
        s += 2.0 * (t.c.real() * std::cos(phi) - t.c.imag() * std::sin(phi));
    }
    return s;
}

// --- correlation ------------------------------------------------------------

std::vector<double> CorrelationSeries::gap() const {
    std::vector<double> g;
    g.reserve(c.size());
    for (double v : c) g.push_back(std::abs(v - reference));
    return g;
}

std::vector<double> time_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop >= start) || !(start >= 0.0)) {
        throw SpectralError(SCode::BadTimeGrid, "time grid needs 0 <= start <= stop and step > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-6));
    std::vector<double> out;
    out.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
}

namespace {

void check_time_grid(std::span<const double> t) {
    if (t.empty()) throw SpectralError(SCode::BadTimeGrid, "time grid is empty");
    if (!(t[0] >= 0.0)) throw SpectralError(SCode::BadTimeGrid, "time grid must start at t >= 0");
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (!(t[k] > t[k - 1])) throw SpectralError(SCode::BadTimeGrid, "time grid must be increasing");
    }
}

struct BlockResult {
    std::vector<double> sums;  // [pair * K + k]
    std::size_t retained = 0;
};

}  // namespace

CrossCorrelation correlate_fields(const Billiard& billiard, double theta, const QuadratureGrid& grid,
                                  std::span<const FieldPair> pairs, std::span<const double> t_grid,
                                  const CorrelationOptions& opts) {
    check_time_grid(t_grid);
    if (!(billiard.table() == grid.table())) {
        throw SpectralError(SCode::GridMismatch, "grid was built for a different table");
    }
    const auto dirs = direction_class(theta);
    const std::size_t n = grid.size();
    const std::size_t total = 4 * n;
    const std::size_t K = t_grid.size();
    const std::size_t P = pairs.size();
    const std::size_t blocks = (total + kBlock - 1) / kBlock;
    std::vector<BlockResult> results(blocks);

    detail::parallel_for(blocks, opts.workers, [&](std::size_t b) {
        const std::size_t lo = b * kBlock, hi = std::min(total, lo + kBlock);
        const std::size_t len = hi - lo;
        std::vector<char> dropped(len, 0);
        std::vector<PhasePoint> states(len);
        std::vector<double> fixed(P * len);
        for (std::size_t l = 0; l < len; ++l) {
            const Vec2 z = grid.point((lo + l) % n);
            for (std::size_t p = 0; p < P; ++p) fixed[p * len + l] = pairs[p].fixed(z);
        }
        BlockResult& res = results[b];
        std::vector<double> buf;
        for (;;) {
            for (std::size_t l = 0; l < len; ++l) {
                states[l] = {grid.point((lo + l) % n), dirs[(lo + l) / n]};
            }
            res.sums.assign(P * K, 0.0);
            bool restart = false;
            double prev = 0.0;
            for (std::size_t k = 0; k < K && !restart; ++k) {
                const double dt = t_grid[k] - prev;
                prev = t_grid[k];
                if (dt > 0.0) {
                    for (std::size_t l = 0; l < len; ++l) {
                        if (dropped[l]) continue;
                        if (!billiard.advance(states[l], dt, opts.event_budget)) {
                            dropped[l] = 1;
                            restart = true;
                        }
                    }
                }
                if (restart) break;
                for (std::size_t p = 0; p < P; ++p) {
                    buf.clear();
                    for (std::size_t l = 0; l < len; ++l) {
                        if (!dropped[l]) buf.push_back(pairs[p].evolved(states[l].position) * fixed[p * len + l]);
                    }
                    res.sums[p * K + k] = pairwise_sum(buf);
                }
            }
            if (!restart) break;
        }
        res.retained = static_cast<std::size_t>(std::count(dropped.begin(), dropped.end(), 0));
    });

    std::size_t retained = 0;
    for (const auto& r : results) retained += r.retained;
    CrossCorrelation out;
    out.dropped_fraction = static_cast<double>(total - retained) / static_cast<double>(total);
    if (out.dropped_fraction > opts.max_dropped_fraction || retained == 0) {
        throw SpectralError(SCode::TooManySingular,
                            "singular orbits carry " + format_g17(out.dropped_fraction) + " of the mass");
    }
    out.values.assign(P, std::vector<double>(K));
    std::vector<double> partial(blocks);
    for (std::size_t p = 0; p < P; ++p) {
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t b = 0; b < blocks; ++b) partial[b] = results[b].sums[p * K + k];
            out.values[p][k] = pairwise_sum(partial) / static_cast<double>(retained);
        }
    }
    return out;
}

CorrelationSeries correlation(const Billiard& billiard, double theta, const Observable& h,
                              std::span<const double> t_grid, const QuadratureGrid& grid,
                              const CorrelationOptions& opts) {
    const Field f = [&h](Vec2 z) { return h(z); };
    const std::array<FieldPair, 1> pairs{{{f, f}}};
    CrossCorrelation cc = correlate_fields(billiard, theta, grid, pairs, t_grid, opts);
    CorrelationSeries s;
    s.t.assign(t_grid.begin(), t_grid.end());
    s.c = std::move(cc.values[0]);
    const SampledObservable ha = restrict(h, grid);
    s.mean = inner(ha, characteristic(grid), grid);
    s.reference = s.mean * s.mean;
    s.norm_sq = inner(ha, ha, grid);
    s.dropped_fraction = cc.dropped_fraction;
    return s;
}

CorrelationSeries correlation(const VHTable& table, double theta, const Observable& h,
                              std::span<const double> t_grid, const QuadratureGrid& grid,
                              const CorrelationOptions& opts) {
    return correlation(Billiard(table), theta, h, t_grid, grid, opts);
}

ChainReport correlation_chain_check(const VHTable& table, const TilingCertificate& cert, double theta,
                                    const Observable& h, double t, const QuadratureGrid& grid,
                                    const CorrelationOptions& opts, double tolerance) {
    if (!grid.aligned(cert)) {
        throw SpectralError(SCode::UnalignedGrid, "chain check needs a grid aligned to the tile lattice");
    }
    const Billiard billiard(table);
    const TileAverage hd(h, table, cert);
    const SampledObservable ha = restrict(h, grid);
    const SampledObservable chi = characteristic(grid);
    const double c = inner(ha, chi, grid);

    const Field fh = [&h](Vec2 z) { return h(z); };
    const Field fd = [&hd](Vec2 z) { return hd(z); };
    const Field fc = [&h, &hd](Vec2 z) { return h(z) - hd(z); };
    const Field fg = [&hd, c](Vec2 z) { return hd(z) - c; };
    const Field fg2 = [&hd, c](Vec2 z) {
        const double g = hd(z) - c;
        return g * g;
    };
    const Field fh2 = [&h](Vec2 z) {
        const double v = h(z);
        return v * v;
    };
    const Field one = [](Vec2) { return 1.0; };
    const std::array<FieldPair, 8> pairs{{
        {fh, fh},    // A
        {fg, fh},    // B1
        {one, fh},   // B2 / c
        {fc, fh},    // B3
        {fc, fc},    // continuous self term
        {fc, fd},    // cross term
        {fg2, one},  // |U_t g|^2
        {one, fh2},  // |h_a|^2 on the retained points
    }};
    const std::array<double, 1> times{t};
    const CrossCorrelation cc = correlate_fields(billiard, theta, grid, pairs, times, opts);
    auto v = [&](std::size_t i) { return cc.values[i][0]; };

    ChainReport r;
    r.t = t;
    r.mean = c;
    r.reference = c * c;
    r.lines[0] = v(0) - r.reference;
    r.lines[1] = v(1) + c * v(2) + v(3) - r.reference;
    r.lines[2] = v(1) + v(3);
    r.lines[3] = v(1) + v(4);
    r.cross_term = v(5);
    r.evolved_norm = std::sqrt(std::max(0.0, v(6)));
    r.dropped_fraction = cc.dropped_fraction;

    SampledObservable g = sample(fd, grid);
    const double dmean = inner(g, chi, grid);
    for (double& x : g.values) x -= dmean;
    r.e4_lhs = std::abs(v(1));
    r.e4_rhs = r.evolved_norm * std::sqrt(std::max(0.0, v(7)));
    r.e4_rhs_static = norm(g, grid) * norm(ha, grid);
    r.e4_slack = r.e4_rhs - r.e4_lhs;
    r.e4_holds = r.e4_slack >= -tolerance;

    r.line_discrepancy = std::max({std::abs(r.lines[1] - r.lines[0]), std::abs(r.lines[2] - r.lines[0]),
                                   std::abs(r.lines[2] - r.lines[3] - r.cross_term)});
    r.identities_hold = r.line_discrepancy <= tolerance;
    return r;
}

OscillationReport oscillation_bound_check(const Observable& h, const TilingCertificate& cert,
                                          const QuadratureGrid& grid, double eps) {
    OscillationReport r;
    const SampledObservable ha = restrict(h, grid);
    r.lipschitz = h.lipschitz();
    r.norm = norm(ha, grid);
    const double scale = r.lipschitz * r.norm;
    r.delta = scale > 0.0 ? eps / scale : std::numeric_limits<double>::infinity();
    r.bound = r.norm > 0.0 ? eps / r.norm : std::numeric_limits<double>::infinity();
    const double mesh = std::max(1.0 / static_cast<double>(cert.p), 1.0 / static_cast<double>(cert.q));
    if (!(mesh < r.delta) || !grid.aligned(cert)) {
        r.status = OscillationStatus::HypothesisNotMet;
        return r;
    }
    const TileAverage hd(h, grid.table(), cert);
    const double tw = 1.0 / static_cast<double>(cert.p), th = 1.0 / static_cast<double>(cert.q);
    const int n = std::max(kTileScan, grid.resolution() / static_cast<int>(std::min(cert.p, cert.q)));
    std::vector<Vec2> pts;
    std::vector<double> vals;
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
            const Vec2 z{(a + 0.5) * tw / n, (b + 0.5) * th / n};
            pts.push_back(z);
            vals.push_back(hd(z));
        }
    }
    // h_d is tile-periodic, so distances wrap around the tile.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double dx = std::abs(pts[i].x - pts[j].x), dy = std::abs(pts[i].y - pts[j].y);
            dx = std::min(dx, tw - dx);
            dy = std::min(dy, th - dy);
            if (std::hypot(dx, dy) >= r.delta) continue;
            ++r.pairs_checked;
            r.max_oscillation = std::max(r.max_oscillation, std::abs(vals[i] - vals[j]));
        }
    }
    r.status = r.max_oscillation <= r.bound ? OscillationStatus::Holds : OscillationStatus::Violated;
    return r;
}

CesaroAverages cesaro_gap(const CorrelationSeries& series) {
    if (series.c.empty()) throw SpectralError(SCode::EmptySeries, "Cesaro average of an empty series");
    CesaroAverages out;
    double sq = 0.0, ab = 0.0;
    std::size_t k = 0;
    for (double g : series.gap()) {
        ++k;
        sq += g * g;
        ab += std::abs(g);
        out.squared.push_back(sq / static_cast<double>(k));
        out.absolute.push_back(ab / static_cast<double>(k));
    }
    return out;
}

std::string correlation_csv(const CorrelationSeries& series) {
    std::ostringstream os;
    os << "t,C,gap,cesaro_sq,cesaro_abs\n";
    if (series.c.empty()) return os.str();
    const auto gap = series.gap();
    const auto ces = cesaro_gap(series);
    for (std::size_t k = 0; k < series.c.size(); ++k) {
        os << format_g17(series.t[k]) << ',' << format_g17(series.c[k]) << ',' << format_g17(gap[k]) << ','
           << format_g17(ces.squared[k]) << ',' << format_g17(ces.absolute[k]) << '\n';
    }
    return os.str();
}

}  // namespace vhb
