#include "vhb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vhb {

const char* to_string(DynamicsError::Code code) {
    using C = DynamicsError::Code;
    switch (code) {
        case C::BadTheta: return "BadTheta";
        case C::OutsideTable: return "OutsideTable";
        case C::NotInward: return "NotInward";
        case C::StalledState: return "StalledState";
        case C::CornerHit: return "CornerHit";
        case C::SingularOrbit: return "SingularOrbit";
        case C::EventBudgetExceeded: return "EventBudgetExceeded";
        case C::NegativeTime: return "NegativeTime";
    }
    return "Unknown";
}

using DCode = DynamicsError::Code;

DirectionState DirectionState::make(double theta, int sx, int sy) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
        throw DynamicsError(DCode::BadTheta, "theta must lie in (0, pi/2), got " + std::to_string(theta));
    }
    if ((sx != 1 && sx != -1) || (sy != 1 && sy != -1)) {
        throw DynamicsError(DCode::BadTheta, "direction signs must be +1 or -1");
    }
    return {theta, sx, sy};
}

Vec2 DirectionState::velocity() const { return {sx * std::cos(theta), sy * std::sin(theta)}; }

std::array<DirectionState, 4> direction_class(double theta) {
    return {DirectionState::make(theta, 1, 1), DirectionState::make(theta, -1, 1),
            DirectionState::make(theta, 1, -1), DirectionState::make(theta, -1, -1)};
}

Billiard::Billiard(const VHTable& table) : table_(table) {
    const auto& sides = table_.sides();
    // Vertex k is the start of side k; polygons are contiguous in sides().
    std::size_t begin = 0;
    while (begin < sides.size()) {
        std::size_t end = begin;
        while (end < sides.size() && sides[end].polygon == sides[begin].polygon) ++end;
        const std::size_t n = end - begin;
        for (std::size_t k = 0; k < n; ++k) {
            const Side& prev = sides[begin + (k + n - 1) % n];
            const Side& cur = sides[begin + k];
            const double dx0 = to_double(prev.end.x - prev.start.x), dy0 = to_double(prev.end.y - prev.start.y);
            const double dx1 = to_double(cur.end.x - cur.start.x), dy1 = to_double(cur.end.y - cur.start.y);
            vertices_.push_back({{to_double(cur.start.x), to_double(cur.start.y)}, dx0 * dy1 - dy0 * dx1 > 0});
        }
        for (std::size_t k = 0; k < n; ++k) {
            const Side& s = sides[begin + k];
            const int v_start = static_cast<int>(begin + k);
            const int v_end = static_cast<int>(begin + (k + 1) % n);
            FlatSide f{};
            f.vertical = s.vertical();
            if (f.vertical) {
                f.c = to_double(s.start.x);
                const bool up = s.end.y > s.start.y;
                f.lo = to_double(up ? s.start.y : s.end.y);
                f.hi = to_double(up ? s.end.y : s.start.y);
                f.v_lo = up ? v_start : v_end;
                f.v_hi = up ? v_end : v_start;
                f.inward = up ? -1 : 1;
            } else {
                f.c = to_double(s.start.y);
                const bool right = s.end.x > s.start.x;
                f.lo = to_double(right ? s.start.x : s.end.x);
                f.hi = to_double(right ? s.end.x : s.start.x);
                f.v_lo = right ? v_start : v_end;
                f.v_hi = right ? v_end : v_start;
                f.inward = right ? 1 : -1;
            }
            sides_.push_back(f);
        }
        begin = end;
    }
}

Location Billiard::locate(Vec2 p, double eps) const {
    bool inside = false;
    for (const auto& s : sides_) {
        const double along = s.vertical ? p.y : p.x;
        const double across = s.vertical ? p.x : p.y;
        if (std::abs(across - s.c) <= eps && along >= s.lo - eps && along <= s.hi + eps) return Location::Boundary;
        if (s.vertical && s.c > p.x && s.lo <= p.y && p.y < s.hi) inside = !inside;
    }
    return inside ? Location::Interior : Location::Exterior;
}

Billiard::RawEvent Billiard::find_event(const Vec2& pos, const Vec2& vel) const {
    RawEvent best{std::numeric_limits<double>::infinity(), -1, -1, {}};
    double best_along = 0.0;
    for (std::size_t k = 0; k < sides_.size(); ++k) {
        const FlatSide& s = sides_[k];
        const double v_across = s.vertical ? vel.x : vel.y;
        // A ray from inside meets a side against its inward normal.
        if (v_across * s.inward >= 0.0) continue;
        const double t = (s.c - (s.vertical ? pos.x : pos.y)) / v_across;
        if (!(t > 0.0) || t >= best.t) continue;
        const double along = (s.vertical ? pos.y : pos.x) + (s.vertical ? vel.y : vel.x) * t;
        if (along < s.lo - kCornerEps || along > s.hi + kCornerEps) continue;
        best.t = t;
        best.side = static_cast<int>(k);
        best_along = along;
    }
    if (best.side < 0) return best;
    const FlatSide& s = sides_[static_cast<std::size_t>(best.side)];
    if (std::abs(best_along - s.lo) <= kCornerEps) {
        best.vertex = s.v_lo;
    } else if (std::abs(best_along - s.hi) <= kCornerEps) {
        best.vertex = s.v_hi;
    }
    if (best.vertex >= 0) {
        best.point = vertices_[static_cast<std::size_t>(best.vertex)].point;
    } else {
        best.point = s.vertical ? Vec2{s.c, best_along} : Vec2{best_along, s.c};
    }
    return best;
}

void Billiard::check_state(const PhasePoint& s) const {
    (void)DirectionState::make(s.dir.theta, s.dir.sx, s.dir.sy);
    const Vec2 v = s.dir.velocity();
    if (v.x == 0.0 || v.y == 0.0) throw DynamicsError(DCode::StalledState, "velocity is parallel to an axis");
    if (locate(s.position) == Location::Exterior) {
        throw DynamicsError(DCode::OutsideTable, "position (" + std::to_string(s.position.x) + ", " +
                                                     std::to_string(s.position.y) + ") is outside the table");
    }
}

void Billiard::reflect_outward(PhasePoint& s) const {
    const Vec2 v = s.dir.velocity();
    bool flip_x = false, flip_y = false;
    for (const auto& f : sides_) {
        const double along = f.vertical ? s.position.y : s.position.x;
        const double across = f.vertical ? s.position.x : s.position.y;
        if (std::abs(across - f.c) > kGeomEps || along < f.lo - kGeomEps || along > f.hi + kGeomEps) continue;
        const double v_across = f.vertical ? v.x : v.y;
        if (v_across * f.inward < 0.0) (f.vertical ? flip_x : flip_y) = true;
    }
    if (flip_x) s.dir.sx = -s.dir.sx;
    if (flip_y) s.dir.sy = -s.dir.sy;
}

template <bool kThrow>
bool Billiard::advance_impl(PhasePoint& s, double t, std::uint64_t budget, std::vector<Collision>* log,
                            std::uint64_t max_events, double time_offset) const {
    const double c = std::cos(s.dir.theta);
    const double sn = std::sin(s.dir.theta);
    double remaining = t;
    double elapsed = 0.0;
    std::uint64_t events = 0;
    while (remaining > 0.0) {
        if (log && events >= max_events) break;
        const Vec2 v{s.dir.sx * c, s.dir.sy * sn};
        const RawEvent ev = find_event(s.position, v);
        if (ev.side < 0) {
            throw DynamicsError(DCode::OutsideTable, "ray escaped the table; start point is not inside");
        }
        if (ev.t > remaining) {
            s.position.x += v.x * remaining;
            s.position.y += v.y * remaining;
            elapsed += remaining;
            break;
        }
        s.position = ev.point;
        remaining -= ev.t;
        elapsed += ev.t;
        if (ev.vertex >= 0) {
            if (!vertices_[static_cast<std::size_t>(ev.vertex)].convex) {
                if (log) log->push_back({ev.point, ev.side, ev.vertex, time_offset + elapsed, s.dir});
                if constexpr (kThrow) {
                    throw DynamicsError(DCode::SingularOrbit,
                                        "orbit hits reflex vertex " + std::to_string(ev.vertex));
                }
                return false;
            }
            s.dir.sx = -s.dir.sx;
            s.dir.sy = -s.dir.sy;
        } else if (sides_[static_cast<std::size_t>(ev.side)].vertical) {
            s.dir.sx = -s.dir.sx;
        } else {
            s.dir.sy = -s.dir.sy;
        }
        if (log) log->push_back({ev.point, ev.side, ev.vertex, time_offset + elapsed, s.dir});
        if (++events > budget) {
            throw DynamicsError(DCode::EventBudgetExceeded,
                                "more than " + std::to_string(budget) + " collisions in one flow call");
        }
    }
    if (log) {
        // orbit() reads the consumed time back through total_time
        log->push_back({s.position, -2, -1, time_offset + elapsed, s.dir});
    }
    return true;
}

bool Billiard::advance(PhasePoint& state, double t, std::uint64_t budget) const {
    return advance_impl<false>(state, t, budget, nullptr, 0, 0.0);
}

Event Billiard::next_event(const PhasePoint& state) const {
    check_state(state);
    const Vec2 v = state.dir.velocity();
    if (locate(state.position) == Location::Boundary) {
        PhasePoint probe = state;
        reflect_outward(probe);
        if (probe.dir != state.dir) throw DynamicsError(DCode::NotInward, "velocity points out of the table");
    }
    const RawEvent ev = find_event(state.position, v);
    if (ev.side < 0) throw DynamicsError(DCode::OutsideTable, "ray never meets the boundary");
    if (ev.vertex >= 0) {
        throw DynamicsError(DCode::CornerHit, "ray meets vertex " + std::to_string(ev.vertex));
    }
    return Event{ev.point, ev.side, ev.vertex, ev.t};
}

PhasePoint Billiard::flow(const PhasePoint& state, double t, std::uint64_t budget) const {
    if (t < 0.0) throw DynamicsError(DCode::NegativeTime, "flow time must be nonnegative");
    check_state(state);
    PhasePoint s = state;
    if (t == 0.0) return s;
    reflect_outward(s);
    advance_impl<true>(s, t, budget, nullptr, 0, 0.0);
    return s;
}

OrbitSegmentList Billiard::orbit(const PhasePoint& state, double max_time, std::uint64_t max_events) const {
    check_state(state);
    OrbitSegmentList out;
    out.initial = state;
    out.final_state = state;
    if (max_events == 0 || !(max_time > 0.0)) return out;
    PhasePoint s = state;
    reflect_outward(s);
    std::vector<Collision> log;
    const bool ok = advance_impl<false>(s, max_time, kMaxEventsPerFlow, &log, max_events, 0.0);
    out.singular = !ok;
    if (ok) {
        out.total_time = log.back().time;
        log.pop_back();
    } else {
        out.total_time = log.back().time;
    }
    out.collisions = std::move(log);
    out.final_state = s;
    return out;
}

Event next_event(const VHTable& table, const PhasePoint& state) { return Billiard(table).next_event(state); }

PhasePoint flow(const VHTable& table, const PhasePoint& state, double t) { return Billiard(table).flow(state, t); }

OrbitSegmentList orbit(const VHTable& table, const PhasePoint& state, double max_time, std::uint64_t max_events) {
    return Billiard(table).orbit(state, max_time, max_events);
}

std::vector<UnfoldedPoint> unfold_position(const OrbitSegmentList& orbit) {
    std::vector<UnfoldedPoint> out;
    UnfoldedFrame frame;
    // developed = (ex * x + ax, ey * y + ay)
    double ax = 0.0, ay = 0.0;
    auto develop = [&](Vec2 p) { return Vec2{frame.ex * p.x + ax, frame.ey * p.y + ay}; };
    out.push_back({orbit.initial.position, frame, 0.0});
    DirectionState prev = orbit.initial.dir;
    for (const auto& c : orbit.collisions) {
        const Vec2 d = develop(c.point);
        if (c.dir_after.sx != prev.sx) {
            ax += 2.0 * c.point.x * frame.ex;
            frame.ex = -frame.ex;
        }
        if (c.dir_after.sy != prev.sy) {
            ay += 2.0 * c.point.y * frame.ey;
            frame.ey = -frame.ey;
        }
        out.push_back({d, frame, c.time});
        prev = c.dir_after;
    }
    if (!orbit.singular) out.push_back({develop(orbit.final_state.position), frame, orbit.total_time});
    return out;
}

Vec2 surface_embedding(const UnfoldedFrame& frame, Vec2 local) {
    const Point corner = placement_corner();
    return {frame.ex * (to_double(corner.x) + local.x), frame.ey * (to_double(corner.y) + local.y)};
}

bool is_pi_commensurable(double theta) {
    const double r = theta / std::numbers::pi;
    double x = r;
    // convergents h/k
    double h_prev = 1.0, h = std::floor(x);
    double k_prev = 0.0, k = 1.0;
    double frac = x - std::floor(x);
    for (int depth = 0; depth < 40; ++depth) {
        if (k > 1e4) return false;
        if (std::abs(r - h / k) < 1e-12) return true;
        if (frac < 1e-15) return false;
        x = 1.0 / frac;
        const double a = std::floor(x);
        frac = x - a;
        const double h_next = a * h + h_prev;
        const double k_next = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    return false;
}

}  // namespace vhb
