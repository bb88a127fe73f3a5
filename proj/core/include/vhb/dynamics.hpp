#pragma once

/// Directional billiard flow on VH-tables.
///
/// For a base angle theta in (0, pi/2) the velocity is always one of the four
/// vectors (sx cos theta, sy sin theta); a vertical side flips sx, a
/// horizontal side flips sy. Positions are binary64 while the boundary stays
/// the exact table; every collision snaps the hit coordinate back onto the
/// exact side line.

#include "vhb/geometry.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhb {

class DynamicsError : public std::runtime_error {
public:
    enum class Code {
        BadTheta,
        OutsideTable,
        NotInward,
        StalledState,
        CornerHit,
        SingularOrbit,
        EventBudgetExceeded,
        NegativeTime,
    };

    DynamicsError(Code code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

const char* to_string(DynamicsError::Code code);

inline constexpr double kCornerEps = 1e-12;
inline constexpr std::uint64_t kMaxEventsPerFlow = 10'000'000;

struct DirectionState {
    double theta = 0.0;  ///< base angle in (0, pi/2)
    int sx = 1;
    int sy = 1;

    /// Validates theta and the sign pair.
    static DirectionState make(double theta, int sx, int sy);

    Vec2 velocity() const;
    DirectionState reversed() const { return {theta, -sx, -sy}; }

    friend bool operator==(const DirectionState&, const DirectionState&) = default;
};

/// All four members of the direction class of `theta`, in the fixed order
/// (+,+), (-,+), (+,-), (-,-).
std::array<DirectionState, 4> direction_class(double theta);

struct PhasePoint {
    Vec2 position;
    DirectionState dir;
};

struct Event {
    Vec2 point;
    int side = -1;    ///< side index into VHTable::sides()
    int vertex = -1;  ///< vertex index when the hit is within kCornerEps of one
    double time = 0.0;

    bool is_corner() const { return vertex >= 0; }
};

struct Collision {
    Vec2 point;
    int side = -1;
    int vertex = -1;
    double time = 0.0;  ///< cumulative time since the orbit start
    DirectionState dir_after;
};

struct OrbitSegmentList {
    PhasePoint initial;
    std::vector<Collision> collisions;
    PhasePoint final_state;
    double total_time = 0.0;
    bool singular = false;  ///< stopped early at a reflex corner
};

struct BoundaryVertex {
    Vec2 point;
    bool convex = true;  ///< interior angle pi/2; otherwise 3pi/2
};

/// Float view of a table prepared for repeated flow queries. Immutable and
/// safe to share between threads.
class Billiard {
public:
    explicit Billiard(const VHTable& table);

    const VHTable& table() const { return table_; }
    const std::vector<BoundaryVertex>& vertices() const { return vertices_; }

    Location locate(Vec2 p, double eps = kGeomEps) const;

    /// Earliest boundary hit along the ray. Throws CornerHit when the hit is
    /// within kCornerEps of a vertex.
    Event next_event(const PhasePoint& state) const;

    /// Advances by time t >= 0. Convex corners reflect both components;
    /// reflex corners throw SingularOrbit.
    PhasePoint flow(const PhasePoint& state, double t, std::uint64_t budget = kMaxEventsPerFlow) const;

    /// In-place variant without precondition checks, for hot loops. Returns
    /// false instead of throwing when a reflex corner is met.
    bool advance(PhasePoint& state, double t, std::uint64_t budget = kMaxEventsPerFlow) const;

    OrbitSegmentList orbit(const PhasePoint& state, double max_time, std::uint64_t max_events) const;

private:
    struct FlatSide {
        bool vertical;
        double c;   ///< x for vertical sides, y for horizontal ones
        double lo;  ///< range along the side
        double hi;
        int v_lo;   ///< vertex index at the lo end
        int v_hi;
        int inward; ///< sign of the inward normal component
    };

    struct RawEvent {
        double t;
        int side;
        int vertex;
        Vec2 point;
    };

    RawEvent find_event(const Vec2& pos, const Vec2& vel) const;
    void reflect_outward(PhasePoint& s) const;
    void check_state(const PhasePoint& s) const;
    template <bool kThrow>
    bool advance_impl(PhasePoint& s, double t, std::uint64_t budget, std::vector<Collision>* log,
                      std::uint64_t max_events, double time_offset) const;

    VHTable table_;
    std::vector<FlatSide> sides_;
    std::vector<BoundaryVertex> vertices_;
};

Event next_event(const VHTable& table, const PhasePoint& state);
PhasePoint flow(const VHTable& table, const PhasePoint& state, double t);
OrbitSegmentList orbit(const VHTable& table, const PhasePoint& state, double max_time,
                       std::uint64_t max_events);

/// Reflection parities selecting one of the four mirrored copies of the
/// table. Starts at (+1,+1); a vertical-side reflection toggles ex, a
/// horizontal one toggles ey.
struct UnfoldedFrame {
    int ex = 1;
    int ey = 1;

    friend bool operator==(const UnfoldedFrame&, const UnfoldedFrame&) = default;
};

struct UnfoldedPoint {
    Vec2 point;  ///< developed position: the orbit straightened in the plane
    UnfoldedFrame frame;
    double time = 0.0;
};

/// Developed path of an orbit: the initial point, every collision, and the
/// final point. Consecutive points are collinear along the initial velocity.
std::vector<UnfoldedPoint> unfold_position(const OrbitSegmentList& orbit);

/// Position of a table-local point in the copy `frame` of the four-copy
/// picture, where the copies' bounding boxes have a corner at (+-1, +-1).
Vec2 surface_embedding(const UnfoldedFrame& frame, Vec2 local);

/// True when theta/pi is within 1e-12 of a fraction whose continued-fraction
/// expansion terminates within 40 terms with denominator <= 10^4. Labels
/// experiment output only.
bool is_pi_commensurable(double theta);

}  // namespace vhb
