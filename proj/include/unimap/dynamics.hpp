#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "unimap/geometry.hpp"
#include "unimap/map.hpp"
#include "unimap/normal_form.hpp"

namespace unimap {

// ---------------------------------------------------------------------------
// Orbits

enum class Direction { Forward, Backward };
enum class Termination { Budget, Escaped, Converged };

std::string to_string(Termination t);

struct OrbitEntry {
    long n = 0;
    Point z;
};

struct OrbitTrace {
    Direction direction = Direction::Forward;
    std::vector<OrbitEntry> entries;
    Termination reason = Termination::Budget;
};

/// Forward orbit by apply (backward by inverse_apply). Stops after n_max
/// steps, when |z_n| exceeds escape_radius, or when a step leaves the point
/// unchanged (a fixed point).
OrbitTrace iterate(const MapSpec& map, Point z, int n_max,
                   double escape_radius = std::numeric_limits<double>::infinity(),
                   Direction direction = Direction::Forward);

/// G^n(z) from the normal form: (x + n(psi(y) + C), y) when D = 0, and the
/// finite sum x + nC + sum_{k<n} psi(y + kD), y + nD otherwise. Negative n
/// runs the inverse.
Point iterate_closed_form(const NormalForm& nf, Point z, long n);

// ---------------------------------------------------------------------------
// Fixed points

enum class FixedSetKind { Empty, Lines, Bands, WholePlane };

std::string to_string(FixedSetKind k);

/// Fix(G) described in normal heights r: each r is the line
/// {alpha x + beta y = r} in the original frame. Bands are closed ranges of
/// r on which psi + C vanishes identically. kind is Bands when any band is
/// present; isolated lines found alongside are still listed in `lines`.
struct FixedPointSet {
    FixedSetKind kind = FixedSetKind::Empty;
    std::vector<double> lines;
    std::vector<Interval> bands;
    Interval window;
    double alpha = 0.0;
    double beta = 1.0;

    /// Point at parameter s on the line of height r.
    Point point_on_line(double r, double s) const { return {beta * s + alpha * r, -alpha * s + beta * r}; }
    /// Distance from z to the nearest reported line or band.
    double distance(Point z) const;
};

FixedPointSet fixed_set(const NormalForm& nf, Interval window);

/// Gauss-Newton search for G(z) = z from random starts in the window. DG - I
/// is singular everywhere, so steps use its pseudo-inverse. Returns the
/// converged points inside the window (residual <= 1e-12 (1 + |z|)).
std::vector<Point> newton_fixed_points(const MapSpec& map, const Rect& window, int starts,
                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Segments, bands and disks

struct MaximalInterval {
    double lo = 0.0;
    double hi = 0.0;
    /// The endpoint is the window edge rather than a zero of psi.
    bool lo_at_window = false;
    bool hi_at_window = false;
    int sign = 0;
};

/// Components of {y : psi(y) != 0} inside the window. Requires C = D = 0.
std::vector<MaximalInterval> maximal_intervals(const NormalForm& nf, Interval window);

/// Whether the vertical segment {x} x I is disjoint from its image and
/// preimage. Throws PreconditionViolation when psi vanishes in I.
bool segment_disjointness(const NormalForm& nf, double x, const MaximalInterval& interval);

/// Least n~ (for the rotated bounding box of K) such that G^n(segment z-w)
/// misses K for |n| > n~. Requires C = D = 0; throws BandViolation when the
/// segment meets a zero of psi.
long escape_segment(const NormalForm& nf, Point z, Point w, const Rect& K);

/// Same bound for an arbitrary horizontal displacement g(y) that does not
/// vanish on the segment's heights.
long horizontal_escape_bound(const NormalForm& nf, const std::function<double(double)>& g, Point z,
                             Point w, const Rect& K);

struct Disk {
    Point center;
    double radius = 0.0;
};

enum class PremiseStatus { Holds, Fails, Unverifiable };

std::string to_string(PremiseStatus s);

struct DiskReport {
    PremiseStatus premise = PremiseStatus::Unverifiable;
    /// Certified lower bound of min_y (|psi(y)| - slice length(y)).
    double premise_margin = 0.0;
    int p_lo = 0;
    int p_hi = 0;
    int pairs_checked = 0;
    bool all_disjoint = false;
    /// Smallest certified separation margin over the pairs p != q.
    double min_pair_margin = 0.0;
};

/// G(D) and D compared slice by slice at 2048 heights with a Lipschitz
/// padding between them; when G(D) misses D, all G^p(D), G^q(D) with p != q
/// in [p_lo, p_hi] are compared the same way. Requires C = D = 0.
DiskReport disk_disjoint_iterates(const NormalForm& nf, const Disk& disk, int p_lo, int p_hi);

struct Line {
    Point through;
    Point direction;
    bool misses_image = false;
    bool misses_preimage = false;
};

/// The line through z that is vertical in normal coordinates. Throws
/// FixedPointInput if G(z) = z within 1e-10.
Line invariant_line(const NormalForm& nf, Point z);

// ---------------------------------------------------------------------------
// Periodic points

struct PeriodicCandidate {
    Point z;
    int period = 0;
};

struct PeriodicReport {
    std::vector<PeriodicCandidate> candidates;
    int points_tested = 0;
    int fixed_points_skipped = 0;
    /// Largest relative gap between |G^m(z) - z| and |m| |psi(y) + C|, when
    /// the map has D = 0.
    bool certificate_checked = false;
    double certificate_max_deviation = 0.0;
};

using PlaneMap = std::function<Point(Point)>;

/// For each grid point that is not fixed, records the least m in [2, p_max]
/// with |G^m(z) - z| <= tol.
PeriodicReport periodic_search(const PlaneMap& map, const Rect& window, int grid_n, int p_max,
                               double tol);
PeriodicReport periodic_search(const MapSpec& map, const Rect& window, int grid_n, int p_max,
                               double tol);

}  // namespace unimap
