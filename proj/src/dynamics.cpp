#include "unimap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "unimap/errors.hpp"
#include "unimap/roots.hpp"

namespace unimap {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Budget: return "budget";
        case Termination::Escaped: return "escaped";
        case Termination::Converged: return "converged";
    }
    return "unknown";
}

std::string to_string(FixedSetKind k) {
    switch (k) {
        case FixedSetKind::Empty: return "Empty";
        case FixedSetKind::Lines: return "Lines";
        case FixedSetKind::Bands: return "Bands";
        case FixedSetKind::WholePlane: return "WholePlane";
    }
    return "unknown";
}

std::string to_string(PremiseStatus s) {
    switch (s) {
        case PremiseStatus::Holds: return "holds";
        case PremiseStatus::Fails: return "premise_failed";
        case PremiseStatus::Unverifiable: return "unverifiable";
    }
    return "unknown";
}

OrbitTrace iterate(const MapSpec& map, Point z, int n_max, double escape_radius, Direction direction) {
    if (n_max < 1) throw PreconditionViolation("iterate needs n_max >= 1");
    if (!(escape_radius > 0.0)) throw PreconditionViolation("iterate needs escape_radius > 0");
    OrbitTrace tr;
    tr.direction = direction;
    tr.entries.push_back({0, z});
    const long sign = direction == Direction::Forward ? 1 : -1;
    for (int k = 1; k <= n_max; ++k) {
        Point next = direction == Direction::Forward ? map.apply(z) : map.inverse_apply(z);
        tr.entries.push_back({sign * k, next});
        if (next == z) {
            tr.reason = Termination::Converged;
            return tr;
        }
        z = next;
        if (norm2(z) > escape_radius) {
            tr.reason = Termination::Escaped;
            return tr;
        }
    }
    tr.reason = Termination::Budget;
    return tr;
}

Point iterate_closed_form(const NormalForm& nf, Point z, long n) {
    Point w = nf.to_normal(z);
    const double C = nf.trans().x, D = nf.trans().y;
    if (n == 0) return z;
    if (D == 0.0) {
        w.x += static_cast<double>(n) * (nf.psi(w.y) + C);
        return nf.from_normal(w);
    }
    if (n > 0) {
        double sum = 0.0;
        for (long k = 0; k < n; ++k) sum += nf.psi(w.y + static_cast<double>(k) * D);
        w.x += static_cast<double>(n) * C + sum;
        w.y += static_cast<double>(n) * D;
    } else {
        long m = -n;
        double sum = 0.0;
        for (long k = 1; k <= m; ++k) sum += nf.psi(w.y - static_cast<double>(k) * D);
        w.x -= static_cast<double>(m) * C + sum;
        w.y -= static_cast<double>(m) * D;
    }
    return nf.from_normal(w);
}

// ---------------------------------------------------------------------------

double FixedPointSet::distance(Point z) const {
    if (kind == FixedSetKind::WholePlane) return 0.0;
    double h = alpha * z.x + beta * z.y;
    double best = std::numeric_limits<double>::infinity();
    for (double r : lines) best = std::min(best, std::abs(h - r));
    for (const Interval& b : bands) best = std::min(best, h < b.lo ? b.lo - h : (h > b.hi ? h - b.hi : 0.0));
    return best;
}

FixedPointSet fixed_set(const NormalForm& nf, Interval window) {
    FixedPointSet fs;
    fs.window = window;
    fs.alpha = nf.alpha();
    fs.beta = nf.beta();
    const double tol = translation_zero_tol(nf.map());
    const double C = nf.trans().x, D = nf.trans().y;

    if (std::abs(D) > tol) return fs;
    if (nf.linear()) {
        if (std::abs(nf.shear()) <= tol) {
            if (std::abs(C) <= tol) fs.kind = FixedSetKind::WholePlane;
            return fs;
        }
        fs.kind = FixedSetKind::Lines;
        fs.lines.push_back(-C / nf.shear());
        return fs;
    }

    ScalarFn f = [&](double t) { return nf.psi(t) + C; };
    ScalarFn df = [&](double t) { return nf.psi_dual(t).deriv; };
    ZeroSet zs = find_zeros(f, df, window);
    fs.lines = zs.roots;
    fs.bands = zs.bands;
    if (!fs.bands.empty())
        fs.kind = FixedSetKind::Bands;
    else if (!fs.lines.empty())
        fs.kind = FixedSetKind::Lines;
    return fs;
}

std::vector<Point> newton_fixed_points(const MapSpec& map, const Rect& window, int starts, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(window.x_lo, window.x_hi), uy(window.y_lo, window.y_hi);
    std::vector<Point> found;
    const double a = map.a(), b = map.b();
    // G(z) - z from the formula, free of the cancellation in apply(z) - z.
    auto displacement = [&](Point z, double& deriv) {
        if (map.is_translation()) {
            deriv = 0.0;
            return Point{map.c(), map.d()};
        }
        DualValue f = map.phi().eval_dual(a * z.x + b * z.y);
        deriv = f.deriv;
        return Point{b * f.value + map.c(), -a * f.value + map.d()};
    };
    for (int s = 0; s < starts; ++s) {
        Point z{ux(rng), uy(rng)};
        // Keep stepping past the residual test: at multiple roots the residual
        // is small long before the position has settled.
        for (int it = 0; it < 400; ++it) {
            Point F;
            double p = 0.0;
            try {
                F = displacement(z, p);
            } catch (const EvalError&) {
                break;
            }
            if (F.x == 0.0 && F.y == 0.0) break;
            // DG - I = p * [[ab, b^2], [-a^2, -ab]], rank one unless zero.
            double j11 = p * a * b, j12 = p * b * b, j21 = -p * a * a, j22 = -p * a * b;
            double fro2 = j11 * j11 + j12 * j12 + j21 * j21 + j22 * j22;
            if (!(fro2 > 0.0)) break;
            double det = j11 * j22 - j12 * j21;
            Point step;
            if (std::abs(det) > 1e-14 * fro2) {
                step = {(j22 * F.x - j12 * F.y) / det, (-j21 * F.x + j11 * F.y) / det};
            } else {
                step = {(j11 * F.x + j21 * F.y) / fro2, (j12 * F.x + j22 * F.y) / fro2};
            }
            z = z - step;
            if (!std::isfinite(z.x) || !std::isfinite(z.y) || norm_inf(z) > 1e8) break;
            if (norm_inf(step) <= 1e-15 * (1.0 + norm_inf(z))) break;
        }
        try {
            double p;
            if (window.contains(z) && norm_inf(displacement(z, p)) <= 1e-12 * (1.0 + norm_inf(z))) found.push_back(z);
        } catch (const EvalError&) {
        }
    }
    return found;
}

// ---------------------------------------------------------------------------

std::vector<MaximalInterval> maximal_intervals(const NormalForm& nf, Interval window) {
    const double tol = translation_zero_tol(nf.map());
    if (std::abs(nf.trans().x) > tol || std::abs(nf.trans().y) > tol)
        throw PreconditionViolation("maximal_intervals needs a map fixing the origin");
    std::vector<MaximalInterval> out;
    if (nf.linear() && std::abs(nf.shear()) <= tol) return out;

    ScalarFn f = [&](double t) { return nf.psi(t); };
    ScalarFn df = [&](double t) { return nf.psi_dual(t).deriv; };
    ZeroSet zs = find_zeros(f, df, window);

    std::vector<Interval> zeros;
    for (double r : zs.roots) zeros.push_back({r, r});
    for (const Interval& b : zs.bands) zeros.push_back(b);
    std::sort(zeros.begin(), zeros.end(), [](const Interval& p, const Interval& q) { return p.lo < q.lo; });

    double cursor = window.lo;
    bool cursor_is_window = true;
    auto emit = [&](double hi, bool hi_is_window) {
        if (hi > cursor) {
            double mid = 0.5 * (cursor + hi);
            double v = nf.psi(mid);
            out.push_back({cursor, hi, cursor_is_window, hi_is_window, v > 0.0 ? 1 : (v < 0.0 ? -1 : 0)});
        }
    };
    for (const Interval& z : zeros) {
        emit(z.lo, false);
        cursor = std::max(cursor, z.hi);
        cursor_is_window = false;
    }
    emit(window.hi, true);
    return out;
}

bool segment_disjointness(const NormalForm& nf, double x, const MaximalInterval& interval) {
    (void)x;  // the displacement psi(y) does not depend on x
    constexpr int kSamples = 1024;
    const double lo = interval.lo, hi = interval.hi;
    if (!(hi > lo)) throw PreconditionViolation("segment_disjointness: empty interval");
    int sign = 0;
    std::vector<double> mags(kSamples);
    auto sample_t = [&](int i) { return lo + (hi - lo) * (i + 0.5) / kSamples; };
    for (int i = 0; i < kSamples; ++i) {
        // Open interval: sample cell midpoints, then refine towards endpoints.
        double v = nf.psi(sample_t(i));
        int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign))
            throw PreconditionViolation("segment_disjointness: psi vanishes inside the interval");
        sign = s;
        mags[i] = std::abs(v);
    }
    // Tangential zeros keep the sign; refine interior local minima of |psi|.
    const double scale = std::max(1.0, *std::max_element(mags.begin(), mags.end()));
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 1; i + 1 < kSamples; ++i) {
        if (mags[i] > mags[i - 1] || mags[i] > mags[i + 1]) continue;
        double a = sample_t(i - 1), b = sample_t(i + 1);
        for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            if (std::abs(nf.psi(x1)) < std::abs(nf.psi(x2)))
                b = x2;
            else
                a = x1;
        }
        if (std::abs(nf.psi(0.5 * (a + b))) <= 1e-12 * scale)
            throw PreconditionViolation("segment_disjointness: psi vanishes inside the interval");
    }
    for (double frac : {1e-3, 1e-6, 1e-9}) {
        for (double t : {lo + frac * (hi - lo), hi - frac * (hi - lo)}) {
            double v = nf.psi(t);
            int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
            if (s != sign)
                throw PreconditionViolation("segment_disjointness: psi vanishes inside the interval");
        }
    }
    return true;
}

namespace {

struct NormalBox {
    double x_lo, x_hi, y_lo, y_hi;
};

NormalBox normal_bbox(const NormalForm& nf, const Rect& K) {
    Point corners[4] = {{K.x_lo, K.y_lo}, {K.x_lo, K.y_hi}, {K.x_hi, K.y_lo}, {K.x_hi, K.y_hi}};
    NormalBox box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Point c : corners) {
        Point w = nf.to_normal(c);
        box.x_lo = std::min(box.x_lo, w.x);
        box.x_hi = std::max(box.x_hi, w.x);
        box.y_lo = std::min(box.y_lo, w.y);
        box.y_hi = std::max(box.y_hi, w.y);
    }
    return box;
}

double min_abs_on(const std::function<double(double)>& g, double lo, double hi) {
    constexpr int kSamples = 1025;
    double best = std::abs(g(lo));
    double best_t = lo;
    for (int i = 1; i < kSamples; ++i) {
        double t = lo + (hi - lo) * i / (kSamples - 1);
        double v = std::abs(g(t));
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    if (hi > lo) {
        double cell = (hi - lo) / (kSamples - 1);
        double a = std::max(lo, best_t - cell), b = std::min(hi, best_t + cell);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 100 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            if (std::abs(g(x1)) < std::abs(g(x2)))
                b = x2;
            else
                a = x1;
        }
        best = std::min(best, std::abs(g(0.5 * (a + b))));
    }
    return best;
}

long floor_nonneg(double v) {
    if (!(v > 0.0)) return 0;
    return static_cast<long>(std::floor(v));
}

}  // namespace

long horizontal_escape_bound(const NormalForm& nf, const std::function<double(double)>& g, Point z, Point w,
                             const Rect& K) {
    Point zn = nf.to_normal(z), wn = nf.to_normal(w);
    double y_lo = std::min(zn.y, wn.y), y_hi = std::max(zn.y, wn.y);

    if (y_hi > y_lo) {
        ZeroSet zs = find_zeros(g, {}, {y_lo, y_hi}, ScanOptions{1024});
        if (!zs.empty()) throw BandViolation("segment heights meet a zero of the displacement");
    }
    if (g(y_lo) == 0.0 || g(y_hi) == 0.0) throw BandViolation("segment endpoint lies on a fixed line");

    if (!K.has_interior()) return 0;
    NormalBox box = normal_bbox(nf, K);
    double lo = std::max(y_lo, box.y_lo), hi = std::min(y_hi, box.y_hi);
    if (lo > hi) return 0;

    double m = min_abs_on(g, lo, hi);
    if (!(m > 0.0)) throw BandViolation("displacement vanishes on the segment");
    double x_min = std::min(zn.x, wn.x), x_max = std::max(zn.x, wn.x);
    return std::max(floor_nonneg((box.x_hi - x_min) / m), floor_nonneg((x_max - box.x_lo) / m));
}

long escape_segment(const NormalForm& nf, Point z, Point w, const Rect& K) {
    const double tol = translation_zero_tol(nf.map());
    if (std::abs(nf.trans().x) > tol || std::abs(nf.trans().y) > tol)
        throw PreconditionViolation("escape_segment needs a map fixing the origin");
    return horizontal_escape_bound(nf, [&](double t) { return nf.psi(t); }, z, w, K);
}

DiskReport disk_disjoint_iterates(const NormalForm& nf, const Disk& disk, int p_lo, int p_hi) {
    const double tol = translation_zero_tol(nf.map());
    if (std::abs(nf.trans().x) > tol || std::abs(nf.trans().y) > tol)
        throw PreconditionViolation("disk_disjoint_iterates needs a map fixing the origin");
    if (!(disk.radius > 0.0)) throw PreconditionViolation("disk radius must be positive");
    if (p_lo > p_hi) std::swap(p_lo, p_hi);

    DiskReport rep;
    rep.p_lo = p_lo;
    rep.p_hi = p_hi;

    constexpr int kHeights = 2048;
    const double r = disk.radius;
    const double yc = nf.to_normal(disk.center).y;
    auto slice = [&](double y) {
        double d = y - yc;
        double s = r * r - d * d;
        return s > 0.0 ? 2.0 * std::sqrt(s) : 0.0;
    };

    std::vector<double> ys(kHeights), ps(kHeights), dps(kHeights);
    for (int i = 0; i < kHeights; ++i) {
        ys[i] = yc - r + 2.0 * r * i / (kHeights - 1);
        DualValue pv = nf.psi_dual(ys[i]);
        ps[i] = std::abs(pv.value);
        dps[i] = std::abs(pv.deriv);
        if (ps[i] <= slice(ys[i])) {
            rep.premise = PremiseStatus::Fails;
            return rep;
        }
    }

    // Per cell: lower bound of |psi| and upper bound of the slice length.
    const double dy = 2.0 * r / (kHeights - 1);
    std::vector<double> psi_lower(kHeights - 1), slice_upper(kHeights - 1);
    for (int i = 0; i + 1 < kHeights; ++i) {
        double lip = 2.0 * std::max(dps[i], dps[i + 1]);
        psi_lower[i] = std::min(ps[i], ps[i + 1]) - 0.5 * dy * lip;
        double closest = std::clamp(yc, ys[i], ys[i + 1]);
        slice_upper[i] = slice(closest);
    }

    auto margin_for = [&](int m) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < kHeights; ++i) best = std::min(best, m * psi_lower[i] - slice_upper[i]);
        return best;
    };

    rep.premise_margin = margin_for(1);
    if (!(rep.premise_margin > 0.0)) {
        rep.premise = PremiseStatus::Unverifiable;
        return rep;
    }
    rep.premise = PremiseStatus::Holds;

    rep.all_disjoint = true;
    rep.min_pair_margin = std::numeric_limits<double>::infinity();
    std::vector<double> by_gap(static_cast<std::size_t>(p_hi - p_lo) + 1, 0.0);
    for (int m = 1; m <= p_hi - p_lo; ++m) by_gap[m] = margin_for(m);
    for (int p = p_lo; p <= p_hi; ++p) {
        for (int q = p + 1; q <= p_hi; ++q) {
            ++rep.pairs_checked;
            double margin = by_gap[q - p];
            rep.min_pair_margin = std::min(rep.min_pair_margin, margin);
            if (!(margin > 0.0)) rep.all_disjoint = false;
        }
    }
    if (rep.pairs_checked == 0) rep.min_pair_margin = 0.0;
    return rep;
}

Line invariant_line(const NormalForm& nf, Point z) {
    Point gz = nf.map().apply(z);
    if (norm_inf(gz - z) <= 1e-10) throw FixedPointInput("invariant_line: z is a fixed point");
    Line line;
    line.through = z;
    line.direction = nf.from_normal({0.0, 1.0});
    Point w = nf.to_normal(z);
    // Points of the line have normal coordinates (w.x, t); their images sit
    // at (w.x + psi(t) + C, t + D).
    bool moves = std::abs(nf.trans().y) > 0.0 || nf.shift(w.y) != 0.0;
    line.misses_image = moves;
    line.misses_preimage = moves;
    return line;
}

// ---------------------------------------------------------------------------

PeriodicReport periodic_search(const PlaneMap& map, const Rect& window, int grid_n, int p_max, double tol) {
    if (p_max < 2) throw PreconditionViolation("periodic_search needs p_max >= 2");
    PeriodicReport rep;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            Point z = grid_point(window, grid_n, i, j);
            Point w = map(z);
            if (norm_inf(w - z) <= tol) {
                ++rep.fixed_points_skipped;
                continue;
            }
            ++rep.points_tested;
            for (int m = 2; m <= p_max; ++m) {
                w = map(w);
                if (!std::isfinite(w.x) || !std::isfinite(w.y)) break;
                if (norm_inf(w - z) <= tol) {
                    rep.candidates.push_back({z, m});
                    break;
                }
            }
        }
    }
    return rep;
}

PeriodicReport periodic_search(const MapSpec& map, const Rect& window, int grid_n, int p_max, double tol) {
    PeriodicReport rep = periodic_search([&](Point z) { return map.apply(z); }, window, grid_n, p_max, tol);

    NormalForm nf = reduce(map);
    if (std::abs(nf.trans().y) > translation_zero_tol(map)) return rep;

    // With D = 0: G^m(z) - z = (m (psi(y) + C), 0) in normal coordinates.
    rep.certificate_checked = true;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            Point z = grid_point(window, grid_n, i, j);
            Point w0 = nf.to_normal(z);
            double g = nf.shift(w0.y);
            Point w = z;
            for (int m = 1; m <= p_max; ++m) {
                w = map.apply(w);
                Point diff = nf.to_normal(w) - w0;
                double predicted = m * g;
                double dev = std::max(std::abs(diff.x - predicted), std::abs(diff.y)) /
                             (1.0 + std::abs(predicted) + norm_inf(z));
                rep.certificate_max_deviation = std::max(rep.certificate_max_deviation, dev);
            }
        }
    }
    return rep;
}

}  // namespace unimap
