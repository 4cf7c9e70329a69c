#include "unimap/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "unimap/errors.hpp"

namespace unimap {

namespace {

double safe_eval(const ScalarFn& f, double t) {
    try {
        double v = f(t);
        return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

/// Boundary between a point where pred is false and one where it is true.
template <class Pred>
double bisect_predicate(Pred pred, double outside, double inside, double tol) {
    for (int it = 0; it < 200 && std::abs(inside - outside) > tol; ++it) {
        double mid = 0.5 * (outside + inside);
        (pred(mid) ? inside : outside) = mid;
    }
    return inside;
}

double golden_min_abs(const ScalarFn& f, double lo, double hi, double tol) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = std::abs(safe_eval(f, x1)), f2 = std::abs(safe_eval(f, x2));
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = std::abs(safe_eval(f, x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = std::abs(safe_eval(f, x2));
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double bisect(const ScalarFn& f, double lo, double hi, double tol) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw PreconditionViolation("bisect: no sign change on bracket");
    for (int it = 0; it < 200 && std::abs(hi - lo) > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ZeroSet find_zeros(const ScalarFn& f, const ScalarFn& df, Interval window, const ScanOptions& opts) {
    ZeroSet out;
    const int n = std::max(opts.samples, 3);
    std::vector<double> t(n), v(n);
    for (int i = 0; i < n; ++i) {
        t[i] = window.lo + (window.hi - window.lo) * i / (n - 1);
        v[i] = safe_eval(f, t[i]);
    }
    auto finite = [&](int i) { return std::isfinite(v[i]); };
    auto near = [&](int i) { return finite(i) && std::abs(v[i]) <= opts.zero_tol; };
    auto is_near_at = [&](double s) {
        double fs = safe_eval(f, s);
        return std::isfinite(fs) && std::abs(fs) <= opts.zero_tol;
    };

    std::vector<double> roots;

    // Runs of near-zero samples: long runs are bands, short runs roots.
    for (int i = 0; i < n;) {
        if (!near(i)) {
            ++i;
            continue;
        }
        int s = i;
        while (i < n && near(i)) ++i;
        int e = i - 1;
        if (e - s + 1 >= opts.plateau_run) {
            double lo = s > 0 ? bisect_predicate(is_near_at, t[s - 1], t[s], opts.bisection_tol) : t[s];
            double hi = e < n - 1 ? bisect_predicate(is_near_at, t[e + 1], t[e], opts.bisection_tol) : t[e];
            out.bands.push_back({lo, hi});
        } else if (s > 0 && e < n - 1 && finite(s - 1) && finite(e + 1) &&
                   (v[s - 1] > 0.0) != (v[e + 1] > 0.0)) {
            roots.push_back(bisect(f, t[s - 1], t[e + 1], opts.bisection_tol));
        } else {
            int best = s;
            for (int k = s; k <= e; ++k)
                if (std::abs(v[k]) < std::abs(v[best])) best = k;
            roots.push_back(t[best]);
        }
    }

    // Sign changes between non-zero samples.
    for (int i = 0; i + 1 < n; ++i) {
        if (!finite(i) || !finite(i + 1) || near(i) || near(i + 1)) continue;
        if ((v[i] > 0.0) != (v[i + 1] > 0.0))
            roots.push_back(bisect(f, t[i], t[i + 1], opts.bisection_tol));
    }

    // Tangential zeros hide between samples: refine local minima of |f|.
    for (int i = 1; i + 1 < n; ++i) {
        if (!finite(i - 1) || !finite(i) || !finite(i + 1)) continue;
        if (near(i - 1) || near(i) || near(i + 1)) continue;
        if ((v[i - 1] > 0.0) != (v[i] > 0.0) || (v[i + 1] > 0.0) != (v[i] > 0.0)) continue;
        double a = std::abs(v[i]);
        if (a > std::abs(v[i - 1]) || a > std::abs(v[i + 1])) continue;

        double lo = t[i - 1], hi = t[i + 1], crit = t[i];
        bool refined = false;
        if (df) {
            double dlo = safe_eval(df, lo), dhi = safe_eval(df, hi);
            if (std::isfinite(dlo) && std::isfinite(dhi) && (dlo > 0.0) != (dhi > 0.0)) {
                try {
                    crit = bisect(df, lo, hi, opts.bisection_tol);
                    refined = true;
                } catch (const Error&) {
                }
            }
        }
        if (!refined) crit = golden_min_abs(f, lo, hi, opts.bisection_tol);
        if (is_near_at(crit)) roots.push_back(crit);
    }

    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        bool in_band = std::any_of(out.bands.begin(), out.bands.end(), [&](const Interval& b) {
            return r >= b.lo - 1e-9 && r <= b.hi + 1e-9;
        });
        if (in_band) continue;
        if (!out.roots.empty() && std::abs(r - out.roots.back()) <= 1e-8 * std::max(1.0, std::abs(r)))
            continue;
        out.roots.push_back(r);
    }
    return out;
}

}  // namespace unimap
