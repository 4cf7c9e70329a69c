#pragma once

#include <functional>
#include <vector>

#include "unimap/geometry.hpp"

namespace unimap {

using ScalarFn = std::function<double(double)>;

struct ScanOptions {
    int samples = 4096;
    double bisection_tol = 1e-10;
    /// |f| at or below this counts as zero (tangential roots, plateaus).
    double zero_tol = 1e-12;
    /// Consecutive near-zero samples needed to report a band instead of a root.
    int plateau_run = 64;
};

/// Zero set of a scalar function on a window: isolated roots plus closed
/// bands on which it vanishes identically (to zero_tol).
struct ZeroSet {
    std::vector<double> roots;
    std::vector<Interval> bands;

    bool empty() const { return roots.empty() && bands.empty(); }
};

/// Bisection on a bracketing pair f(lo) * f(hi) < 0.
double bisect(const ScalarFn& f, double lo, double hi, double tol);

/// Sign-change scan with bisection, plateau detection, and a tangential-zero
/// pass that refines local minima of |f| through the critical points of f
/// (located by bisection on `df` when given, golden section otherwise).
/// Points where f throws are skipped.
ZeroSet find_zeros(const ScalarFn& f, const ScalarFn& df, Interval window,
                   const ScanOptions& opts = {});

}  // namespace unimap
