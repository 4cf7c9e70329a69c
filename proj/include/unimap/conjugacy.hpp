#pragma once

// Explicit conjugacy h with h o G = tau o h, tau(x, y) = (x + 1, y), for
// fixed-point-free maps. In normal coordinates G_t(x, y) = (x + psi(y) + C, y + D):
//
//   D = 0:   h(x, y) = (x / g(y), y),        g = psi + C never vanishes
//   D != 0:  h(x, y) = (y / D, x - Phi(y)),  Phi(y + D) = Phi(y) + psi(y) + C
//
// Phi is linear on the base interval between 0 and D and is extended by the
// cocycle relation. When psi is linear (psi(y) = B y) the quadratic solution
// Phi(y) = B y^2 / (2D) + (C/D - B/2) y is used instead. The map on the
// original plane is h composed with the rotation.

#include <memory>

#include "unimap/geometry.hpp"
#include "unimap/map.hpp"
#include "unimap/normal_form.hpp"

namespace unimap {

enum class ConjugacyBranch { DZero, DNonzero, Linear };

std::string to_string(ConjugacyBranch b);

inline constexpr long kMaxCocycleSteps = 1000000;

class PhiCache;

class ConjugacyMap {
public:
    ConjugacyBranch branch() const { return branch_; }
    const NormalForm& normal_form() const { return nf_; }
    /// Normal-coordinate translation D.
    double drift() const { return nf_.trans().y; }

    /// g(y) = psi(y) + C (D = 0 branch).
    double g(double y) const { return nf_.shift(y); }
    /// The cocycle Phi (D != 0 and linear branches). Throws CocycleOverflow
    /// when more than 1e6 cocycle steps are needed.
    double phi(double y) const;

    /// h and h^{-1} in normal coordinates.
    Point apply_normal(Point w) const;
    Point inverse_normal(Point u) const;

    /// Negative-control hook: Phi keeps only its base-interval interpolation,
    /// extended linearly, so the cocycle relation fails.
    void drop_cocycle_for_testing() { drop_cocycle_ = true; }

private:
    friend ConjugacyMap build_conjugacy(const NormalForm& nf, const Classification& cls);

    double phi_uncached(double y) const;

    ConjugacyBranch branch_ = ConjugacyBranch::DZero;
    NormalForm nf_;
    bool drop_cocycle_ = false;
    std::shared_ptr<PhiCache> cache_;
};

/// Throws NotFree unless the classification says fixed point free.
ConjugacyMap build_conjugacy(const NormalForm& nf, const Classification& cls);

Point h_apply(const ConjugacyMap& h, Point z);
Point h_inverse(const ConjugacyMap& h, Point w);

struct ConjugacyReport {
    Rect window;
    int n = 0;
    /// |h(G(z)) - tau(h(z))|_inf
    double conjugacy_sup = 0.0;
    double conjugacy_mean = 0.0;
    /// |h^{-1}(h(z)) - z|_inf
    double roundtrip_sup = 0.0;
    double roundtrip_mean = 0.0;
};

ConjugacyReport verify_conjugacy(const MapSpec& map, const ConjugacyMap& h, const Rect& window, int n);

/// max over z in `points` and 1 <= |k| <= n_max of
/// |h(G^k(z)) - h(z) - (k, 0)|_inf / (1 + |k|).
double conjugated_iterates_residual(const MapSpec& map, const ConjugacyMap& h,
                                    const std::vector<Point>& points, int n_max);

/// Least n~ with G^n(segment z-w) outside K for |n| > n~, for any
/// fixed-point-free map: horizontal escape by min |psi + C| when D = 0,
/// vertical drift |D| per step otherwise.
long escape_all_segments(const NormalForm& nf, Point z, Point w, const Rect& K);

}  // namespace unimap
