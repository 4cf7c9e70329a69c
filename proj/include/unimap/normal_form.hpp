#pragma once

// Rotation reduction. With s = sqrt(a^2 + b^2), alpha = a/s, beta = b/s and
// R = [[beta, -alpha], [alpha, beta]], every map in Campbell form satisfies
//
//   R G R^{-1} (x, y) = (x + psi(y), y) + (C, D),   psi(t) = s * phi(s t),
//
// where (C, D) = R (c, d) = (beta c - alpha d, alpha c + beta d). The normal
// coordinate y equals alpha x + beta y in the original frame. Fixed points
// exist iff D = 0 and psi(y) + C = 0 has a solution.

#include <string>

#include "unimap/geometry.hpp"
#include "unimap/map.hpp"

namespace unimap {

class NormalForm {
public:
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double scale() const { return scale_; }
    /// (C, D).
    Point trans() const { return trans_; }
    /// psi is affine: psi(t) = shear() * t. Includes (a, b) = (0, 0).
    bool linear() const { return linear_; }
    /// Slope of psi when linear() (the Jordan-form constant B).
    double shear() const { return shear_; }
    /// (a, b) = (0, 0); rotation is the identity and psi vanishes.
    bool translation_only() const { return scale_ == 0.0; }

    double psi(double t) const;
    DualValue psi_dual(double t) const;

    /// psi(t) + C, the horizontal displacement at normal height t.
    double shift(double t) const { return psi(t) + trans_.x; }

    Point to_normal(Point z) const { return {beta_ * z.x - alpha_ * z.y, alpha_ * z.x + beta_ * z.y}; }
    Point from_normal(Point w) const { return {beta_ * w.x + alpha_ * w.y, -alpha_ * w.x + beta_ * w.y}; }

    /// One step of (x, y) -> (x + psi(y) + C, y + D) and its inverse.
    Point step_normal(Point w) const { return {w.x + psi(w.y) + trans_.x, w.y + trans_.y}; }
    Point unstep_normal(Point w) const {
        double y = w.y - trans_.y;
        return {w.x - psi(y) - trans_.x, y};
    }

    const MapSpec& map() const { return map_; }

private:
    friend NormalForm reduce(const MapSpec& map, Interval linearity_window);

    MapSpec map_;
    double alpha_ = 0.0, beta_ = 1.0, scale_ = 0.0;
    Point trans_;
    bool linear_ = true;
    double shear_ = 0.0;
};

inline constexpr double kReductionTolerance = 1e-9;

/// Builds the normal form and self-checks it on nine points around the
/// origin; throws ReductionError if the residual exceeds 1e-9. phi is
/// declared affine when phi' is constant over 65 samples of the window.
NormalForm reduce(const MapSpec& map, Interval linearity_window = {-10.0, 10.0});

inline Point to_normal_coords(const NormalForm& nf, Point z) { return nf.to_normal(z); }
inline Point from_normal_coords(const NormalForm& nf, Point w) { return nf.from_normal(w); }

/// sup-norm of R G R^{-1}(w) - ((x + psi(y), y) + (C, D)) over a grid.
double reduction_residual(const NormalForm& nf, const Rect& window, int n);

enum class MapClass {
    LinearIdentityLike,
    LinearShear,
    NonlinearFixedOrigin,
    NonlinearFree,
    NonlinearWithFixedPoints,
};

std::string to_string(MapClass c);

struct Classification {
    MapClass kind = MapClass::LinearIdentityLike;
    bool fixed_point_free = false;
    /// The verdict rests on a root scan restricted to `window`.
    bool window_limited = false;
    Interval window;
    /// Criterion components [psi(t) s + (bc - ad); ac + bd] at the scale of
    /// the map: second component, and roots of the first on the window.
    double second_component = 0.0;
    std::vector<double> criterion_roots;
};

/// Zero threshold for C, D and ac + bd, relative to the map's magnitude.
double translation_zero_tol(const MapSpec& m);

Classification classify(const MapSpec& map, Interval window = {-10.0, 10.0});
Classification classify(const NormalForm& nf, Interval window = {-10.0, 10.0});

}  // namespace unimap
