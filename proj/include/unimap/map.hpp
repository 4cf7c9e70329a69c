#pragma once

// Planar maps in Campbell's normal form
//
//   G(x, y) = (x + b*phi(a*x + b*y) + c,  y - a*phi(a*x + b*y) + d).
//
// The Jacobian is I + phi'(ax+by) * N with N = [[ab, b^2], [-a^2, -ab]],
// and N = (b, -a)^T (a, b) is nilpotent because (a, b).(b, -a) = 0.

#include <array>
#include <complex>
#include <functional>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "unimap/expr.hpp"
#include "unimap/geometry.hpp"

namespace unimap {

/// Precision used by the generic eigen-solver in verify_unipotent. The
/// product phi' * a * b of three doubles is exact at this width.
using WideReal = boost::multiprecision::cpp_bin_float_50;

template <class Real>
struct Mat2 {
    Real m11{}, m12{}, m21{}, m22{};
};

using Jacobian2 = Mat2<double>;

/// Eigenvalues of a real 2x2 matrix from its characteristic polynomial,
/// written as mean +- sqrt(((m11 - m22) / 2)^2 + m12 * m21).
template <class Real>
std::array<std::complex<double>, 2> eigenvalues(const Mat2<Real>& m) {
    using std::sqrt;
    Real mean = (m.m11 + m.m22) / 2;
    Real half_gap = (m.m11 - m.m22) / 2;
    Real disc = half_gap * half_gap + m.m12 * m.m21;
    if (disc >= 0) {
        Real r = sqrt(disc);
        return {std::complex<double>(static_cast<double>(mean + r), 0.0),
                std::complex<double>(static_cast<double>(mean - r), 0.0)};
    }
    double im = static_cast<double>(sqrt(-disc));
    double re = static_cast<double>(mean);
    return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

/// Same solver, but returns max |lambda - target| evaluated at the working
/// precision before rounding to double.
template <class Real>
double max_eigen_deviation(const Mat2<Real>& m, const Real& target) {
    using std::abs;
    using std::sqrt;
    Real mean = (m.m11 + m.m22) / 2;
    Real half_gap = (m.m11 - m.m22) / 2;
    Real disc = half_gap * half_gap + m.m12 * m.m21;
    Real shift = mean - target;
    if (disc >= 0) {
        Real r = sqrt(disc);
        Real d1 = abs(shift + r), d2 = abs(shift - r);
        return static_cast<double>(d1 > d2 ? d1 : d2);
    }
    return static_cast<double>(sqrt(shift * shift - disc));
}

class MapSpec {
public:
    /// Re-centers phi so that phi(0) = 0, moving the constant into (c, d):
    /// c' = c + b*phi(0), d' = d - a*phi(0). Pointwise values are unchanged.
    static MapSpec make(double a, double b, double c, double d, const Expr& phi);

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }
    const Expr& phi() const { return phi_; }
    /// Value phi(0) had before re-centering.
    double phi_offset() const { return phi_offset_; }

    /// (a, b) = (0, 0): the map is the translation by (c, d) and phi is ignored.
    bool is_translation() const { return a_ == 0.0 && b_ == 0.0; }

    Point apply(Point z) const;
    Point inverse_apply(Point w) const;

private:
    double a_ = 0.0, b_ = 0.0, c_ = 0.0, d_ = 0.0;
    double phi_offset_ = 0.0;
    Expr phi_;
};

inline MapSpec make_map(double a, double b, double c, double d, const Expr& phi) {
    return MapSpec::make(a, b, c, d, phi);
}
inline Point apply(const MapSpec& m, Point z) { return m.apply(z); }
inline Point inverse_apply(const MapSpec& m, Point w) { return m.inverse_apply(w); }

/// Closed form I + phi'(ax+by) N.
Jacobian2 jacobian(const MapSpec& m, Point z);

/// Eigenvalues via the closed form. Throws ReductionError if the
/// nilpotency identity fails, which cannot happen for a MapSpec.
std::array<double, 2> spectrum_at(const MapSpec& m, Point z);

/// Exact nilpotency test of N = (b, -a)^T (a, b) carried out in WideReal.
bool nilpotent_part_vanishes(const Mat2<WideReal>& n);

/// Test hook applied to the nilpotent part before the identity is added.
using NilpotentHook = std::function<void(Mat2<WideReal>&)>;

/// Jacobian entries in WideReal: N is formed exactly from (a, b), scaled by
/// phi' and shifted by `diagonal` (1 for G, 1 - mu for G - mu*Id).
Mat2<WideReal> wide_jacobian(const MapSpec& m, Point z, double diagonal = 1.0,
                             const NilpotentHook& hook = {});

struct UnipotencyReport {
    Rect window;
    int n = 0;
    int samples = 0;
    double max_deviation = 0.0;         // generic solver at WideReal precision
    double max_deviation_double = 0.0;  // same solver on double entries (informational)
    bool nilpotent_closed_form = true;
    bool pass = false;
};

inline constexpr double kSpectralTolerance = 1e-9;

UnipotencyReport verify_unipotent(const MapSpec& m, const Rect& window, int n,
                                  const NilpotentHook& hook = {});

// JSON map files: {"a": num, "b": num, "c": num, "d": num, "phi": "expr"}.
MapSpec map_from_json(const std::string& text);
std::string map_to_json(const MapSpec& m);
/// Accepts either inline JSON (first non-blank character '{') or a file path.
MapSpec load_map(const std::string& inline_or_path);

}  // namespace unimap
