#include "unimap/normal_form.hpp"

#include <cmath>

#include "unimap/errors.hpp"
#include "unimap/roots.hpp"

namespace unimap {

double NormalForm::psi(double t) const {
    if (scale_ == 0.0) return 0.0;
    return scale_ * map_.phi().eval(t * scale_);
}

DualValue NormalForm::psi_dual(double t) const {
    if (scale_ == 0.0) return {0.0, 0.0};
    DualValue p = map_.phi().eval_dual(t * scale_);
    return {scale_ * p.value, scale_ * scale_ * p.deriv};
}

namespace {

double residual_at(const NormalForm& nf, Point w) {
    Point lhs = nf.to_normal(nf.map().apply(nf.from_normal(w)));
    Point rhs = Point{w.x + nf.psi(w.y), w.y} + nf.trans();
    return norm_inf(lhs - rhs);
}

bool psi_is_affine(const NormalForm& nf, Interval window, double& slope) {
    constexpr int kSamples = 65;
    try {
        double d0 = nf.psi_dual(window.lo).deriv;
        for (int i = 1; i < kSamples; ++i) {
            double t = window.lo + (window.hi - window.lo) * i / (kSamples - 1);
            DualValue p = nf.psi_dual(t);
            if (std::abs(p.deriv - d0) > 1e-12 * (1.0 + std::abs(d0))) return false;
            if (std::abs(p.value - d0 * t) > 1e-12 * (1.0 + std::abs(p.value))) return false;
        }
        slope = d0;
        return true;
    } catch (const EvalError&) {
        return false;
    }
}

}  // namespace

NormalForm reduce(const MapSpec& map, Interval linearity_window) {
    NormalForm nf;
    nf.map_ = map;
    if (map.is_translation()) {
        nf.alpha_ = 0.0;
        nf.beta_ = 1.0;
        nf.scale_ = 0.0;
        nf.trans_ = {map.c(), map.d()};
        nf.linear_ = true;
        nf.shear_ = 0.0;
        return nf;
    }

    double s = std::hypot(map.a(), map.b());
    nf.scale_ = s;
    nf.alpha_ = map.a() / s;
    nf.beta_ = map.b() / s;
    nf.trans_ = {nf.beta_ * map.c() - nf.alpha_ * map.d(), nf.alpha_ * map.c() + nf.beta_ * map.d()};

    double slope = 0.0;
    nf.linear_ = psi_is_affine(nf, linearity_window, slope);
    nf.shear_ = nf.linear_ ? slope : 0.0;

    double worst = 0.0;
    for (double x : {-1.0, 0.0, 1.0})
        for (double y : {-1.0, 0.0, 1.0}) worst = std::max(worst, residual_at(nf, {x, y}));
    if (!(worst <= kReductionTolerance))
        throw ReductionError("rotation self-check residual " + std::to_string(worst) + " exceeds 1e-9");
    return nf;
}

double reduction_residual(const NormalForm& nf, const Rect& window, int n) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) worst = std::max(worst, residual_at(nf, grid_point(window, n, i, j)));
    return worst;
}

std::string to_string(MapClass c) {
    switch (c) {
        case MapClass::LinearIdentityLike: return "LinearIdentityLike";
        case MapClass::LinearShear: return "LinearShear";
        case MapClass::NonlinearFixedOrigin: return "NonlinearFixedOrigin";
        case MapClass::NonlinearFree: return "NonlinearFree";
        case MapClass::NonlinearWithFixedPoints: return "NonlinearWithFixedPoints";
    }
    return "unknown";
}

double translation_zero_tol(const MapSpec& m) {
    return 1e-12 * std::max(1.0, std::abs(m.c()) + std::abs(m.d()));
}

Classification classify(const MapSpec& map, Interval window) { return classify(reduce(map, window), window); }

Classification classify(const NormalForm& nf, Interval window) {
    const MapSpec& m = nf.map();
    const double tol = translation_zero_tol(m);
    const double s = nf.scale();
    Classification out;
    out.window = window;
    out.second_component = m.a() * m.c() + m.b() * m.d();

    const bool c_zero = std::abs(nf.trans().x) <= tol;
    const bool d_zero = std::abs(nf.trans().y) <= tol;

    if (nf.linear() && std::abs(nf.shear()) <= tol) {
        // Identity or a translation.
        out.kind = MapClass::LinearIdentityLike;
        out.fixed_point_free = !(c_zero && d_zero);
        return out;
    }
    if (nf.linear()) {
        out.kind = MapClass::LinearShear;
        out.fixed_point_free = !d_zero;
        if (d_zero) out.criterion_roots.push_back(-nf.trans().x / nf.shear());
        return out;
    }
    if (std::abs(m.c()) <= tol && std::abs(m.d()) <= tol) {
        out.kind = MapClass::NonlinearFixedOrigin;
        out.fixed_point_free = false;
        out.criterion_roots.push_back(0.0);
        return out;
    }
    if (!d_zero) {
        out.kind = MapClass::NonlinearFree;
        out.fixed_point_free = true;
        return out;
    }

    const double offset = m.b() * m.c() - m.a() * m.d();
    ScalarFn f = [&](double t) { return nf.psi(t) * s + offset; };
    ScalarFn df = [&](double t) { return nf.psi_dual(t).deriv * s; };
    ZeroSet zs = find_zeros(f, df, window);
    out.criterion_roots = zs.roots;
    for (const Interval& b : zs.bands) out.criterion_roots.push_back(b.lo);
    out.window_limited = true;
    if (zs.empty()) {
        out.kind = MapClass::NonlinearFree;
        out.fixed_point_free = true;
    } else {
        out.kind = MapClass::NonlinearWithFixedPoints;
        out.fixed_point_free = false;
    }
    return out;
}

}  // namespace unimap
