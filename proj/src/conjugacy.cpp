#include "unimap/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "unimap/dynamics.hpp"
#include "unimap/errors.hpp"

namespace unimap {

// Write-once table of Phi values keyed by the exact argument.
class PhiCache {
public:
    bool find(double y, double& out) const {
        std::shared_lock lock(mutex_);
        auto it = table_.find(y);
        if (it == table_.end()) return false;
        out = it->second;
        return true;
    }
    void insert(double y, double v) {
        std::unique_lock lock(mutex_);
        if (table_.size() < kCapacity) table_.try_emplace(y, v);
    }

private:
    static constexpr std::size_t kCapacity = 1u << 20;
    mutable std::shared_mutex mutex_;
    std::unordered_map<double, double> table_;
};

std::string to_string(ConjugacyBranch b) {
    switch (b) {
        case ConjugacyBranch::DZero: return "D_zero";
        case ConjugacyBranch::DNonzero: return "D_nonzero";
        case ConjugacyBranch::Linear: return "linear";
    }
    return "unknown";
}

ConjugacyMap build_conjugacy(const NormalForm& nf, const Classification& cls) {
    if (!cls.fixed_point_free) throw NotFree("map has fixed points (" + to_string(cls.kind) + ")");
    ConjugacyMap h;
    h.nf_ = nf;
    const double tol = translation_zero_tol(nf.map());
    if (std::abs(nf.trans().y) <= tol) {
        h.branch_ = ConjugacyBranch::DZero;
    } else if (nf.linear()) {
        h.branch_ = ConjugacyBranch::Linear;
    } else {
        h.branch_ = ConjugacyBranch::DNonzero;
        h.cache_ = std::make_shared<PhiCache>();
    }
    return h;
}

double ConjugacyMap::phi_uncached(double y) const {
    const double D = nf_.trans().y, C = nf_.trans().x;
    if (branch_ == ConjugacyBranch::Linear) {
        const double B = nf_.shear();
        return B * y * y / (2.0 * D) + (C / D - B / 2.0) * y;
    }
    const double end_value = nf_.psi(0.0) + C;
    if (drop_cocycle_) return y / D * end_value;

    double t = std::floor(y / D);
    if (!(std::abs(t) <= static_cast<double>(kMaxCocycleSteps)))
        throw CocycleOverflow("Phi(" + std::to_string(y) + ") needs more than 1e6 cocycle steps");
    long k = static_cast<long>(t);
    double y0 = y - static_cast<double>(k) * D;
    double value = y0 / D * end_value;
    if (k > 0) {
        for (long m = k; m >= 1; --m) value += nf_.psi(y - static_cast<double>(m) * D) + C;
    } else if (k < 0) {
        for (long m = 0; m < -k; ++m) value -= nf_.psi(y + static_cast<double>(m) * D) + C;
    }
    return value;
}

double ConjugacyMap::phi(double y) const {
    if (branch_ == ConjugacyBranch::DZero) throw PreconditionViolation("Phi is undefined on the D = 0 branch");
    if (!cache_ || drop_cocycle_) return phi_uncached(y);
    double v;
    if (cache_->find(y, v)) return v;
    v = phi_uncached(y);
    cache_->insert(y, v);
    return v;
}

Point ConjugacyMap::apply_normal(Point w) const {
    if (branch_ == ConjugacyBranch::DZero) return {w.x / g(w.y), w.y};
    const double D = drift();
    return {w.y / D, w.x - phi(w.y)};
}

Point ConjugacyMap::inverse_normal(Point u) const {
    if (branch_ == ConjugacyBranch::DZero) return {u.x * g(u.y), u.y};
    const double y = u.x * drift();
    return {u.y + phi(y), y};
}

Point h_apply(const ConjugacyMap& h, Point z) { return h.apply_normal(h.normal_form().to_normal(z)); }

Point h_inverse(const ConjugacyMap& h, Point w) { return h.normal_form().from_normal(h.inverse_normal(w)); }

ConjugacyReport verify_conjugacy(const MapSpec& map, const ConjugacyMap& h, const Rect& window, int n) {
    ConjugacyReport rep;
    rep.window = window;
    rep.n = n;
    double conj_total = 0.0, rt_total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Point z = grid_point(window, n, i, j);
            Point hz = h_apply(h, z);
            Point lhs = h_apply(h, map.apply(z));
            double conj = norm_inf(lhs - Point{hz.x + 1.0, hz.y});
            double rt = norm_inf(h_inverse(h, hz) - z);
            rep.conjugacy_sup = std::max(rep.conjugacy_sup, conj);
            rep.roundtrip_sup = std::max(rep.roundtrip_sup, rt);
            conj_total += conj;
            rt_total += rt;
        }
    }
    if (n > 0) {
        rep.conjugacy_mean = conj_total / (static_cast<double>(n) * n);
        rep.roundtrip_mean = rt_total / (static_cast<double>(n) * n);
    }
    return rep;
}

double conjugated_iterates_residual(const MapSpec& map, const ConjugacyMap& h, const std::vector<Point>& points,
                                    int n_max) {
    double worst = 0.0;
    for (Point z : points) {
        Point hz = h_apply(h, z);
        Point fwd = z, bwd = z;
        for (int k = 1; k <= n_max; ++k) {
            fwd = map.apply(fwd);
            bwd = map.inverse_apply(bwd);
            Point hf = h_apply(h, fwd), hb = h_apply(h, bwd);
            double ef = norm_inf(hf - Point{hz.x + k, hz.y});
            double eb = norm_inf(hb - Point{hz.x - k, hz.y});
            worst = std::max(worst, std::max(ef, eb) / (1.0 + k));
        }
    }
    return worst;
}

long escape_all_segments(const NormalForm& nf, Point z, Point w, const Rect& K) {
    const double D = nf.trans().y;
    if (std::abs(D) <= translation_zero_tol(nf.map()))
        return horizontal_escape_bound(nf, [&](double t) { return nf.shift(t); }, z, w, K);

    if (!K.has_interior()) return 0;
    Point zn = nf.to_normal(z), wn = nf.to_normal(w);
    double y_lo = std::min(zn.y, wn.y), y_hi = std::max(zn.y, wn.y);
    double ky_lo = std::numeric_limits<double>::infinity(), ky_hi = -ky_lo;
    for (Point c : {Point{K.x_lo, K.y_lo}, Point{K.x_lo, K.y_hi}, Point{K.x_hi, K.y_lo}, Point{K.x_hi, K.y_hi}}) {
        double y = nf.to_normal(c).y;
        ky_lo = std::min(ky_lo, y);
        ky_hi = std::max(ky_hi, y);
    }
    auto floor_nonneg = [](double v) { return v > 0.0 ? static_cast<long>(std::floor(v)) : 0L; };
    const double step = std::abs(D);
    return std::max(floor_nonneg((ky_hi - y_lo) / step), floor_nonneg((y_hi - ky_lo) / step));
}

}  // namespace unimap
