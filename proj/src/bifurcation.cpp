#include "unimap/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "unimap/dynamics.hpp"
#include "unimap/errors.hpp"

namespace unimap {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::GlobalAttractor: return "GlobalAttractor";
        case Verdict::GlobalRepellor: return "GlobalRepellor";
        case Verdict::Unipotent: return "Unipotent";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

PerturbedMap family_member(const MapSpec& map, double mu, double epsilon) {
    if (norm_inf(map.apply({0.0, 0.0})) > 1e-12) throw NotUP1("base map does not fix the origin");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw BadMu("epsilon must lie in (0, 1]");
    if (!(std::abs(mu) < epsilon)) throw BadMu("|mu| must be below epsilon");

    PerturbedMap pm;
    pm.nf_ = reduce(map);
    pm.mu_ = mu;
    pm.epsilon_ = epsilon;

    const double lambda = 1.0 - mu;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Point z = grid_point({-1.0, 1.0, -1.0, 1.0}, 3, i, j);
            try {
                Mat2<WideReal> jac = wide_jacobian(map, z, lambda);
                pm.spectrum_deviation_ = std::max(pm.spectrum_deviation_, max_eigen_deviation(jac, WideReal(lambda)));
            } catch (const EvalError&) {
            }
        }
    }
    if (!(pm.spectrum_deviation_ <= kSpectralTolerance))
        throw ReductionError("perturbed spectrum deviates from 1 - mu by " + std::to_string(pm.spectrum_deviation_));
    return pm;
}

Point PerturbedMap::apply(Point z) const {
    Point g = nf_.map().apply(z);
    return {g.x - mu_ * z.x, g.y - mu_ * z.y};
}

Point PerturbedMap::inverse_normal(Point w) const {
    const double lambda = 1.0 - mu_;
    double y = w.y / lambda;
    return {(w.x - nf_.psi(y)) / lambda, y};
}

Point perturbed_inverse(const PerturbedMap& pm, Point w) {
    const NormalForm& nf = pm.normal_form();
    return nf.from_normal(pm.inverse_normal(nf.to_normal(w)));
}

Point geometric_sum_iterate(const PerturbedMap& pm, Point z, long n) {
    const double lambda = pm.lambda();
    if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionViolation("geometric_sum_iterate needs 0 < lambda < 1");
    if (n < 0) throw PreconditionViolation("geometric_sum_iterate needs n >= 0");
    const NormalForm& nf = pm.normal_form();
    Point w = nf.to_normal(z);
    const double nd = static_cast<double>(n);
    double x = std::pow(lambda, nd) * w.x;
    for (long k = 0; k < n; ++k) {
        double kd = static_cast<double>(k);
        x += std::pow(lambda, nd - 1.0 - kd) * nf.psi(w.y * std::pow(lambda, kd));
    }
    return nf.from_normal({x, std::pow(lambda, nd) * w.y});
}

LemmaReport lemma_bound_check(const std::function<double(double)>& psi, double lambda, double y, int n_max) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionViolation("lemma_bound_check needs 0 < lambda < 1");
    LemmaReport rep;
    rep.y = y;
    rep.n_max = n_max;
    double sum = 0.0, peak = 0.0, yk = y;
    for (int n = 1; n <= n_max; ++n) {
        // Moving from n-1 to n multiplies the old terms by lambda and adds psi(y lambda^(n-1)).
        double term = psi(yk);
        sum = lambda * sum + term;
        peak = std::max(peak, std::abs(term));
        yk *= lambda;
        double lhs = std::abs(sum);
        double rhs = peak / (1.0 - lambda);
        if (lhs > rhs + 1e-12) ++rep.violations;
        if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    }
    rep.holds = rep.violations == 0;
    return rep;
}

LemmaReport lemma_bound_check(const PerturbedMap& pm, double y, int n_max) {
    const NormalForm& nf = pm.normal_form();
    return lemma_bound_check([&](double t) { return nf.psi(t); }, pm.lambda(), y, n_max);
}

namespace {

// The contracting direction in normal coordinates reads
// (x, y) -> (rho x + f(y), rho y) with rho < 1.
struct Contraction {
    double rho;
    std::function<double(double)> f;
};

Contraction contraction_of(const PerturbedMap& pm) {
    const NormalForm& nf = pm.normal_form();
    const double lambda = pm.lambda();
    if (pm.mu() > 0.0) return {lambda, [&nf](double t) { return nf.psi(t); }};
    const double kappa = 1.0 / lambda;
    return {kappa, [&nf, kappa](double t) { return -kappa * nf.psi(kappa * t); }};
}

// rho^n |x| + (rho^(n-K) M_head + M_tail) / (1 - rho) with K = n/2 bounds
// |x_n|, where M_head and M_tail are the largest |f(y rho^k)| for k < K and
// K <= k < n.
bool certificate_reached(const Contraction& c, Point w, const std::vector<double>& mags, int n, double tol) {
    if (n <= 0) return norm2(w) <= tol;
    int K = n / 2;
    double head = 0.0, tail = 0.0;
    for (int k = 0; k < K; ++k) head = std::max(head, mags[k]);
    for (int k = K; k < n; ++k) tail = std::max(tail, mags[k]);
    double rn = std::pow(c.rho, n);
    double xb = rn * std::abs(w.x) + (std::pow(c.rho, n - K) * head + tail) / (1.0 - c.rho);
    double yb = rn * std::abs(w.y);
    return std::hypot(xb, yb) <= tol;
}

}  // namespace

StabilityReport classify_stability(const PerturbedMap& pm, const StabilityConfig& config) {
    StabilityReport rep;
    rep.mu = pm.mu();
    if (pm.mu() == 0.0) {
        rep.verdict = Verdict::Unipotent;
        return rep;
    }
    if (config.seeds.empty()) throw PreconditionViolation("classify_stability needs at least one seed");

    const bool attract = pm.mu() > 0.0;
    auto contract = [&](Point z) { return attract ? pm.apply(z) : perturbed_inverse(pm, z); };
    auto expand = [&](Point z) { return attract ? perturbed_inverse(pm, z) : pm.apply(z); };
    const Contraction c = contraction_of(pm);
    const NormalForm& nf = pm.normal_form();

    bool all_converged = true;
    for (std::size_t si = 0; si < config.seeds.size(); ++si) {
        SeedOutcome out;
        out.seed = config.seeds[si];
        Point z = out.seed;
        std::vector<double> norms{norm2(z)};
        if (config.keep_traces) out.trace.push_back(z);
        int n = 0;
        try {
            while (true) {
                double r = norms.back();
                if (r <= config.tol) {
                    out.converged = true;
                    break;
                }
                if (!(r <= config.escape_radius)) {
                    out.escaped = true;
                    break;
                }
                if (n >= config.n_max) break;
                z = contract(z);
                ++n;
                norms.push_back(norm2(z));
                if (config.keep_traces) out.trace.push_back(z);
            }
        } catch (const EvalError&) {
            out.escaped = true;
        }
        out.steps = n;
        out.final_norm = norms.back();
        if (out.converged) {
            out.monotone_from = 0;
            for (std::size_t i = norms.size() - 1; i > 0; --i) {
                if (norms[i] > norms[i - 1] * (1.0 + 1e-12)) {
                    out.monotone_from = static_cast<int>(i);
                    break;
                }
            }
        }

        Point w = nf.to_normal(out.seed);
        out.lemma = lemma_bound_check(c.f, c.rho, w.y, config.lemma_n);
        rep.lemma_violations += out.lemma.violations;
        rep.lemma_max_ratio = std::max(rep.lemma_max_ratio, out.lemma.max_ratio);

        try {
            std::vector<double> mags(static_cast<std::size_t>(config.n_max));
            double yk = w.y;
            for (int k = 0; k < config.n_max; ++k) {
                mags[k] = std::abs(c.f(yk));
                yk *= c.rho;
            }
            for (int cand : {std::max(n, 1), std::min(2 * n, config.n_max), config.n_max}) {
                if (cand <= config.n_max && certificate_reached(c, w, mags, cand, config.tol)) {
                    out.analytic_certified = true;
                    break;
                }
            }
        } catch (const EvalError&) {
        }

        Point v = out.seed;
        try {
            for (int k = 0; k < config.n_max; ++k) {
                v = expand(v);
                if (!(norm2(v) <= config.escape_radius)) {
                    out.opposite_escaped = true;
                    break;
                }
            }
        } catch (const EvalError&) {
            out.opposite_escaped = true;
        }

        rep.max_iterations = std::max(rep.max_iterations, out.steps);
        if (!out.converged) {
            all_converged = false;
            if (rep.inconclusive_seed < 0) rep.inconclusive_seed = static_cast<int>(si);
        }
        rep.seeds.push_back(std::move(out));
    }

    PeriodicReport per = periodic_search([&](Point p) { return pm.apply(p); }, config.periodic_window,
                                         config.periodic_grid, config.periodic_pmax, 1e-8);
    rep.periodic_candidates = static_cast<int>(per.candidates.size());
    rep.periodic_points_tested = per.points_tested;

    if (all_converged)
        rep.verdict = attract ? Verdict::GlobalAttractor : Verdict::GlobalRepellor;
    else
        rep.verdict = Verdict::Inconclusive;
    rep.flagged = attract ? rep.verdict != Verdict::GlobalAttractor : rep.verdict != Verdict::GlobalRepellor;
    return rep;
}

std::vector<StabilityReport> stability_sweep(const MapSpec& map, std::vector<double> mus,
                                             const StabilityConfig& config) {
    std::sort(mus.begin(), mus.end());
    std::vector<StabilityReport> rows;
    for (double mu : mus) {
        try {
            rows.push_back(classify_stability(family_member(map, mu, config.epsilon), config));
        } catch (const Error& e) {
            StabilityReport row;
            row.mu = mu;
            row.flagged = true;
            row.error = e.what();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<Point> seed_grid(double lo, double hi, int n) {
    std::vector<Point> seeds;
    Rect r{lo, hi, lo, hi};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) seeds.push_back(grid_point(r, n, i, j));
    return seeds;
}

}  // namespace unimap
