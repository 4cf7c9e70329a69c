#pragma once

// The family G_mu = G - mu * Id for a map with G(0, 0) = (0, 0). With
// lambda = 1 - mu the rotation of G turns G_mu into
//
//   F(x, y) = (lambda x + psi(y), lambda y),
//   F^n(x, y) = (lambda^n x + sum_{k<n} lambda^(n-1-k) psi(y lambda^k), lambda^n y),
//   F^{-1}(u, v) = ((u - psi(v / lambda)) / lambda, v / lambda).

#include <functional>
#include <string>
#include <vector>

#include "unimap/geometry.hpp"
#include "unimap/map.hpp"
#include "unimap/normal_form.hpp"

namespace unimap {

class PerturbedMap {
public:
    const MapSpec& base() const { return nf_.map(); }
    const NormalForm& normal_form() const { return nf_; }
    double mu() const { return mu_; }
    double lambda() const { return 1.0 - mu_; }
    double epsilon() const { return epsilon_; }
    /// Largest |eigenvalue - lambda| seen by the construction-time check.
    double spectrum_deviation() const { return spectrum_deviation_; }

    Point apply(Point z) const;
    Point apply_normal(Point w) const { return {lambda() * w.x + nf_.psi(w.y), lambda() * w.y}; }
    Point inverse_normal(Point w) const;

private:
    friend PerturbedMap family_member(const MapSpec& map, double mu, double epsilon);

    NormalForm nf_;
    double mu_ = 0.0;
    double epsilon_ = 1.0;
    double spectrum_deviation_ = 0.0;
};

/// Throws NotUP1 when G(0, 0) != (0, 0) and BadMu unless |mu| < epsilon <= 1.
/// Checks the eigenvalues of D(G_mu) against 1 - mu at 9 points.
PerturbedMap family_member(const MapSpec& map, double mu, double epsilon = 1.0);

Point perturbed_inverse(const PerturbedMap& pm, Point w);

/// Closed-form n-th iterate; requires 0 < lambda < 1.
Point geometric_sum_iterate(const PerturbedMap& pm, Point z, long n);

struct LemmaReport {
    double y = 0.0;
    int n_max = 0;
    int violations = 0;
    /// max over n of LHS / RHS (0 when RHS = 0).
    double max_ratio = 0.0;
    bool holds = true;
};

/// |sum_{k<n} lambda^(n-1-k) psi(y lambda^k)| <= max_{k<n} |psi(y lambda^k)| / (1 - lambda)
/// for every n <= n_max, with slack 1e-12. Requires 0 < lambda < 1.
LemmaReport lemma_bound_check(const PerturbedMap& pm, double y, int n_max);

/// Same check for an arbitrary displacement function and contraction rate.
LemmaReport lemma_bound_check(const std::function<double(double)>& psi, double lambda, double y, int n_max);

enum class Verdict { GlobalAttractor, GlobalRepellor, Unipotent, Inconclusive };

std::string to_string(Verdict v);

struct SeedOutcome {
    Point seed;
    bool converged = false;
    bool escaped = false;
    /// Iterations used in the contracting direction (forward for mu > 0,
    /// inverse for mu < 0).
    int steps = 0;
    double final_norm = 0.0;
    /// First n after which |z_{n+1}| <= |z_n| for the rest of the orbit; -1 if none.
    int monotone_from = -1;
    /// The geometric-sum bound in normal coordinates reached tol.
    bool analytic_certified = false;
    /// The orbit in the expanding direction passed escape_R.
    bool opposite_escaped = false;
    LemmaReport lemma;
    std::vector<Point> trace;
};

struct StabilityConfig {
    std::vector<Point> seeds;
    int n_max = 5000;
    double tol = 1e-6;
    double escape_radius = 1e8;
    double epsilon = 1.0;
    int lemma_n = 100;
    Rect periodic_window{-2.0, 2.0, -2.0, 2.0};
    int periodic_grid = 11;
    int periodic_pmax = 16;
    bool keep_traces = false;
};

struct StabilityReport {
    double mu = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<SeedOutcome> seeds;
    int max_iterations = 0;
    int lemma_violations = 0;
    double lemma_max_ratio = 0.0;
    int periodic_candidates = 0;
    int periodic_points_tested = 0;
    /// Index of the first seed whose orbit did not converge; -1 if none.
    int inconclusive_seed = -1;
    /// Verdict does not match the sign of mu.
    bool flagged = false;
    /// Set when the row could not be built (for example |mu| >= epsilon).
    std::string error;
};

StabilityReport classify_stability(const PerturbedMap& pm, const StabilityConfig& config);

/// One row per mu, sorted by mu.
std::vector<StabilityReport> stability_sweep(const MapSpec& map, std::vector<double> mus,
                                             const StabilityConfig& config);

/// n x n grid of seeds over a square.
std::vector<Point> seed_grid(double lo, double hi, int n);

}  // namespace unimap
