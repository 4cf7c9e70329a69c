#include "unimap/report.hpp"

#include <charconv>

namespace unimap {

Json to_json(Point p) { return Json::array({p.x, p.y}); }
Json to_json(const Interval& i) { return Json::array({i.lo, i.hi}); }
Json to_json(const Rect& r) { return Json::array({r.x_lo, r.x_hi, r.y_lo, r.y_hi}); }

Json map_json(const MapSpec& m) { return Json::parse(map_to_json(m)); }

Json to_json(const ValidationReport& r) {
    Json nd = Json::array(), fails = Json::array();
    for (double t : r.non_differentiable) nd.push_back(t);
    for (double t : r.eval_failures) fails.push_back(t);
    return {{"interval", Json::array({r.lo, r.hi})},
            {"samples", r.samples},
            {"max_discrepancy", r.max_discrepancy},
            {"worst_t", r.worst_t},
            {"non_differentiable", nd},
            {"eval_failures", fails},
            {"pass", r.pass}};
}

Json to_json(const UnipotencyReport& r) {
    return {{"window", to_json(r.window)},
            {"n", r.n},
            {"samples", r.samples},
            {"max_deviation", r.max_deviation},
            {"max_deviation_double", r.max_deviation_double},
            {"nilpotent_closed_form", r.nilpotent_closed_form},
            {"tolerance", kSpectralTolerance},
            {"verdict", r.pass ? "pass" : "fail"}};
}

Json normal_form_json(const NormalForm& nf, const Classification& cls) {
    Json roots = Json::array();
    for (double r : cls.criterion_roots) roots.push_back(r);
    return {{"alpha", nf.alpha()},
            {"beta", nf.beta()},
            {"scale", nf.scale()},
            {"trans", to_json(nf.trans())},
            {"linear", nf.linear()},
            {"shear", nf.shear()},
            {"classification", to_string(cls.kind)},
            {"fixed_point_free", cls.fixed_point_free},
            {"window_limited", cls.window_limited},
            {"window", to_json(cls.window)},
            {"second_component", cls.second_component},
            {"criterion_roots", roots}};
}

Json to_json(const FixedPointSet& fs) {
    Json lines = Json::array(), bands = Json::array();
    for (double r : fs.lines) lines.push_back(r);
    for (const Interval& b : fs.bands) bands.push_back(to_json(b));
    return {{"kind", to_string(fs.kind)},
            {"lines", lines},
            {"bands", bands},
            {"window", to_json(fs.window)},
            {"normal", to_json(Point{fs.alpha, fs.beta})}};
}

Json to_json(const OrbitTrace& tr) {
    Json entries = Json::array();
    for (const OrbitEntry& e : tr.entries) entries.push_back({e.n, e.z.x, e.z.y});
    return {{"direction", tr.direction == Direction::Forward ? "forward" : "backward"},
            {"termination", to_string(tr.reason)},
            {"entries", entries}};
}

Json to_json(const MaximalInterval& mi) {
    return {{"lo", mi.lo},
            {"hi", mi.hi},
            {"lo_at_window", mi.lo_at_window},
            {"hi_at_window", mi.hi_at_window},
            {"sign", mi.sign}};
}

Json to_json(const PeriodicReport& r) {
    Json cands = Json::array();
    for (const PeriodicCandidate& c : r.candidates) cands.push_back({{"z", to_json(c.z)}, {"period", c.period}});
    return {{"candidates", cands},
            {"points_tested", r.points_tested},
            {"fixed_points_skipped", r.fixed_points_skipped},
            {"certificate_checked", r.certificate_checked},
            {"certificate_max_deviation", r.certificate_max_deviation}};
}

Json to_json(const DiskReport& r) {
    return {{"premise", to_string(r.premise)},
            {"premise_margin", r.premise_margin},
            {"p_range", Json::array({r.p_lo, r.p_hi})},
            {"pairs_checked", r.pairs_checked},
            {"all_disjoint", r.all_disjoint},
            {"min_pair_margin", r.min_pair_margin}};
}

Json to_json(const ConjugacyReport& r) {
    return {{"window", to_json(r.window)},
            {"n", r.n},
            {"conjugacy_sup", r.conjugacy_sup},
            {"conjugacy_mean", r.conjugacy_mean},
            {"roundtrip_sup", r.roundtrip_sup},
            {"roundtrip_mean", r.roundtrip_mean}};
}

Json conjugacy_json(const ConjugacyMap& h) {
    const NormalForm& nf = h.normal_form();
    Json params;
    switch (h.branch()) {
        case ConjugacyBranch::DZero:
            params = {{"g_at_0", h.g(0.0)}};
            break;
        case ConjugacyBranch::DNonzero: {
            double D = h.drift();
            params = {{"base_interval", D > 0 ? Json::array({0.0, D}) : Json::array({D, 0.0})},
                      {"phi_at_D", h.phi(D)}};
            break;
        }
        case ConjugacyBranch::Linear:
            params = {{"shear", nf.shear()}, {"drift", h.drift()}};
            break;
    }
    return {{"branch", to_string(h.branch())},
            {"alpha", nf.alpha()},
            {"beta", nf.beta()},
            {"trans", to_json(nf.trans())},
            {"parameters", params}};
}

Json to_json(const LemmaReport& r) {
    return {{"y", r.y}, {"n_max", r.n_max}, {"violations", r.violations}, {"max_ratio", r.max_ratio}, {"holds", r.holds}};
}

Json to_json(const SeedOutcome& s) {
    std::string omega = s.converged ? "origin" : (s.escaped ? "escaped" : "undetermined");
    return {{"seed", to_json(s.seed)},
            {"converged", s.converged},
            {"steps", s.steps},
            {"final_norm", s.final_norm},
            {"omega_limit", omega},
            {"monotone_from", s.monotone_from},
            {"analytic_certified", s.analytic_certified},
            {"opposite_escaped", s.opposite_escaped},
            {"lemma", to_json(s.lemma)}};
}

Json to_json(const StabilityReport& r) {
    Json seeds = Json::array();
    for (const SeedOutcome& s : r.seeds) seeds.push_back(to_json(s));
    Json out = {{"mu", r.mu},
                {"verdict", to_string(r.verdict)},
                {"flagged", r.flagged},
                {"max_iterations", r.max_iterations},
                {"inconclusive_seed", r.inconclusive_seed},
                {"lemma_violations", r.lemma_violations},
                {"lemma_max_ratio", r.lemma_max_ratio},
                {"periodic_candidates", r.periodic_candidates},
                {"periodic_points_tested", r.periodic_points_tested},
                {"seeds", seeds}};
    if (!r.error.empty()) out["error"] = r.error;
    return out;
}

std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string orbit_csv(const OrbitTrace& tr) {
    std::string out;
    for (const OrbitEntry& e : tr.entries)
        out += std::to_string(e.n) + "," + format_number(e.z.x) + "," + format_number(e.z.y) + "\n";
    return out;
}

}  // namespace unimap
