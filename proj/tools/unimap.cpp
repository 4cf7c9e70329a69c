// unimap: command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 a finding that should be
// impossible for a map in Campbell form (a periodic point, an isolated fixed
// point, a failed conjugacy identity, ...).

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unimap/bifurcation.hpp"
#include "unimap/conjugacy.hpp"
#include "unimap/dynamics.hpp"
#include "unimap/errors.hpp"
#include "unimap/expr.hpp"
#include "unimap/map.hpp"
#include "unimap/normal_form.hpp"
#include "unimap/report.hpp"

using namespace unimap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFinding = 2;

const char* const kGrammar = R"(phi grammar (variable t):
  expr   := term (('+' | '-') term)*
  term   := unary (('*' | '/') unary)*
  unary  := '-' unary | power
  power  := base ('^' INT)?
  base   := NUMBER | 't' | FUNC '(' expr ')' | '(' expr ')'
  FUNC   := sin | cos | exp | tanh | abs
  INT is an optionally signed integer; '^' binds tighter than unary minus.
)";

const char* const kSpecSchema = R"(map spec (inline JSON or a file path):
{
  "type": "object",
  "required": ["a", "b", "c", "d", "phi"],
  "additionalProperties": false,
  "properties": {
    "a": {"type": "number"}, "b": {"type": "number"},
    "c": {"type": "number"}, "d": {"type": "number"},
    "phi": {"type": "string"}
  }
}
)";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string map;
    std::vector<double> window{-5.0, 5.0};
    std::uint64_t seed = 20240101;
    std::string format = "auto";

    int check_n = 50;
    std::vector<double> point;
    std::vector<double> start{0.0, 0.0};
    int orbit_n = 10;
    double escape = std::numeric_limits<double>::infinity();
    bool backward = false;
    int newton_starts = 100;
    int grid = 51;
    int pmax = 64;
    double tol = 1e-8;
    std::vector<double> center{0.0, 3.0};
    double radius = 0.5;
    std::vector<int> p_range{-5, 5};
    std::vector<double> check_grid{-10.0, 10.0, 41.0};
    std::vector<double> segment;

    std::vector<double> mu_list{-0.3, -0.1, 0.1, 0.3};
    std::vector<double> seeds;
    std::vector<double> seed_grid;
    int random_seeds = 20;
    int n_max = 5000;
    double stab_tol = 1e-6;
    double escape_r = 1e8;
    double epsilon = 1.0;
    std::string traces;
};

Rect window_rect(const Options& o) {
    Rect r;
    if (o.window.size() == 2) {
        r = {o.window[0], o.window[1], o.window[0], o.window[1]};
    } else if (o.window.size() == 4) {
        r = {o.window[0], o.window[1], o.window[2], o.window[3]};
    } else {
        throw UsageError("--window takes 2 or 4 numbers");
    }
    if (!(r.x_lo < r.x_hi && r.y_lo < r.y_hi)) throw UsageError("--window needs lo < hi on each axis");
    return r;
}

// Range of normal heights alpha x + beta y over the rectangle.
Interval height_window(const NormalForm& nf, const Rect& r) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Point c : {Point{r.x_lo, r.y_lo}, Point{r.x_lo, r.y_hi}, Point{r.x_hi, r.y_lo}, Point{r.x_hi, r.y_hi}}) {
        double h = nf.to_normal(c).y;
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    return {lo, hi};
}

Point as_point(const std::vector<double>& v, const char* flag) {
    if (v.size() != 2) throw UsageError(std::string(flag) + " takes two numbers");
    return {v[0], v[1]};
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

void require_json(const Options& o, const char* sub) {
    if (o.format == "csv") throw UsageError(std::string(sub) + " has no CSV output");
}

int run_check(const Options& o, const MapSpec& m) {
    require_json(o, "check");
    Rect win = window_rect(o);
    if (o.check_n < 2) throw UsageError("--n must be at least 2");
    UnipotencyReport rep = verify_unipotent(m, win, o.check_n);
    NormalForm nf = reduce(m);
    Json c1 = nullptr;
    bool c1_ok = true;
    if (!m.is_translation()) {
        // phi is evaluated at s * (normal height).
        Interval hw = height_window(nf, win);
        ValidationReport v = validate_c1(m.phi(), hw.lo * nf.scale(), hw.hi * nf.scale(), 1000);
        c1 = to_json(v);
        c1_ok = v.pass;
    }

    double roundtrip = 0.0;
    for (int i = 0; i < o.check_n; ++i) {
        for (int j = 0; j < o.check_n; ++j) {
            Point z = grid_point(win, o.check_n, i, j);
            double e1 = norm_inf(m.inverse_apply(m.apply(z)) - z);
            double e2 = norm_inf(m.apply(m.inverse_apply(z)) - z);
            roundtrip = std::max(roundtrip, std::max(e1, e2) / (1.0 + norm_inf(z)));
        }
    }
    bool inverse_ok = roundtrip <= 1e-9;
    Json out = {{"map", map_json(m)},
                {"unipotency", to_json(rep)},
                {"c1", c1},
                {"c1_pass", c1_ok},
                {"inverse_roundtrip_max", roundtrip},
                {"verdict", rep.pass && inverse_ok ? "pass" : "fail"}};
    emit(out);
    return rep.pass && inverse_ok ? kExitOk : kExitFinding;
}

int run_normal_form(const Options& o, const MapSpec& m) {
    require_json(o, "normal-form");
    Rect win = window_rect(o);
    NormalForm nf = reduce(m);
    Classification cls = classify(nf, height_window(nf, win));
    Json out = normal_form_json(nf, cls);
    double residual = reduction_residual(nf, win, 21);
    out["reduction_residual"] = residual;
    emit(out);
    return residual <= kReductionTolerance ? kExitOk : kExitFinding;
}

int run_invert(const Options& o, const MapSpec& m) {
    require_json(o, "invert");
    Point w = as_point(o.point, "--point");
    Point z = m.inverse_apply(w);
    Point back = m.apply(z);
    double err = norm_inf(back - w);
    emit({{"point", to_json(w)}, {"inverse", to_json(z)}, {"roundtrip_error", err}});
    return err <= 1e-9 * (1.0 + norm_inf(w)) ? kExitOk : kExitFinding;
}

int run_fixed_points(const Options& o, const MapSpec& m) {
    require_json(o, "fixed-points");
    Rect win = window_rect(o);
    NormalForm nf = reduce(m);
    FixedPointSet fs = fixed_set(nf, height_window(nf, win));
    std::vector<Point> found = newton_fixed_points(m, win, o.newton_starts, o.seed);

    double worst = 0.0;
    int off_set = 0;
    for (Point z : found) {
        double d = fs.distance(z);
        worst = std::max(worst, std::isfinite(d) ? d : 1e300);
        if (!(d <= 1e-6)) ++off_set;
    }
    Json out = to_json(fs);
    out["newton"] = {{"starts", o.newton_starts}, {"converged", found.size()}, {"off_set", off_set},
                     {"max_distance", found.empty() ? 0.0 : worst}};
    const double tol = translation_zero_tol(m);
    if (std::abs(nf.trans().x) <= tol && std::abs(nf.trans().y) <= tol) {
        Json mis = Json::array();
        for (const MaximalInterval& mi : maximal_intervals(nf, fs.window)) mis.push_back(to_json(mi));
        out["maximal_intervals"] = mis;
    }
    emit(out);
    return off_set == 0 ? kExitOk : kExitFinding;
}

int run_orbit(const Options& o, const MapSpec& m) {
    if (o.orbit_n < 1) throw UsageError("--n must be at least 1");
    Point z = as_point(o.start, "--start");
    OrbitTrace tr = iterate(m, z, o.orbit_n, o.escape, o.backward ? Direction::Backward : Direction::Forward);
    if (o.format == "json")
        emit(to_json(tr));
    else
        std::cout << orbit_csv(tr);
    return kExitOk;
}

int run_periodic(const Options& o, const MapSpec& m) {
    Rect win = window_rect(o);
    if (o.grid < 2) throw UsageError("--grid must be at least 2");
    if (o.pmax < 2) throw UsageError("--pmax must be at least 2");
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    PeriodicReport rep = periodic_search(m, win, o.grid, o.pmax, o.tol);
    if (o.format == "csv") {
        std::cout << "x,y,period\n";
        for (const PeriodicCandidate& c : rep.candidates) std::cout << format_number(c.z.x) << "," << format_number(c.z.y) << "," << c.period << "\n";
    } else {
        Json out = to_json(rep);
        out["grid"] = o.grid;
        out["p_max"] = o.pmax;
        out["tol"] = o.tol;
        emit(out);
    }
    return rep.candidates.empty() ? kExitOk : kExitFinding;
}

int run_disk(const Options& o, const MapSpec& m) {
    require_json(o, "disk-test");
    if (o.p_range.size() != 2) throw UsageError("--p-range takes two integers");
    if (!(o.radius > 0.0)) throw UsageError("--radius must be positive");
    NormalForm nf = reduce(m);
    Disk disk{as_point(o.center, "--center"), o.radius};
    DiskReport rep = disk_disjoint_iterates(nf, disk, o.p_range[0], o.p_range[1]);
    Json out = to_json(rep);
    out["center"] = to_json(disk.center);
    out["radius"] = disk.radius;
    emit(out);
    bool contradiction = rep.premise == PremiseStatus::Holds && !rep.all_disjoint;
    return contradiction ? kExitFinding : kExitOk;
}

int run_conjugacy(const Options& o, const MapSpec& m) {
    require_json(o, "conjugacy");
    if (o.check_grid.size() != 3) throw UsageError("--check-grid takes lo hi n");
    double lo = o.check_grid[0], hi = o.check_grid[1];
    int n = static_cast<int>(o.check_grid[2]);
    if (!(lo < hi) || n < 2 || o.check_grid[2] != n) throw UsageError("--check-grid needs lo < hi and an integer n >= 2");
    NormalForm nf = reduce(m);
    Rect win = window_rect(o);
    Classification cls = classify(nf, height_window(nf, win));
    ConjugacyMap h = build_conjugacy(nf, cls);
    ConjugacyReport rep = verify_conjugacy(m, h, {lo, hi, lo, hi}, n);
    Json out = conjugacy_json(h);
    out["classification"] = to_string(cls.kind);
    out["window_limited"] = cls.window_limited;
    out["residual"] = to_json(rep);
    if (o.segment.size() == 4) {
        out["escape_bound"] = escape_all_segments(nf, {o.segment[0], o.segment[1]}, {o.segment[2], o.segment[3]}, win);
    } else if (!o.segment.empty()) {
        throw UsageError("--segment takes x1 y1 x2 y2");
    }
    emit(out);
    bool ok = rep.conjugacy_sup <= 1e-8 && rep.roundtrip_sup <= 1e-9;
    return ok ? kExitOk : kExitFinding;
}

int run_bifurcate(const Options& o, const MapSpec& m) {
    StabilityConfig cfg;
    cfg.n_max = o.n_max;
    cfg.tol = o.stab_tol;
    cfg.escape_radius = o.escape_r;
    cfg.epsilon = o.epsilon;
    cfg.keep_traces = !o.traces.empty();
    if (!(o.epsilon > 0.0 && o.epsilon <= 1.0)) throw UsageError("--epsilon must lie in (0, 1]");
    for (double mu : o.mu_list)
        if (!(std::abs(mu) < o.epsilon)) throw UsageError("every mu must satisfy |mu| < epsilon");
    if (o.n_max < 1 || !(o.stab_tol > 0.0)) throw UsageError("--n-max and --tol must be positive");

    if (!o.seeds.empty()) {
        if (o.seeds.size() % 2 != 0) throw UsageError("--seeds takes x y pairs");
        for (std::size_t i = 0; i < o.seeds.size(); i += 2) cfg.seeds.push_back({o.seeds[i], o.seeds[i + 1]});
    } else if (!o.seed_grid.empty()) {
        if (o.seed_grid.size() != 3 || o.seed_grid[2] < 1) throw UsageError("--seed-grid takes lo hi n");
        cfg.seeds = seed_grid(o.seed_grid[0], o.seed_grid[1], static_cast<int>(o.seed_grid[2]));
    } else {
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> u(-20.0, 20.0);
        for (int i = 0; i < o.random_seeds; ++i) {
            double x = u(rng);
            cfg.seeds.push_back({x, u(rng)});
        }
    }

    std::vector<StabilityReport> rows = stability_sweep(m, o.mu_list, cfg);
    bool flagged = false;
    for (const StabilityReport& r : rows) {
        if (!r.error.empty()) throw UsageError(r.error);
        flagged = flagged || r.flagged || r.lemma_violations > 0 || r.periodic_candidates > 0;
    }

    if (!o.traces.empty()) {
        std::ofstream f(o.traces);
        if (!f) throw UsageError("cannot write " + o.traces);
        f << "mu,seed,n,x,y\n";
        for (const StabilityReport& r : rows)
            for (std::size_t s = 0; s < r.seeds.size(); ++s)
                for (std::size_t k = 0; k < r.seeds[s].trace.size(); ++k)
                    f << format_number(r.mu) << "," << s << "," << k << "," << format_number(r.seeds[s].trace[k].x) << ","
                      << format_number(r.seeds[s].trace[k].y) << "\n";
    }

    if (o.format == "csv") {
        std::cout << "mu,verdict,flagged,max_iterations,lemma_violations,periodic_candidates\n";
        for (const StabilityReport& r : rows)
            std::cout << format_number(r.mu) << "," << to_string(r.verdict) << "," << (r.flagged ? 1 : 0) << "," << r.max_iterations
                      << "," << r.lemma_violations << "," << r.periodic_candidates << "\n";
    } else {
        Json table = Json::array();
        for (const StabilityReport& r : rows) table.push_back(to_json(r));
        emit({{"n_max", cfg.n_max}, {"tol", cfg.tol}, {"seeds", cfg.seeds.size()}, {"rows", table}});
    }
    return flagged ? kExitFinding : kExitOk;
}

void print_reference() { std::cerr << "\n" << kGrammar << "\n" << kSpecSchema; }

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Analysis tools for planar maps (x + b phi(ax+by) + c, y - a phi(ax+by) + d)", "unimap"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--map", o.map, "Map spec: inline JSON or a path to a JSON file");
    app.add_option("--window", o.window, "Window LO HI [LO2 HI2]")->expected(2, 4);
    app.add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"auto", "json", "csv"}));

    auto* check = app.add_subcommand("check", "Verify the spectrum and the explicit inverse on a grid");
    check->add_option("--n", o.check_n, "Grid points per axis")->capture_default_str();

    app.add_subcommand("normal-form", "Rotation reduction and classification");

    auto* invert = app.add_subcommand("invert", "Evaluate the explicit inverse at a point");
    invert->add_option("--point", o.point, "U V")->expected(2)->required();

    auto* fixed = app.add_subcommand("fixed-points", "Fixed-point set with a Newton cross-check");
    fixed->add_option("--starts", o.newton_starts, "Newton starts")->capture_default_str();

    auto* orbit = app.add_subcommand("orbit", "Orbit trace as CSV rows n,x,y");
    orbit->add_option("--start", o.start, "X Y")->expected(2)->required();
    orbit->add_option("--n", o.orbit_n, "Number of steps")->capture_default_str();
    orbit->add_option("--escape", o.escape, "Stop once |z| exceeds this radius");
    orbit->add_flag("--backward", o.backward, "Iterate the inverse");

    auto* periodic = app.add_subcommand("periodic", "Grid search for periodic points");
    periodic->add_option("--grid", o.grid, "Grid points per axis")->capture_default_str();
    periodic->add_option("--pmax", o.pmax, "Largest period tested")->capture_default_str();
    periodic->add_option("--tol", o.tol, "Return tolerance")->capture_default_str();

    auto* disk = app.add_subcommand("disk-test", "Disjointness of the iterates of a disk");
    disk->add_option("--center", o.center, "X Y")->expected(2);
    disk->add_option("--radius", o.radius, "Radius")->capture_default_str();
    disk->add_option("--p-range", o.p_range, "P_LO P_HI")->expected(2);

    auto* conj = app.add_subcommand("conjugacy", "Explicit conjugacy to the unit translation");
    conj->add_option("--check-grid", o.check_grid, "LO HI N")->expected(3);
    conj->add_option("--segment", o.segment, "X1 Y1 X2 Y2: report the escape bound for this segment and the window")
        ->expected(4);

    auto* bif = app.add_subcommand("bifurcate", "Stability of the family G - mu Id");
    bif->add_option("--mu-list", o.mu_list, "Values of mu")->expected(0, -1);
    bif->add_option("--seeds", o.seeds, "X1 Y1 X2 Y2 ...")->expected(2, -1);
    bif->add_option("--seed-grid", o.seed_grid, "LO HI N")->expected(3);
    bif->add_option("--random-seeds", o.random_seeds, "Random seeds in [-20,20]^2 when none are given")
        ->capture_default_str();
    bif->add_option("--n-max", o.n_max, "Iteration budget")->capture_default_str();
    bif->add_option("--tol", o.stab_tol, "Convergence radius")->capture_default_str();
    bif->add_option("--escape", o.escape_r, "Escape radius")->capture_default_str();
    bif->add_option("--epsilon", o.epsilon, "Family half-width, at most 1")->capture_default_str();
    bif->add_option("--traces", o.traces, "Write CSV orbit traces (mu,seed,n,x,y) to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        if (code == 0) return kExitOk;
        print_reference();
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (o.format == "auto") o.format = name == "orbit" ? "csv" : "json";

    try {
        if (o.map.empty()) throw UsageError("--map is required");
        MapSpec m = load_map(o.map);
        if (name == "check") return run_check(o, m);
        if (name == "normal-form") return run_normal_form(o, m);
        if (name == "invert") return run_invert(o, m);
        if (name == "fixed-points") return run_fixed_points(o, m);
        if (name == "orbit") return run_orbit(o, m);
        if (name == "periodic") return run_periodic(o, m);
        if (name == "disk-test") return run_disk(o, m);
        if (name == "conjugacy") return run_conjugacy(o, m);
        if (name == "bifurcate") return run_bifurcate(o, m);
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        print_reference();
        return kExitUsage;
    } catch (const InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        print_reference();
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        print_reference();
        return kExitUsage;
    } catch (const unimap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
