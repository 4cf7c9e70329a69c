#include "unimap/map.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "unimap/errors.hpp"

namespace unimap {

namespace {

double phi_prime(const MapSpec& m, Point z) {
    return m.phi().eval_dual(m.a() * z.x + m.b() * z.y).deriv;
}

Mat2<WideReal> exact_nilpotent_part(double a, double b) {
    WideReal wa = a, wb = b;
    return {wa * wb, wb * wb, -(wa * wa), -(wa * wb)};
}

Mat2<WideReal> assemble(const Mat2<WideReal>& n, double p, double diagonal) {
    WideReal wp = p, wd = diagonal;
    return {wd + wp * n.m11, wp * n.m12, wp * n.m21, wd + wp * n.m22};
}

}  // namespace

MapSpec MapSpec::make(double a, double b, double c, double d, const Expr& phi) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
        throw InvalidSpec("map coefficients must be finite");
    if (phi.empty()) throw InvalidSpec("phi is empty");

    double offset = 0.0;
    try {
        offset = phi.eval(0.0);
    } catch (const EvalError& e) {
        throw InvalidSpec(std::string("phi(0) is undefined: ") + e.what());
    }

    MapSpec m;
    m.a_ = a;
    m.b_ = b;
    m.phi_offset_ = offset;
    if (offset == 0.0) {
        m.c_ = c;
        m.d_ = d;
        m.phi_ = phi;
    } else {
        m.c_ = c + b * offset;
        m.d_ = d - a * offset;
        m.phi_ = Expr::binary(NodeKind::Sub, phi, Expr::number(offset));
    }
    if (!std::isfinite(m.c_) || !std::isfinite(m.d_))
        throw InvalidSpec("re-centered translation is not finite");
    return m;
}

Point MapSpec::apply(Point z) const {
    if (is_translation()) return {z.x + c_, z.y + d_};
    double f = phi_.eval(a_ * z.x + b_ * z.y);
    return {z.x + b_ * f + c_, z.y - a_ * f + d_};
}

Point MapSpec::inverse_apply(Point w) const {
    if (is_translation()) return {w.x - c_, w.y - d_};
    // a*G1 + b*G2 = a*x + b*y + (a*c + b*d) recovers the argument of phi.
    double s = a_ * w.x + b_ * w.y - (a_ * c_ + b_ * d_);
    double f = phi_.eval(s);
    return {w.x - b_ * f - c_, w.y + a_ * f - d_};
}

Jacobian2 jacobian(const MapSpec& m, Point z) {
    if (m.is_translation()) return {1.0, 0.0, 0.0, 1.0};
    double p = phi_prime(m, z);
    double a = m.a(), b = m.b();
    return {1.0 + p * (a * b), p * (b * b), -p * (a * a), 1.0 - p * (a * b)};
}

bool nilpotent_part_vanishes(const Mat2<WideReal>& n) {
    WideReal s11 = n.m11 * n.m11 + n.m12 * n.m21;
    WideReal s12 = n.m11 * n.m12 + n.m12 * n.m22;
    WideReal s21 = n.m21 * n.m11 + n.m22 * n.m21;
    WideReal s22 = n.m21 * n.m12 + n.m22 * n.m22;
    return s11 == 0 && s12 == 0 && s21 == 0 && s22 == 0;
}

std::array<double, 2> spectrum_at(const MapSpec& m, Point z) {
    if (m.is_translation()) return {1.0, 1.0};
    if (!nilpotent_part_vanishes(exact_nilpotent_part(m.a(), m.b())))
        throw ReductionError("nilpotent part of the Jacobian does not square to zero");
    // Still evaluate phi' so that NonDifferentiable propagates.
    (void)phi_prime(m, z);
    // DG = I + p N with N^2 = 0: trace 2, determinant 1, double eigenvalue 1.
    return {1.0, 1.0};
}

Mat2<WideReal> wide_jacobian(const MapSpec& m, Point z, double diagonal, const NilpotentHook& hook) {
    Mat2<WideReal> n = exact_nilpotent_part(m.a(), m.b());
    if (hook) hook(n);
    double p = m.is_translation() ? 0.0 : phi_prime(m, z);
    return assemble(n, p, diagonal);
}

UnipotencyReport verify_unipotent(const MapSpec& m, const Rect& window, int n,
                                  const NilpotentHook& hook) {
    UnipotencyReport rep;
    rep.window = window;
    rep.n = n;
    if (n < 1) throw PreconditionViolation("verify_unipotent needs n >= 1");

    Mat2<WideReal> nil = exact_nilpotent_part(m.a(), m.b());
    if (hook) hook(nil);
    rep.nilpotent_closed_form = nilpotent_part_vanishes(nil);

    const WideReal one = 1;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Point z = grid_point(window, n, i, j);
            double p = m.is_translation() ? 0.0 : phi_prime(m, z);
            Mat2<WideReal> jw = assemble(nil, p, 1.0);
            rep.max_deviation = std::max(rep.max_deviation, max_eigen_deviation(jw, one));

            Jacobian2 jd{static_cast<double>(jw.m11), static_cast<double>(jw.m12),
                         static_cast<double>(jw.m21), static_cast<double>(jw.m22)};
            rep.max_deviation_double =
                std::max(rep.max_deviation_double, max_eigen_deviation(jd, 1.0));
            ++rep.samples;
        }
    }
    rep.pass = rep.nilpotent_closed_form && rep.max_deviation <= kSpectralTolerance;
    return rep;
}

MapSpec map_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("map spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidSpec("map spec must be a JSON object");
    auto num = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number())
            throw InvalidSpec(std::string("map spec needs numeric field '") + key + "'");
        return j[key].get<double>();
    };
    if (!j.contains("phi") || !j["phi"].is_string())
        throw InvalidSpec("map spec needs string field 'phi'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "a" && k != "b" && k != "c" && k != "d" && k != "phi")
            throw InvalidSpec("unknown map spec field '" + k + "'");
    }
    return MapSpec::make(num("a"), num("b"), num("c"), num("d"),
                         parse(j["phi"].get<std::string>()));
}

std::string map_to_json(const MapSpec& m) {
    nlohmann::ordered_json j;
    j["a"] = m.a();
    j["b"] = m.b();
    j["c"] = m.c();
    j["d"] = m.d();
    j["phi"] = m.phi().str();
    return j.dump();
}

MapSpec load_map(const std::string& inline_or_path) {
    auto first = inline_or_path.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && inline_or_path[first] == '{')
        return map_from_json(inline_or_path);
    std::ifstream in(inline_or_path);
    if (!in) throw InvalidSpec("cannot open map file '" + inline_or_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return map_from_json(ss.str());
}

}  // namespace unimap
