#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "unimap/expr.hpp"
#include "unimap/map.hpp"

namespace testsupport {

inline const std::vector<std::string>& phi_pool() {
    static const std::vector<std::string> pool{"t^2", "t^3", "sin(t)", "tanh(t)+t^3"};
    return pool;
}

/// Map with coefficients uniform in [-5, 5] and phi drawn from the pool.
inline unimap::MapSpec random_map(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_int_distribution<std::size_t> pick(0, phi_pool().size() - 1);
    double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
    return unimap::make_map(a, b, c, d, unimap::parse(phi_pool()[pick(rng)]));
}

inline std::vector<unimap::MapSpec> random_maps(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::vector<unimap::MapSpec> out;
    for (int i = 0; i < n; ++i) out.push_back(random_map(rng));
    return out;
}

/// Fixed-point-free map with D = 0: (c, d) = C (beta, -alpha) with C chosen
/// so that psi + C never vanishes.
inline unimap::MapSpec random_free_dzero(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_real_distribution<double> lift(1.5, 3.0);
    std::uniform_int_distribution<int> pick(0, 2);
    double a = coef(rng), b = coef(rng);
    double s = std::hypot(a, b), alpha = a / s, beta = b / s;
    int kind = pick(rng);
    double C = lift(rng) * s;
    if (kind != 0 && coef(rng) < 0) C = -C;
    static const char* pool[] = {"t^2", "sin(t)", "tanh(t)"};
    return unimap::make_map(a, b, C * beta, -C * alpha, unimap::parse(pool[kind]));
}

/// Fixed-point-free map with |D| >= 0.5 and a bounded phi.
inline unimap::MapSpec random_free_drift(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_int_distribution<int> pick(0, 3);
    static const char* pool[] = {"sin(t)", "tanh(t)", "sin(t)+tanh(t)", "cos(t)"};
    for (;;) {
        double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
        double s = std::hypot(a, b);
        if (s < 0.5) continue;
        double D = (a * c + b * d) / s;
        if (std::abs(D) < 0.5) continue;
        return unimap::make_map(a, b, c, d, unimap::parse(pool[pick(rng)]));
    }
}

/// Random expression tree over t without abs(), with denominators bounded
/// away from zero and no nested powers.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    std::string operator()(int depth = 4) { return gen(depth); }

private:
    std::mt19937_64 rng_;

    int roll(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    std::string leaf() {
        if (roll(2) == 0) return "t";
        double v = std::uniform_real_distribution<double>(0.1, 3.0)(rng_);
        return std::to_string(v);
    }

    std::string gen(int depth, bool allow_pow = true) {
        if (depth == 0) return leaf();
        switch (roll(allow_pow ? 9 : 8)) {
            case 0: return "(" + gen(depth - 1, allow_pow) + "+" + gen(depth - 1, allow_pow) + ")";
            case 1: return "(" + gen(depth - 1, allow_pow) + "-" + gen(depth - 1, allow_pow) + ")";
            case 2: return "(" + gen(depth - 1, allow_pow) + "*" + gen(depth - 1, allow_pow) + ")";
            case 3: return "(" + gen(depth - 1, allow_pow) + "/(2+cos(" + gen(depth - 1, allow_pow) + ")))";
            case 4: return "sin(" + gen(depth - 1, allow_pow) + ")";
            case 5: return "cos(" + gen(depth - 1, allow_pow) + ")";
            case 6: return "tanh(" + gen(depth - 1, allow_pow) + ")";
            case 7: return "exp(tanh(" + gen(depth - 1, allow_pow) + "))";
            default: return "(" + gen(depth - 1, false) + ")^" + std::to_string(1 + roll(3));
        }
    }
};

/// Central difference with the step used by validate_c1.
inline double central_difference(const unimap::Expr& e, double t) {
    double h = unimap::fd_step(t);
    return (e.eval(t + h) - e.eval(t - h)) / (2.0 * h);
}

}  // namespace testsupport
