#pragma once

// Single-variable expressions in `t` with forward-mode differentiation.
//
// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := base ('^' INT)?
//   base   := NUMBER | 't' | FUNC '(' expr ')' | '(' expr ')'
//   FUNC   := sin | cos | exp | tanh | abs
//
// INT is an optionally signed integer literal. NUMBER is a decimal literal
// with an optional exponent. Exponentiation binds tighter than unary minus,
// so "-t^2" means -(t^2).

#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace unimap {

/// Value and derivative with respect to t.
struct DualValue {
    double value = 0.0;
    double deriv = 0.0;
};

enum class NodeKind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Tanh, Abs };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double number = 0.0;  // Number only
    int exponent = 0;     // Pow only
    NodePtr lhs;          // unary operand or left operand
    NodePtr rhs;          // right operand of binary ops
};

/// Immutable expression tree. Copies share structure.
class Expr {
public:
    Expr() = default;
    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    static Expr number(double v);
    static Expr var();
    static Expr unary(NodeKind kind, const Expr& operand);
    static Expr binary(NodeKind kind, const Expr& lhs, const Expr& rhs);
    static Expr pow(const Expr& base, int exponent);

    bool empty() const { return root_ == nullptr; }
    const Node& root() const { return *root_; }

    double eval(double t) const;
    DualValue eval_dual(double t) const;

    /// Canonical, fully parenthesized text that parses back to an
    /// equivalent tree.
    std::string str() const;

    /// True if the tree contains abs().
    bool uses_abs() const;

private:
    NodePtr root_;
};

Expr parse(std::string_view src);

inline double eval(const Expr& e, double t) { return e.eval(t); }
inline DualValue eval_dual(const Expr& e, double t) { return e.eval_dual(t); }

struct ValidationReport {
    double lo = 0.0;
    double hi = 0.0;
    int samples = 0;
    double max_discrepancy = 0.0;  // relative: |d - fd| / max(1, |d|)
    double worst_t = 0.0;
    std::vector<double> non_differentiable;
    std::vector<double> eval_failures;
    bool pass = false;
};

/// Pass threshold on the relative derivative discrepancy.
inline constexpr double kC1Tolerance = 1e-5;

/// Finite-difference step used by validate_c1 at the point t.
inline double fd_step(double t) { return 1e-6 * (std::abs(t) > 1.0 ? std::abs(t) : 1.0); }

/// Samples n points of [lo, hi] and compares the forward-mode derivative
/// with central differences. Failures are recorded, never thrown.
ValidationReport validate_c1(const Expr& e, double lo, double hi, int n);

}  // namespace unimap
