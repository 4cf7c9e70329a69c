#include "unimap/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <type_traits>

#include "unimap/errors.hpp"

namespace unimap {

namespace {

// ---------------------------------------------------------------------------
// Evaluation. Both scalar types run the identical value arithmetic, so the
// value part of a dual evaluation is bit-identical to a plain evaluation.

struct Plain {
    double v;
};

double value_of(Plain p) { return p.v; }
double value_of(DualValue d) { return d.value; }

double checked(double v, const char* op) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + op);
    return v;
}

template <class S>
S lift(S, double v, double d) {
    if constexpr (std::is_same_v<S, Plain>) {
        (void)d;
        return {v};
    } else {
        return {v, checked(d, "derivative")};
    }
}

template <class S>
double deriv_of(S s) {
    if constexpr (std::is_same_v<S, Plain>) {
        return 0.0;
    } else {
        return s.deriv;
    }
}

template <class S>
S evaluate(const Node& n, const S& t) {
    switch (n.kind) {
        case NodeKind::Number:
            return lift(t, n.number, 0.0);
        case NodeKind::Var:
            return t;
        case NodeKind::Neg: {
            S a = evaluate(*n.lhs, t);
            return lift(t, -value_of(a), -deriv_of(a));
        }
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div: {
            S a = evaluate(*n.lhs, t);
            S b = evaluate(*n.rhs, t);
            double av = value_of(a), bv = value_of(b);
            double ad = deriv_of(a), bd = deriv_of(b);
            switch (n.kind) {
                case NodeKind::Add:
                    return lift(t, checked(av + bv, "+"), ad + bd);
                case NodeKind::Sub:
                    return lift(t, checked(av - bv, "-"), ad - bd);
                case NodeKind::Mul:
                    return lift(t, checked(av * bv, "*"), ad * bv + av * bd);
                default:
                    if (bv == 0.0) throw EvalError("division by zero");
                    return lift(t, checked(av / bv, "/"), (ad * bv - av * bd) / (bv * bv));
            }
        }
        case NodeKind::Pow: {
            S a = evaluate(*n.lhs, t);
            double av = value_of(a);
            int k = n.exponent;
            if (av == 0.0 && k < 0) throw EvalError("division by zero in negative power");
            double v = checked(std::pow(av, k), "^");
            double d = k == 0 ? 0.0 : k * std::pow(av, k - 1) * deriv_of(a);
            return lift(t, v, d);
        }
        case NodeKind::Sin: {
            S a = evaluate(*n.lhs, t);
            return lift(t, checked(std::sin(value_of(a)), "sin"),
                        std::cos(value_of(a)) * deriv_of(a));
        }
        case NodeKind::Cos: {
            S a = evaluate(*n.lhs, t);
            return lift(t, checked(std::cos(value_of(a)), "cos"),
                        -std::sin(value_of(a)) * deriv_of(a));
        }
        case NodeKind::Exp: {
            S a = evaluate(*n.lhs, t);
            double v = checked(std::exp(value_of(a)), "exp");
            return lift(t, v, v * deriv_of(a));
        }
        case NodeKind::Tanh: {
            S a = evaluate(*n.lhs, t);
            double v = checked(std::tanh(value_of(a)), "tanh");
            return lift(t, v, (1.0 - v * v) * deriv_of(a));
        }
        case NodeKind::Abs: {
            S a = evaluate(*n.lhs, t);
            double av = value_of(a);
            if constexpr (!std::is_same_v<S, Plain>) {
                if (av == 0.0) throw NonDifferentiable(value_of(t));
            }
            return lift(t, std::abs(av), av > 0.0 ? deriv_of(a) : -deriv_of(a));
        }
    }
    throw EvalError("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Parsing.

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse_all() {
        Expr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = Expr::binary(NodeKind::Add, lhs, term());
            else if (accept('-'))
                lhs = Expr::binary(NodeKind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = Expr::binary(NodeKind::Mul, lhs, unary());
            else if (accept('/'))
                lhs = Expr::binary(NodeKind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    Expr unary() {
        if (accept('-')) return Expr::unary(NodeKind::Neg, unary());
        return power();
    }

    Expr power() {
        Expr b = base();
        if (accept('^')) return Expr::pow(b, integer());
        return b;
    }

    int integer() {
        skip_ws();
        std::size_t start = pos_;
        bool negative = false;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            negative = src_[pos_] == '-';
            ++pos_;
        }
        std::size_t digits = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == digits) {
            pos_ = start;
            fail("expected integer exponent");
        }
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
            fail("exponent must be an integer literal");
        int value = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, value);
        (void)ptr;
        if (ec != std::errc{}) {
            pos_ = start;
            fail("exponent out of range");
        }
        return negative ? -value : value;
    }

    Expr base() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    Expr number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            std::size_t exp_digits = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ == exp_digits) {
                pos_ = save;
                fail("malformed exponent in number");
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc{} || ptr != src_.data() + pos_ || !std::isfinite(value)) {
            pos_ = start;
            fail("malformed number");
        }
        return Expr::number(value);
    }

    Expr identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (name == "t") return Expr::var();

        NodeKind kind;
        if (name == "sin")
            kind = NodeKind::Sin;
        else if (name == "cos")
            kind = NodeKind::Cos;
        else if (name == "exp")
            kind = NodeKind::Exp;
        else if (name == "tanh")
            kind = NodeKind::Tanh;
        else if (name == "abs")
            kind = NodeKind::Abs;
        else
            throw UnknownIdentifier(name, start);

        expect('(');
        Expr arg = expr();
        expect(')');
        return Expr::unary(kind, arg);
    }
};

// ---------------------------------------------------------------------------
// Printing.

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", std::abs(v));
    std::string s(buf);
    return v < 0.0 || std::signbit(v) ? "(-" + s + ")" : s;
}

const char* func_name(NodeKind k) {
    switch (k) {
        case NodeKind::Sin: return "sin";
        case NodeKind::Cos: return "cos";
        case NodeKind::Exp: return "exp";
        case NodeKind::Tanh: return "tanh";
        case NodeKind::Abs: return "abs";
        default: return "";
    }
}

void print(const Node& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::Number:
            out += format_number(n.number);
            return;
        case NodeKind::Var:
            out += 't';
            return;
        case NodeKind::Neg:
            out += "(-";
            print(*n.lhs, out);
            out += ')';
            return;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div: {
            static constexpr char ops[] = {'+', '-', '*', '/'};
            out += '(';
            print(*n.lhs, out);
            out += ops[static_cast<int>(n.kind) - static_cast<int>(NodeKind::Add)];
            print(*n.rhs, out);
            out += ')';
            return;
        }
        case NodeKind::Pow:
            out += '(';
            print(*n.lhs, out);
            out += ")^";
            out += std::to_string(n.exponent);
            return;
        default:
            out += func_name(n.kind);
            out += '(';
            print(*n.lhs, out);
            out += ')';
            return;
    }
}

bool contains_abs(const Node& n) {
    if (n.kind == NodeKind::Abs) return true;
    return (n.lhs && contains_abs(*n.lhs)) || (n.rhs && contains_abs(*n.rhs));
}

}  // namespace

Expr Expr::number(double v) {
    return Expr(std::make_shared<const Node>(Node{NodeKind::Number, v, 0, nullptr, nullptr}));
}

Expr Expr::var() {
    return Expr(std::make_shared<const Node>(Node{NodeKind::Var, 0.0, 0, nullptr, nullptr}));
}

Expr Expr::unary(NodeKind kind, const Expr& operand) {
    return Expr(std::make_shared<const Node>(Node{kind, 0.0, 0, operand.root_, nullptr}));
}

Expr Expr::binary(NodeKind kind, const Expr& lhs, const Expr& rhs) {
    return Expr(std::make_shared<const Node>(Node{kind, 0.0, 0, lhs.root_, rhs.root_}));
}

Expr Expr::pow(const Expr& base, int exponent) {
    return Expr(std::make_shared<const Node>(Node{NodeKind::Pow, 0.0, exponent, base.root_, nullptr}));
}

double Expr::eval(double t) const { return evaluate(*root_, Plain{t}).v; }

DualValue Expr::eval_dual(double t) const { return evaluate(*root_, DualValue{t, 1.0}); }

std::string Expr::str() const {
    std::string out;
    print(*root_, out);
    return out;
}

bool Expr::uses_abs() const { return contains_abs(*root_); }

Expr parse(std::string_view src) { return Parser(src).parse_all(); }

ValidationReport validate_c1(const Expr& e, double lo, double hi, int n) {
    ValidationReport rep;
    rep.lo = lo;
    rep.hi = hi;
    rep.samples = n;
    if (!(lo < hi) || n < 3) {
        rep.pass = false;
        return rep;
    }
    for (int i = 0; i < n; ++i) {
        double t = lo + (hi - lo) * i / (n - 1);
        double d = 0.0;
        try {
            d = e.eval_dual(t).deriv;
        } catch (const NonDifferentiable&) {
            rep.non_differentiable.push_back(t);
            continue;
        } catch (const EvalError&) {
            rep.eval_failures.push_back(t);
            continue;
        }
        double h = fd_step(t);
        double fd = 0.0;
        try {
            fd = (e.eval(t + h) - e.eval(t - h)) / (2.0 * h);
        } catch (const EvalError&) {
            rep.eval_failures.push_back(t);
            continue;
        }
        double disc = std::abs(d - fd) / std::max(1.0, std::abs(d));
        if (disc > rep.max_discrepancy) {
            rep.max_discrepancy = disc;
            rep.worst_t = t;
        }
    }
    rep.pass = rep.non_differentiable.empty() && rep.eval_failures.empty() &&
               rep.max_discrepancy <= kC1Tolerance;
    return rep;
}

}  // namespace unimap
