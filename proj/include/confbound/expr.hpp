#pragma once

// Expression language for holomorphic maps in one complex variable.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   integer := ['-' | '+'] digits | '(' ['-' | '+'] digits ')'
//   primary := number ['i'] | 'i' | 'pi' | variable | func '(' expr ')' | '(' expr ')'
//   func    := 'sqrt' | 'log' | 'exp'
//
// log and sqrt use principal branches (cut along the negative real axis).

#include <charconv>
#include <cctype>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dual.hpp"

namespace confbound::expr {

enum class Op { variable, constant, add, sub, mul, div, neg, pow, sqrt, log, exp, compose };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::constant;
    Complex value{};  // constant
    int exponent = 0;  // pow
    NodePtr lhs;  // unary operand, binary left, compose outer
    NodePtr rhs;  // binary right, compose inner
};

inline NodePtr variable() {
    auto n = std::make_shared<Node>();
    n->op = Op::variable;
    return n;
}

inline NodePtr constant(Complex c) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = c;
    return n;
}

inline NodePtr binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

inline NodePtr unary(Op op, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    return n;
}

inline NodePtr power(NodePtr a, int k) {
    auto n = std::make_shared<Node>();
    n->op = Op::pow;
    n->exponent = k;
    n->lhs = std::move(a);
    return n;
}

// outer(inner(x)); evaluation is linear in the size of both trees.
inline NodePtr compose(NodePtr outer, NodePtr inner) {
    return binary(Op::compose, std::move(outer), std::move(inner));
}

template <class C> Dual<C> evaluate(const Node& n, const Dual<C>& x) {
    switch (n.op) {
        case Op::variable: return x;
        case Op::constant: return Dual<C>::constant(num::lift<C>(n.value));
        case Op::add: return evaluate(*n.lhs, x) + evaluate(*n.rhs, x);
        case Op::sub: return evaluate(*n.lhs, x) - evaluate(*n.rhs, x);
        case Op::mul: return evaluate(*n.lhs, x) * evaluate(*n.rhs, x);
        case Op::div: return evaluate(*n.lhs, x) / evaluate(*n.rhs, x);
        case Op::neg: return -evaluate(*n.lhs, x);
        case Op::pow: return pow(evaluate(*n.lhs, x), n.exponent);
        case Op::sqrt: return sqrt(evaluate(*n.lhs, x));
        case Op::log: return log(evaluate(*n.lhs, x));
        case Op::exp: return exp(evaluate(*n.lhs, x));
        case Op::compose: return evaluate(*n.lhs, evaluate(*n.rhs, x));
    }
    throw std::logic_error("unreachable expression node");
}

inline bool contains_variable(const Node& n) {
    switch (n.op) {
        case Op::variable: return true;
        case Op::constant: return false;
        case Op::compose: return contains_variable(*n.lhs) && contains_variable(*n.rhs);
        default:
            return contains_variable(*n.lhs) || (n.rhs && contains_variable(*n.rhs));
    }
}

inline std::string format_real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string format_constant(Complex c) {
    double a = c.real(), b = c.imag();
    if (b == 0.0) {
        std::string s = format_real(a);
        return a < 0 || std::signbit(a) ? "(" + s + ")" : s;
    }
    if (a == 0.0) {
        std::string s = format_real(b) + "i";
        return b < 0 ? "(" + s + ")" : s;
    }
    std::string im = format_real(std::abs(b)) + "i";
    return "(" + format_real(a) + (b < 0 ? "-" : "+") + im + ")";
}

// Canonical text: binary operations fully parenthesized, constants in
// shortest round-trip form.
inline std::string print(const Node& n, const std::string& var) {
    switch (n.op) {
        case Op::variable: return var;
        case Op::constant: return format_constant(n.value);
        case Op::add: return "(" + print(*n.lhs, var) + "+" + print(*n.rhs, var) + ")";
        case Op::sub: return "(" + print(*n.lhs, var) + "-" + print(*n.rhs, var) + ")";
        case Op::mul: return "(" + print(*n.lhs, var) + "*" + print(*n.rhs, var) + ")";
        case Op::div: return "(" + print(*n.lhs, var) + "/" + print(*n.rhs, var) + ")";
        case Op::neg: return "(-" + print(*n.lhs, var) + ")";
        case Op::pow: return "(" + print(*n.lhs, var) + "^" + std::to_string(n.exponent) + ")";
        case Op::sqrt: return "sqrt(" + print(*n.lhs, var) + ")";
        case Op::log: return "log(" + print(*n.lhs, var) + ")";
        case Op::exp: return "exp(" + print(*n.lhs, var) + ")";
        case Op::compose: return print(*n.lhs, "(" + print(*n.rhs, var) + ")");
    }
    throw std::logic_error("unreachable expression node");
}

class ParseError : public std::runtime_error {
public:
    enum class Kind { syntax, unknown_identifier, arity };
    ParseError(Kind kind, std::size_t position, const std::string& message)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          kind_(kind), position_(position) {}
    Kind kind() const { return kind_; }
    std::size_t position() const { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

namespace detail {

class Parser {
public:
    Parser(std::string_view text, std::string_view var) : s_(text), var_(var) {}

    NodePtr parse_all() {
        skip();
        if (pos_ >= s_.size()) fail("empty expression");
        NodePtr e = parse_expr();
        skip();
        if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return e;
    }

private:
    std::string_view s_;
    std::string_view var_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(ParseError::Kind::syntax, pos_, msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr parse_expr() {
        NodePtr left = parse_term();
        for (;;) {
            if (accept('+'))
                left = binary(Op::add, left, parse_term());
            else if (accept('-'))
                left = binary(Op::sub, left, parse_term());
            else
                return left;
        }
    }

    NodePtr parse_term() {
        NodePtr left = parse_unary();
        for (;;) {
            if (accept('*'))
                left = binary(Op::mul, left, parse_unary());
            else if (accept('/'))
                left = binary(Op::div, left, parse_unary());
            else
                return left;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return unary(Op::neg, parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) return power(base, parse_integer());
        return base;
    }

    int parse_integer() {
        skip();
        bool paren = accept('(');
        skip();
        int sign = 1;
        if (accept('-'))
            sign = -1;
        else
            accept('+');
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be an integer literal");
        if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
            fail("exponent must be an integer literal");
        int value = 0;
        auto res = std::from_chars(s_.data() + start, s_.data() + pos_, value);
        if (res.ec != std::errc()) fail("exponent out of range");
        if (paren) expect(')');
        if (value > 4096) fail("exponent out of range");
        return sign * value;
    }

    NodePtr parse_number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ == start + 1 && s_[start] == '.') fail("malformed number");
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            std::size_t digits = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (digits == pos_) pos_ = save;  // not an exponent; leave for identifier error
        }
        double v = 0;
        auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        bool imaginary = false;
        if (pos_ < s_.size() && s_[pos_] == 'i' &&
            (pos_ + 1 >= s_.size() ||
             !(std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '_'))) {
            imaginary = true;
            ++pos_;
        }
        return constant(imaginary ? Complex(0.0, v) : Complex(v, 0.0));
    }

    NodePtr parse_primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (accept('(')) {
            NodePtr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string_view id = s_.substr(start, pos_ - start);
            if (id == var_) return variable();
            if (id == "i") return constant(Complex(0.0, 1.0));
            if (id == "pi") return constant(Complex(M_PI, 0.0));
            Op f;
            if (id == "sqrt")
                f = Op::sqrt;
            else if (id == "log")
                f = Op::log;
            else if (id == "exp")
                f = Op::exp;
            else
                throw ParseError(ParseError::Kind::unknown_identifier, start,
                                 "unknown identifier '" + std::string(id) + "'");
            skip();
            if (!accept('(')) fail("expected '(' after " + std::string(id));
            skip();
            if (pos_ < s_.size() && s_[pos_] == ')')
                throw ParseError(ParseError::Kind::arity, pos_,
                                 std::string(id) + " takes exactly one argument");
            NodePtr arg = parse_expr();
            skip();
            if (pos_ < s_.size() && s_[pos_] == ',')
                throw ParseError(ParseError::Kind::arity, pos_,
                                 std::string(id) + " takes exactly one argument");
            expect(')');
            return unary(f, arg);
        }
        fail(std::string("unexpected '") + c + "'");
    }
};

}  // namespace detail

inline NodePtr parse(std::string_view text, std::string_view var) {
    return detail::Parser(text, var).parse_all();
}

// Value of a variable-free expression (used for parameters like "0.3+0.4i").
inline Complex parse_constant(std::string_view text) {
    NodePtr n = parse(text, "\x01");
    return evaluate(*n, Dual<Complex>::constant(Complex(0.0, 0.0))).value;
}

// Polynomial with ascending coefficients.
using Poly = std::vector<Complex>;

struct Rational {
    Poly num;
    Poly den;
};

namespace detail {

inline Poly poly_trim(Poly p) {
    while (p.size() > 1 && p.back() == Complex(0.0, 0.0)) p.pop_back();
    if (p.empty()) p.push_back(0.0);
    return p;
}

inline Poly poly_add(const Poly& a, const Poly& b, double sign = 1.0) {
    Poly r(std::max(a.size(), b.size()), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
    return poly_trim(r);
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return poly_trim(r);
}

inline Poly poly_pow(const Poly& a, int n) {
    Poly r{Complex(1.0, 0.0)};
    for (int k = 0; k < n; ++k) r = poly_mul(r, a);
    return r;
}

inline std::size_t degree(const Poly& p) { return p.size() - 1; }

inline std::optional<Rational> rational(const Node& n, std::size_t max_degree) {
    auto ok = [&](const Rational& r) -> std::optional<Rational> {
        if (degree(r.num) > max_degree || degree(r.den) > max_degree) return std::nullopt;
        return r;
    };
    switch (n.op) {
        case Op::variable: return Rational{{0.0, 1.0}, {1.0}};
        case Op::constant: return Rational{{n.value}, {1.0}};
        case Op::add:
        case Op::sub: {
            auto a = rational(*n.lhs, max_degree), b = rational(*n.rhs, max_degree);
            if (!a || !b) return std::nullopt;
            double sign = n.op == Op::add ? 1.0 : -1.0;
            return ok({poly_add(poly_mul(a->num, b->den), poly_mul(b->num, a->den), sign),
                       poly_mul(a->den, b->den)});
        }
        case Op::mul: {
            auto a = rational(*n.lhs, max_degree), b = rational(*n.rhs, max_degree);
            if (!a || !b) return std::nullopt;
            return ok({poly_mul(a->num, b->num), poly_mul(a->den, b->den)});
        }
        case Op::div: {
            auto a = rational(*n.lhs, max_degree), b = rational(*n.rhs, max_degree);
            if (!a || !b) return std::nullopt;
            return ok({poly_mul(a->num, b->den), poly_mul(a->den, b->num)});
        }
        case Op::neg: {
            auto a = rational(*n.lhs, max_degree);
            if (!a) return std::nullopt;
            return Rational{poly_add(Poly{0.0}, a->num, -1.0), a->den};
        }
        case Op::pow: {
            auto a = rational(*n.lhs, max_degree);
            if (!a) return std::nullopt;
            int k = std::abs(n.exponent);
            if (static_cast<std::size_t>(k) * std::max(degree(a->num), degree(a->den)) > max_degree)
                return std::nullopt;
            Rational r{poly_pow(a->num, k), poly_pow(a->den, k)};
            if (n.exponent < 0) std::swap(r.num, r.den);
            return r;
        }
        case Op::compose: {
            auto outer = rational(*n.lhs, max_degree), inner = rational(*n.rhs, max_degree);
            if (!outer || !inner) return std::nullopt;
            // P(R/S) / Q(R/S) homogenized by S^d, d = max(deg P, deg Q).
            std::size_t d = std::max(degree(outer->num), degree(outer->den));
            if (d * std::max(degree(inner->num), degree(inner->den)) > max_degree)
                return std::nullopt;
            auto homogenize = [&](const Poly& p) {
                Poly acc{0.0};
                for (std::size_t k = 0; k < p.size(); ++k) {
                    Poly term = poly_mul(poly_pow(inner->num, static_cast<int>(k)),
                                         poly_pow(inner->den, static_cast<int>(d - k)));
                    acc = poly_add(acc, poly_mul(Poly{p[k]}, term));
                }
                return acc;
            };
            return ok({homogenize(outer->num), homogenize(outer->den)});
        }
        default: return std::nullopt;
    }
}

}  // namespace detail

// Numerator/denominator form when the expression is rational of bounded degree.
inline std::optional<Rational> rational_form(const Node& n, std::size_t max_degree = 32) {
    return detail::rational(n, max_degree);
}

}  // namespace confbound::expr
