#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <nestad/dual.hpp>

namespace nestad {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class UnaryFn { neg, exp, log, sin, cos, tan, sqrt };
enum class BinaryOp { add, sub, mul, div };

struct Number {
    Real value{};
};

struct Var {
    std::string name;
};

struct Unary {
    UnaryFn fn{};
    ExprPtr child;
};

struct Binary {
    BinaryOp op{};
    ExprPtr left;
    ExprPtr right;
};

struct Pow {
    ExprPtr base;
    ExprPtr exponent;
};

// D(body, var): derivative of body with respect to var, at var's current
// value. D_at(body, var, at): same, but at the value of the `at` expression,
// which is evaluated outside the nested level; `at` is null for the
// two-argument form.
struct Deriv {
    ExprPtr body;
    std::string var;
    ExprPtr at;
};

struct Expr {
    std::variant<Number, Var, Unary, Binary, Pow, Deriv> node;
};

inline ExprPtr make_expr(Expr e) {
    return std::make_unique<Expr>(std::move(e));
}

// Syntax problem at a byte offset into the source text; what() carries the
// offset and a human-readable description.
struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(std::size_t offset_, const std::string& detail);
};

// Grammar (lowest to highest precedence): '+'/'-' < '*'/'/' < unary '-' <
// '^' (right-associative) < atoms. Atoms: numbers (decimal, optional
// fraction and exponent), variables [a-zA-Z_][a-zA-Z0-9_]*, parenthesized
// expressions, fn(expr) for the elementary set, D(expr, var) and
// D_at(expr, var, point). Throws ParseError.
Expr parse(std::string_view source);

// Canonical fully-parenthesized rendering; parse(format(e)) is structurally
// equal to e for finite, non-negative number literals.
std::string format(const Expr& e);

// Shortest round-trip decimal rendering; non-finite values render as the
// words NaN / Infinity / -Infinity.
std::string format_real(Real x);

// Same shape, same leaf contents (numbers compared bit-for-bit).
bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace nestad
