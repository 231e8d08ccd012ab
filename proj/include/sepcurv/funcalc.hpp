#pragma once

// Single-variable function DSL. Grammar (whitespace is insignificant):
//
//   expr     := term (('+' | '-') term)*
//   term     := factor (('*' | '/') factor)*
//   factor   := base ('^' exponent)?
//   base     := number | 'x' | func '(' expr ')' | '(' expr ')' | '-' factor
//   exponent := '-'? number
//   func     := 'exp' | 'log' | 'sin' | 'cos'
//
// Precedence, tightest first: '^', unary '-', '*' '/', '+' '-'.

#include "sepcurv/jet.hpp"

#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace sepcurv {

enum class Op { Number, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sin, Cos };

/// Expression tree node. `value` holds the literal for Number and the exponent for Pow.
struct Expr {
    Op op = Op::Number;
    double value = 0.0;
    std::vector<Expr> args;

    friend bool operator==(const Expr&, const Expr&) = default;
};

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    static Interval whole() { return {}; }

    bool contains(double x) const { return lo < x && x < hi; }
    bool is_valid() const { return lo < hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Parse an expression in the variable `x`. Throws ParseError.
Expr parse_expression(std::string_view src);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

/// Render an expression so that parse_expression() gives back an identical tree.
std::string to_string(const Expr& e);

/// Evaluate an expression as a 2-jet at x. Throws DomainError on a non-finite intermediate,
/// log of a non-positive value, or a fractional power of a non-positive value.
Jet2 eval_expr(const Expr& e, double x);

/// A parsed expression bound to its declared domain. Immutable.
class Function1D {
public:
    Function1D(Expr ast, Interval domain);

    const Expr& ast() const { return ast_; }
    const Interval& domain() const { return domain_; }
    std::string to_string() const { return sepcurv::to_string(ast_); }

    /// (f, f', f'') at x. Throws DomainError if x is not strictly inside the domain.
    Jet2 eval(double x) const;

    friend bool operator==(const Function1D&, const Function1D&) = default;

private:
    Expr ast_;
    Interval domain_;
};

/// Parse `src` and attach `domain`. Throws ParseError, or std::invalid_argument for an empty domain.
Function1D parse_function(std::string_view src, Interval domain = Interval::whole());

inline Jet2 eval_jet2(const Function1D& f, double x) { return f.eval(x); }

} // namespace sepcurv
