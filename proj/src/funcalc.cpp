#include "sepcurv/funcalc.hpp"

#include "sepcurv/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace sepcurv {

namespace {

Expr leaf(Op op, double value = 0.0) { return Expr{op, value, {}}; }

Expr node(Op op, std::vector<Expr> args, double value = 0.0) { return Expr{op, value, std::move(args)}; }

struct FuncName {
    std::string_view name;
    Op op;
};

constexpr FuncName kFunctions[] = {
    {"exp", Op::Exp},
    {"log", Op::Log},
    {"sin", Op::Sin},
    {"cos", Op::Cos},
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse()
    {
        skip_space();
        if (at_end()) {
            throw ParseError("empty expression", pos_);
        }
        Expr e = expr();
        skip_space();
        if (!at_end()) {
            throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    Expr expr()
    {
        Expr lhs = term();
        for (;;) {
            skip_space();
            if (accept('+')) {
                lhs = node(Op::Add, {std::move(lhs), term()});
            } else if (accept('-')) {
                lhs = node(Op::Sub, {std::move(lhs), term()});
            } else {
                return lhs;
            }
        }
    }

    Expr term()
    {
        Expr lhs = factor();
        for (;;) {
            skip_space();
            if (accept('*')) {
                lhs = node(Op::Mul, {std::move(lhs), factor()});
            } else if (accept('/')) {
                lhs = node(Op::Div, {std::move(lhs), factor()});
            } else {
                return lhs;
            }
        }
    }

    Expr factor()
    {
        Expr b = base();
        skip_space();
        if (accept('^')) {
            skip_space();
            const bool negative = accept('-');
            skip_space();
            double p = number();
            return node(Op::Pow, {std::move(b)}, negative ? -p : p);
        }
        return b;
    }

    Expr base()
    {
        skip_space();
        if (accept('-')) {
            Expr operand = factor();
            // A negated literal is stored as a signed literal.
            if (operand.op == Op::Number) {
                return leaf(Op::Number, -operand.value);
            }
            return node(Op::Neg, {std::move(operand)});
        }
        skip_space();
        if (at_end()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return leaf(Op::Number, number());
        }
        if (accept('(')) {
            Expr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view ident = src_.substr(start, pos_ - start);
            if (ident == "x") {
                return leaf(Op::Var);
            }
            for (const auto& f : kFunctions) {
                if (ident == f.name) {
                    skip_space();
                    expect('(');
                    Expr arg = expr();
                    expect(')');
                    return node(f.op, {std::move(arg)});
                }
            }
            throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    double number()
    {
        const std::size_t start = pos_;
        while (!at_end()) {
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                ++pos_;
            } else if ((c == 'e' || c == 'E') && pos_ > start) {
                ++pos_;
                if (!at_end() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                    ++pos_;
                }
            } else {
                break;
            }
        }
        if (pos_ == start) {
            throw ParseError("expected a number", start);
        }
        double value = 0.0;
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            throw ParseError("malformed number '" + std::string(first, last) + "'", start);
        }
        return value;
    }

    void expect(char c)
    {
        skip_space();
        if (!accept(c)) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    bool accept(char c)
    {
        if (!at_end() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool at_end() const { return pos_ >= src_.size(); }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// Binding strength of the printed form; operands weaker than the slot they sit in get parentheses.
int precedence(const Expr& e)
{
    switch (e.op) {
    case Op::Add:
    case Op::Sub:
        return 1;
    case Op::Mul:
    case Op::Div:
        return 2;
    case Op::Neg:
        return 3;
    case Op::Pow:
        return 4;
    case Op::Number:
        return std::signbit(e.value) ? 3 : 5;
    default:
        return 5;
    }
}

void print(std::ostringstream& out, const Expr& e, int min_prec)
{
    const bool paren = precedence(e) < min_prec;
    if (paren) {
        out << '(';
    }
    switch (e.op) {
    case Op::Number:
        out << format_real(e.value);
        break;
    case Op::Var:
        out << 'x';
        break;
    case Op::Add:
    case Op::Sub:
        print(out, e.args[0], 1);
        out << (e.op == Op::Add ? " + " : " - ");
        print(out, e.args[1], 2);
        break;
    case Op::Mul:
    case Op::Div:
        print(out, e.args[0], 2);
        out << (e.op == Op::Mul ? "*" : "/");
        print(out, e.args[1], 3);
        break;
    case Op::Neg:
        out << '-';
        print(out, e.args[0], 3);
        break;
    case Op::Pow:
        print(out, e.args[0], 5);
        out << '^' << format_real(e.value);
        break;
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos:
        for (const auto& f : kFunctions) {
            if (f.op == e.op) {
                out << f.name;
            }
        }
        out << '(';
        print(out, e.args[0], 0);
        out << ')';
        break;
    }
    if (paren) {
        out << ')';
    }
}

Jet2 checked(const Jet2& j, const char* what)
{
    if (!j.is_finite()) {
        throw DomainError(std::string("non-finite intermediate in ") + what);
    }
    return j;
}

} // namespace

std::string format_real(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Expr parse_expression(std::string_view src) { return Parser(src).parse(); }

std::string to_string(const Expr& e)
{
    std::ostringstream out;
    print(out, e, 0);
    return out.str();
}

Jet2 eval_expr(const Expr& e, double x)
{
    switch (e.op) {
    case Op::Number:
        return Jet2::constant(e.value);
    case Op::Var:
        return Jet2::variable(x);
    case Op::Add:
        return checked(eval_expr(e.args[0], x) + eval_expr(e.args[1], x), "sum");
    case Op::Sub:
        return checked(eval_expr(e.args[0], x) - eval_expr(e.args[1], x), "difference");
    case Op::Mul:
        return checked(eval_expr(e.args[0], x) * eval_expr(e.args[1], x), "product");
    case Op::Div: {
        const Jet2 den = eval_expr(e.args[1], x);
        if (den.v == 0.0) {
            throw DomainError("division by zero");
        }
        return checked(eval_expr(e.args[0], x) / den, "quotient");
    }
    case Op::Neg:
        return -eval_expr(e.args[0], x);
    case Op::Pow: {
        const Jet2 b = eval_expr(e.args[0], x);
        if (std::trunc(e.value) != e.value && b.v <= 0.0) {
            throw DomainError("fractional power of non-positive value " + format_real(b.v));
        }
        return checked(pow(b, e.value), "power");
    }
    case Op::Exp:
        return checked(exp(eval_expr(e.args[0], x)), "exp");
    case Op::Log: {
        const Jet2 a = eval_expr(e.args[0], x);
        if (!(a.v > 0.0)) {
            throw DomainError("log of non-positive value " + format_real(a.v));
        }
        return checked(log(a), "log");
    }
    case Op::Sin:
        return checked(sin(eval_expr(e.args[0], x)), "sin");
    case Op::Cos:
        return checked(cos(eval_expr(e.args[0], x)), "cos");
    }
    throw std::logic_error("unhandled expression node");
}

Function1D::Function1D(Expr ast, Interval domain) : ast_(std::move(ast)), domain_(domain)
{
    if (!domain_.is_valid()) {
        throw std::invalid_argument("function domain must satisfy lo < hi");
    }
}

Jet2 Function1D::eval(double x) const
{
    if (!domain_.contains(x)) {
        throw DomainError("x = " + format_real(x) + " outside domain (" + format_real(domain_.lo) + ", " +
                          format_real(domain_.hi) + ")");
    }
    return eval_expr(ast_, x);
}

Function1D parse_function(std::string_view src, Interval domain)
{
    return Function1D(parse_expression(src), domain);
}

} // namespace sepcurv
