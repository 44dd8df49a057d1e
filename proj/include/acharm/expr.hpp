#pragma once

// Arithmetic expression language for user-defined charts and structure
// tensors: real literals, named variables/parameters, + - * / ^, unary
// minus, and a fixed set of unary functions. Expressions compile once to a
// flat postfix program; per-point evaluation allocates nothing.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "acharm/errors.hpp"

namespace acharm::dsl {

inline const std::vector<std::string>& function_names() {
    static const std::vector<std::string> names{"sin",  "cos",  "tan",  "exp", "log",
                                                "sqrt", "sinh", "cosh", "tanh"};
    return names;
}

inline int function_index(std::string_view name) {
    const auto& fns = function_names();
    for (std::size_t i = 0; i < fns.size(); ++i)
        if (fns[i] == name) return static_cast<int>(i);
    return -1;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { number, variable, unary_minus, call, binary };
    Kind kind;
    double value = 0.0;   // number
    std::string name;     // variable or function
    char op = 0;          // '+', '-', '*', '/', '^'
    ExprPtr a, b;
};

inline ExprPtr make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::number;
    e->value = v;
    return e;
}

inline ExprPtr make_variable(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::variable;
    e->name = std::move(name);
    return e;
}

inline ExprPtr make_unary_minus(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::unary_minus;
    e->a = std::move(a);
    return e;
}

inline ExprPtr make_call(std::string fn, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::call;
    e->name = std::move(fn);
    e->a = std::move(a);
    return e;
}

inline ExprPtr make_binary(char op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::binary;
    e->op = op;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

namespace detail {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) fail({"expression"});
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ < text_.size()) fail({"operator", "end of input"});
        return e;
    }

  private:
    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::string what = "parse error at offset " + std::to_string(pos_) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) what += " or ";
            what += expected[i];
        }
        throw ParseError(pos_, std::move(expected), what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool consume(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        for (;;) {
            if (consume('+'))
                e = make_binary('+', e, parse_term());
            else if (consume('-'))
                e = make_binary('-', e, parse_term());
            else
                return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        for (;;) {
            if (consume('*'))
                e = make_binary('*', e, parse_unary());
            else if (consume('/'))
                e = make_binary('/', e, parse_unary());
            else
                return e;
        }
    }

    // '^' binds tighter than unary minus and associates right;
    // the exponent may itself carry a unary minus.
    ExprPtr parse_unary() {
        if (consume('-')) return make_unary_minus(parse_unary());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (consume('^')) return make_binary('^', base, parse_unary());
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail({"number", "identifier", "'('"});
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!consume(')')) fail({"')'"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (function_index(name) >= 0) {
                if (!consume('(')) fail({"'(' after function name"});
                ExprPtr arg = parse_sum();
                if (!consume(')')) fail({"')'"});
                return make_call(std::move(name), std::move(arg));
            }
            return make_variable(std::move(name));
        }
        fail({"number", "identifier", "'('"});
    }

    ExprPtr parse_number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        const auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc{}) fail({"number"});
        pos_ = static_cast<std::size_t>(res.ptr - text_.data());
        return make_number(value);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::binary:
            if (e.op == '+' || e.op == '-') return 1;
            if (e.op == '*' || e.op == '/') return 2;
            return 4;  // '^'
        case Expr::Kind::unary_minus:
            return 3;
        default:
            return 5;
    }
}

inline void print_rec(const Expr& e, int min_prec, std::string& out) {
    const int prec = precedence(e);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e.kind) {
        case Expr::Kind::number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.value);
            out += buf;
            break;
        }
        case Expr::Kind::variable:
            out += e.name;
            break;
        case Expr::Kind::unary_minus:
            out += '-';
            print_rec(*e.a, prec + 1, out);
            break;
        case Expr::Kind::call:
            out += e.name;
            out += '(';
            print_rec(*e.a, 0, out);
            out += ')';
            break;
        case Expr::Kind::binary:
            if (e.op == '^') {
                print_rec(*e.a, prec + 1, out);
                out += '^';
                print_rec(*e.b, prec, out);
            } else {
                print_rec(*e.a, prec, out);
                out += e.op;
                print_rec(*e.b, prec + 1, out);
            }
            break;
    }
    if (parens) out += ')';
}

}  // namespace detail

inline ExprPtr parse_expression(std::string_view text) { return detail::Parser(text).parse(); }

inline std::string print_expression(const Expr& e) {
    std::string out;
    detail::print_rec(e, 0, out);
    return out;
}

inline bool structurally_equal(const Expr& x, const Expr& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case Expr::Kind::number:
            return x.value == y.value;
        case Expr::Kind::variable:
            return x.name == y.name;
        case Expr::Kind::unary_minus:
            return structurally_equal(*x.a, *y.a);
        case Expr::Kind::call:
            return x.name == y.name && structurally_equal(*x.a, *y.a);
        case Expr::Kind::binary:
            return x.op == y.op && structurally_equal(*x.a, *y.a) && structurally_equal(*x.b, *y.b);
    }
    return false;
}

// Flat postfix program over a fixed variable slot table.
class CompiledExpr {
  public:
    CompiledExpr() = default;

    static CompiledExpr compile(const Expr& e, const std::vector<std::string>& slot_names) {
        CompiledExpr c;
        c.slot_names_ = slot_names;
        c.emit(e);
        if (c.max_depth_ > kStackCap)
            throw Error("expression too deep to compile (depth " + std::to_string(c.max_depth_) + ")");
        return c;
    }

    double eval(const std::vector<double>& slots) const { return eval(slots.data(), slots.size()); }

    double eval(const double* slots, std::size_t nslots) const {
        std::array<double, kStackCap> stack;
        int top = -1;
        for (const Op& op : ops_) {
            switch (op.code) {
                case Code::push_const:
                    stack[static_cast<std::size_t>(++top)] = op.value;
                    break;
                case Code::push_var:
                    if (static_cast<std::size_t>(op.slot) >= nslots)
                        throw UnboundVariable("unbound variable slot");
                    stack[static_cast<std::size_t>(++top)] = slots[static_cast<std::size_t>(op.slot)];
                    break;
                case Code::negate:
                    stack[static_cast<std::size_t>(top)] = -stack[static_cast<std::size_t>(top)];
                    break;
                case Code::add: {
                    const double b = stack[static_cast<std::size_t>(top--)];
                    stack[static_cast<std::size_t>(top)] += b;
                    break;
                }
                case Code::sub: {
                    const double b = stack[static_cast<std::size_t>(top--)];
                    stack[static_cast<std::size_t>(top)] -= b;
                    break;
                }
                case Code::mul: {
                    const double b = stack[static_cast<std::size_t>(top--)];
                    stack[static_cast<std::size_t>(top)] *= b;
                    break;
                }
                case Code::divide: {
                    const double b = stack[static_cast<std::size_t>(top--)];
                    if (b == 0.0) throw EvalError("division by zero");
                    stack[static_cast<std::size_t>(top)] /= b;
                    break;
                }
                case Code::power: {
                    const double b = stack[static_cast<std::size_t>(top--)];
                    const double r = std::pow(stack[static_cast<std::size_t>(top)], b);
                    if (!std::isfinite(r)) throw EvalError("pow out of domain");
                    stack[static_cast<std::size_t>(top)] = r;
                    break;
                }
                case Code::call: {
                    double& a = stack[static_cast<std::size_t>(top)];
                    a = apply_function(op.slot, a);
                    break;
                }
            }
        }
        const double r = stack[0];
        if (!std::isfinite(r)) throw EvalError("expression evaluated to a non-finite value");
        return r;
    }

    const std::vector<std::string>& slot_names() const { return slot_names_; }

  private:
    static constexpr int kStackCap = 128;

    enum class Code { push_const, push_var, negate, add, sub, mul, divide, power, call };

    struct Op {
        Code code;
        double value = 0.0;
        int slot = 0;  // variable slot or function index
    };

    static double apply_function(int fn, double a) {
        switch (fn) {
            case 0:
                return std::sin(a);
            case 1:
                return std::cos(a);
            case 2: {
                const double r = std::tan(a);
                if (!std::isfinite(r)) throw EvalError("tan out of domain");
                return r;
            }
            case 3: {
                const double r = std::exp(a);
                if (!std::isfinite(r)) throw EvalError("exp overflow");
                return r;
            }
            case 4:
                if (a <= 0.0) throw EvalError("log of a non-positive value");
                return std::log(a);
            case 5:
                if (a < 0.0) throw EvalError("sqrt of a negative value");
                return std::sqrt(a);
            case 6:
                return std::sinh(a);
            case 7:
                return std::cosh(a);
            default:
                return std::tanh(a);
        }
    }

    void emit(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::number:
                ops_.push_back({Code::push_const, e.value, 0});
                bump(1);
                break;
            case Expr::Kind::variable: {
                int slot = -1;
                for (std::size_t i = 0; i < slot_names_.size(); ++i)
                    if (slot_names_[i] == e.name) slot = static_cast<int>(i);
                if (slot < 0) throw UnboundVariable("unbound variable '" + e.name + "'");
                ops_.push_back({Code::push_var, 0.0, slot});
                bump(1);
                break;
            }
            case Expr::Kind::unary_minus:
                emit(*e.a);
                ops_.push_back({Code::negate, 0.0, 0});
                break;
            case Expr::Kind::call:
                emit(*e.a);
                ops_.push_back({Code::call, 0.0, function_index(e.name)});
                break;
            case Expr::Kind::binary:
                emit(*e.a);
                emit(*e.b);
                switch (e.op) {
                    case '+':
                        ops_.push_back({Code::add, 0.0, 0});
                        break;
                    case '-':
                        ops_.push_back({Code::sub, 0.0, 0});
                        break;
                    case '*':
                        ops_.push_back({Code::mul, 0.0, 0});
                        break;
                    case '/':
                        ops_.push_back({Code::divide, 0.0, 0});
                        break;
                    default:
                        ops_.push_back({Code::power, 0.0, 0});
                        break;
                }
                bump(-1);
                break;
        }
    }

    void bump(int delta) {
        depth_ += delta;
        max_depth_ = std::max(max_depth_, depth_);
    }

    std::vector<Op> ops_;
    std::vector<std::string> slot_names_;
    int depth_ = 0;
    int max_depth_ = 0;
};

inline double evaluate(const Expr& e, const std::vector<std::string>& names,
                       const std::vector<double>& values) {
    return CompiledExpr::compile(e, names).eval(values);
}

}  // namespace acharm::dsl
