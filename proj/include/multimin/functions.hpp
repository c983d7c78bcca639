#pragma once

// Scalar function values with optional closed-form antiderivative/derivative,
// a registry of named builtins, and a small expression parser for config
// files (variable x, + - * / ^, parentheses, sin cos tan exp ln log sqrt abs,
// constants pi and e).

#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "multimin/quadrature.hpp"

namespace multimin {

struct ScalarFunction {
    std::function<double(double)> f;
    std::function<double(double)> antiderivative;  // closed form, optional
    std::function<double(double)> derivative;      // closed form, optional
    double domain_max = std::numeric_limits<double>::infinity();  // antiderivative domain cap
    std::string name;

    double operator()(double x) const { return f(x); }
    bool has_antiderivative() const { return static_cast<bool>(antiderivative); }
};

// Central difference with a scale-aware step; used wherever only an evaluator
// is available.
inline double central_derivative(const std::function<double(double)>& f, double x, double scale = 1.0) {
    const double h = 1e-6 * (1.0 + std::abs(x)) * scale;
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Antiderivative from 0 to xi. Registered closed forms win; otherwise
// adaptive quadrature to relative tolerance 1e-10. Arguments beyond the
// declared domain cap are rejected (omega-type integrands blow up there).
inline double antiderivative(const ScalarFunction& g, double xi) {
    if (!(xi <= g.domain_max)) {
        throw std::invalid_argument("antiderivative: argument " + std::to_string(xi) + " outside certified domain of " +
                                    (g.name.empty() ? std::string("<fn>") : g.name));
    }
    if (g.antiderivative) return g.antiderivative(xi);
    return integrate_adaptive(g.f, 0.0, xi, 1e-10);
}

// Smooth-in-endpoint variant for code paths that are later finite-differenced.
inline double antiderivative_smooth(const ScalarFunction& g, double xi) {
    if (!(xi <= g.domain_max)) throw std::invalid_argument("antiderivative_smooth: argument outside certified domain");
    if (g.antiderivative) return g.antiderivative(xi);
    return integrate_fixed(g.f, 0.0, xi, 16);
}

namespace builtin {

inline ScalarFunction zero() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
            std::numeric_limits<double>::infinity(), "zero"};
}

inline ScalarFunction constant(double c) {
    return {[c](double) { return c; }, [c](double xi) { return c * xi; }, [](double) { return 0.0; },
            std::numeric_limits<double>::infinity(), "constant"};
}

inline ScalarFunction identity() {
    return {[](double x) { return x; }, [](double xi) { return 0.5 * xi * xi; }, [](double) { return 1.0; },
            std::numeric_limits<double>::infinity(), "identity"};
}

inline ScalarFunction sine() {
    return {[](double x) { return std::sin(x); }, [](double xi) { return 1.0 - std::cos(xi); },
            [](double x) { return std::cos(x); }, std::numeric_limits<double>::infinity(), "sin"};
}

inline ScalarFunction cosine() {
    return {[](double x) { return std::cos(x); }, [](double xi) { return std::sin(xi); },
            [](double x) { return -std::sin(x); }, std::numeric_limits<double>::infinity(), "cos"};
}

// omega(x) = 1/(rho - x) on [0, rho): antiderivative ln(rho/(rho - xi)).
inline ScalarFunction barrier_omega(double rho) {
    if (rho <= 0.0) throw std::invalid_argument("barrier_omega: rho must be positive");
    return {[rho](double x) { return 1.0 / (rho - x); },
            [rho](double xi) { return std::log(rho / (rho - xi)); },
            [rho](double x) { const double d = rho - x; return 1.0 / (d * d); },
            rho * (1.0 - 1e-12), "barrier"};
}

inline ScalarFunction unit_omega() {
    ScalarFunction s = constant(1.0);
    s.name = "unit";
    return s;
}

}  // namespace builtin

// ---------------------------------------------------------------------------
// Expression parser (recursive descent into a pointer-free RPN program).

namespace expr_detail {

enum class OpCode { PushConst, PushVar, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tan, Exp, Ln, Sqrt, Abs };

struct Instr {
    OpCode op;
    double value = 0.0;
};

class Parser {
  public:
    explicit Parser(std::string text) : text_(std::move(text)) {}

    std::vector<Instr> parse() {
        std::vector<Instr> prog;
        expression(prog);
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return prog;
    }

  private:
    void expression(std::vector<Instr>& prog) {
        term(prog);
        while (true) {
            skip_ws();
            if (consume('+')) {
                term(prog);
                prog.push_back({OpCode::Add});
            } else if (consume('-')) {
                term(prog);
                prog.push_back({OpCode::Sub});
            } else {
                break;
            }
        }
    }

    void term(std::vector<Instr>& prog) {
        unary(prog);
        while (true) {
            skip_ws();
            if (consume('*')) {
                unary(prog);
                prog.push_back({OpCode::Mul});
            } else if (consume('/')) {
                unary(prog);
                prog.push_back({OpCode::Div});
            } else {
                break;
            }
        }
    }

    void unary(std::vector<Instr>& prog) {
        skip_ws();
        if (consume('-')) {
            unary(prog);
            prog.push_back({OpCode::Neg});
            return;
        }
        power(prog);
    }

    void power(std::vector<Instr>& prog) {
        primary(prog);
        skip_ws();
        if (consume('^')) {
            unary(prog);  // right associative
            prog.push_back({OpCode::Pow});
        }
    }

    void primary(std::vector<Instr>& prog) {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            expression(prog);
            skip_ws();
            if (!consume(')')) fail("missing ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = 0;
            const double v = std::stod(text_.substr(pos_), &end);
            pos_ += end;
            prog.push_back({OpCode::PushConst, v});
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::string ident = read_ident();
            skip_ws();
            if (consume('(')) {
                expression(prog);
                skip_ws();
                if (!consume(')')) fail("missing ')' after " + ident);
                prog.push_back({function_op(ident)});
                return;
            }
            if (ident == "x" || ident == "u" || ident == "t") {
                prog.push_back({OpCode::PushVar});
            } else if (ident == "pi") {
                prog.push_back({OpCode::PushConst, 3.14159265358979323846});
            } else if (ident == "e") {
                prog.push_back({OpCode::PushConst, 2.71828182845904523536});
            } else {
                fail("unknown identifier '" + ident + "'");
            }
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    OpCode function_op(const std::string& name) {
        if (name == "sin") return OpCode::Sin;
        if (name == "cos") return OpCode::Cos;
        if (name == "tan") return OpCode::Tan;
        if (name == "exp") return OpCode::Exp;
        if (name == "ln" || name == "log") return OpCode::Ln;
        if (name == "sqrt") return OpCode::Sqrt;
        if (name == "abs") return OpCode::Abs;
        fail("unknown function '" + name + "'");
        return OpCode::Abs;  // unreachable
    }

    std::string read_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw std::invalid_argument("expression parse error at position " + std::to_string(pos_) + ": " + msg);
    }

    std::string text_;
    std::size_t pos_ = 0;
};

inline double run(const std::vector<Instr>& prog, double x) {
    double stack[64];
    int top = -1;
    for (const Instr& ins : prog) {
        switch (ins.op) {
            case OpCode::PushConst: stack[++top] = ins.value; break;
            case OpCode::PushVar: stack[++top] = x; break;
            case OpCode::Add: --top; stack[top] += stack[top + 1]; break;
            case OpCode::Sub: --top; stack[top] -= stack[top + 1]; break;
            case OpCode::Mul: --top; stack[top] *= stack[top + 1]; break;
            case OpCode::Div: --top; stack[top] /= stack[top + 1]; break;
            case OpCode::Pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
            case OpCode::Neg: stack[top] = -stack[top]; break;
            case OpCode::Sin: stack[top] = std::sin(stack[top]); break;
            case OpCode::Cos: stack[top] = std::cos(stack[top]); break;
            case OpCode::Tan: stack[top] = std::tan(stack[top]); break;
            case OpCode::Exp: stack[top] = std::exp(stack[top]); break;
            case OpCode::Ln: stack[top] = std::log(stack[top]); break;
            case OpCode::Sqrt: stack[top] = std::sqrt(stack[top]); break;
            case OpCode::Abs: stack[top] = std::abs(stack[top]); break;
        }
    }
    return stack[0];
}

}  // namespace expr_detail

inline ScalarFunction from_expression(const std::string& text) {
    auto prog = std::make_shared<std::vector<expr_detail::Instr>>(expr_detail::Parser(text).parse());
    ScalarFunction s;
    s.f = [prog](double x) { return expr_detail::run(*prog, x); };
    s.name = "expr:" + text;
    return s;
}

// Resolves "zero" | "one" | "identity" | "sin" | "cos" | numeric literal |
// arbitrary expression.
inline ScalarFunction named_function(const std::string& spec) {
    if (spec == "zero") return builtin::zero();
    if (spec == "one") return builtin::constant(1.0);
    if (spec == "identity") return builtin::identity();
    if (spec == "sin") return builtin::sine();
    if (spec == "cos") return builtin::cosine();
    try {
        std::size_t end = 0;
        const double v = std::stod(spec, &end);
        if (end == spec.size()) return builtin::constant(v);
    } catch (const std::exception&) {
        // fall through to the expression parser
    }
    return from_expression(spec);
}

inline ScalarFunction named_omega(const std::string& spec, double rho) {
    if (spec == "barrier") return builtin::barrier_omega(rho);
    if (spec == "unit" || spec == "one") return builtin::unit_omega();
    return named_function(spec);
}

}  // namespace multimin
