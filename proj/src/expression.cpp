// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#include "curved/expression.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace curved {

const char* func_name(Func f) {
    switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    }
    return "?";
}

namespace {

double apply_func(Func f, double v) {
    switch (f) {
    case Func::Sin: return std::sin(v);
    case Func::Cos: return std::cos(v);
    case Func::Exp: return std::exp(v);
    case Func::Log: return std::log(v);
    case Func::Sqrt: return std::sqrt(v);
    }
    return 0.0;
}

} // namespace

bool Expr::is_constant(double v) const {
    return kind_ == ExprKind::Constant && value_ == v;
}

ExprPtr Expr::constant(double v) {
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Constant;
    n->value_ = v;
    return n;
}

ExprPtr Expr::variable(int index) {
    if (index < 0) throw std::invalid_argument("expression variable index must be >= 0");
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Variable;
    n->var_ = index;
    return n;
}

ExprPtr Expr::add(ExprPtr a, ExprPtr b) {
    if (a->kind() == ExprKind::Constant && b->kind() == ExprKind::Constant)
        return constant(a->constant_value() + b->constant_value());
    if (a->is_constant(0.0)) return b;
    if (b->is_constant(0.0)) return a;
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Add;
    n->a_ = std::move(a);
    n->b_ = std::move(b);
    return n;
}

ExprPtr Expr::sub(ExprPtr a, ExprPtr b) {
    if (a->kind() == ExprKind::Constant && b->kind() == ExprKind::Constant)
        return constant(a->constant_value() - b->constant_value());
    if (b->is_constant(0.0)) return a;
    if (a->is_constant(0.0)) return neg(std::move(b));
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Sub;
    n->a_ = std::move(a);
    n->b_ = std::move(b);
    return n;
}

ExprPtr Expr::mul(ExprPtr a, ExprPtr b) {
    if (a->kind() == ExprKind::Constant && b->kind() == ExprKind::Constant)
        return constant(a->constant_value() * b->constant_value());
    if (a->is_constant(0.0) || b->is_constant(0.0)) return constant(0.0);
    if (a->is_constant(1.0)) return b;
    if (b->is_constant(1.0)) return a;
    if (a->is_constant(-1.0)) return neg(std::move(b));
    if (b->is_constant(-1.0)) return neg(std::move(a));
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Mul;
    n->a_ = std::move(a);
    n->b_ = std::move(b);
    return n;
}

ExprPtr Expr::div(ExprPtr a, ExprPtr b) {
    if (b->is_constant(1.0)) return a;
    if (a->is_constant(0.0) && b->kind() == ExprKind::Constant && b->constant_value() != 0.0)
        return constant(0.0);
    if (a->kind() == ExprKind::Constant && b->kind() == ExprKind::Constant &&
        b->constant_value() != 0.0)
        return constant(a->constant_value() / b->constant_value());
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Div;
    n->a_ = std::move(a);
    n->b_ = std::move(b);
    return n;
}

ExprPtr Expr::neg(ExprPtr a) {
    if (a->kind() == ExprKind::Constant) return constant(-a->constant_value());
    if (a->kind() == ExprKind::Neg) return a->left();
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Neg;
    n->a_ = std::move(a);
    return n;
}

ExprPtr Expr::pow_int(ExprPtr base, long exponent) {
    if (exponent == 0) return constant(1.0);
    if (exponent == 1) return base;
    if (base->kind() == ExprKind::Constant)
        return constant(std::pow(base->constant_value(), static_cast<double>(exponent)));
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Pow;
    n->exponent_ = exponent;
    n->a_ = std::move(base);
    return n;
}

ExprPtr Expr::call(Func f, ExprPtr arg) {
    if (arg->kind() == ExprKind::Constant)
        return constant(apply_func(f, arg->constant_value()));
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Call;
    n->func_ = f;
    n->a_ = std::move(arg);
    return n;
}

double Expr::eval(std::span<const double> x) const {
    switch (kind_) {
    case ExprKind::Constant: return value_;
    case ExprKind::Variable:
        if (var_ >= static_cast<int>(x.size()))
            throw std::out_of_range("expression refers to x" + std::to_string(var_) +
                                    " but the point has dimension " + std::to_string(x.size()));
        return x[var_];
    case ExprKind::Add: return a_->eval(x) + b_->eval(x);
    case ExprKind::Sub: return a_->eval(x) - b_->eval(x);
    case ExprKind::Mul: return a_->eval(x) * b_->eval(x);
    case ExprKind::Div: return a_->eval(x) / b_->eval(x);
    case ExprKind::Neg: return -a_->eval(x);
    case ExprKind::Pow: {
        double base = a_->eval(x);
        long k = exponent_;
        bool inv = k < 0;
        if (inv) k = -k;
        double acc = 1.0, p = base;
        while (k > 0) {
            if (k & 1) acc *= p;
            p *= p;
            k >>= 1;
        }
        return inv ? 1.0 / acc : acc;
    }
    case ExprKind::Call: return apply_func(func_, a_->eval(x));
    }
    return 0.0;
}

ExprPtr Expr::diff(int var) const {
    switch (kind_) {
    case ExprKind::Constant: return constant(0.0);
    case ExprKind::Variable: return constant(var_ == var ? 1.0 : 0.0);
    case ExprKind::Add: return add(a_->diff(var), b_->diff(var));
    case ExprKind::Sub: return sub(a_->diff(var), b_->diff(var));
    case ExprKind::Mul:
        return add(mul(a_->diff(var), b_), mul(a_, b_->diff(var)));
    case ExprKind::Div:
        // (a/b)' = a'/b - a b'/b^2
        return sub(div(a_->diff(var), b_),
                   div(mul(a_, b_->diff(var)), pow_int(b_, 2)));
    case ExprKind::Neg: return neg(a_->diff(var));
    case ExprKind::Pow:
        // d(a^k) = k a^(k-1) a'
        return mul(mul(constant(static_cast<double>(exponent_)), pow_int(a_, exponent_ - 1)),
                   a_->diff(var));
    case ExprKind::Call: {
        ExprPtr inner = a_->diff(var);
        if (inner->is_constant(0.0)) return inner;
        switch (func_) {
        case Func::Sin: return mul(call(Func::Cos, a_), inner);
        case Func::Cos: return neg(mul(call(Func::Sin, a_), inner));
        case Func::Exp: return mul(call(Func::Exp, a_), inner);
        case Func::Log: return div(inner, a_);
        case Func::Sqrt:
            return div(inner, mul(constant(2.0), call(Func::Sqrt, a_)));
        }
        break;
    }
    }
    return constant(0.0);
}

int Expr::min_dimension() const {
    switch (kind_) {
    case ExprKind::Constant: return 0;
    case ExprKind::Variable: return var_ + 1;
    case ExprKind::Neg:
    case ExprKind::Pow:
    case ExprKind::Call: return a_->min_dimension();
    default: return std::max(a_->min_dimension(), b_->min_dimension());
    }
}

namespace {

// Rendering precedence: higher binds tighter.
int precedence(ExprKind k) {
    switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void render(const Expr& e, std::string& out, int parent_prec) {
    int prec = precedence(e.kind());
    bool paren = prec < parent_prec;
    if (paren) out += '(';
    switch (e.kind()) {
    case ExprKind::Constant: {
        double v = e.constant_value();
        if (v < 0.0 && parent_prec > 0 && !paren) {
            out += '(';
            out += format_double(v);
            out += ')';
        } else {
            out += format_double(v);
        }
        break;
    }
    case ExprKind::Variable:
        out += 'x';
        out += std::to_string(e.variable_index());
        break;
    case ExprKind::Add:
        render(*e.left(), out, prec);
        out += '+';
        render(*e.right(), out, prec + 1);
        break;
    case ExprKind::Sub:
        render(*e.left(), out, prec);
        out += '-';
        render(*e.right(), out, prec + 1);
        break;
    case ExprKind::Mul:
        render(*e.left(), out, prec);
        out += '*';
        render(*e.right(), out, prec + 1);
        break;
    case ExprKind::Div:
        render(*e.left(), out, prec);
        out += '/';
        render(*e.right(), out, prec + 1);
        break;
    case ExprKind::Neg:
        out += '-';
        render(*e.left(), out, prec + 1);
        break;
    case ExprKind::Pow:
        render(*e.left(), out, prec + 1);
        out += '^';
        out += std::to_string(e.exponent());
        break;
    case ExprKind::Call:
        out += func_name(e.func());
        out += '(';
        render(*e.left(), out, 0);
        out += ')';
        break;
    }
    if (paren) out += ')';
}

} // namespace

std::string Expr::to_string() const {
    std::string out;
    render(*this, out, 0);
    return out;
}

ExprPtr operator+(ExprPtr a, ExprPtr b) { return Expr::add(std::move(a), std::move(b)); }
ExprPtr operator-(ExprPtr a, ExprPtr b) { return Expr::sub(std::move(a), std::move(b)); }
ExprPtr operator*(ExprPtr a, ExprPtr b) { return Expr::mul(std::move(a), std::move(b)); }
ExprPtr operator/(ExprPtr a, ExprPtr b) { return Expr::div(std::move(a), std::move(b)); }
ExprPtr operator-(ExprPtr a) { return Expr::neg(std::move(a)); }

namespace ex {
ExprPtr c(double v) { return Expr::constant(v); }
ExprPtr x(int i) { return Expr::variable(i); }
ExprPtr pow(ExprPtr a, long k) { return Expr::pow_int(std::move(a), k); }
ExprPtr sin(ExprPtr a) { return Expr::call(Func::Sin, std::move(a)); }
ExprPtr cos(ExprPtr a) { return Expr::call(Func::Cos, std::move(a)); }
ExprPtr exp(ExprPtr a) { return Expr::call(Func::Exp, std::move(a)); }
ExprPtr log(ExprPtr a) { return Expr::call(Func::Log, std::move(a)); }
ExprPtr sqrt(ExprPtr a) { return Expr::call(Func::Sqrt, std::move(a)); }
} // namespace ex

} // namespace curved
