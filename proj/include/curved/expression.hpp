// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_EXPRESSION_HPP
#define CURVED_EXPRESSION_HPP

#include <memory>
#include <span>
#include <string>

namespace curved {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };

enum class Func { Sin, Cos, Exp, Log, Sqrt };

const char* func_name(Func f);

// Immutable scalar expression tree over variables x0..x{n-1}.
//
// The factory functions fold constants and prune trivial identities
// (x+0, x*1, x*0, x^1, ...) so that repeated differentiation does not
// blow the tree up with dead branches.  Trees are shared via
// shared_ptr; nodes are never mutated after construction.
class Expr {
public:
    static ExprPtr constant(double v);
    static ExprPtr variable(int index);
    static ExprPtr add(ExprPtr a, ExprPtr b);
    static ExprPtr sub(ExprPtr a, ExprPtr b);
    static ExprPtr mul(ExprPtr a, ExprPtr b);
    static ExprPtr div(ExprPtr a, ExprPtr b);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr pow_int(ExprPtr base, long exponent);
    static ExprPtr call(Func f, ExprPtr arg);

    ExprKind kind() const { return kind_; }
    double constant_value() const { return value_; }
    int variable_index() const { return var_; }
    long exponent() const { return exponent_; }
    Func func() const { return func_; }
    const ExprPtr& left() const { return a_; }
    const ExprPtr& right() const { return b_; }

    double eval(std::span<const double> x) const;

    // Exact partial derivative with respect to x<var>.
    ExprPtr diff(int var) const;

    // Largest variable index used, plus one; 0 for constant expressions.
    int min_dimension() const;

    bool is_constant(double v) const;

    // Renders a string the metric DSL parser accepts back.
    std::string to_string() const;

private:
    Expr() = default;

    ExprKind kind_ = ExprKind::Constant;
    double value_ = 0.0;
    int var_ = 0;
    long exponent_ = 0;
    Func func_ = Func::Sin;
    ExprPtr a_;
    ExprPtr b_;
};

// Operators live in namespace curved so argument-dependent lookup finds
// them wherever an ExprPtr is in hand.
ExprPtr operator+(ExprPtr a, ExprPtr b);
ExprPtr operator-(ExprPtr a, ExprPtr b);
ExprPtr operator*(ExprPtr a, ExprPtr b);
ExprPtr operator/(ExprPtr a, ExprPtr b);
ExprPtr operator-(ExprPtr a);

// Convenience shorthands used when composing metrics programmatically.
namespace ex {
ExprPtr c(double v);
ExprPtr x(int i);
ExprPtr pow(ExprPtr a, long k);
ExprPtr sin(ExprPtr a);
ExprPtr cos(ExprPtr a);
ExprPtr exp(ExprPtr a);
ExprPtr log(ExprPtr a);
ExprPtr sqrt(ExprPtr a);
} // namespace ex

} // namespace curved

#endif
