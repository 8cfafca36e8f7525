// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_DSL_HPP
#define CURVED_DSL_HPP

#include "curved/expression.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace curved {

// Raised on malformed DSL input; line/column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// A symmetric grid of component expressions, the parsed form of
//
//   dim=4;
//   g[0][0]=-1;
//   g[1][1]=1+x0^2;
//   ...
//
// Off-diagonal components omitted from the text are zero.  Assigning
// g[i][j] also defines g[j][i]; assigning both (or one slot twice) is
// rejected so a non-symmetric grid cannot be spelled.  The right-hand
// side may mention any component assigned earlier, e.g. g[1][1]=g[0][0].
struct MetricGrid {
    int dim = 0;
    std::vector<ExprPtr> components; // dim*dim entries, row-major, symmetric

    const ExprPtr& at(int i, int j) const { return components[i * dim + j]; }
    ExprPtr& at(int i, int j) { return components[i * dim + j]; }
};

// Parses the metric definition language.  Statements are
// `dim=<int>;` (required, first) followed by `g[i][j]=<expr>;`.
// Expressions use x0..x{dim-1}, numeric literals, + - * / ^<int>,
// sin cos exp log sqrt, parentheses, and g[i][j] back references.
MetricGrid parse_metric_dsl(const std::string& text);

// Parses a single scalar expression over x0..x{dim-1}.
ExprPtr parse_expression(const std::string& text, int dim);

// Renders a grid back to DSL text; parse_metric_dsl(metric_to_dsl(g))
// reproduces the same component functions.
std::string metric_to_dsl(const MetricGrid& grid);

} // namespace curved

#endif
