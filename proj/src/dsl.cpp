// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#include "curved/dsl.hpp"

#include <cctype>
#include <optional>

namespace curved {

ParseError::ParseError(std::string msg, int line, int column)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + std::move(msg)),
      line_(line), column_(column) {}

namespace {

enum class Tok {
    End, Number, Ident,
    Assign, Semicolon, LBracket, RBracket, LParen, RParen,
    Plus, Minus, Star, Slash, Caret
};

struct Token {
    Tok kind = Tok::End;
    double number = 0.0;
    std::string ident;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, tok_.line, tok_.column);
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            step();
        tok_ = Token{};
        tok_.line = line_;
        tok_.column = column_;
        if (pos_ >= text_.size()) {
            tok_.kind = Tok::End;
            return;
        }
        char c = text_[pos_];
        switch (c) {
        case '=': tok_.kind = Tok::Assign; step(); return;
        case ';': tok_.kind = Tok::Semicolon; step(); return;
        case '[': tok_.kind = Tok::LBracket; step(); return;
        case ']': tok_.kind = Tok::RBracket; step(); return;
        case '(': tok_.kind = Tok::LParen; step(); return;
        case ')': tok_.kind = Tok::RParen; step(); return;
        case '+': tok_.kind = Tok::Plus; step(); return;
        case '-': tok_.kind = Tok::Minus; step(); return;
        case '*': tok_.kind = Tok::Star; step(); return;
        case '/': tok_.kind = Tok::Slash; step(); return;
        case '^': tok_.kind = Tok::Caret; step(); return;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                name += text_[pos_];
                step();
            }
            tok_.kind = Tok::Ident;
            tok_.ident = std::move(name);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
    }

    void lex_number() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) step();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            step();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) step();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_;
            int mark_line = line_, mark_col = column_;
            step();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) step();
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) step();
            } else {
                // Not an exponent after all (e.g. "2exp" would be bad input anyway).
                pos_ = mark;
                line_ = mark_line;
                column_ = mark_col;
            }
        }
        tok_.kind = Tok::Number;
        tok_.number = std::stod(text_.substr(start, pos_ - start));
    }

    void step() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& text, int dim, const MetricGrid* grid)
        : lex_(text), dim_(dim), grid_(grid) {}

    ExprPtr parse_expr_all() {
        ExprPtr e = expr();
        if (lex_.peek().kind != Tok::End)
            lex_.fail("trailing input after expression");
        return e;
    }

    Lexer& lexer() { return lex_; }
    void set_dim(int d) { dim_ = d; }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus) {
                lex_.take();
                e = Expr::add(e, term());
            } else if (k == Tok::Minus) {
                lex_.take();
                e = Expr::sub(e, term());
            } else {
                return e;
            }
        }
    }

private:
    ExprPtr term() {
        ExprPtr e = unary();
        for (;;) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Star) {
                lex_.take();
                e = Expr::mul(e, unary());
            } else if (k == Tok::Slash) {
                lex_.take();
                e = Expr::div(e, unary());
            } else {
                return e;
            }
        }
    }

    ExprPtr unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return Expr::neg(unary());
        }
        if (lex_.peek().kind == Tok::Plus) {
            lex_.take();
            return unary();
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (lex_.peek().kind == Tok::Caret) {
            lex_.take();
            long sign = 1;
            if (lex_.peek().kind == Tok::Minus) {
                lex_.take();
                sign = -1;
            }
            Token t = lex_.peek();
            if (t.kind != Tok::Number)
                lex_.fail("exponent must be an integer literal");
            lex_.take();
            long k = static_cast<long>(t.number);
            if (static_cast<double>(k) != t.number)
                throw ParseError("exponent must be an integer literal", t.line, t.column);
            return Expr::pow_int(base, sign * k);
        }
        return base;
    }

    int bracketed_index() {
        if (lex_.peek().kind != Tok::LBracket) lex_.fail("expected '['");
        lex_.take();
        Token t = lex_.peek();
        if (t.kind != Tok::Number || static_cast<double>(static_cast<int>(t.number)) != t.number)
            lex_.fail("expected integer index");
        lex_.take();
        if (lex_.peek().kind != Tok::RBracket) lex_.fail("expected ']'");
        lex_.take();
        return static_cast<int>(t.number);
    }

    ExprPtr primary() {
        Token t = lex_.peek();
        switch (t.kind) {
        case Tok::Number:
            lex_.take();
            return Expr::constant(t.number);
        case Tok::LParen: {
            lex_.take();
            ExprPtr e = expr();
            if (lex_.peek().kind != Tok::RParen) lex_.fail("expected ')'");
            lex_.take();
            return e;
        }
        case Tok::Ident: {
            lex_.take();
            const std::string& name = t.ident;
            if (name == "g") {
                if (!grid_)
                    throw ParseError("metric component references are not allowed here",
                                     t.line, t.column);
                int i = bracketed_index();
                int j = bracketed_index();
                if (i < 0 || i >= grid_->dim || j < 0 || j >= grid_->dim)
                    throw ParseError("component index out of range for dim=" +
                                         std::to_string(grid_->dim),
                                     t.line, t.column);
                const ExprPtr& ref = grid_->at(i, j);
                if (!ref)
                    throw ParseError("g[" + std::to_string(i) + "][" + std::to_string(j) +
                                         "] referenced before assignment",
                                     t.line, t.column);
                return ref;
            }
            if (name.size() >= 2 && name[0] == 'x') {
                bool digits = true;
                for (size_t k = 1; k < name.size(); ++k)
                    if (!std::isdigit(static_cast<unsigned char>(name[k]))) digits = false;
                if (digits) {
                    int idx = std::stoi(name.substr(1));
                    if (idx >= dim_)
                        throw ParseError("unknown identifier '" + name + "' (coordinates are x0..x" +
                                             std::to_string(dim_ - 1) + ")",
                                         t.line, t.column);
                    return Expr::variable(idx);
                }
            }
            std::optional<Func> f;
            if (name == "sin") f = Func::Sin;
            else if (name == "cos") f = Func::Cos;
            else if (name == "exp") f = Func::Exp;
            else if (name == "log") f = Func::Log;
            else if (name == "sqrt") f = Func::Sqrt;
            if (f) {
                if (lex_.peek().kind != Tok::LParen) lex_.fail("expected '(' after function name");
                lex_.take();
                ExprPtr arg = expr();
                if (lex_.peek().kind != Tok::RParen) lex_.fail("expected ')'");
                lex_.take();
                return Expr::call(*f, arg);
            }
            throw ParseError("unknown identifier '" + name + "'", t.line, t.column);
        }
        default:
            lex_.fail("expected an expression");
        }
    }

    Lexer lex_;
    int dim_;
    const MetricGrid* grid_;
};

} // namespace

MetricGrid parse_metric_dsl(const std::string& text) {
    MetricGrid grid;
    Parser parser(text, 0, &grid);
    Lexer& lex = parser.lexer();

    // dim=<int>; must come first.
    {
        Token t = lex.peek();
        if (t.kind != Tok::Ident || t.ident != "dim")
            throw ParseError("metric definition must start with dim=<int>;", t.line, t.column);
        lex.take();
        if (lex.peek().kind != Tok::Assign) lex.fail("expected '=' after dim");
        lex.take();
        Token n = lex.peek();
        if (n.kind != Tok::Number || static_cast<double>(static_cast<int>(n.number)) != n.number)
            lex.fail("dim must be an integer");
        lex.take();
        int d = static_cast<int>(n.number);
        if (d < 1 || d > 16)
            throw ParseError("dim out of range", n.line, n.column);
        grid.dim = d;
        grid.components.assign(static_cast<size_t>(d) * d, nullptr);
        parser.set_dim(d);
        if (lex.peek().kind != Tok::Semicolon) lex.fail("expected ';'");
        lex.take();
    }

    std::vector<bool> assigned(static_cast<size_t>(grid.dim) * grid.dim, false);
    while (lex.peek().kind != Tok::End) {
        Token t = lex.peek();
        if (t.kind != Tok::Ident || t.ident != "g")
            throw ParseError("expected a g[i][j]=...; statement", t.line, t.column);
        lex.take();

        auto index = [&]() {
            if (lex.peek().kind != Tok::LBracket) lex.fail("expected '['");
            lex.take();
            Token n = lex.peek();
            if (n.kind != Tok::Number ||
                static_cast<double>(static_cast<int>(n.number)) != n.number)
                lex.fail("expected integer index");
            lex.take();
            int idx = static_cast<int>(n.number);
            if (idx < 0 || idx >= grid.dim)
                throw ParseError("component index out of range for dim=" +
                                     std::to_string(grid.dim),
                                 n.line, n.column);
            if (lex.peek().kind != Tok::RBracket) lex.fail("expected ']'");
            lex.take();
            return idx;
        };
        int i = index();
        int j = index();
        if (assigned[static_cast<size_t>(i) * grid.dim + j])
            throw ParseError("g[" + std::to_string(i) + "][" + std::to_string(j) +
                                 "] assigned twice; the grid is symmetric, assign one triangle",
                             t.line, t.column);
        if (lex.peek().kind != Tok::Assign) lex.fail("expected '='");
        lex.take();
        ExprPtr e = parser.expr();
        if (lex.peek().kind != Tok::Semicolon) lex.fail("expected ';'");
        lex.take();

        grid.at(i, j) = e;
        grid.at(j, i) = e;
        assigned[static_cast<size_t>(i) * grid.dim + j] = true;
        assigned[static_cast<size_t>(j) * grid.dim + i] = true;
    }

    ExprPtr zero = Expr::constant(0.0);
    for (auto& comp : grid.components)
        if (!comp) comp = zero;
    return grid;
}

ExprPtr parse_expression(const std::string& text, int dim) {
    Parser parser(text, dim, nullptr);
    return parser.parse_expr_all();
}

std::string metric_to_dsl(const MetricGrid& grid) {
    std::string out = "dim=" + std::to_string(grid.dim) + ";\n";
    for (int i = 0; i < grid.dim; ++i)
        for (int j = i; j < grid.dim; ++j) {
            const ExprPtr& e = grid.at(i, j);
            if (!e || e->is_constant(0.0)) continue;
            out += "g[" + std::to_string(i) + "][" + std::to_string(j) + "]=" +
                   e->to_string() + ";\n";
        }
    return out;
}

} // namespace curved
