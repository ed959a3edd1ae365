#include "adjoint_fp/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "adjoint_fp/errors.hpp"

namespace adjoint_fp {

struct Expression::Node {
    enum class Kind { Number, X, Y, Neg, Add, Sub, Mul, Div, Sin, Cos, Exp, Ln };
    Kind kind = Kind::Number;
    double value = 0.0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    n->value = v;
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse() {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }
    bool uses_y = false;

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ExpressionError(pos_ + 1, msg); }

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

    NodePtr expr() {
        auto lhs = term();
        while (true) {
            if (accept('+')) lhs = make(Node::Kind::Add, lhs, term());
            else if (accept('-')) lhs = make(Node::Kind::Sub, lhs, term());
            else return lhs;
        }
    }
    NodePtr term() {
        auto lhs = unary();
        while (true) {
            if (accept('*')) lhs = make(Node::Kind::Mul, lhs, unary());
            else if (accept('/')) lhs = make(Node::Kind::Div, lhs, unary());
            else return lhs;
        }
    }
    NodePtr unary() {
        if (accept('-')) return make(Node::Kind::Neg, unary());
        if (accept('+')) return unary();
        return primary();
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        if (accept('(')) {
            auto e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (res.ec != std::errc{}) fail("malformed number");
            pos_ = static_cast<std::size_t>(res.ptr - s_.data());
            return make(Node::Kind::Number, nullptr, nullptr, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string_view word = s_.substr(start, pos_ - start);
            if (word == "x") return make(Node::Kind::X);
            if (word == "y") {
                uses_y = true;
                return make(Node::Kind::Y);
            }
            if (word == "pi") return make(Node::Kind::Number, nullptr, nullptr, std::numbers::pi);
            Node::Kind k;
            if (word == "sin") k = Node::Kind::Sin;
            else if (word == "cos") k = Node::Kind::Cos;
            else if (word == "exp") k = Node::Kind::Exp;
            else if (word == "ln") k = Node::Kind::Ln;
            else {
                pos_ = start;
                fail("unknown name '" + std::string(word) + "'");
            }
            if (!accept('(')) fail("expected '(' after " + std::string(word));
            auto arg = expr();
            if (!accept(')')) fail("expected ')'");
            return make(k, arg);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

double eval(const Node& n, double x, double y) {
    switch (n.kind) {
        case Node::Kind::Number: return n.value;
        case Node::Kind::X: return x;
        case Node::Kind::Y: return y;
        case Node::Kind::Neg: return -eval(*n.a, x, y);
        case Node::Kind::Add: return eval(*n.a, x, y) + eval(*n.b, x, y);
        case Node::Kind::Sub: return eval(*n.a, x, y) - eval(*n.b, x, y);
        case Node::Kind::Mul: return eval(*n.a, x, y) * eval(*n.b, x, y);
        case Node::Kind::Div: return eval(*n.a, x, y) / eval(*n.b, x, y);
        case Node::Kind::Sin: return std::sin(eval(*n.a, x, y));
        case Node::Kind::Cos: return std::cos(eval(*n.a, x, y));
        case Node::Kind::Exp: return std::exp(eval(*n.a, x, y));
        case Node::Kind::Ln: return std::log(eval(*n.a, x, y));
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
    Parser p(text);
    Expression e;
    e.root_ = p.parse();
    e.uses_y_ = p.uses_y;
    e.source_ = std::string(text);
    return e;
}

double Expression::operator()(double x, double y) const { return eval(*root_, x, y); }

GridFunction sample_expression(const std::string& text, const GridPtr& grid, const std::string& field) {
    Expression e;
    try {
        e = Expression::parse(text);
    } catch (const ExpressionError& err) {
        throw ValidationError(field, std::string("bad expression: ") + err.what());
    }
    if (e.uses_y() && grid->dim() == 1) throw ValidationError(field, "uses y on a 1-D grid");
    GridFunction out = GridFunction::sample(grid, [&](const Point& p) { return e(p[0], p[1]); });
    if (!out.all_finite()) throw ValidationError(field, "expression is not finite at every node");
    return out;
}

}  // namespace adjoint_fp
