#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "adjoint_fp/grid_function.hpp"

namespace adjoint_fp {

/// Syntax error inside an expression; `column` is 1-based.
class ExpressionError : public std::runtime_error {
public:
    ExpressionError(std::size_t column, const std::string& message)
        : std::runtime_error("column " + std::to_string(column) + ": " + message), column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/**
 * Closed-form initial data. Grammar:
 *   expr   := term (('+' | '-') term)*
 *   term   := unary (('*' | '/') unary)*
 *   unary  := ('-' | '+') unary | primary
 *   primary:= number | 'x' | 'y' | 'pi' | func '(' expr ')' | '(' expr ')'
 *   func   := sin | cos | exp | ln
 */
class Expression {
public:
    static Expression parse(std::string_view text);

    double operator()(double x, double y = 0.0) const;
    bool uses_y() const { return uses_y_; }
    const std::string& source() const { return source_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
    bool uses_y_ = false;
};

/// Evaluates at every node; throws ValidationError(field, ...) on syntax
/// errors, on `y` over a 1-D grid, and on non-finite values.
GridFunction sample_expression(const std::string& text, const GridPtr& grid, const std::string& field);

}  // namespace adjoint_fp
