#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace helidens {

// Complex-valued expression in one variable z.
//
// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | primary
//   primary := number ['i'] | 'i' | 'pi' | 'z' | 'exp' '(' expr ')' | '(' expr ')'
//
// A number immediately followed by 'i' is imaginary ("2.5i").
class ComplexExpression {
public:
    // Throws GeometryError(ParseError) with the offending position.
    static ComplexExpression parse(std::string_view text);

    std::complex<double> operator()(std::complex<double> z) const;
    const std::string& text() const { return text_; }

private:
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Exp };
    struct Node {
        Op op;
        std::complex<double> value{};
        int lhs = -1;
        int rhs = -1;
    };
    friend class ExpressionParser;

    std::complex<double> eval(int node, std::complex<double> z) const;

    std::string text_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

} // namespace helidens
