#include "helidens/complex_expr.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>

#include "helidens/error.hpp"

namespace helidens {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, ComplexExpression& out) : text_(text), out_(out) {}

    int parse() {
        const int root = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return root;
    }

private:
    using Op = ComplexExpression::Op;

    [[noreturn]] void fail(const std::string& why) const {
        throw GeometryError(ErrorCode::ParseError,
                            why + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool accept_word(std::string_view word) {
        skip_space();
        if (text_.substr(pos_, word.size()) != word) return false;
        const std::size_t end = pos_ + word.size();
        if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
        pos_ = end;
        return true;
    }

    int add(Op op, int lhs = -1, int rhs = -1, std::complex<double> value = {}) {
        out_.nodes_.push_back({op, value, lhs, rhs});
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int expr() {
        int lhs = term();
        for (;;) {
            if (accept('+')) lhs = add(Op::Add, lhs, term());
            else if (accept('-')) lhs = add(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    int term() {
        int lhs = unary();
        for (;;) {
            if (accept('*')) lhs = add(Op::Mul, lhs, unary());
            else if (accept('/')) lhs = add(Op::Div, lhs, unary());
            else return lhs;
        }
    }

    int unary() {
        if (accept('-')) return add(Op::Neg, unary());
        if (accept('+')) return unary();
        return primary();
    }

    int primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(text_.substr(pos_));
            char* end = nullptr;
            const double value = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) fail("bad number");
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            if (pos_ < text_.size() && text_[pos_] == 'i' &&
                !(pos_ + 1 < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
                ++pos_;
                return add(Op::Const, -1, -1, {0.0, value});
            }
            return add(Op::Const, -1, -1, {value, 0.0});
        }
        if (accept('(')) {
            const int inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (accept_word("exp")) {
            if (!accept('(')) fail("expected '(' after exp");
            const int arg = expr();
            if (!accept(')')) fail("expected ')'");
            return add(Op::Exp, arg);
        }
        if (accept_word("pi")) return add(Op::Const, -1, -1, {std::numbers::pi, 0.0});
        if (accept_word("i")) return add(Op::Const, -1, -1, {0.0, 1.0});
        if (accept_word("z")) return add(Op::Var);
        fail("unexpected symbol");
    }

    std::string_view text_;
    ComplexExpression& out_;
    std::size_t pos_ = 0;
};

ComplexExpression ComplexExpression::parse(std::string_view text) {
    ComplexExpression e;
    e.text_ = std::string(text);
    ExpressionParser parser(e.text_, e);
    e.root_ = parser.parse();
    return e;
}

std::complex<double> ComplexExpression::operator()(std::complex<double> z) const { return eval(root_, z); }

std::complex<double> ComplexExpression::eval(int node, std::complex<double> z) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return z;
    case Op::Add: return eval(n.lhs, z) + eval(n.rhs, z);
    case Op::Sub: return eval(n.lhs, z) - eval(n.rhs, z);
    case Op::Mul: return eval(n.lhs, z) * eval(n.rhs, z);
    case Op::Div: return eval(n.lhs, z) / eval(n.rhs, z);
    case Op::Neg: return -eval(n.lhs, z);
    case Op::Exp: return std::exp(eval(n.lhs, z));
    }
    return {};
}

} // namespace helidens
