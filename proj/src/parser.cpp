// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

#include "czreach/errors.hpp"
#include "czreach/factorable.hpp"

namespace czreach
{

namespace
{

enum class TokenKind
{
    Number,
    Identifier,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End
};

struct Token
{
    TokenKind kind = TokenKind::End;
    std::size_t pos = 0;
    std::string text;
    double value = 0.0;
};

std::vector<Token> tokenize(const std::string& s)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < s.size())
    {
        const char ch = s[i];
        if (std::isspace(static_cast<unsigned char>(ch)))
        {
            ++i;
            continue;
        }
        Token t;
        t.pos = i;
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.')
        {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            if (j < s.size() && s[j] == '.')
            {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                    ++j;
            }
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E'))
            {
                std::size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-'))
                    ++k;
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])))
                {
                    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])))
                        ++k;
                    j = k;
                }
            }
            t.text = s.substr(i, j - i);
            if (t.text == ".")
                throw SyntaxError("malformed number", i);
            t.kind = TokenKind::Number;
            t.value = std::strtod(t.text.c_str(), nullptr);
            i = j;
        }
        else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_')
        {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            t.kind = TokenKind::Identifier;
            t.text = s.substr(i, j - i);
            i = j;
        }
        else
        {
            switch (ch)
            {
                case '+': t.kind = TokenKind::Plus; break;
                case '-': t.kind = TokenKind::Minus; break;
                case '*': t.kind = TokenKind::Star; break;
                case '/': t.kind = TokenKind::Slash; break;
                case '^': t.kind = TokenKind::Caret; break;
                case '(': t.kind = TokenKind::LParen; break;
                case ')': t.kind = TokenKind::RParen; break;
                default: throw SyntaxError(std::string("unexpected character '") + ch + "'", i);
            }
            t.text = std::string(1, ch);
            ++i;
        }
        tokens.push_back(std::move(t));
    }
    Token end;
    end.pos = s.size();
    tokens.push_back(end);
    return tokens;
}

/// A value under construction: scale * z[node] + offset, or a bare constant
/// when node is empty. Affine operations with constants stay symbolic until
/// the value is needed as a generic operand.
struct Handle
{
    std::optional<std::size_t> node;
    double scale = 1.0;
    double offset = 0.0;

    bool is_constant() const { return !node.has_value(); }
};

Handle constant(double v) { return Handle{std::nullopt, 0.0, v}; }

class GraphBuilder
{
    public:
        GraphBuilder(const std::vector<std::string>& var_names, bool cse) : cse_(cse)
        {
            for (const std::string& name : var_names)
            {
                if (var_index_.count(name) > 0)
                    throw std::invalid_argument("duplicate variable name '" + name + "'");
                var_index_[name] = nodes_.size();
                nodes_.push_back(InputNode{name});
            }
        }

        std::optional<std::size_t> variable(const std::string& name) const
        {
            auto it = var_index_.find(name);
            if (it == var_index_.end())
                return std::nullopt;
            return it->second;
        }

        std::size_t materialize(const Handle& h)
        {
            if (h.is_constant())
                return add(ConstantNode{h.offset});
            if (h.scale == 1.0 && h.offset == 0.0)
                return *h.node;
            return add(AffineNode{h.scale, h.offset, *h.node});
        }

        std::size_t add(const FactorNode& node)
        {
            if (!cse_)
            {
                nodes_.push_back(node);
                return nodes_.size() - 1;
            }
            const Key key = make_key(node);
            auto it = cache_.find(key);
            if (it != cache_.end())
                return it->second;
            nodes_.push_back(node);
            cache_[key] = nodes_.size() - 1;
            return nodes_.size() - 1;
        }

        std::vector<FactorNode> release() { return std::move(nodes_); }

    private:
        using Key = std::tuple<int, int, std::size_t, std::size_t, double, double>;

        static Key make_key(const FactorNode& node)
        {
            if (const auto* c = std::get_if<ConstantNode>(&node))
                return {1, 0, 0, 0, c->value, 0.0};
            if (const auto* b = std::get_if<BinaryNode>(&node))
            {
                std::size_t a = b->a;
                std::size_t bb = b->b;
                if ((b->op == BinaryOp::Add || b->op == BinaryOp::Mul) && a > bb)
                    std::swap(a, bb);
                return {2, static_cast<int>(b->op), a, bb, 0.0, 0.0};
            }
            if (const auto* u = std::get_if<UnivariateNode>(&node))
                return {3, static_cast<int>(u->fn) * 1000003 + u->exponent, u->a, 0, 0.0, 0.0};
            const auto& a = std::get<AffineNode>(node);
            return {4, 0, a.a, 0, a.scale, a.offset};
        }

        bool cse_;
        std::vector<FactorNode> nodes_;
        std::map<std::string, std::size_t> var_index_;
        std::map<Key, std::size_t> cache_;
};

class Parser
{
    public:
        Parser(const std::string& text, GraphBuilder& builder) : tokens_(tokenize(text)), g_(builder) {}

        Handle parse_all()
        {
            Handle h = expression();
            if (peek().kind != TokenKind::End)
                throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
            return h;
        }

    private:
        const Token& peek() const { return tokens_[pos_]; }
        const Token& next() { return tokens_[pos_++]; }

        bool accept(TokenKind kind)
        {
            if (peek().kind != kind)
                return false;
            ++pos_;
            return true;
        }

        void expect(TokenKind kind, const char* what)
        {
            if (!accept(kind))
                throw SyntaxError(std::string("expected ") + what, peek().pos);
        }

        Handle expression()
        {
            Handle lhs = term();
            for (;;)
            {
                if (accept(TokenKind::Plus))
                    lhs = add(lhs, term());
                else if (accept(TokenKind::Minus))
                    lhs = sub(lhs, term());
                else
                    return lhs;
            }
        }

        Handle term()
        {
            Handle lhs = unary();
            for (;;)
            {
                if (accept(TokenKind::Star))
                {
                    lhs = mul(lhs, unary());
                }
                else if (peek().kind == TokenKind::Slash)
                {
                    const std::size_t at = next().pos;
                    lhs = div(lhs, unary(), at);
                }
                else
                {
                    return lhs;
                }
            }
        }

        Handle unary()
        {
            if (accept(TokenKind::Minus))
                return scale(unary(), -1.0);
            if (accept(TokenKind::Plus))
                return unary();
            return power();
        }

        Handle power()
        {
            Handle base = primary();
            if (!accept(TokenKind::Caret))
                return base;
            const std::size_t at = peek().pos;
            const Handle exponent = unary();
            if (!exponent.is_constant())
                throw NonIntegerExponent("exponent must be an integer constant", at);
            const double q = exponent.offset;
            if (!std::isfinite(q) || q != std::round(q) || std::abs(q) > std::numeric_limits<int>::max())
                throw NonIntegerExponent("exponent must be an integer constant", at);
            return pow(base, static_cast<int>(q), at);
        }

        Handle primary()
        {
            const Token& t = next();
            switch (t.kind)
            {
                case TokenKind::Number: return constant(t.value);
                case TokenKind::LParen:
                {
                    Handle h = expression();
                    expect(TokenKind::RParen, "')'");
                    return h;
                }
                case TokenKind::Identifier:
                {
                    if (peek().kind == TokenKind::LParen)
                    {
                        UnaryFn fn;
                        if (t.text == "exp")
                            fn = UnaryFn::Exp;
                        else if (t.text == "log")
                            fn = UnaryFn::Log;
                        else
                            throw UnknownIdentifier("unknown function '" + t.text + "'", t.pos);
                        next();
                        Handle arg = expression();
                        expect(TokenKind::RParen, "')'");
                        return apply(fn, arg, t.pos);
                    }
                    const auto idx = g_.variable(t.text);
                    if (!idx && (t.text == "exp" || t.text == "log"))
                        throw SyntaxError("expected '(' after '" + t.text + "'", peek().pos);
                    if (!idx)
                        throw UnknownIdentifier("unknown identifier '" + t.text + "'", t.pos);
                    return Handle{*idx, 1.0, 0.0};
                }
                case TokenKind::End: throw SyntaxError("unexpected end of expression", t.pos);
                default: throw SyntaxError("unexpected '" + t.text + "'", t.pos);
            }
        }

        static Handle scale(Handle h, double s)
        {
            if (h.is_constant())
                return constant(h.offset * s);
            if (h.scale * s == 0.0)
                return constant(h.offset * s);
            return Handle{h.node, h.scale * s, h.offset * s};
        }

        static Handle shift(Handle h, double t)
        {
            h.offset += t;
            return h;
        }

        std::size_t binary(BinaryOp op, const Handle& a, const Handle& b)
        {
            const std::size_t ia = g_.materialize(a);
            const std::size_t ib = g_.materialize(b);
            return g_.add(BinaryNode{op, ia, ib});
        }

        Handle node(std::size_t j) { return Handle{j, 1.0, 0.0}; }

        Handle add(const Handle& a, const Handle& b)
        {
            if (a.is_constant())
                return shift(b, a.offset);
            if (b.is_constant())
                return shift(a, b.offset);
            return node(binary(BinaryOp::Add, a, b));
        }

        Handle sub(const Handle& a, const Handle& b)
        {
            if (b.is_constant())
                return shift(a, -b.offset);
            if (a.is_constant())
                return shift(scale(b, -1.0), a.offset);
            return node(binary(BinaryOp::Sub, a, b));
        }

        Handle mul(const Handle& a, const Handle& b)
        {
            if (a.is_constant())
                return scale(b, a.offset);
            if (b.is_constant())
                return scale(a, b.offset);
            return node(binary(BinaryOp::Mul, a, b));
        }

        Handle div(const Handle& a, const Handle& b, std::size_t at)
        {
            if (b.is_constant())
            {
                if (b.offset == 0.0)
                    throw DomainError("division by zero at position " + std::to_string(at));
                return scale(a, 1.0 / b.offset);
            }
            return node(binary(BinaryOp::Div, a, b));
        }

        Handle pow(const Handle& base, int q, std::size_t at)
        {
            if (base.is_constant())
            {
                if (q < 0 && base.offset == 0.0)
                    throw DomainError("negative power of zero at position " + std::to_string(at));
                return constant(std::pow(base.offset, q));
            }
            if (q == 0)
                return constant(1.0);
            if (q == 1)
                return base;
            const std::size_t ib = g_.materialize(base);
            const int m = q < 0 ? -q : q;
            const std::size_t ip = m == 1 ? ib : g_.add(UnivariateNode{UnaryFn::PowInt, ib, m});
            if (q > 0)
                return node(ip);
            const std::size_t one = g_.add(ConstantNode{1.0});
            return node(g_.add(BinaryNode{BinaryOp::Div, one, ip}));
        }

        Handle apply(UnaryFn fn, const Handle& arg, std::size_t at)
        {
            if (arg.is_constant())
            {
                if (fn == UnaryFn::Exp)
                    return constant(std::exp(arg.offset));
                if (!(arg.offset > 0.0))
                    throw DomainError("logarithm of a non-positive constant at position " + std::to_string(at));
                return constant(std::log(arg.offset));
            }
            return node(g_.add(UnivariateNode{fn, g_.materialize(arg), 0}));
        }

        std::vector<Token> tokens_;
        std::size_t pos_ = 0;
        GraphBuilder& g_;
};

} // namespace

FactorGraph parse(const std::vector<std::string>& expressions, const std::vector<std::string>& var_names,
                  const ParseOptions& options)
{
    GraphBuilder builder(var_names, options.cse);
    std::vector<std::size_t> outputs;
    for (const std::string& text : expressions)
    {
        Parser parser(text, builder);
        outputs.push_back(builder.materialize(parser.parse_all()));
    }
    return FactorGraph(builder.release(), std::move(outputs));
}

FactorGraph parse(const std::string& expression, const std::vector<std::string>& var_names,
                  const ParseOptions& options)
{
    return parse(std::vector<std::string>{expression}, var_names, options);
}

} // namespace czreach
