// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/factorable.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "czreach/errors.hpp"

namespace czreach
{

namespace
{

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const char* op_symbol(BinaryOp op)
{
    switch (op)
    {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
    }
    return "?";
}

std::string format_number(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    std::string s = os.str();
    if (v < 0.0)
        return "(" + s + ")";
    return s;
}

} // namespace

FactorGraph::FactorGraph(std::vector<FactorNode> nodes, std::vector<std::size_t> outputs)
    : nodes_(std::move(nodes)), outputs_(std::move(outputs))
{
    bool in_inputs = true;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
    {
        const FactorNode& n = nodes_[j];
        if (std::holds_alternative<InputNode>(n))
        {
            if (!in_inputs)
                throw std::invalid_argument("FactorGraph: input nodes must precede all other factors");
            ++num_inputs_;
            continue;
        }
        in_inputs = false;
        auto check = [&](std::size_t ref)
        {
            if (ref >= j)
                throw std::invalid_argument("FactorGraph: factor " + std::to_string(j) +
                                            " references a later or equal index");
        };
        std::visit(overloaded{[](const InputNode&) {}, [](const ConstantNode&) {},
                              [&](const BinaryNode& b)
                              {
                                  check(b.a);
                                  check(b.b);
                              },
                              [&](const UnivariateNode& u)
                              {
                                  check(u.a);
                                  if (u.fn == UnaryFn::PowInt && u.exponent == 0)
                                      throw std::invalid_argument("FactorGraph: zero exponent");
                              },
                              [&](const AffineNode& a) { check(a.a); }},
                   n);
    }
    for (std::size_t o : outputs_)
    {
        if (o >= nodes_.size())
            throw std::invalid_argument("FactorGraph: output index out of range");
    }
}

std::vector<std::string> FactorGraph::input_names() const
{
    std::vector<std::string> names;
    for (std::size_t j = 0; j < num_inputs_; ++j)
        names.push_back(std::get<InputNode>(nodes_[j]).name);
    return names;
}

Eigen::MatrixXd FactorGraph::output_selector() const
{
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(outputs_.size()),
                                              static_cast<Eigen::Index>(nodes_.size()));
    for (std::size_t i = 0; i < outputs_.size(); ++i)
        E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(outputs_[i])) = 1.0;
    return E;
}

std::vector<double> eval_factors(const FactorGraph& g, const std::vector<double>& x)
{
    if (x.size() != g.num_inputs())
        throw DimensionMismatch("eval_factors: expected " + std::to_string(g.num_inputs()) + " inputs");
    std::vector<double> z(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        z[j] = std::visit(
            overloaded{[&](const InputNode&) { return x[j]; }, [](const ConstantNode& c) { return c.value; },
                       [&](const BinaryNode& b)
                       {
                           const double za = z[b.a];
                           const double zb = z[b.b];
                           switch (b.op)
                           {
                               case BinaryOp::Add: return za + zb;
                               case BinaryOp::Sub: return za - zb;
                               case BinaryOp::Mul: return za * zb;
                               case BinaryOp::Div:
                                   if (zb == 0.0)
                                       throw DomainError("division by zero", j);
                                   return za / zb;
                           }
                           return 0.0;
                       },
                       [&](const UnivariateNode& u)
                       {
                           const double za = z[u.a];
                           switch (u.fn)
                           {
                               case UnaryFn::Exp: return std::exp(za);
                               case UnaryFn::Log:
                                   if (!(za > 0.0))
                                       throw DomainError("logarithm of a non-positive value", j);
                                   return std::log(za);
                               case UnaryFn::PowInt:
                                   if (u.exponent < 0 && za == 0.0)
                                       throw DomainError("negative power of zero", j);
                                   return std::pow(za, u.exponent);
                           }
                           return 0.0;
                       },
                       [&](const AffineNode& a) { return a.scale * z[a.a] + a.offset; }},
            g.node(j));
    }
    return z;
}

Eigen::VectorXd eval_real(const FactorGraph& g, const Eigen::VectorXd& x)
{
    const std::vector<double> z = eval_factors(g, std::vector<double>(x.data(), x.data() + x.size()));
    Eigen::VectorXd out(static_cast<Eigen::Index>(g.num_outputs()));
    for (std::size_t i = 0; i < g.num_outputs(); ++i)
        out(static_cast<Eigen::Index>(i)) = z[g.outputs()[i]];
    return out;
}

IntervalVector eval_interval(const FactorGraph& g, const IntervalVector& X)
{
    if (X.size() != g.num_inputs())
        throw DimensionMismatch("eval_interval: expected " + std::to_string(g.num_inputs()) + " inputs");
    IntervalVector Z(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        try
        {
            Z[j] = std::visit(overloaded{[&](const InputNode&) { return X[j]; },
                                         [](const ConstantNode& c) { return Interval(c.value); },
                                         [&](const BinaryNode& b)
                                         {
                                             switch (b.op)
                                             {
                                                 case BinaryOp::Add: return Z[b.a] + Z[b.b];
                                                 case BinaryOp::Sub: return Z[b.a] - Z[b.b];
                                                 case BinaryOp::Mul: return Z[b.a] * Z[b.b];
                                                 case BinaryOp::Div: return Z[b.a] / Z[b.b];
                                             }
                                             return Interval::empty();
                                         },
                                         [&](const UnivariateNode& u)
                                         {
                                             switch (u.fn)
                                             {
                                                 case UnaryFn::Exp: return iv_exp(Z[u.a]);
                                                 case UnaryFn::Log: return iv_log(Z[u.a]);
                                                 case UnaryFn::PowInt: return iv_pow_int(Z[u.a], u.exponent);
                                             }
                                             return Interval::empty();
                                         },
                                         [&](const AffineNode& a)
                                         { return iv_shift(iv_scale(Z[a.a], a.scale), a.offset); }},
                              g.node(j));
        }
        catch (const DivisionByZeroInterval& e)
        {
            throw DivisionByZeroInterval(e.what(), j);
        }
        catch (const DomainError& e)
        {
            throw DomainError(e.what(), j);
        }
    }
    return Z;
}

IntervalMatrix eval_interval_jacobian(const FactorGraph& g, const IntervalVector& X)
{
    const IntervalVector V = eval_interval(g, X);
    const std::size_t n = g.num_inputs();
    std::vector<IntervalVector> D(g.size(), IntervalVector(n, Interval(0.0)));

    for (std::size_t j = 0; j < g.size(); ++j)
    {
        IntervalVector& d = D[j];
        std::visit(overloaded{[&](const InputNode&) { d[j] = Interval(1.0); }, [](const ConstantNode&) {},
                              [&](const BinaryNode& b)
                              {
                                  const IntervalVector& da = D[b.a];
                                  const IntervalVector& db = D[b.b];
                                  for (std::size_t k = 0; k < n; ++k)
                                  {
                                      switch (b.op)
                                      {
                                          case BinaryOp::Add: d[k] = da[k] + db[k]; break;
                                          case BinaryOp::Sub: d[k] = da[k] - db[k]; break;
                                          case BinaryOp::Mul: d[k] = da[k] * V[b.b] + V[b.a] * db[k]; break;
                                          case BinaryOp::Div: d[k] = (da[k] - V[j] * db[k]) / V[b.b]; break;
                                      }
                                  }
                              },
                              [&](const UnivariateNode& u)
                              {
                                  Interval slope;
                                  switch (u.fn)
                                  {
                                      case UnaryFn::Exp: slope = V[j]; break;
                                      case UnaryFn::Log: slope = Interval(1.0) / V[u.a]; break;
                                      case UnaryFn::PowInt:
                                          slope = iv_scale(iv_pow_int(V[u.a], u.exponent - 1), u.exponent);
                                          break;
                                  }
                                  for (std::size_t k = 0; k < n; ++k)
                                      d[k] = slope * D[u.a][k];
                              },
                              [&](const AffineNode& a)
                              {
                                  for (std::size_t k = 0; k < n; ++k)
                                      d[k] = iv_scale(D[a.a][k], a.scale);
                              }},
                   g.node(j));
    }

    IntervalMatrix J(g.num_outputs(), n);
    for (std::size_t i = 0; i < g.num_outputs(); ++i)
    {
        for (std::size_t k = 0; k < n; ++k)
            J(i, k) = D[g.outputs()[i]][k];
    }
    return J;
}

std::vector<std::string> pretty_print(const FactorGraph& g)
{
    std::vector<std::string> text(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        text[j] = std::visit(
            overloaded{[](const InputNode& in) { return in.name; },
                       [](const ConstantNode& c) { return format_number(c.value); },
                       [&](const BinaryNode& b)
                       { return "(" + text[b.a] + " " + op_symbol(b.op) + " " + text[b.b] + ")"; },
                       [&](const UnivariateNode& u)
                       {
                           switch (u.fn)
                           {
                               case UnaryFn::Exp: return "exp(" + text[u.a] + ")";
                               case UnaryFn::Log: return "log(" + text[u.a] + ")";
                               case UnaryFn::PowInt:
                                   return "(" + text[u.a] + ")^" +
                                          (u.exponent < 0 ? "(" + std::to_string(u.exponent) + ")"
                                                          : std::to_string(u.exponent));
                           }
                           return std::string();
                       },
                       [&](const AffineNode& a)
                       {
                           if (a.scale == 1.0)
                               return "(" + text[a.a] + " + " + format_number(a.offset) + ")";
                           if (a.offset == 0.0)
                               return "(" + format_number(a.scale) + "*" + text[a.a] + ")";
                           return "(" + format_number(a.scale) + "*" + text[a.a] + " + " +
                                  format_number(a.offset) + ")";
                       }},
            g.node(j));
    }
    std::vector<std::string> out;
    for (std::size_t o : g.outputs())
        out.push_back(text[o]);
    return out;
}

nlohmann::json graph_to_json(const FactorGraph& g)
{
    using nlohmann::json;
    json nodes = json::array();
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        json node = std::visit(
            overloaded{[](const InputNode& in) { return json{{"kind", "input"}, {"name", in.name}}; },
                       [](const ConstantNode& c) { return json{{"kind", "constant"}, {"value", c.value}}; },
                       [](const BinaryNode& b)
                       { return json{{"kind", "binary"}, {"op", op_symbol(b.op)}, {"a", b.a}, {"b", b.b}}; },
                       [](const UnivariateNode& u)
                       {
                           switch (u.fn)
                           {
                               case UnaryFn::Exp: return json{{"kind", "univariate"}, {"fn", "exp"}, {"a", u.a}};
                               case UnaryFn::Log: return json{{"kind", "univariate"}, {"fn", "log"}, {"a", u.a}};
                               case UnaryFn::PowInt:
                                   return json{
                                       {"kind", "univariate"}, {"fn", "pow"}, {"q", u.exponent}, {"a", u.a}};
                           }
                           return json{};
                       },
                       [](const AffineNode& a)
                       { return json{{"kind", "affine"}, {"p", a.scale}, {"q", a.offset}, {"a", a.a}}; }},
            g.node(j));
        node["id"] = j;
        nodes.push_back(std::move(node));
    }
    return json{{"n_inputs", g.num_inputs()}, {"nodes", nodes}, {"outputs", g.outputs()}};
}

} // namespace czreach
