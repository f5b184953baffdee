// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_FACTORABLE_HPP_
#define CZREACH_FACTORABLE_HPP_

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "czreach/interval.hpp"

namespace czreach
{

enum class BinaryOp
{
    Add,
    Sub,
    Mul,
    Div
};

enum class UnaryFn
{
    Exp,
    Log,
    PowInt
};

struct InputNode
{
    std::string name;
    bool operator==(const InputNode&) const = default;
};

struct ConstantNode
{
    double value = 0.0;
    bool operator==(const ConstantNode&) const = default;
};

struct BinaryNode
{
    BinaryOp op = BinaryOp::Add;
    std::size_t a = 0;
    std::size_t b = 0;
    bool operator==(const BinaryNode&) const = default;
};

struct UnivariateNode
{
    UnaryFn fn = UnaryFn::Exp;
    std::size_t a = 0;
    /// Exponent, used by PowInt only.
    int exponent = 0;
    bool operator==(const UnivariateNode&) const = default;
};

/// z = scale * z_a + offset
struct AffineNode
{
    double scale = 1.0;
    double offset = 0.0;
    std::size_t a = 0;
    bool operator==(const AffineNode&) const = default;
};

using FactorNode = std::variant<InputNode, ConstantNode, BinaryNode, UnivariateNode, AffineNode>;

/**
 * Factorable representation of h : R^n -> R^m.
 *
 * The first num_inputs() factors are the inputs; every later factor refers
 * only to strictly earlier ones, so the node list is already a topological
 * order. Each output is a factor index (one row of the selector E_h).
 * Indices are 0-based.
 */
class FactorGraph
{
    public:
        FactorGraph() = default;

        /// Validates ordering and references; throws std::invalid_argument.
        FactorGraph(std::vector<FactorNode> nodes, std::vector<std::size_t> outputs);

        std::size_t num_inputs() const { return num_inputs_; }
        std::size_t size() const { return nodes_.size(); }
        std::size_t num_outputs() const { return outputs_.size(); }

        const std::vector<FactorNode>& nodes() const { return nodes_; }
        const FactorNode& node(std::size_t j) const { return nodes_[j]; }
        const std::vector<std::size_t>& outputs() const { return outputs_; }
        std::vector<std::string> input_names() const;

        /// E_h: num_outputs x size() with a single one per row.
        Eigen::MatrixXd output_selector() const;

        bool operator==(const FactorGraph& other) const = default;

    private:
        std::vector<FactorNode> nodes_;
        std::vector<std::size_t> outputs_;
        std::size_t num_inputs_ = 0;
};

struct ParseOptions
{
    /// Merge structurally identical subexpressions.
    bool cse = true;
};

/**
 * Parses infix expressions over the given variable names into one shared
 * factor graph, one output per expression.
 *
 * Grammar: + - * / with the usual precedence, unary minus binding looser
 * than ^, right-associative ^ with an integer constant exponent, exp(),
 * log(), numeric literals and parentheses. Constant subexpressions are
 * folded; affine operations with a constant collapse into a single affine
 * factor. Negative exponents are rewritten as 1 / z^q.
 *
 * Throws SyntaxError, UnknownIdentifier, NonIntegerExponent, or DomainError
 * for constant subexpressions that are undefined.
 */
FactorGraph parse(const std::vector<std::string>& expressions, const std::vector<std::string>& var_names,
                  const ParseOptions& options = {});
FactorGraph parse(const std::string& expression, const std::vector<std::string>& var_names,
                  const ParseOptions& options = {});

/// Values of every factor at x. Throws DomainError with the factor index.
std::vector<double> eval_factors(const FactorGraph& g, const std::vector<double>& x);
/// h(x) = E_h z(x).
Eigen::VectorXd eval_real(const FactorGraph& g, const Eigen::VectorXd& x);

/// Natural interval extension; returns enclosures of all factors.
IntervalVector eval_interval(const FactorGraph& g, const IntervalVector& X);

/// Interval Jacobian of the outputs over X by forward-mode differentiation.
IntervalMatrix eval_interval_jacobian(const FactorGraph& g, const IntervalVector& X);

/// One infix string per output that parses back to the same graph.
std::vector<std::string> pretty_print(const FactorGraph& g);

nlohmann::json graph_to_json(const FactorGraph& g);

} // namespace czreach

#endif
