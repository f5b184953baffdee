// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_SERIALIZE_HPP_
#define CZREACH_SERIALIZE_HPP_

#include <json.hpp>

#include "czreach/sets.hpp"

namespace czreach
{

// Sets as JSON objects with row-major nested arrays:
//   constrained zonotope  {"G": [[...]], "c": [...], "A": [[...]], "b": [...]}
//   H-rep polytope        {"H": [[...]], "k": [...], "Aeq": [[...]], "beq": [...]}
// An empty block is written as []. Column counts of empty blocks are taken
// from the other block, or from the optional "n_g" / "n" keys.

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);

/// Throws DimensionMismatch on ragged rows. cols is used when there are no rows.
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index cols = 0);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConstrainedZonotope& Z);
nlohmann::json to_json(const HPolytope& P);

ConstrainedZonotope cz_from_json(const nlohmann::json& j);
HPolytope hpoly_from_json(const nlohmann::json& j);

} // namespace czreach

#endif
