// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/serialize.hpp"

#include "czreach/errors.hpp"

namespace czreach
{

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& M)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
    {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols)
{
    if (!j.is_array())
        throw DimensionMismatch("matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows > 0)
    {
        if (!j[0].is_array())
            throw DimensionMismatch("matrix rows must be arrays");
        cols = static_cast<Eigen::Index>(j[0].size());
    }
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw DimensionMismatch("matrix has ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            M(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return M;
}

Eigen::VectorXd vector_from_json(const json& j)
{
    if (!j.is_array())
        throw DimensionMismatch("vector must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

json to_json(const ConstrainedZonotope& Z)
{
    return json{{"G", matrix_to_json(Z.G())},
                {"c", vector_to_json(Z.c())},
                {"A", matrix_to_json(Z.A())},
                {"b", vector_to_json(Z.b())},
                {"n_g", Z.num_gens()}};
}

json to_json(const HPolytope& P)
{
    return json{{"H", matrix_to_json(P.H())},
                {"k", vector_to_json(P.k())},
                {"Aeq", matrix_to_json(P.Aeq())},
                {"beq", vector_to_json(P.beq())},
                {"n", P.dim()}};
}

ConstrainedZonotope cz_from_json(const json& j)
{
    const Eigen::VectorXd c = vector_from_json(j.at("c"));
    Eigen::Index ng = j.contains("n_g") ? j.at("n_g").get<Eigen::Index>() : 0;
    const json empty = json::array();
    const json& jG = j.at("G");
    const json& jA = j.contains("A") ? j.at("A") : empty;
    if (!jG.empty())
        ng = static_cast<Eigen::Index>(jG[0].size());
    else if (!jA.empty())
        ng = static_cast<Eigen::Index>(jA[0].size());
    Eigen::MatrixXd G = matrix_from_json(jG, ng);
    Eigen::MatrixXd A = matrix_from_json(jA, ng);
    Eigen::VectorXd b = j.contains("b") ? vector_from_json(j.at("b")) : Eigen::VectorXd(0);
    return {std::move(G), c, std::move(A), std::move(b)};
}

HPolytope hpoly_from_json(const json& j)
{
    Eigen::Index n = j.contains("n") ? j.at("n").get<Eigen::Index>() : 0;
    const json empty = json::array();
    const json& jH = j.contains("H") ? j.at("H") : empty;
    const json& jE = j.contains("Aeq") ? j.at("Aeq") : empty;
    if (!jH.empty())
        n = static_cast<Eigen::Index>(jH[0].size());
    else if (!jE.empty())
        n = static_cast<Eigen::Index>(jE[0].size());
    Eigen::MatrixXd H = matrix_from_json(jH, n);
    Eigen::VectorXd k = j.contains("k") ? vector_from_json(j.at("k")) : Eigen::VectorXd(0);
    Eigen::MatrixXd Aeq = matrix_from_json(jE, n);
    Eigen::VectorXd beq = j.contains("beq") ? vector_from_json(j.at("beq")) : Eigen::VectorXd(0);
    return {std::move(H), std::move(k), std::move(Aeq), std::move(beq)};
}

} // namespace czreach
