// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_CLI_COMMANDS_HPP_
#define CZREACH_CLI_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "czreach/cli/config.hpp"
#include "czreach/reach.hpp"

namespace czreach::cli
{

// process exit codes
constexpr int exit_ok = 0;
constexpr int exit_violations = 1;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

/// Enclosures of one method as constrained zonotopes, with per-step statistics.
ReachResult run_method(const ReachProblem& problem, const ReachOptions& options, Method method);

/**
 * Draws points of Z.
 *
 * Factors are drawn uniformly from the unit box and kept when
 * |A xi - b| <= 1e-9 row-wise; after 10^7 rejected draws the sampler
 * switches to xi = xi_p + N t, with N a null-space basis of A and t uniform
 * over the bounding box of the feasible t, rejecting t outside the unit
 * box. Throws NumericalFailure when that still starves.
 */
std::vector<Eigen::VectorXd> sample_set(const ConstrainedZonotope& Z, std::size_t count, std::mt19937_64& rng);

struct StepAudit
{
    int step = 0;
    std::size_t checked = 0;
    std::size_t violations = 0;
    /// L1 residual of the membership LP (0 for members).
    double max_residual = 0.0;
    double mean_residual = 0.0;
};

struct AuditReport
{
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double tolerance = 1e-6;
    std::vector<StepAudit> steps;

    std::size_t violations() const;
};

/**
 * Propagates sampled initial states (and per-step sampled disturbances)
 * through the dynamics and checks membership of every image in the
 * corresponding enclosure.
 */
AuditReport audit(const ReachProblem& problem, const std::vector<ConstrainedZonotope>& enclosures,
                  std::size_t samples, std::uint64_t seed, double tolerance = 1e-6);

/// Per-step 1-radii of alg1, ia and czmv; NaN from the step a method fails on.
struct Comparison
{
    std::vector<double> alg1;
    std::vector<double> ia;
    std::vector<double> czmv;
};

Comparison compare_methods(const ReachProblem& problem, const ReachOptions& options);

// command entry points; they print diagnostics to stderr and return an exit code

int cmd_reach(const std::filesystem::path& config_path);
int cmd_compare(const std::filesystem::path& config_path);
int cmd_audit(const std::filesystem::path& config_path, std::size_t samples, std::optional<std::uint64_t> seed);

} // namespace czreach::cli

#endif
