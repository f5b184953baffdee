// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_CLI_CONFIG_HPP_
#define CZREACH_CLI_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "czreach/errors.hpp"
#include "czreach/reach.hpp"
#include "czreach/sets.hpp"

namespace czreach::cli
{

/// Invalid or unreadable run configuration.
class ConfigError : public Error
{
    public:
        using Error::Error;
};

enum class Method
{
    Alg1,
    Ia,
    Czmv
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct ReductionConfig
{
    Eigen::Index max_gens = 8;
    Eigen::Index max_cons = 20;
    bool enabled = true;

    bool operator==(const ReductionConfig&) const = default;
};

/// File names of the artifacts; relative names are resolved against dir.
struct OutputConfig
{
    std::string dir = ".";
    std::string enclosures = "enclosures.json";
    std::string radii = "radii.csv";
    /// Empty disables the SVG projection.
    std::string svg;
    std::string compare = "compare.csv";
    std::string audit = "audit.json";

    bool operator==(const OutputConfig&) const = default;
};

/**
 * One experiment. The dynamics are expressions over x1..xn followed by
 * w1..wm, one per state component.
 *
 * JSON layout:
 *   {
 *     "dynamics": ["x2*(-0.7 + 0.1*x2) + 0.1*exp(x1)", "..."],
 *     "initial_set": {"G": [[...]], "c": [...], "A": [[...]], "b": [...]},
 *     "disturbance_set": {...},                      (optional)
 *     "horizon": 2,
 *     "method": "alg1" | "ia" | "czmv",
 *     "reduction": {"max_gens": 8, "max_cons": 20, "enabled": true},
 *     "sigma_mode": "interval" | "lp",
 *     "seed": 1,
 *     "output": {"dir": "out", "enclosures": "...", "radii": "...",
 *                "svg": "...", "compare": "...", "audit": "..."}
 *   }
 * Every key except dynamics, initial_set and horizon is optional.
 */
struct RunConfig
{
    std::vector<std::string> dynamics;
    ConstrainedZonotope initial_set;
    std::optional<ConstrainedZonotope> disturbance_set;
    int horizon = 0;
    Method method = Method::Alg1;
    ReductionConfig reduction;
    SigmaMode sigma_mode = SigmaMode::IntervalBound;
    std::uint64_t seed = 1;
    OutputConfig output;
    /// Directory relative output paths are resolved against.
    std::filesystem::path base_dir = ".";
};

/// Throws ConfigError with the offending key.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

/// Reads and validates a config file; relative outputs resolve against its directory.
RunConfig load_config(const std::filesystem::path& path);

/// Variable names x1..xn, w1..wm.
std::vector<std::string> variable_names(Eigen::Index n_x, Eigen::Index n_w);

/// Parses the dynamics and assembles the problem. Throws ConfigError.
ReachProblem make_problem(const RunConfig& config);
ReachOptions make_options(const RunConfig& config);

/// Absolute location of an output file.
std::filesystem::path output_path(const RunConfig& config, const std::string& name);

} // namespace czreach::cli

#endif
