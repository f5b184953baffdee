// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_CLI_OUTPUT_HPP_
#define CZREACH_CLI_OUTPUT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "czreach/cli/commands.hpp"
#include "czreach/reach.hpp"

namespace czreach::cli
{

enum class LogLevel
{
    Error = 0,
    Warn = 1,
    Info = 2,
    Debug = 3
};

/// Level from CZREACH_LOG_LEVEL (error, warn, info, debug); warn when unset.
LogLevel log_level();
void log(LogLevel level, const std::string& message);

/// Writes to a temporary sibling and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// Header k,rad1,n_g_pre,n_c_pre,n_g_post,n_c_post,ms; row 0 describes X0.
std::string radii_csv(const ReachResult& result);

/// Header k,alg1,ia,czmv.
std::string compare_csv(const Comparison& comparison);

nlohmann::json enclosures_json(const ReachResult& result, Method method);
nlohmann::json audit_json(const AuditReport& report);

/// Support points of the projection of Z onto coordinates (0, 1) along equally spaced directions.
std::vector<Eigen::Vector2d> projection_polygon(const ConstrainedZonotope& Z, int directions = 360);

/// One polygon per enclosure on a shared viewport.
std::string enclosures_svg(const std::vector<ConstrainedZonotope>& enclosures, int directions = 360);

/// Decimal text that reads back to the same double.
std::string format_double(double v);

} // namespace czreach::cli

#endif
