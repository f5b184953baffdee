// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "czreach/errors.hpp"
#include "czreach/serialize.hpp"

namespace czreach::cli
{

using nlohmann::json;

namespace
{

constexpr double svg_width = 640.0;
constexpr double svg_height = 480.0;
constexpr double svg_margin = 40.0;

const char* level_name(LogLevel level)
{
    switch (level)
    {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "warn";
}

json finite_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

} // namespace

LogLevel log_level()
{
    const char* env = std::getenv("CZREACH_LOG_LEVEL");
    if (env == nullptr)
        return LogLevel::Warn;
    const std::string s(env);
    if (s == "error")
        return LogLevel::Error;
    if (s == "info")
        return LogLevel::Info;
    if (s == "debug")
        return LogLevel::Debug;
    return LogLevel::Warn;
}

void log(LogLevel level, const std::string& message)
{
    if (static_cast<int>(level) <= static_cast<int>(log_level()))
        std::cerr << "czreach [" << level_name(level) << "] " << message << "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out)
            throw Error("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string radii_csv(const ReachResult& result)
{
    std::ostringstream os;
    os << "k,rad1,n_g_pre,n_c_pre,n_g_post,n_c_post,ms\n";
    if (result.enclosures.empty())
        return os.str();
    const ConstrainedZonotope& X0 = result.enclosures.front();
    os << 0 << "," << format_double(result.radii.front()) << "," << X0.num_gens() << "," << X0.num_cons() << ","
       << X0.num_gens() << "," << X0.num_cons() << ",0\n";
    for (std::size_t i = 0; i < result.stats.size(); ++i)
    {
        const StepStats& s = result.stats[i];
        os << s.step << "," << format_double(result.radii[i + 1]) << "," << s.gens_pre << "," << s.cons_pre << ","
           << s.gens_post << "," << s.cons_post << "," << format_double(s.milliseconds) << "\n";
    }
    return os.str();
}

std::string compare_csv(const Comparison& comparison)
{
    std::ostringstream os;
    os << "k,alg1,ia,czmv\n";
    const std::size_t rows = std::max({comparison.alg1.size(), comparison.ia.size(), comparison.czmv.size()});
    auto at = [](const std::vector<double>& v, std::size_t k)
    { return k < v.size() ? format_double(v[k]) : std::string("nan"); };
    for (std::size_t k = 0; k < rows; ++k)
        os << k << "," << at(comparison.alg1, k) << "," << at(comparison.ia, k) << "," << at(comparison.czmv, k)
           << "\n";
    return os.str();
}

json enclosures_json(const ReachResult& result, Method method)
{
    json steps = json::array();
    for (std::size_t k = 0; k < result.enclosures.size(); ++k)
    {
        json s;
        s["k"] = k;
        s["set"] = to_json(result.enclosures[k]);
        s["rad1"] = finite_or_null(result.radii[k]);
        if (k > 0)
        {
            const StepStats& st = result.stats[k - 1];
            s["n_g_pre"] = st.gens_pre;
            s["n_c_pre"] = st.cons_pre;
            s["halfspaces"] = st.halfspaces;
            s["equalities"] = st.equalities;
            s["ms"] = st.milliseconds;
        }
        steps.push_back(std::move(s));
    }
    json j;
    j["method"] = method_name(method);
    j["complete"] = result.complete();
    j["error"] = result.error;
    j["failed_step"] = result.failed_step ? json(*result.failed_step) : json(nullptr);
    j["steps"] = std::move(steps);
    return j;
}

json audit_json(const AuditReport& report)
{
    json steps = json::array();
    for (const StepAudit& s : report.steps)
        steps.push_back({{"k", s.step},
                         {"checked", s.checked},
                         {"violations", s.violations},
                         {"max_residual", s.max_residual},
                         {"mean_residual", s.mean_residual}});
    return {{"samples", report.samples},
            {"seed", report.seed},
            {"tolerance", report.tolerance},
            {"violations", report.violations()},
            {"steps", std::move(steps)}};
}

std::vector<Eigen::Vector2d> projection_polygon(const ConstrainedZonotope& Z, int directions)
{
    if (directions < 3)
        throw DimensionMismatch("projection_polygon: need at least 3 directions");
    const Eigen::Index n = Z.dim();
    std::vector<Eigen::Vector2d> poly;
    for (int i = 0; i < directions; ++i)
    {
        const double theta = 2.0 * std::numbers::pi * i / directions;
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
        d(0) = std::cos(theta);
        if (n > 1)
            d(1) = std::sin(theta);
        const Eigen::VectorXd x = support_point(Z, d);
        const Eigen::Vector2d p(x(0), n > 1 ? x(1) : 0.0);
        if (poly.empty() || (p - poly.back()).norm() > 1e-12 * (1.0 + p.norm()))
            poly.push_back(p);
    }
    if (poly.size() > 1 && (poly.front() - poly.back()).norm() <= 1e-12 * (1.0 + poly.front().norm()))
        poly.pop_back();
    return poly;
}

std::string enclosures_svg(const std::vector<ConstrainedZonotope>& enclosures, int directions)
{
    std::vector<std::vector<Eigen::Vector2d>> polys;
    Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector2d hi = -lo;
    for (const ConstrainedZonotope& Z : enclosures)
    {
        polys.push_back(projection_polygon(Z, directions));
        for (const Eigen::Vector2d& p : polys.back())
        {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
    }
    if (!lo.allFinite() || !hi.allFinite())
        throw NumericalFailure("enclosures_svg: unbounded enclosure");
    const Eigen::Vector2d span = (hi - lo).cwiseMax(1e-12);
    const double scale = std::min((svg_width - 2 * svg_margin) / span(0), (svg_height - 2 * svg_margin) / span(1));
    auto screen = [&](const Eigen::Vector2d& p)
    {
        return Eigen::Vector2d(svg_margin + (p(0) - lo(0)) * scale, svg_height - svg_margin - (p(1) - lo(1)) * scale);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_width << "\" height=\"" << svg_height
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t k = 0; k < polys.size(); ++k)
    {
        const double hue = polys.size() > 1 ? 240.0 * static_cast<double>(k) / static_cast<double>(polys.size() - 1) : 0;
        os << "<polygon data-k=\"" << k << "\" fill=\"hsl(" << hue << ",70%,50%)\" fill-opacity=\"0.15\" stroke=\"hsl("
           << hue << ",70%,40%)\" stroke-width=\"1\" points=\"";
        for (const Eigen::Vector2d& p : polys[k])
        {
            const Eigen::Vector2d s = screen(p);
            os << s(0) << "," << s(1) << " ";
        }
        os << "\"/>\n";
    }
    os << "<text x=\"" << svg_width / 2 << "\" y=\"" << svg_height - 10 << "\" font-size=\"12\">x1</text>\n";
    os << "<text x=\"10\" y=\"" << svg_height / 2 << "\" font-size=\"12\">x2</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace czreach::cli
