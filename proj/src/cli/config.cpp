// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/cli/config.hpp"

#include <fstream>

#include "czreach/factorable.hpp"
#include "czreach/serialize.hpp"

namespace czreach::cli
{

using nlohmann::json;

namespace
{

const json& require(const json& j, const std::string& key)
{
    if (!j.contains(key))
        throw ConfigError("config: missing key '" + key + "'");
    return j.at(key);
}

template <class T>
T get_as(const json& j, const std::string& key)
{
    try
    {
        return j.get<T>();
    }
    catch (const json::exception& e)
    {
        throw ConfigError("config: key '" + key + "' has the wrong type (" + e.what() + ")");
    }
}

ConstrainedZonotope set_from(const json& j, const std::string& key)
{
    if (!j.is_object())
        throw ConfigError("config: '" + key + "' must be an object with G, c, A, b");
    try
    {
        return cz_from_json(j);
    }
    catch (const json::exception& e)
    {
        throw ConfigError("config: '" + key + "': " + e.what());
    }
    catch (const DimensionMismatch& e)
    {
        throw ConfigError("config: '" + key + "': " + e.what());
    }
}

std::string sigma_name(SigmaMode m) { return m == SigmaMode::LpTight ? "lp" : "interval"; }

SigmaMode sigma_from_name(const std::string& s)
{
    if (s == "interval")
        return SigmaMode::IntervalBound;
    if (s == "lp")
        return SigmaMode::LpTight;
    throw ConfigError("config: sigma_mode must be 'interval' or 'lp', got '" + s + "'");
}

} // namespace

std::string method_name(Method m)
{
    switch (m)
    {
        case Method::Alg1: return "alg1";
        case Method::Ia: return "ia";
        case Method::Czmv: return "czmv";
    }
    return "alg1";
}

Method method_from_name(const std::string& name)
{
    if (name == "alg1")
        return Method::Alg1;
    if (name == "ia")
        return Method::Ia;
    if (name == "czmv")
        return Method::Czmv;
    throw ConfigError("config: method must be one of alg1, ia, czmv, got '" + name + "'");
}

RunConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");
    RunConfig cfg;
    cfg.dynamics = get_as<std::vector<std::string>>(require(j, "dynamics"), "dynamics");
    cfg.initial_set = set_from(require(j, "initial_set"), "initial_set");
    if (j.contains("disturbance_set") && !j.at("disturbance_set").is_null())
        cfg.disturbance_set = set_from(j.at("disturbance_set"), "disturbance_set");
    cfg.horizon = get_as<int>(require(j, "horizon"), "horizon");
    if (cfg.horizon < 0)
        throw ConfigError("config: horizon must be non-negative");
    if (j.contains("method"))
        cfg.method = method_from_name(get_as<std::string>(j.at("method"), "method"));
    if (j.contains("reduction"))
    {
        const json& r = j.at("reduction");
        if (r.contains("max_gens"))
            cfg.reduction.max_gens = get_as<Eigen::Index>(r.at("max_gens"), "reduction.max_gens");
        if (r.contains("max_cons"))
            cfg.reduction.max_cons = get_as<Eigen::Index>(r.at("max_cons"), "reduction.max_cons");
        if (r.contains("enabled"))
            cfg.reduction.enabled = get_as<bool>(r.at("enabled"), "reduction.enabled");
    }
    if (j.contains("sigma_mode"))
        cfg.sigma_mode = sigma_from_name(get_as<std::string>(j.at("sigma_mode"), "sigma_mode"));
    if (j.contains("seed"))
        cfg.seed = get_as<std::uint64_t>(j.at("seed"), "seed");
    if (j.contains("output"))
    {
        const json& o = j.at("output");
        auto field = [&](const char* key, std::string& dst)
        {
            if (o.contains(key))
                dst = get_as<std::string>(o.at(key), std::string("output.") + key);
        };
        field("dir", cfg.output.dir);
        field("enclosures", cfg.output.enclosures);
        field("radii", cfg.output.radii);
        field("svg", cfg.output.svg);
        field("compare", cfg.output.compare);
        field("audit", cfg.output.audit);
    }

    const Eigen::Index n_x = cfg.initial_set.dim();
    if (static_cast<Eigen::Index>(cfg.dynamics.size()) != n_x)
        throw ConfigError("config: " + std::to_string(cfg.dynamics.size()) + " dynamics expressions for a " +
                          std::to_string(n_x) + "-dimensional initial set");
    if (cfg.reduction.max_gens < n_x)
        throw ConfigError("config: reduction.max_gens must be at least the state dimension");
    if (cfg.reduction.max_cons < 0)
        throw ConfigError("config: reduction.max_cons must be non-negative");
    return cfg;
}

json config_to_json(const RunConfig& cfg)
{
    json j;
    j["dynamics"] = cfg.dynamics;
    j["initial_set"] = to_json(cfg.initial_set);
    if (cfg.disturbance_set)
        j["disturbance_set"] = to_json(*cfg.disturbance_set);
    j["horizon"] = cfg.horizon;
    j["method"] = method_name(cfg.method);
    j["reduction"] = {{"max_gens", cfg.reduction.max_gens},
                      {"max_cons", cfg.reduction.max_cons},
                      {"enabled", cfg.reduction.enabled}};
    j["sigma_mode"] = sigma_name(cfg.sigma_mode);
    j["seed"] = cfg.seed;
    j["output"] = {{"dir", cfg.output.dir},         {"enclosures", cfg.output.enclosures},
                   {"radii", cfg.output.radii},     {"svg", cfg.output.svg},
                   {"compare", cfg.output.compare}, {"audit", cfg.output.audit}};
    return j;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path.string() + "'");
    json j;
    try
    {
        in >> j;
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError("config: '" + path.string() + "' is not valid JSON: " + e.what());
    }
    RunConfig cfg = config_from_json(j);
    cfg.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    make_problem(cfg);
    return cfg;
}

std::vector<std::string> variable_names(Eigen::Index n_x, Eigen::Index n_w)
{
    std::vector<std::string> names;
    for (Eigen::Index i = 1; i <= n_x; ++i)
        names.push_back("x" + std::to_string(i));
    for (Eigen::Index i = 1; i <= n_w; ++i)
        names.push_back("w" + std::to_string(i));
    return names;
}

ReachProblem make_problem(const RunConfig& cfg)
{
    ReachProblem p;
    p.n_x = cfg.initial_set.dim();
    p.n_w = cfg.disturbance_set ? cfg.disturbance_set->dim() : 0;
    p.X0 = cfg.initial_set;
    if (cfg.disturbance_set)
        p.W = *cfg.disturbance_set;
    p.horizon = cfg.horizon;
    try
    {
        p.dynamics = parse(cfg.dynamics, variable_names(p.n_x, p.n_w));
        p.validate();
    }
    catch (const Error& e)
    {
        throw ConfigError(std::string("config: dynamics: ") + e.what());
    }
    return p;
}

ReachOptions make_options(const RunConfig& cfg)
{
    ReachOptions o;
    o.max_gens = cfg.reduction.max_gens;
    o.max_cons = cfg.reduction.max_cons;
    o.reduce = cfg.reduction.enabled;
    o.sigma_mode = cfg.sigma_mode;
    return o;
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name)
{
    std::filesystem::path dir(cfg.output.dir);
    if (dir.is_relative())
        dir = cfg.base_dir / dir;
    const std::filesystem::path file(name);
    return file.is_absolute() ? file : dir / file;
}

} // namespace czreach::cli
