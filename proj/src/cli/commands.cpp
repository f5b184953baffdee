// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/cli/commands.hpp"

#include <cmath>
#include <iostream>
#include <limits>

#include "czreach/cli/output.hpp"
#include "czreach/errors.hpp"
#include "czreach/linprog.hpp"

namespace czreach::cli
{

namespace
{

constexpr double equality_band = 1e-9;
constexpr std::size_t rejection_budget = 10'000'000;
constexpr double rank_tol = 1e-10;

bool in_band(const ConstrainedZonotope& Z, const Eigen::VectorXd& xi)
{
    if (Z.num_cons() == 0)
        return true;
    return ((Z.A() * xi - Z.b()).array().abs() <= equality_band).all();
}

Eigen::VectorXd uniform_box(Eigen::Index n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = u(rng);
    return v;
}

// Samples xi = xi_p + N t with N an orthonormal null-space basis of A.
class NullSpaceSampler
{
    public:
        explicit NullSpaceSampler(const ConstrainedZonotope& Z)
        {
            const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z.A(), Eigen::ComputeFullV);
            const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
            Eigen::Index rank = 0;
            for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()(i) > rank_tol * std::max(1.0, smax))
                    ++rank;
            const Eigen::Index ng = Z.num_gens();
            N_ = svd.matrixV().rightCols(ng - rank);

            // anchor at a feasible factor vector so that N t spans the slice
            lp::LinearProgram prog = lp::LinearProgram::unit_box(Eigen::VectorXd::Zero(ng), Z.A(), Z.b());
            const lp::LpOutcome base = lp::solve(prog);
            if (!base.optimal())
                throw EmptySet("sample_set: the set is empty");
            xi_p_ = base.point;

            t_lo_.resize(N_.cols());
            t_hi_.resize(N_.cols());
            for (Eigen::Index i = 0; i < N_.cols(); ++i)
            {
                // t_i = N_i' (xi - xi_p) because N is orthonormal
                prog.objective = N_.col(i);
                const lp::LpOutcome lo = lp::solve(prog);
                prog.objective = -N_.col(i);
                const lp::LpOutcome hi = lp::solve(prog);
                if (!lo.optimal() || !hi.optimal())
                    throw NumericalFailure("sample_set: null-space bounds LP failed");
                const double offset = N_.col(i).dot(xi_p_);
                t_lo_(i) = lo.value - offset;
                t_hi_(i) = -hi.value - offset;
            }
        }

        std::optional<Eigen::VectorXd> draw(std::mt19937_64& rng) const
        {
            Eigen::VectorXd t(N_.cols());
            for (Eigen::Index i = 0; i < N_.cols(); ++i)
            {
                std::uniform_real_distribution<double> u(t_lo_(i), std::max(t_lo_(i), t_hi_(i)));
                t(i) = u(rng);
            }
            const Eigen::VectorXd xi = xi_p_ + N_ * t;
            if ((xi.array().abs() > 1.0 + equality_band).any())
                return std::nullopt;
            return Eigen::VectorXd(xi.cwiseMax(-1.0).cwiseMin(1.0));
        }

    private:
        Eigen::MatrixXd N_;
        Eigen::VectorXd xi_p_;
        Eigen::VectorXd t_lo_;
        Eigen::VectorXd t_hi_;
};

std::vector<double> nan_padded(const std::vector<double>& radii, int horizon)
{
    std::vector<double> out = radii;
    out.resize(static_cast<std::size_t>(horizon) + 1, std::numeric_limits<double>::quiet_NaN());
    return out;
}

std::string stop_reason(const ReachResult& r)
{
    return r.complete() ? "complete" : r.error;
}

void write_reach_artifacts(const RunConfig& cfg, const ReachResult& result)
{
    write_atomic(output_path(cfg, cfg.output.enclosures), enclosures_json(result, cfg.method).dump(2) + "\n");
    write_atomic(output_path(cfg, cfg.output.radii), radii_csv(result));
    if (!cfg.output.svg.empty())
        write_atomic(output_path(cfg, cfg.output.svg), enclosures_svg(result.enclosures));
}

template <class Body>
int guarded(const char* command, Body body)
{
    try
    {
        return body();
    }
    catch (const ConfigError& e)
    {
        log(LogLevel::Error, std::string(command) + ": " + e.what());
        return exit_config;
    }
    catch (const std::exception& e)
    {
        log(LogLevel::Error, std::string(command) + ": " + e.what());
        return exit_numerical;
    }
}

} // namespace

ReachResult run_method(const ReachProblem& problem, const ReachOptions& options, Method method)
{
    switch (method)
    {
        case Method::Alg1: return reach(problem, options);
        case Method::Ia: return baseline_ia_sets(problem, options);
        case Method::Czmv: return baseline_czmv(problem, options);
    }
    throw ConfigError("run_method: unknown method");
}

std::vector<Eigen::VectorXd> sample_set(const ConstrainedZonotope& Z, std::size_t count, std::mt19937_64& rng)
{
    std::vector<Eigen::VectorXd> points;
    points.reserve(count);
    const Eigen::Index ng = Z.num_gens();
    std::size_t draws = 0;
    while (points.size() < count && draws < rejection_budget)
    {
        ++draws;
        const Eigen::VectorXd xi = uniform_box(ng, rng);
        if (in_band(Z, xi))
            points.push_back(Z.c() + Z.G() * xi);
    }
    if (points.size() == count)
        return points;

    log(LogLevel::Info, "sample_set: rejection budget exhausted, switching to null-space sampling");
    const NullSpaceSampler sampler(Z);
    draws = 0;
    while (points.size() < count && draws < rejection_budget)
    {
        ++draws;
        if (const auto xi = sampler.draw(rng))
            points.push_back(Z.c() + Z.G() * *xi);
    }
    if (points.size() < count)
        throw NumericalFailure("sample_set: null-space sampling starved after " + std::to_string(rejection_budget) +
                               " draws; sample the interval hull and filter by membership instead");
    return points;
}

std::size_t AuditReport::violations() const
{
    std::size_t v = 0;
    for (const StepAudit& s : steps)
        v += s.violations;
    return v;
}

AuditReport audit(const ReachProblem& problem, const std::vector<ConstrainedZonotope>& enclosures,
                  std::size_t samples, std::uint64_t seed, double tolerance)
{
    problem.validate();
    if (enclosures.empty())
        throw DimensionMismatch("audit: no enclosures");
    std::mt19937_64 rng(seed);
    AuditReport report;
    report.samples = samples;
    report.seed = seed;
    report.tolerance = tolerance;

    lp::LpSettings lps;
    lps.feas_tol = tolerance;
    auto residual = [&](const ConstrainedZonotope& Z, const Eigen::VectorXd& x)
    {
        Eigen::MatrixXd M(Z.dim() + Z.num_cons(), Z.num_gens());
        M << Z.G(), Z.A();
        Eigen::VectorXd rhs(Z.dim() + Z.num_cons());
        rhs << x - Z.c(), Z.b();
        const Eigen::VectorXd one = Eigen::VectorXd::Ones(Z.num_gens());
        return lp::min_residual(M, rhs, -one, one, lps);
    };

    std::vector<Eigen::VectorXd> states = sample_set(problem.X0, samples, rng);
    for (std::size_t k = 0; k < enclosures.size(); ++k)
    {
        if (k > 0)
        {
            std::vector<Eigen::VectorXd> w;
            if (problem.n_w > 0)
                w = sample_set(problem.W, samples, rng);
            for (std::size_t i = 0; i < states.size(); ++i)
            {
                Eigen::VectorXd in(problem.n_x + problem.n_w);
                in.head(problem.n_x) = states[i];
                if (problem.n_w > 0)
                    in.tail(problem.n_w) = w[i];
                states[i] = eval_real(problem.dynamics, in);
            }
        }
        StepAudit s;
        s.step = static_cast<int>(k);
        double total = 0.0;
        for (const Eigen::VectorXd& x : states)
        {
            const double r = residual(enclosures[k], x);
            ++s.checked;
            if (r > tolerance)
                ++s.violations;
            s.max_residual = std::max(s.max_residual, r);
            total += r;
        }
        s.mean_residual = s.checked > 0 ? total / static_cast<double>(s.checked) : 0.0;
        report.steps.push_back(s);
    }
    return report;
}

Comparison compare_methods(const ReachProblem& problem, const ReachOptions& options)
{
    Comparison c;
    auto radii_of = [&](Method m)
    {
        const ReachResult r = run_method(problem, options, m);
        if (!r.complete())
            log(LogLevel::Warn, "compare: " + method_name(m) + " stopped at " + stop_reason(r));
        return nan_padded(r.radii, problem.horizon);
    };
    c.alg1 = radii_of(Method::Alg1);
    c.ia = radii_of(Method::Ia);
    c.czmv = radii_of(Method::Czmv);
    return c;
}

int cmd_reach(const std::filesystem::path& config_path)
{
    return guarded("reach",
                   [&]
                   {
                       const RunConfig cfg = load_config(config_path);
                       const ReachResult result = run_method(make_problem(cfg), make_options(cfg), cfg.method);
                       write_reach_artifacts(cfg, result);
                       for (std::size_t k = 0; k < result.radii.size(); ++k)
                           std::cout << k << " " << format_double(result.radii[k]) << "\n";
                       if (!result.complete())
                       {
                           log(LogLevel::Error, "reach: " + result.error);
                           return exit_numerical;
                       }
                       return exit_ok;
                   });
}

int cmd_compare(const std::filesystem::path& config_path)
{
    return guarded("compare",
                   [&]
                   {
                       const RunConfig cfg = load_config(config_path);
                       const Comparison c = compare_methods(make_problem(cfg), make_options(cfg));
                       const std::string csv = compare_csv(c);
                       write_atomic(output_path(cfg, cfg.output.compare), csv);
                       std::cout << csv;
                       return std::isnan(c.alg1.back()) ? exit_numerical : exit_ok;
                   });
}

int cmd_audit(const std::filesystem::path& config_path, std::size_t samples, std::optional<std::uint64_t> seed)
{
    return guarded("audit",
                   [&]
                   {
                       const RunConfig cfg = load_config(config_path);
                       const ReachProblem problem = make_problem(cfg);
                       const ReachResult result = run_method(problem, make_options(cfg), cfg.method);
                       const AuditReport report = audit(problem, result.enclosures, samples, seed.value_or(cfg.seed));
                       write_atomic(output_path(cfg, cfg.output.audit), audit_json(report).dump(2) + "\n");
                       for (const StepAudit& s : report.steps)
                           std::cout << "step " << s.step << ": " << s.violations << "/" << s.checked
                                     << " violations, max residual " << format_double(s.max_residual) << "\n";
                       if (!result.complete())
                       {
                           log(LogLevel::Error, "audit: " + result.error);
                           return exit_numerical;
                       }
                       return report.violations() > 0 ? exit_violations : exit_ok;
                   });
}

} // namespace czreach::cli
