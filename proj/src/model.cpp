#include "rumorsis/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rumorsis {

namespace {

constexpr double kCanonicalDelta = 0.5;
constexpr double kCanonicalK = 1.0;
constexpr double kRecompositionTol = 1e-9;

void require_positive(double v, const char* name)
{
    if (!std::isfinite(v) || v <= 0.0)
        throw ParamError(std::string(name) + " must be finite and > 0, got " + std::to_string(v));
}

void require_unit(double v, const char* name)
{
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw ParamError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
}

// lambda*t/(1+lambda*t), the steady-state believing fraction of a group exposed to t.
double saturation(double lambda, double t) { return lambda * t / (1.0 + lambda * t); }

double clamp_small(double v, const SolverConfig& cfg) { return v <= cfg.clamp_eps ? 0.0 : v; }

} // namespace

ModelParams::ModelParams(double nu, double k, double delta, double x)
    : nu_(nu), k_(k), delta_(delta), lambda_(nu * k / delta), x_(x)
{
    require_positive(nu, "nu");
    require_positive(k, "k");
    require_positive(delta, "delta");
    require_unit(x, "x");
    require_positive(lambda_, "lambda");
}

ModelParams ModelParams::from_lambda(double lambda, double x)
{
    require_positive(lambda, "lambda");
    return ModelParams(lambda * kCanonicalDelta / kCanonicalK, kCanonicalK, kCanonicalDelta, x);
}

ModelParams ModelParams::from_rates(double nu, double k, double delta, double x)
{
    return ModelParams(nu, k, delta, x);
}

Allocation Allocation::uniform(double alpha)
{
    require_unit(alpha, "alpha");
    return Allocation(AllocationMode::Uniform, alpha, alpha);
}

Allocation Allocation::targeted(double alpha0, double alpha1)
{
    require_unit(alpha0, "alpha0");
    require_unit(alpha1, "alpha1");
    return Allocation(AllocationMode::Targeted, alpha0, alpha1);
}

double Allocation::inspection_mass(double x) const noexcept
{
    if (mode_ == AllocationMode::Uniform)
        return alpha0_;
    return x * alpha0_ + (1.0 - x) * alpha1_;
}

void SolverConfig::validate() const
{
    if (!(tol > 0.0))
        throw ParamError("solver tol must be > 0");
    if (max_iter < 1)
        throw ParamError("solver max_iter must be >= 1");
    if (!(clamp_eps >= 0.0))
        throw ParamError("solver clamp_eps must be >= 0");
}

double eradication_threshold(const ModelParams& p)
{
    const double reach = p.lambda() * (1.0 - p.x());
    if (reach <= 1.0)
        return 0.0;
    return 1.0 - 1.0 / reach;
}

double rumor_steady_state(const ModelParams& p, const Allocation& a)
{
    const double v = (1.0 - a.alpha1()) * (1.0 - p.x()) - 1.0 / p.lambda();
    return v > 0.0 ? v : 0.0;
}

bool rumor_eradicated(const ModelParams& p, const Allocation& a, const SolverConfig& cfg)
{
    if (p.lambda() * (1.0 - p.x()) <= 1.0)
        return true;
    if (a.alpha1() >= eradication_threshold(p) - cfg.tol)
        return true;
    return rumor_steady_state(p, a) == 0.0;
}

double truth_map(double theta0, double theta1, const ModelParams& p, const Allocation& a)
{
    const double lambda = p.lambda();
    const double x = p.x();
    const double mass = a.inspection_mass(x);
    return mass * saturation(lambda, theta0 + theta1) + x * (1.0 - a.alpha0()) * saturation(lambda, theta0);
}

double truth_fixed_point(double theta1, const ModelParams& p, const Allocation& a, const SolverConfig& cfg)
{
    cfg.validate();
    if (!(theta1 >= 0.0 && theta1 <= 1.0))
        throw ParamError("theta1 must lie in [0, 1]");

    const double lambda = p.lambda();
    const double x = p.x();

    // No rumor: H collapses to (x + (1-x)alpha1) * saturation, closed-form root.
    if (theta1 <= 0.0)
        return clamp_small(std::max(0.0, x + (1.0 - x) * a.alpha1() - 1.0 / lambda), cfg);

    // No inspection: the rumor cannot seed the truth; plain SIS among type 0.
    if (a.inspection_mass(x) <= 0.0)
        return clamp_small(std::max(0.0, x * (1.0 - a.alpha0()) - 1.0 / lambda), cfg);

    // G = theta0 - H(theta0) is convex with G(0) < 0 < G(1): exactly one root.
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (hi - lo <= cfg.tol)
            return clamp_small(0.5 * (lo + hi), cfg);
        const double mid = 0.5 * (lo + hi);
        if (mid - truth_map(mid, theta1, p, a) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    if (hi - lo <= cfg.tol)
        return clamp_small(0.5 * (lo + hi), cfg);
    throw SolverError("truth fixed point did not converge within max_iter", lo, hi);
}

double truth_steady_state(const ModelParams& p, const Allocation& a, const SolverConfig& cfg)
{
    const double theta1 = rumor_eradicated(p, a, cfg) ? 0.0 : rumor_steady_state(p, a);
    return truth_fixed_point(theta1, p, a, cfg);
}

SteadyState full_steady_state(const ModelParams& p, const Allocation& a, const SolverConfig& cfg)
{
    SteadyState ss;
    ss.rumor_eradicated = rumor_eradicated(p, a, cfg);
    ss.theta1 = ss.rumor_eradicated ? 0.0 : clamp_small(rumor_steady_state(p, a), cfg);
    ss.theta0 = truth_fixed_point(ss.theta1, p, a, cfg);
    ss.theta = ss.theta0 + ss.theta1;

    const double lambda = p.lambda();
    ss.rho_00_a = saturation(lambda, ss.theta);
    ss.rho_10_a = ss.rho_00_a;
    ss.rho_00_na = saturation(lambda, ss.theta0);
    ss.rho_11_na = saturation(lambda, ss.theta1);

    const Prevalences back = recompose(ss, p, a);
    const double err = std::max(std::abs(back.theta0 - ss.theta0), std::abs(back.theta1 - ss.theta1));
    if (err > kRecompositionTol)
        throw SolverError("steady state does not recompose (residual " + std::to_string(err) + ")",
                          ss.theta0, ss.theta0);
    return ss;
}

Prevalences recompose(const SteadyState& ss, const ModelParams& p, const Allocation& a)
{
    const double x = p.x();
    const double a0 = a.alpha0();
    const double a1 = a.alpha1();
    return {
        x * (a0 * ss.rho_00_a + (1.0 - a0) * ss.rho_00_na) + (1.0 - x) * a1 * ss.rho_10_a,
        (1.0 - x) * (1.0 - a1) * ss.rho_11_na,
    };
}

double total_prevalence_map(double theta, const SteadyState& ss, const ModelParams& p, const Allocation& a)
{
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ParamError("theta must lie in [0, 1]");
    const double lambda = p.lambda();
    const double x = p.x();
    return a.inspection_mass(x) * saturation(lambda, theta)
         + x * (1.0 - a.alpha0()) * saturation(lambda, ss.theta0) + ss.theta1;
}

double total_prevalence_map(double theta, const ModelParams& p, const Allocation& a, const SolverConfig& cfg)
{
    return total_prevalence_map(theta, full_steady_state(p, a, cfg), p, a);
}

PositivityReadings truth_positivity_readings(const ModelParams& p, double alpha)
{
    const double x = p.x();
    const double gap = 1.0 / p.lambda() - x;
    const double inf = std::numeric_limits<double>::infinity();

    PositivityReadings r{};
    if (x < 1.0) {
        r.bound_scaled = gap / (1.0 - x);
        r.bound_reciprocal = gap != 0.0 ? 1.0 / ((1.0 - x) * gap) : inf;
    } else {
        r.bound_scaled = gap < 0.0 ? -inf : inf;
        r.bound_reciprocal = inf;
    }
    r.holds_scaled = alpha > r.bound_scaled;
    r.holds_reciprocal = alpha > r.bound_reciprocal;
    r.readings_agree = r.holds_scaled == r.holds_reciprocal;
    return r;
}

} // namespace rumorsis
