#include "rumorsis/kernels.hpp"

#include "rumorsis/parallel.hpp"

#include <exception>

namespace rumorsis::kernels {

namespace {

IntegrationOutcome integrate_one(const DynState& s0, const ModelParams& p, const Allocation& a,
                                 const IntegratorConfig& cfg)
{
    IntegrationOutcome out;
    try {
        out.trajectory = integrate(s0, p, a, cfg);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

} // namespace

double prevalence_of(const ModelParams& p, const Allocation& a, Prevalence which, const SolverConfig& cfg)
{
    switch (which) {
    case Prevalence::Truth:
        return truth_steady_state(p, a, cfg);
    case Prevalence::Rumor:
        return rumor_eradicated(p, a, cfg) ? 0.0 : rumor_steady_state(p, a);
    case Prevalence::Total: {
        const double theta1 = rumor_eradicated(p, a, cfg) ? 0.0 : rumor_steady_state(p, a);
        return truth_fixed_point(theta1, p, a, cfg) + theta1;
    }
    }
    return 0.0;
}

std::vector<double> prevalence_grid(const ModelParams& p, std::span<const Allocation> allocations,
                                    Prevalence which, const SolverConfig& cfg)
{
    return parallel_map(allocations, [&](const Allocation& a) { return prevalence_of(p, a, which, cfg); });
}

std::vector<SteadyState> steady_states(std::span<const Scenario> scenarios, const SolverConfig& cfg)
{
    return parallel_map(scenarios,
                        [&](const Scenario& s) { return full_steady_state(s.params, s.allocation, cfg); });
}

std::vector<IntegrationOutcome> integrate_many(std::span<const DynState> starts, const ModelParams& p,
                                               const Allocation& a, const IntegratorConfig& cfg)
{
    return parallel_map(starts, [&](const DynState& s0) { return integrate_one(s0, p, a, cfg); });
}

namespace serial {

std::vector<double> prevalence_grid(const ModelParams& p, std::span<const Allocation> allocations,
                                    Prevalence which, const SolverConfig& cfg)
{
    return serial_map(allocations, [&](const Allocation& a) { return prevalence_of(p, a, which, cfg); });
}

std::vector<SteadyState> steady_states(std::span<const Scenario> scenarios, const SolverConfig& cfg)
{
    return serial_map(scenarios,
                      [&](const Scenario& s) { return full_steady_state(s.params, s.allocation, cfg); });
}

std::vector<IntegrationOutcome> integrate_many(std::span<const DynState> starts, const ModelParams& p,
                                               const Allocation& a, const IntegratorConfig& cfg)
{
    return serial_map(starts, [&](const DynState& s0) { return integrate_one(s0, p, a, cfg); });
}

} // namespace serial

} // namespace rumorsis::kernels
