#pragma once

// Data-parallel kernels behind the optimizers, sweeps and stability checks.
// Each kernel has a serial reference in kernels::serial with the same
// signature; both produce bit-identical results for the same inputs.

#include "rumorsis/dynamics.hpp"
#include "rumorsis/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rumorsis::kernels {

enum class Prevalence { Truth, Rumor, Total };

struct Scenario {
    ModelParams params;
    Allocation allocation;
};

struct IntegrationOutcome {
    std::optional<Trajectory> trajectory;
    std::string error; // set when the integrator threw
};

double prevalence_of(const ModelParams& p, const Allocation& a, Prevalence which, const SolverConfig& cfg);

std::vector<double> prevalence_grid(const ModelParams& p, std::span<const Allocation> allocations,
                                    Prevalence which, const SolverConfig& cfg);

std::vector<SteadyState> steady_states(std::span<const Scenario> scenarios, const SolverConfig& cfg);

std::vector<IntegrationOutcome> integrate_many(std::span<const DynState> starts, const ModelParams& p,
                                               const Allocation& a, const IntegratorConfig& cfg);

namespace serial {

std::vector<double> prevalence_grid(const ModelParams& p, std::span<const Allocation> allocations,
                                    Prevalence which, const SolverConfig& cfg);

std::vector<SteadyState> steady_states(std::span<const Scenario> scenarios, const SolverConfig& cfg);

std::vector<IntegrationOutcome> integrate_many(std::span<const DynState> starts, const ModelParams& p,
                                               const Allocation& a, const IntegratorConfig& cfg);

} // namespace serial

} // namespace rumorsis::kernels
