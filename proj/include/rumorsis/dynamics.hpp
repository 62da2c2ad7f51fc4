#pragma once

// Transient mean-field dynamics. The four group equations are integrated in
// per-capita form: the constant group-mass prefactor is divided out, so a
// group of zero mass still has a well-defined (and harmless) coordinate.

#include "rumorsis/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rumorsis {

/// Per-capita believing fractions of the four non-trivial groups.
struct DynState {
    double r00a = 0.0;  // inspecting type 0, believing the truth
    double r00na = 0.0; // non-inspecting type 0, believing the truth
    double r10a = 0.0;  // inspecting type 1, believing the truth
    double r11na = 0.0; // non-inspecting type 1, believing the rumor
    double t = 0.0;

    static DynState uniform(double v) { return {v, v, v, v, 0.0}; }
    static DynState from_steady_state(const SteadyState& ss)
    {
        return {ss.rho_00_a, ss.rho_00_na, ss.rho_10_a, ss.rho_11_na, 0.0};
    }
};

struct DynRates {
    double r00a;
    double r00na;
    double r10a;
    double r11na;

    double max_abs() const;
};

struct IntegratorConfig {
    double dt = 0.01;
    std::optional<double> t_max;  // defaults to 1e4 / delta
    double conv_tol = 1e-10;      // on max |d rho / dt|
    double sample_interval = 1.0; // time between stored samples
    int max_halvings = 30;

    void validate() const;
    double horizon(const ModelParams& p) const { return t_max ? *t_max : 1e4 / p.delta(); }
};

enum class TrajectoryStatus { Converged, Horizon };

struct Trajectory {
    std::vector<DynState> samples; // first is the start, last is the final state
    DynState final_state;
    TrajectoryStatus status = TrajectoryStatus::Horizon;
    std::size_t steps = 0;
    double final_rate = 0.0; // max |rate| at the final state
};

/// theta0, theta1 seen by a random contact.
Prevalences prevalences(const DynState& s, const ModelParams& p, const Allocation& a);

DynRates derivatives(const DynState& s, const ModelParams& p, const Allocation& a);

/// Fixed-step RK4 until max |rate| < conv_tol or the horizon. A step that
/// leaves [0,1] beyond round-off is retried at half the step; once
/// max_halvings is exhausted an IntegratorError is thrown.
Trajectory integrate(const DynState& s0, const ModelParams& p, const Allocation& a,
                     const IntegratorConfig& cfg = {});

struct StabilityReport {
    std::vector<DynState> starts;
    std::vector<DynState> limits;
    bool all_converged = true;
    double max_pairwise_distance = 0.0;
    bool passed = false;
    std::string failure; // empty when passed
};

inline constexpr double kDefaultSeedLevel = 1e-3;
inline constexpr double kStabilityTol = 1e-6;

/// Integrates from the near-zero seed plus n_starts random interior states and
/// checks that every limit agrees (max-norm) within kStabilityTol.
StabilityReport verify_global_stability(const ModelParams& p, const Allocation& a, int n_starts,
                                        const IntegratorConfig& cfg = {}, std::uint64_t seed = 1);

/// Random interior states, reproducible for a given seed.
std::vector<DynState> random_interior_states(int n, std::uint64_t seed);

} // namespace rumorsis
