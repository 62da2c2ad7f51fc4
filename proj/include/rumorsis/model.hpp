#pragma once

// Steady states of the two-message mean-field SIS model with inspection.
//
// A mass x of agents is biased towards the truth (type 0), 1-x towards the
// rumor (type 1). Inspecting agents believe and pass on the truth whatever
// they receive; non-inspecting agents ignore messages against their bias.

#include "rumorsis/errors.hpp"

namespace rumorsis {

/// Exogenous model constants. lambda = nu * k / delta always holds.
class ModelParams {
public:
    /// Canonical rates delta = 0.5, k = 1, nu = lambda * delta / k.
    static ModelParams from_lambda(double lambda, double x);
    static ModelParams from_rates(double nu, double k, double delta, double x);

    double nu() const noexcept { return nu_; }
    double k() const noexcept { return k_; }
    double delta() const noexcept { return delta_; }
    double lambda() const noexcept { return lambda_; }
    double x() const noexcept { return x_; }

    /// Same rates, different type-0 mass.
    ModelParams with_x(double x) const { return from_rates(nu_, k_, delta_, x); }

private:
    ModelParams(double nu, double k, double delta, double x);

    double nu_;
    double k_;
    double delta_;
    double lambda_;
    double x_;
};

enum class AllocationMode { Uniform, Targeted };

/// Inspection policy. A uniform allocation stores alpha in both group slots.
class Allocation {
public:
    static Allocation uniform(double alpha);
    static Allocation targeted(double alpha0, double alpha1);

    AllocationMode mode() const noexcept { return mode_; }
    /// Uniform rate; for targeted allocations this is alpha0.
    double alpha() const noexcept { return alpha0_; }
    double alpha0() const noexcept { return alpha0_; }
    double alpha1() const noexcept { return alpha1_; }

    /// Mass of inspecting agents, x*alpha0 + (1-x)*alpha1.
    double inspection_mass(double x) const noexcept;

private:
    Allocation(AllocationMode mode, double alpha0, double alpha1)
        : mode_(mode), alpha0_(alpha0), alpha1_(alpha1) {}

    AllocationMode mode_;
    double alpha0_;
    double alpha1_;
};

struct SolverConfig {
    double tol = 1e-12;     // absolute width of the final bisection bracket
    int max_iter = 200;     // bisection iterations
    double clamp_eps = 0.0; // prevalences <= clamp_eps are reported as 0

    void validate() const;
};

/// Solved prevalences and per-group believing fractions.
struct SteadyState {
    double theta0 = 0.0;    // truth prevalence
    double theta1 = 0.0;    // rumor prevalence
    double theta = 0.0;     // theta0 + theta1
    double rho_00_a = 0.0;  // inspecting type-0 agents believing the truth
    double rho_10_a = 0.0;  // inspecting type-1 agents believing the truth
    double rho_00_na = 0.0; // non-inspecting type-0 agents believing the truth
    double rho_11_na = 0.0; // non-inspecting type-1 agents believing the rumor
    bool rumor_eradicated = false;
};

struct Prevalences {
    double theta0;
    double theta1;
};

/// Minimal inspection rate that drives the rumor extinct, max(0, 1 - 1/(lambda(1-x))).
/// Returns 0 when x = 1 or lambda(1-x) <= 1.
double eradication_threshold(const ModelParams& p);

/// Rumor prevalence max(0, (1-alpha1)(1-x) - 1/lambda). Independent of alpha0
/// and of the truth.
double rumor_steady_state(const ModelParams& p, const Allocation& a);

/// True when the rumor is extinct, treating alpha1 within cfg.tol of the
/// eradication threshold as extinct.
bool rumor_eradicated(const ModelParams& p, const Allocation& a, const SolverConfig& cfg = {});

/// Right-hand side of the truth fixed-point equation theta0 = H(theta0).
double truth_map(double theta0, double theta1, const ModelParams& p, const Allocation& a);

/// Fixed point of theta0 = H(theta0; theta1) with theta1 taken as given.
double truth_fixed_point(double theta1, const ModelParams& p, const Allocation& a,
                         const SolverConfig& cfg = {});

/// Truth prevalence at the steady state (rumor solved first).
double truth_steady_state(const ModelParams& p, const Allocation& a, const SolverConfig& cfg = {});

SteadyState full_steady_state(const ModelParams& p, const Allocation& a, const SolverConfig& cfg = {});

/// theta0, theta1 rebuilt from the per-group fractions and the group masses.
Prevalences recompose(const SteadyState& ss, const ModelParams& p, const Allocation& a);

/// Total-prevalence map evaluated at theta, with theta0 and theta1 taken
/// from the solved steady state. The steady-state theta is a fixed point.
double total_prevalence_map(double theta, const ModelParams& p, const Allocation& a,
                            const SolverConfig& cfg = {});
double total_prevalence_map(double theta, const SteadyState& ss, const ModelParams& p,
                            const Allocation& a);

/// The positivity condition on alpha for the no-rumor truth prevalence,
/// "alpha > 1/(1-x)[1/lambda - x]", evaluated under both readings of the bracket.
struct PositivityReadings {
    double bound_scaled;    // (1/lambda - x) / (1-x)
    double bound_reciprocal; // 1 / ((1-x)(1/lambda - x))
    bool holds_scaled;
    bool holds_reciprocal;
    bool readings_agree;
};
PositivityReadings truth_positivity_readings(const ModelParams& p, double alpha);

} // namespace rumorsis
