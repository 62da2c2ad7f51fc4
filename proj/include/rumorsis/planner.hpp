#pragma once

// Budgeted choice of inspection rates. Inspection costs one unit per unit
// mass, so a uniform rate alpha costs alpha and a targeted pair costs
// x*alpha0 + (1-x)*alpha1.

#include "rumorsis/model.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace rumorsis {

enum class Objective { RumorMin, Truth, TruthTargeted, Platform };

std::string_view to_string(Objective o);
std::optional<Objective> parse_objective(std::string_view name);

struct Interval {
    double lo;
    double hi;
};

struct Thresholds {
    double alpha_prime = 0.0;                    // eradication threshold
    std::optional<double> lambda_bar;            // 2 + sqrt(2 - 1/(1-x)); absent if x = 1 or the root is imaginary
    std::optional<double> A_lower;               // lower edge of the planner's slack region
    std::optional<double> A_upper;               // upper edge of the planner's slack region
    std::optional<double> A_tilde;               // upper edge of the platform's slack region
    std::optional<Interval> eradication_interval; // lambda range where targeted eradication is not optimal
};

struct OptimizerConfig {
    int grid_points = 2001;
    double refine_tol = 1e-10; // golden-section bracket width
    double tie_tol = 1e-10;    // objective values this close are ties, resolved towards cheaper policies
    SolverConfig solver;

    void validate() const;
};

struct OptResult {
    Objective objective = Objective::Truth;
    Allocation allocation = Allocation::uniform(0.0);
    double value = 0.0;         // theta1 for RumorMin, theta for Platform, theta0 otherwise
    double budget_spent = 0.0;
    bool slack = false;         // optimum leaves budget unspent
    bool rumor_eradicated = false;
    bool outside_binding_regime = false; // targeted with A > x
    double grid_best = 0.0;     // best objective among the scanned grid points
    SteadyState state;
    Thresholds diagnostics;     // closed forms always; budget edges only from compute_thresholds
};

/// Closed-form 2 + sqrt(2 - 1/(1-x)).
std::optional<double> lambda_bar(double x);

/// ((4-x) -/+ sqrt((4-x)^2 - 12)) / 2, empty when the discriminant is negative.
std::optional<Interval> eradication_interval(double x);

Thresholds closed_form_thresholds(const ModelParams& p);

OptResult minimize_rumor(const ModelParams& p, double budget, const OptimizerConfig& cfg = {});

/// theta0 is locally increasing in the uniform rate at the solved state.
bool marginal_condition_uniform(const ModelParams& p, const Allocation& a, const SteadyState& ss);

OptResult maximize_truth_uniform(const ModelParams& p, double budget, const OptimizerConfig& cfg = {});

OptResult maximize_platform(const ModelParams& p, double budget, const OptimizerConfig& cfg = {});

OptResult maximize_truth_targeted(const ModelParams& p, double budget, const OptimizerConfig& cfg = {});

/// Moving budget from type-0 to type-1 inspection locally raises theta0 (binding budget).
bool marginal_condition_targeted(const ModelParams& p, double budget, const SteadyState& ss);

OptResult optimize(Objective objective, const ModelParams& p, double budget, const OptimizerConfig& cfg = {});

struct ThresholdConfig {
    int budget_grid = 101;      // coarse scan of budgets over [0, 1]
    double resolution = 1e-6;   // bisection width on the slack indicator
    OptimizerConfig optimizer;
};

Thresholds compute_thresholds(const ModelParams& p, const ThresholdConfig& cfg = {});

/// Targeted steady-state constraint as a cubic in theta0, for a binding budget.
struct CubicConstraint {
    double c3 = 0.0;
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    double theta1 = 0.0;

    // Published coefficients, kept only to report disagreement.
    double printed_B = 0.0;
    double printed_C = 0.0;
    double printed_D = 0.0;
    double printed_b = 0.0;
    double printed_c = 0.0;
    double printed_d = 0.0;
    double upper_mismatch = 0.0; // max |B - c2|, |C - c1|, |D - c0|
    double lower_mismatch = 0.0; // max |b - c2/lambda^2|, |c - c1/lambda^2|, |d - c0/lambda^2|

    double evaluate(double theta0) const;
    /// |cubic(theta0)| / |c3|.
    double normalized_residual(double theta0) const;
    int sign_changes() const;
    std::optional<double> positive_root() const;
};

/// Coefficients for alpha1 = (A - x*alpha0)/(1-x). Throws ParamError when the
/// implied alpha1 (or alpha0) falls outside [0, 1].
CubicConstraint cubic_coefficients(const ModelParams& p, double budget, double alpha0);

/// Budgets (from the given list) at which the targeted optimum spends on
/// type-0 agents; returns the smallest and largest such budget.
std::optional<Interval> diversification_budget_range(const ModelParams& p, std::span<const double> budgets,
                                                     const OptimizerConfig& cfg = {});

/// Diffusion rates (from the given list) for which some budget in `budgets`
/// makes targeted type-0 inspection optimal.
std::optional<Interval> diversification_lambda_range(double x, std::span<const double> lambdas,
                                                     std::span<const double> budgets,
                                                     const OptimizerConfig& cfg = {});

} // namespace rumorsis
