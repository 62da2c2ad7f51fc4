#include "rumorsis/planner.hpp"

#include "rumorsis/kernels.hpp"
#include "rumorsis/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace rumorsis {

namespace {

constexpr double kSlackTol = 1e-9;
constexpr double kSpendTieTol = 1e-12;
constexpr double kDiversifiedTol = 1e-9;

using kernels::Prevalence;
using AllocationOf = std::function<Allocation(double)>;

void require_budget(double budget)
{
    if (!std::isfinite(budget) || budget < 0.0)
        throw ParamError("budget A must be finite and >= 0");
}

struct ScalarMax {
    double arg;
    double value;
    double grid_best;
};

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol, double& best_value)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if (fc >= fd) {
        best_value = fc;
        return c;
    }
    best_value = fd;
    return d;
}

// Dense grid on [lo, hi] then golden-section refinement inside the cells
// adjacent to the first grid maximum.
ScalarMax maximize_on_segment(const ModelParams& p, const AllocationOf& make, double lo, double hi,
                              Prevalence which, const OptimizerConfig& cfg)
{
    const int n = hi > lo ? cfg.grid_points : 1;
    std::vector<double> ts(static_cast<std::size_t>(n));
    std::vector<Allocation> allocs;
    allocs.reserve(ts.size());
    for (int i = 0; i < n; ++i) {
        ts[i] = i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        allocs.push_back(make(ts[i]));
    }
    const std::vector<double> values = kernels::prevalence_grid(p, allocs, which, cfg.solver);

    const double top = *std::max_element(values.begin(), values.end());
    std::size_t best = 0;
    while (values[best] < top - cfg.tie_tol)
        ++best;

    ScalarMax out{ts[best], values[best], top};
    if (n < 3)
        return out;

    const double a = ts[best == 0 ? 0 : best - 1];
    const double b = ts[std::min(best + 1, ts.size() - 1)];
    auto f = [&](double t) { return kernels::prevalence_of(p, make(std::clamp(t, lo, hi)), which, cfg.solver); };
    double refined_value = 0.0;
    const double refined = golden_max(f, a, b, cfg.refine_tol, refined_value);
    if (refined_value > out.value) {
        out.arg = std::clamp(refined, lo, hi);
        out.value = refined_value;
    }
    return out;
}

double objective_value(Objective o, const SteadyState& ss)
{
    switch (o) {
    case Objective::RumorMin:
        return ss.theta1;
    case Objective::Platform:
        return ss.theta;
    case Objective::Truth:
    case Objective::TruthTargeted:
        return ss.theta0;
    }
    return ss.theta0;
}

OptResult finish(Objective o, const ModelParams& p, const Allocation& a, double budget, double grid_best,
                 const OptimizerConfig& cfg)
{
    OptResult r;
    r.objective = o;
    r.allocation = a;
    r.state = full_steady_state(p, a, cfg.solver);
    r.value = objective_value(o, r.state);
    r.budget_spent = a.inspection_mass(p.x());
    r.slack = r.budget_spent < std::min(budget, 1.0) - kSlackTol;
    r.rumor_eradicated = r.state.rumor_eradicated;
    r.grid_best = grid_best;
    r.diagnostics = closed_form_thresholds(p);
    return r;
}

OptResult maximize_uniform(Objective o, Prevalence which, const ModelParams& p, double budget,
                           const OptimizerConfig& cfg)
{
    cfg.validate();
    require_budget(budget);
    const double cap = std::min(budget, 1.0);
    const ScalarMax m = maximize_on_segment(p, [](double t) { return Allocation::uniform(t); }, 0.0, cap, which, cfg);
    return finish(o, p, Allocation::uniform(m.arg), budget, m.grid_best, cfg);
}

} // namespace

std::string_view to_string(Objective o)
{
    switch (o) {
    case Objective::RumorMin:
        return "rumor-min";
    case Objective::Truth:
        return "truth";
    case Objective::TruthTargeted:
        return "truth-targeted";
    case Objective::Platform:
        return "platform";
    }
    return "truth";
}

std::optional<Objective> parse_objective(std::string_view name)
{
    for (Objective o : {Objective::RumorMin, Objective::Truth, Objective::TruthTargeted, Objective::Platform})
        if (to_string(o) == name)
            return o;
    return std::nullopt;
}

void OptimizerConfig::validate() const
{
    if (grid_points < 2)
        throw ParamError("optimizer grid_points must be >= 2");
    if (!(refine_tol > 0.0))
        throw ParamError("optimizer refine_tol must be > 0");
    if (!(tie_tol >= 0.0))
        throw ParamError("optimizer tie_tol must be >= 0");
    solver.validate();
}

std::optional<double> lambda_bar(double x)
{
    if (!(x < 1.0))
        return std::nullopt;
    const double r = 2.0 - 1.0 / (1.0 - x);
    if (r < 0.0)
        return std::nullopt;
    return 2.0 + std::sqrt(r);
}

std::optional<Interval> eradication_interval(double x)
{
    const double b = 4.0 - x;
    const double disc = b * b - 12.0;
    if (disc < 0.0)
        return std::nullopt;
    const double s = std::sqrt(disc);
    return Interval{(b - s) / 2.0, (b + s) / 2.0};
}

Thresholds closed_form_thresholds(const ModelParams& p)
{
    Thresholds t;
    t.alpha_prime = eradication_threshold(p);
    t.lambda_bar = lambda_bar(p.x());
    t.eradication_interval = eradication_interval(p.x());
    return t;
}

OptResult minimize_rumor(const ModelParams& p, double budget, const OptimizerConfig& cfg)
{
    cfg.validate();
    require_budget(budget);
    const double alpha = std::min(budget, eradication_threshold(p));
    return finish(Objective::RumorMin, p, Allocation::uniform(alpha), budget, 0.0, cfg);
}

bool marginal_condition_uniform(const ModelParams& p, const Allocation& a, const SteadyState& ss)
{
    const double lambda = p.lambda();
    const double x = p.x();
    const double spread = 1.0 + lambda * (ss.theta0 + ss.theta1);
    const double lhs = spread * (ss.theta0 * (1.0 - x) * spread + ss.theta1);
    const double rhs = a.alpha() * (1.0 - x) * (1.0 + lambda * ss.theta0);
    return lhs > rhs;
}

OptResult maximize_truth_uniform(const ModelParams& p, double budget, const OptimizerConfig& cfg)
{
    return maximize_uniform(Objective::Truth, Prevalence::Truth, p, budget, cfg);
}

OptResult maximize_platform(const ModelParams& p, double budget, const OptimizerConfig& cfg)
{
    return maximize_uniform(Objective::Platform, Prevalence::Total, p, budget, cfg);
}

OptResult maximize_truth_targeted(const ModelParams& p, double budget, const OptimizerConfig& cfg)
{
    cfg.validate();
    require_budget(budget);
    const double x = p.x();
    const double cap = std::min(budget, 1.0);

    struct Candidate {
        Allocation alloc;
        double value;
        double spend;
        double grid_best;
    };
    std::vector<Candidate> candidates;
    auto add_segment = [&](const AllocationOf& make, double lo, double hi) {
        const ScalarMax m = maximize_on_segment(p, make, lo, hi, Prevalence::Truth, cfg);
        const Allocation a = make(m.arg);
        candidates.push_back({a, m.value, a.inspection_mass(x), m.grid_best});
    };
    auto add_point = [&](const Allocation& a) {
        const double v = truth_steady_state(p, a, cfg.solver);
        candidates.push_back({a, v, a.inspection_mass(x), v});
    };

    // Budget binding, parametrized by alpha0 ascending.
    if (x <= 0.0) {
        add_point(Allocation::targeted(0.0, cap));
    } else if (x >= 1.0) {
        add_point(Allocation::targeted(cap, 0.0));
    } else {
        const double lo0 = std::max(0.0, (cap - (1.0 - x)) / x);
        const double hi0 = std::min(1.0, cap / x);
        add_segment(
            [&](double a0) {
                const double a1 = std::clamp((cap - x * a0) / (1.0 - x), 0.0, 1.0);
                return Allocation::targeted(std::clamp(a0, 0.0, 1.0), a1);
            },
            lo0, hi0);
        // Budget exceeds the type-0 mass: alpha0 = 1 with unspent budget.
        if (cap > x) {
            const double top1 = std::min(1.0, (cap - x) / (1.0 - x));
            add_segment([](double a1) { return Allocation::targeted(1.0, std::clamp(a1, 0.0, 1.0)); }, 0.0, top1);
        }
    }
    // Rumor extinct: alpha0 is irrelevant, so the cheapest version spends nothing on it.
    add_point(Allocation::targeted(0.0, x < 1.0 ? std::min(1.0, cap / (1.0 - x)) : 0.0));

    const Candidate* best = &candidates.front();
    double grid_best = candidates.front().grid_best;
    for (const Candidate& c : candidates) {
        grid_best = std::max(grid_best, c.grid_best);
        if (c.value > best->value + cfg.tie_tol)
            best = &c;
        else if (std::abs(c.value - best->value) <= cfg.tie_tol && c.spend < best->spend - kSpendTieTol)
            best = &c;
    }

    OptResult r = finish(Objective::TruthTargeted, p, best->alloc, budget, grid_best, cfg);
    r.outside_binding_regime = budget > x;
    return r;
}

bool marginal_condition_targeted(const ModelParams& p, double budget, const SteadyState& ss)
{
    const double lambda = p.lambda();
    const double spread = 1.0 + lambda * (ss.theta0 + ss.theta1);
    return ss.theta0 * spread * spread > budget * (1.0 + lambda * ss.theta0);
}

OptResult optimize(Objective objective, const ModelParams& p, double budget, const OptimizerConfig& cfg)
{
    switch (objective) {
    case Objective::RumorMin:
        return minimize_rumor(p, budget, cfg);
    case Objective::Truth:
        return maximize_truth_uniform(p, budget, cfg);
    case Objective::TruthTargeted:
        return maximize_truth_targeted(p, budget, cfg);
    case Objective::Platform:
        return maximize_platform(p, budget, cfg);
    }
    return maximize_truth_uniform(p, budget, cfg);
}

namespace {

// Boundary of the slack indicator between a budget where it is `inside_flag`
// and one where it is not, to the given width.
double bisect_slack_edge(Objective o, const ModelParams& p, double inside, double outside, const ThresholdConfig& cfg)
{
    while (std::abs(outside - inside) > cfg.resolution) {
        const double mid = 0.5 * (inside + outside);
        if (optimize(o, p, mid, cfg.optimizer).slack)
            inside = mid;
        else
            outside = mid;
    }
    return 0.5 * (inside + outside);
}

struct SlackRegion {
    std::optional<double> lower;
    std::optional<double> upper;
};

SlackRegion slack_region(Objective o, const ModelParams& p, const ThresholdConfig& cfg)
{
    const int n = cfg.budget_grid;
    std::vector<double> budgets(static_cast<std::size_t>(n));
    std::vector<bool> slack(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        budgets[j] = j == n - 1 ? 1.0 : static_cast<double>(j) / (n - 1);
        slack[j] = optimize(o, p, budgets[j], cfg.optimizer).slack;
    }
    const auto first = std::find(slack.begin(), slack.end(), true);
    if (first == slack.end())
        return {};
    const auto last = std::find(slack.rbegin(), slack.rend(), true);
    const std::size_t i_first = static_cast<std::size_t>(first - slack.begin());
    const std::size_t i_last = slack.size() - 1 - static_cast<std::size_t>(last - slack.rbegin());

    SlackRegion r;
    r.lower = i_first == 0 ? budgets[0] : bisect_slack_edge(o, p, budgets[i_first], budgets[i_first - 1], cfg);
    r.upper = i_last + 1 == budgets.size() ? budgets.back()
                                           : bisect_slack_edge(o, p, budgets[i_last], budgets[i_last + 1], cfg);
    return r;
}

} // namespace

Thresholds compute_thresholds(const ModelParams& p, const ThresholdConfig& cfg)
{
    if (cfg.budget_grid < 2)
        throw ParamError("threshold budget_grid must be >= 2");
    if (!(cfg.resolution > 0.0))
        throw ParamError("threshold resolution must be > 0");
    cfg.optimizer.validate();

    Thresholds t = closed_form_thresholds(p);
    const SlackRegion planner = slack_region(Objective::Truth, p, cfg);
    t.A_lower = planner.lower;
    t.A_upper = planner.upper;
    t.A_tilde = slack_region(Objective::Platform, p, cfg).upper;
    return t;
}

double CubicConstraint::evaluate(double theta0) const
{
    const std::array<double, 4> c{c3, c2, c1, c0};
    return poly::evaluate(c, theta0);
}

double CubicConstraint::normalized_residual(double theta0) const { return std::abs(evaluate(theta0)) / std::abs(c3); }

int CubicConstraint::sign_changes() const
{
    const double s = c3 < 0.0 ? -1.0 : 1.0;
    const std::array<double, 4> c{s * c3, s * c2, s * c1, s * c0};
    return poly::sign_changes(c);
}

std::optional<double> CubicConstraint::positive_root() const
{
    for (double r : poly::real_roots_cubic(c3, c2, c1, c0))
        if (r > 0.0)
            return r;
    return std::nullopt;
}

CubicConstraint cubic_coefficients(const ModelParams& p, double budget, double alpha0)
{
    require_budget(budget);
    const double x = p.x();
    if (!(x < 1.0))
        throw ParamError("targeted cubic needs x < 1");
    if (!(alpha0 >= 0.0 && alpha0 <= 1.0))
        throw ParamError("alpha0 must lie in [0, 1]");
    const double alpha1 = (budget - x * alpha0) / (1.0 - x);
    if (!(alpha1 >= 0.0 && alpha1 <= 1.0))
        throw ParamError("budget and alpha0 imply alpha1 outside [0, 1]");

    const Allocation a = Allocation::targeted(alpha0, alpha1);
    const double lambda = p.lambda();
    const double mass = a.inspection_mass(x);
    const double q = x + (1.0 - x) * alpha1; // total weight of the truth map
    const double theta1 = rumor_steady_state(p, a);

    // theta0 (1 + l s)(1 + l theta0) = m l s (1 + l theta0) + c l theta0 (1 + l s),  s = theta0 + theta1.
    CubicConstraint k;
    k.alpha0 = alpha0;
    k.alpha1 = alpha1;
    k.theta1 = theta1;
    k.c3 = lambda * lambda;
    k.c2 = 2.0 * lambda + lambda * lambda * (theta1 - q);
    k.c1 = (1.0 + lambda * theta1) * (1.0 - lambda * q);
    k.c0 = -mass * lambda * theta1;

    const double A = budget;
    k.printed_B = lambda * (1.0 + lambda - 2.0 * A * lambda - 2.0 * lambda * x + 2.0 * alpha0 * lambda * x);
    k.printed_C = lambda * (1.0 - A - x * (1.0 - alpha0)) * (1.0 - A * lambda - lambda * x + alpha0 * lambda * x);
    k.printed_D = A * (1.0 - lambda + lambda * A + lambda * x - alpha0 * lambda * x);
    const double l2 = lambda * lambda;
    k.printed_b = -(2.0 * alpha1 * (1.0 - x) + 2.0 * x - 1.0 - 1.0 / lambda) / l2;
    k.printed_c = -(1.0 - alpha1) * (1.0 - x) * (alpha1 * (1.0 - x) + x - 1.0 / lambda) / l2;
    k.printed_d = -theta1 / lambda;

    k.upper_mismatch = std::max({std::abs(k.printed_B - k.c2), std::abs(k.printed_C - k.c1),
                                 std::abs(k.printed_D - k.c0)});
    k.lower_mismatch = std::max({std::abs(k.printed_b - k.c2 / l2), std::abs(k.printed_c - k.c1 / l2),
                                 std::abs(k.printed_d - k.c0 / l2)});
    return k;
}

std::optional<Interval> diversification_budget_range(const ModelParams& p, std::span<const double> budgets,
                                                     const OptimizerConfig& cfg)
{
    std::optional<Interval> range;
    for (double A : budgets) {
        const OptResult r = maximize_truth_targeted(p, A, cfg);
        if (r.allocation.alpha0() <= kDiversifiedTol)
            continue;
        if (!range)
            range = Interval{A, A};
        range->lo = std::min(range->lo, A);
        range->hi = std::max(range->hi, A);
    }
    return range;
}

std::optional<Interval> diversification_lambda_range(double x, std::span<const double> lambdas,
                                                     std::span<const double> budgets, const OptimizerConfig& cfg)
{
    std::optional<Interval> range;
    for (double lambda : lambdas) {
        if (!diversification_budget_range(ModelParams::from_lambda(lambda, x), budgets, cfg))
            continue;
        if (!range)
            range = Interval{lambda, lambda};
        range->lo = std::min(range->lo, lambda);
        range->hi = std::max(range->hi, lambda);
    }
    return range;
}

} // namespace rumorsis
