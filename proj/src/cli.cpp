#include "rumorsis/cli.hpp"

#include "rumorsis/dynamics.hpp"
#include "rumorsis/kernels.hpp"
#include "rumorsis/model.hpp"
#include "rumorsis/parallel.hpp"
#include "rumorsis/planner.hpp"
#include "rumorsis/table.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rumorsis::cli {

namespace {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::optional<double> lambda;
    std::optional<double> nu;
    std::optional<double> k;
    std::optional<double> delta;
    std::optional<double> x;
    std::optional<double> alpha;
    std::optional<double> alpha0;
    std::optional<double> alpha1;
    std::optional<double> budget;
    std::optional<std::string> objective;
    std::optional<std::string> axis;
    std::optional<double> start;
    std::optional<double> stop;
    int steps = 101;
    int starts = 0;
    std::uint64_t seed = 1;
    std::optional<double> init;
    std::string format = "csv";
    std::optional<std::string> out;
    int jobs = 0;
    double tol = 1e-12;
};

void add_model_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--lambda", c.lambda, "diffusion rate nu*k/delta");
    sub->add_option("--nu", c.nu, "per-contact transmission rate");
    sub->add_option("--k", c.k, "meetings per period");
    sub->add_option("--delta", c.delta, "death/replacement rate");
    sub->add_option("--x", c.x, "mass of truth-biased agents");
}

void add_allocation_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--alpha", c.alpha, "uniform inspection rate");
    sub->add_option("--alpha0", c.alpha0, "inspection rate of truth-biased agents");
    sub->add_option("--alpha1", c.alpha1, "inspection rate of rumor-biased agents");
}

void add_output_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "output file (default: stdout)");
    sub->add_option("--jobs", c.jobs, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", c.tol, "fixed-point tolerance")->check(CLI::PositiveNumber);
}

// --- config validation -----------------------------------------------------

bool has_rates(const RunConfig& c) { return c.nu || c.k || c.delta; }

double require_x(const RunConfig& c)
{
    if (!c.x)
        throw ConfigError("--x is required");
    return *c.x;
}

ModelParams make_params(const RunConfig& c)
{
    const double x = require_x(c);
    if (c.lambda && has_rates(c))
        throw ConfigError("give either --lambda or --nu/--k/--delta, not both");
    if (c.lambda)
        return ModelParams::from_lambda(*c.lambda, x);
    if (c.nu && c.k && c.delta)
        return ModelParams::from_rates(*c.nu, *c.k, *c.delta, x);
    if (has_rates(c))
        throw ConfigError("--nu, --k and --delta must be given together");
    throw ConfigError("--lambda (or --nu/--k/--delta) is required");
}

std::optional<Allocation> maybe_allocation(const RunConfig& c)
{
    const bool targeted = c.alpha0 || c.alpha1;
    if (c.alpha && targeted)
        throw ConfigError("give either --alpha or --alpha0/--alpha1, not both");
    if (c.alpha)
        return Allocation::uniform(*c.alpha);
    if (targeted) {
        if (!(c.alpha0 && c.alpha1))
            throw ConfigError("--alpha0 and --alpha1 must be given together");
        return Allocation::targeted(*c.alpha0, *c.alpha1);
    }
    return std::nullopt;
}

Allocation make_allocation(const RunConfig& c)
{
    if (auto a = maybe_allocation(c))
        return *a;
    throw ConfigError("--alpha (or --alpha0/--alpha1) is required");
}

Objective make_objective(const RunConfig& c)
{
    if (!c.objective)
        throw ConfigError("--objective is required");
    if (auto o = parse_objective(*c.objective))
        return *o;
    throw ConfigError("unknown objective '" + *c.objective + "'");
}

double make_budget(const RunConfig& c)
{
    if (!c.budget)
        throw ConfigError("--A is required");
    return *c.budget;
}

SolverConfig solver_config(const RunConfig& c)
{
    SolverConfig s;
    s.tol = c.tol;
    return s;
}

OptimizerConfig optimizer_config(const RunConfig& c)
{
    OptimizerConfig o;
    o.solver = solver_config(c);
    return o;
}

// --- metadata -------------------------------------------------------------

std::string config_echo(const RunConfig& c)
{
    std::ostringstream os;
    os << c.command;
    auto num = [&](const char* flag, const std::optional<double>& v) {
        if (v)
            os << ' ' << flag << ' ' << io::format_double(*v);
    };
    auto str = [&](const char* flag, const std::optional<std::string>& v) {
        if (v)
            os << ' ' << flag << ' ' << *v;
    };
    num("--lambda", c.lambda);
    num("--nu", c.nu);
    num("--k", c.k);
    num("--delta", c.delta);
    num("--x", c.x);
    num("--alpha", c.alpha);
    num("--alpha0", c.alpha0);
    num("--alpha1", c.alpha1);
    num("--A", c.budget);
    str("--objective", c.objective);
    str("--axis", c.axis);
    num("--start", c.start);
    num("--stop", c.stop);
    if (c.command == "sweep")
        os << " --steps " << c.steps;
    if (c.command == "dynamics") {
        num("--init", c.init);
        os << " --starts " << c.starts << " --seed " << c.seed;
    }
    os << " --tol " << io::format_double(c.tol);
    return os.str();
}

io::Document new_document(const RunConfig& c)
{
    io::Document doc;
    doc.meta.emplace_back("tool", kToolVersion);
    doc.meta.emplace_back("command", c.command);
    doc.meta.emplace_back("config", config_echo(c));
    return doc;
}

// --- row builders -----------------------------------------------------------

const std::vector<std::string> kSteadyColumns{
    "lambda", "x", "alpha", "alpha0", "alpha1", "theta0", "theta1", "theta",
    "rho_00_a", "rho_10_a", "rho_00_na", "rho_11_na", "eradicated"};

io::Cell uniform_alpha(const Allocation& a)
{
    return a.mode() == AllocationMode::Uniform ? io::Cell{a.alpha()} : io::Cell{};
}

std::vector<io::Cell> steady_row(const ModelParams& p, const Allocation& a, const SteadyState& ss)
{
    return {p.lambda(), p.x(), uniform_alpha(a), a.alpha0(), a.alpha1(), ss.theta0, ss.theta1, ss.theta,
            ss.rho_00_a, ss.rho_10_a, ss.rho_00_na, ss.rho_11_na, ss.rumor_eradicated};
}

const std::vector<std::string> kOptimumColumns{
    "objective", "lambda", "x", "A", "alpha", "alpha0", "alpha1", "value", "budget_spent", "slack",
    "rumor_eradicated", "outside_binding_regime", "theta0", "theta1", "theta"};

std::vector<io::Cell> optimum_row(const ModelParams& p, double budget, const OptResult& r)
{
    return {std::string(to_string(r.objective)), p.lambda(), p.x(), budget, uniform_alpha(r.allocation),
            r.allocation.alpha0(), r.allocation.alpha1(), r.value, r.budget_spent, r.slack,
            r.rumor_eradicated, r.outside_binding_regime, r.state.theta0, r.state.theta1, r.state.theta};
}

const std::vector<std::string> kThresholdColumns{
    "alpha_prime", "lambda_bar", "A_lower", "A_upper", "A_tilde", "interval_lo", "interval_hi"};

std::vector<io::Cell> threshold_cells(const Thresholds& t)
{
    std::optional<double> lo;
    std::optional<double> hi;
    if (t.eradication_interval) {
        lo = t.eradication_interval->lo;
        hi = t.eradication_interval->hi;
    }
    return {t.alpha_prime, io::cell(t.lambda_bar), io::cell(t.A_lower), io::cell(t.A_upper),
            io::cell(t.A_tilde), io::cell(lo), io::cell(hi)};
}

template <class T>
void append(std::vector<T>& dst, const std::vector<T>& src)
{
    dst.insert(dst.end(), src.begin(), src.end());
}

std::vector<double> linear_grid(double start, double stop, int steps)
{
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        v[i] = i == steps - 1 ? stop : start + (stop - start) * static_cast<double>(i) / (steps - 1);
    return v;
}

// --- commands ---------------------------------------------------------------

int run_steady(const RunConfig& c, io::Document& doc)
{
    const ModelParams p = make_params(c);
    const Allocation a = make_allocation(c);
    const SteadyState ss = full_steady_state(p, a, solver_config(c));
    doc.columns = kSteadyColumns;
    doc.rows.push_back(steady_row(p, a, ss));
    return kExitOk;
}

int run_dynamics(const RunConfig& c, io::Document& doc)
{
    const ModelParams p = make_params(c);
    const Allocation a = make_allocation(c);
    const double init = c.init.value_or(kDefaultSeedLevel);
    if (!(init >= 0.0 && init <= 1.0))
        throw ConfigError("--init must lie in [0, 1]");
    if (c.starts == 1 || c.starts < 0)
        throw ConfigError("--starts must be 0 (no stability check) or >= 2");

    const IntegratorConfig icfg;
    const Trajectory tr = integrate(DynState::uniform(init), p, a, icfg);
    const SteadyState ss = full_steady_state(p, a, solver_config(c));

    doc.columns = {"t", "r00a", "r00na", "r10a", "r11na", "theta0", "theta1"};
    for (const DynState& s : tr.samples) {
        const Prevalences th = prevalences(s, p, a);
        doc.rows.push_back({s.t, s.r00a, s.r00na, s.r10a, s.r11na, th.theta0, th.theta1});
    }

    const DynState& f = tr.final_state;
    const Prevalences th = prevalences(f, p, a);
    const double deviation = std::max({std::abs(f.r00a - ss.rho_00_a), std::abs(f.r00na - ss.rho_00_na),
                                       std::abs(f.r10a - ss.rho_10_a), std::abs(f.r11na - ss.rho_11_na)});
    const bool converged = tr.status == TrajectoryStatus::Converged;
    doc.summary = {
        {"status", std::string(converged ? "converged" : "horizon")},
        {"steps", static_cast<double>(tr.steps)},
        {"t_final", f.t},
        {"theta0", th.theta0},
        {"theta1", th.theta1},
        {"analytic_theta0", ss.theta0},
        {"analytic_theta1", ss.theta1},
        {"max_deviation", deviation},
    };

    bool stable = true;
    if (c.starts >= 2) {
        const StabilityReport rep = verify_global_stability(p, a, c.starts, icfg, c.seed);
        stable = rep.passed;
        doc.summary.emplace_back("stability_starts", static_cast<double>(rep.starts.size()));
        doc.summary.emplace_back("stability_max_distance", rep.max_pairwise_distance);
        doc.summary.emplace_back("stability_passed", rep.passed);
        if (!rep.passed)
            doc.summary.emplace_back("stability_failure", rep.failure);
    }
    return converged && stable ? kExitOk : kExitNumerical;
}

int run_sweep(const RunConfig& c, io::Document& doc)
{
    if (!c.axis)
        throw ConfigError("--axis is required (alpha, lambda, x or A)");
    if (c.steps < 2)
        throw ConfigError("--steps must be >= 2");
    const std::string& axis = *c.axis;
    const SolverConfig scfg = solver_config(c);

    auto range = [&](double lo_default, double hi_default, bool has_default) {
        if (!has_default && !(c.start && c.stop))
            throw ConfigError("--start and --stop are required for axis " + axis);
        return std::pair{c.start.value_or(lo_default), c.stop.value_or(hi_default)};
    };
    auto in_unit = [&](std::pair<double, double> r) {
        if (!(r.first >= 0.0 && r.first <= 1.0 && r.second >= 0.0 && r.second <= 1.0))
            throw ConfigError("sweep range for axis " + axis + " must lie in [0, 1]");
    };

    if (axis == "A") {
        if (c.alpha || c.alpha0 || c.alpha1)
            throw ConfigError("axis A chooses the allocation; drop --alpha/--alpha0/--alpha1");
        const Objective o = make_objective(c);
        const ModelParams p = make_params(c);
        const auto r = range(0.0, 1.0, true);
        if (!(r.first >= 0.0 && r.second >= 0.0 && std::isfinite(r.first) && std::isfinite(r.second)))
            throw ConfigError("sweep range for axis A must be >= 0");
        doc.columns = kOptimumColumns;
        const OptimizerConfig ocfg = optimizer_config(c);
        for (double A : linear_grid(r.first, r.second, c.steps))
            doc.rows.push_back(optimum_row(p, A, optimize(o, p, A, ocfg)));
        return kExitOk;
    }
    if (c.objective)
        throw ConfigError("--objective only applies to axis A");

    std::vector<kernels::Scenario> scenarios;
    if (axis == "alpha") {
        if (c.alpha || c.alpha0 || c.alpha1)
            throw ConfigError("axis alpha sets the uniform rate; drop --alpha/--alpha0/--alpha1");
        const ModelParams p = make_params(c);
        const auto r = range(0.0, 1.0, true);
        in_unit(r);
        for (double v : linear_grid(r.first, r.second, c.steps))
            scenarios.push_back({p, Allocation::uniform(v)});
    } else if (axis == "lambda") {
        if (c.lambda || has_rates(c))
            throw ConfigError("axis lambda sets the diffusion rate; drop --lambda/--nu/--k/--delta");
        const double x = require_x(c);
        const Allocation a = make_allocation(c);
        const auto r = range(0.0, 0.0, false);
        if (!(r.first > 0.0 && r.second > 0.0 && std::isfinite(r.first) && std::isfinite(r.second)))
            throw ConfigError("sweep range for axis lambda must be > 0");
        for (double v : linear_grid(r.first, r.second, c.steps))
            scenarios.push_back({ModelParams::from_lambda(v, x), a});
    } else if (axis == "x") {
        if (c.x)
            throw ConfigError("axis x sets the type-0 mass; drop --x");
        RunConfig base = c;
        base.x = 0.0;
        const ModelParams p0 = make_params(base);
        const Allocation a = make_allocation(c);
        const auto r = range(0.0, 1.0, true);
        in_unit(r);
        for (double v : linear_grid(r.first, r.second, c.steps))
            scenarios.push_back({p0.with_x(v), a});
    } else {
        throw ConfigError("unknown axis '" + axis + "' (alpha, lambda, x or A)");
    }

    const std::vector<SteadyState> states = kernels::steady_states(scenarios, scfg);
    doc.columns = kSteadyColumns;
    for (std::size_t i = 0; i < states.size(); ++i)
        doc.rows.push_back(steady_row(scenarios[i].params, scenarios[i].allocation, states[i]));
    return kExitOk;
}

int run_optimize(const RunConfig& c, io::Document& doc)
{
    const ModelParams p = make_params(c);
    const Objective o = make_objective(c);
    const double budget = make_budget(c);
    const OptimizerConfig ocfg = optimizer_config(c);
    const OptResult r = optimize(o, p, budget, ocfg);

    ThresholdConfig tcfg;
    tcfg.optimizer = ocfg;
    const Thresholds t = compute_thresholds(p, tcfg);

    doc.columns = kOptimumColumns;
    append(doc.columns, kThresholdColumns);
    std::vector<io::Cell> row = optimum_row(p, budget, r);
    append(row, threshold_cells(t));
    doc.rows.push_back(std::move(row));
    return kExitOk;
}

int run_thresholds(const RunConfig& c, io::Document& doc)
{
    const ModelParams p = make_params(c);
    const OptimizerConfig ocfg = optimizer_config(c);
    ThresholdConfig tcfg;
    tcfg.optimizer = ocfg;
    const Thresholds t = compute_thresholds(p, tcfg);

    std::optional<double> div_lo;
    std::optional<double> div_hi;
    if (p.x() > 0.0 && p.x() < 1.0) {
        const std::vector<double> budgets = linear_grid(0.0, 1.0, 101);
        if (auto d = diversification_budget_range(p, budgets, ocfg)) {
            div_lo = d->lo;
            div_hi = d->hi;
        }
    }

    doc.columns = {"lambda", "x"};
    append(doc.columns, kThresholdColumns);
    doc.columns.push_back("diversified_A_lo");
    doc.columns.push_back("diversified_A_hi");
    std::vector<io::Cell> row{p.lambda(), p.x()};
    append(row, threshold_cells(t));
    row.push_back(io::cell(div_lo));
    row.push_back(io::cell(div_hi));
    doc.rows.push_back(std::move(row));
    return kExitOk;
}

int dispatch(const RunConfig& c, io::Document& doc)
{
    if (c.command == "steady")
        return run_steady(c, doc);
    if (c.command == "dynamics")
        return run_dynamics(c, doc);
    if (c.command == "sweep")
        return run_sweep(c, doc);
    if (c.command == "optimize")
        return run_optimize(c, doc);
    return run_thresholds(c, doc);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    CLI::App app{"Rumor/truth diffusion under message inspection: steady states, dynamics, budgeted policies"};
    app.require_subcommand(1);

    CLI::App* steady = app.add_subcommand("steady", "steady state for one allocation");
    add_model_options(steady, c);
    add_allocation_options(steady, c);
    add_output_options(steady, c);

    CLI::App* dynamics = app.add_subcommand("dynamics", "integrate the mean-field ODEs");
    add_model_options(dynamics, c);
    add_allocation_options(dynamics, c);
    dynamics->add_option("--init", c.init, "initial fraction in every group (default 1e-3)");
    dynamics->add_option("--starts", c.starts, "random starts for the global stability check");
    dynamics->add_option("--seed", c.seed, "seed for the random starts");
    add_output_options(dynamics, c);

    CLI::App* sweep = app.add_subcommand("sweep", "steady states (or optima) along one axis");
    add_model_options(sweep, c);
    add_allocation_options(sweep, c);
    sweep->add_option("--axis", c.axis, "alpha | lambda | x | A");
    sweep->add_option("--start", c.start, "first grid value");
    sweep->add_option("--stop", c.stop, "last grid value");
    sweep->add_option("--steps", c.steps, "grid points, endpoints included");
    sweep->add_option("--objective", c.objective, "objective for axis A");
    add_output_options(sweep, c);

    CLI::App* opt = app.add_subcommand("optimize", "budgeted inspection policy");
    add_model_options(opt, c);
    opt->add_option("--objective", c.objective, "rumor-min | truth | truth-targeted | platform");
    opt->add_option("--A", c.budget, "inspection budget");
    add_output_options(opt, c);

    CLI::App* thr = app.add_subcommand("thresholds", "closed-form and numerically located thresholds");
    add_model_options(thr, c);
    add_output_options(thr, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    for (CLI::App* sub : app.get_subcommands())
        c.command = sub->get_name();

    set_jobs(c.jobs);
    io::Document doc = new_document(c);
    int code = kExitOk;
    try {
        code = dispatch(c, doc);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParamError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SolverError& e) {
        err << "numerical failure: " << e.what() << " (bracket [" << io::format_double(e.bracket_lo()) << ", "
            << io::format_double(e.bracket_hi()) << "])\n";
        return kExitNumerical;
    } catch (const IntegratorError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }

    const io::Format format = c.format == "json" ? io::Format::Json : io::Format::Csv;
    if (c.out) {
        std::ofstream file(*c.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open " << *c.out << " for writing\n";
            return kExitConfig;
        }
        io::write(file, doc, format);
    } else {
        io::write(out, doc, format);
    }
    if (code == kExitNumerical)
        err << "numerical failure: trajectory did not converge or stability check failed\n";
    return code;
}

} // namespace rumorsis::cli
