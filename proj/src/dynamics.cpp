#include "rumorsis/dynamics.hpp"

#include "rumorsis/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace rumorsis {

namespace {

constexpr double kRoundOff = 1e-12;

using Vec4 = std::array<double, 4>;

Vec4 to_vec(const DynState& s) { return {s.r00a, s.r00na, s.r10a, s.r11na}; }

DynState from_vec(const Vec4& v, double t) { return {v[0], v[1], v[2], v[3], t}; }

Vec4 rates_vec(const Vec4& v, const ModelParams& p, const Allocation& a)
{
    const DynRates r = derivatives(from_vec(v, 0.0), p, a);
    return {r.r00a, r.r00na, r.r10a, r.r11na};
}

Vec4 axpy(const Vec4& y, double h, const Vec4& k)
{
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

double max_abs(const Vec4& v)
{
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2]), std::abs(v[3])});
}

Vec4 rk4_step(const Vec4& y, const Vec4& k1, double h, const ModelParams& p, const Allocation& a)
{
    const Vec4 k2 = rates_vec(axpy(y, 0.5 * h, k1), p, a);
    const Vec4 k3 = rates_vec(axpy(y, 0.5 * h, k2), p, a);
    const Vec4 k4 = rates_vec(axpy(y, h, k3), p, a);
    Vec4 out;
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

bool inside_unit_box(const Vec4& v)
{
    return std::all_of(v.begin(), v.end(), [](double c) { return c >= -kRoundOff && c <= 1.0 + kRoundOff; });
}

void clamp_round_off(Vec4& v)
{
    for (double& c : v)
        c = std::clamp(c, 0.0, 1.0);
}

void validate_state(const DynState& s)
{
    for (double c : to_vec(s))
        if (!std::isfinite(c) || c < 0.0 || c > 1.0)
            throw ParamError("dynamic state fractions must lie in [0, 1]");
}

} // namespace

double DynRates::max_abs() const
{
    return std::max({std::abs(r00a), std::abs(r00na), std::abs(r10a), std::abs(r11na)});
}

void IntegratorConfig::validate() const
{
    if (!(dt > 0.0))
        throw ParamError("integrator dt must be > 0");
    if (t_max && !(*t_max > 0.0))
        throw ParamError("integrator t_max must be > 0");
    if (!(conv_tol > 0.0))
        throw ParamError("integrator conv_tol must be > 0");
    if (!(sample_interval > 0.0))
        throw ParamError("integrator sample_interval must be > 0");
    if (max_halvings < 0)
        throw ParamError("integrator max_halvings must be >= 0");
}

Prevalences prevalences(const DynState& s, const ModelParams& p, const Allocation& a)
{
    const double x = p.x();
    const double a0 = a.alpha0();
    const double a1 = a.alpha1();
    return {
        x * (a0 * s.r00a + (1.0 - a0) * s.r00na) + (1.0 - x) * a1 * s.r10a,
        (1.0 - x) * (1.0 - a1) * s.r11na,
    };
}

DynRates derivatives(const DynState& s, const ModelParams& p, const Allocation& a)
{
    const Prevalences th = prevalences(s, p, a);
    const double contact = p.k() * p.nu();
    const double delta = p.delta();
    const double both = th.theta0 + th.theta1;
    return {
        (1.0 - s.r00a) * contact * both - s.r00a * delta,
        (1.0 - s.r00na) * contact * th.theta0 - s.r00na * delta,
        (1.0 - s.r10a) * contact * both - s.r10a * delta,
        (1.0 - s.r11na) * contact * th.theta1 - s.r11na * delta,
    };
}

Trajectory integrate(const DynState& s0, const ModelParams& p, const Allocation& a, const IntegratorConfig& cfg)
{
    cfg.validate();
    validate_state(s0);

    const double horizon = cfg.horizon(p);
    double h = cfg.dt;
    Vec4 y = to_vec(s0);
    double t = s0.t;
    double next_sample = t + cfg.sample_interval;

    Trajectory traj;
    traj.samples.push_back(from_vec(y, t));

    for (;;) {
        const Vec4 k1 = rates_vec(y, p, a);
        traj.final_rate = max_abs(k1);
        if (traj.final_rate < cfg.conv_tol) {
            traj.status = TrajectoryStatus::Converged;
            break;
        }
        if (t >= horizon) {
            traj.status = TrajectoryStatus::Horizon;
            break;
        }

        const double step = std::min(h, horizon - t);
        Vec4 next = rk4_step(y, k1, step, p, a);
        int halvings = 0;
        double used = step;
        while (!inside_unit_box(next)) {
            if (halvings == cfg.max_halvings)
                throw IntegratorError("integrator left the unit box at t = " + std::to_string(t)
                                      + "; retry with a smaller dt");
            ++halvings;
            h *= 0.5;
            used = std::min(h, horizon - t);
            next = rk4_step(y, k1, used, p, a);
        }
        clamp_round_off(next);
        y = next;
        t += used;
        ++traj.steps;

        if (t >= next_sample) {
            traj.samples.push_back(from_vec(y, t));
            while (next_sample <= t)
                next_sample += cfg.sample_interval;
        }
    }

    traj.final_state = from_vec(y, t);
    if (traj.samples.back().t != t)
        traj.samples.push_back(traj.final_state);
    return traj;
}

std::vector<DynState> random_interior_states(int n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<DynState> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) {
        DynState s;
        // Stay strictly inside (0, 1): an exact-zero coordinate can pin a message at extinction.
        auto draw = [&] { return 0.01 + 0.98 * unit(gen); };
        s.r00a = draw();
        s.r00na = draw();
        s.r10a = draw();
        s.r11na = draw();
        out.push_back(s);
    }
    return out;
}

StabilityReport verify_global_stability(const ModelParams& p, const Allocation& a, int n_starts,
                                        const IntegratorConfig& cfg, std::uint64_t seed)
{
    if (n_starts < 2)
        throw ParamError("stability check needs at least 2 starts");

    StabilityReport report;
    report.starts.push_back(DynState::uniform(kDefaultSeedLevel));
    for (const DynState& s : random_interior_states(n_starts, seed))
        report.starts.push_back(s);

    const auto outcomes = kernels::integrate_many(report.starts, p, a, cfg);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.trajectory) {
            report.all_converged = false;
            if (report.failure.empty())
                report.failure = "start " + std::to_string(i) + ": " + o.error;
            report.limits.push_back(report.starts[i]);
            continue;
        }
        if (o.trajectory->status != TrajectoryStatus::Converged) {
            report.all_converged = false;
            if (report.failure.empty())
                report.failure = "start " + std::to_string(i) + " reached the horizon without converging";
        }
        report.limits.push_back(o.trajectory->final_state);
    }

    for (std::size_t i = 0; i < report.limits.size(); ++i) {
        for (std::size_t j = i + 1; j < report.limits.size(); ++j) {
            const Vec4 u = to_vec(report.limits[i]);
            const Vec4 v = to_vec(report.limits[j]);
            const double d = max_abs({u[0] - v[0], u[1] - v[1], u[2] - v[2], u[3] - v[3]});
            report.max_pairwise_distance = std::max(report.max_pairwise_distance, d);
        }
    }

    report.passed = report.all_converged && report.max_pairwise_distance < kStabilityTol;
    if (report.all_converged && !report.passed)
        report.failure = "limits differ by " + std::to_string(report.max_pairwise_distance);
    return report;
}

} // namespace rumorsis
