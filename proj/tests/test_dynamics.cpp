#include "oracle.hpp"
#include "rumorsis/dynamics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace rumorsis;

namespace {

double max_diff(const DynState& a, const DynState& b)
{
    return std::max({std::abs(a.r00a - b.r00a), std::abs(a.r00na - b.r00na), std::abs(a.r10a - b.r10a),
                     std::abs(a.r11na - b.r11na)});
}

} // namespace

TEST_SUITE("derivatives")
{
    TEST_CASE("zero state is at rest")
    {
        const DynRates r = derivatives(DynState{}, ModelParams::from_lambda(3, 0.4), Allocation::uniform(0.3));
        CHECK(r.max_abs() == 0.0);
    }

    TEST_CASE("analytic steady state is at rest")
    {
        for (double lambda : {0.5, 2.0, 4.0}) {
            for (double x : {0.0, 0.3, 0.8}) {
                for (double alpha : {0.0, 0.2, 1.0}) {
                    const ModelParams p = ModelParams::from_lambda(lambda, x);
                    const Allocation a = Allocation::uniform(alpha);
                    const SteadyState ss = full_steady_state(p, a);
                    CHECK(derivatives(DynState::from_steady_state(ss), p, a).max_abs() < 1e-9);
                }
            }
        }
    }

    TEST_CASE("hand-evaluated rumor rate")
    {
        // theta1 = (1-x)(1-alpha) * 0.5 = 0.28; 0.5 * 0.28 - 0.5 * 0.5 = -0.11.
        const ModelParams p = ModelParams::from_rates(1.0, 1.0, 0.5, 0.3);
        DynState s;
        s.r11na = 0.5;
        const DynRates r = derivatives(s, p, Allocation::uniform(0.2));
        CHECK(r.r11na == doctest::Approx(-0.11).epsilon(1e-14));
        CHECK(r.r00na == 0.0);
        CHECK(r.r00a == doctest::Approx(0.28).epsilon(1e-14));
    }
}

TEST_SUITE("integrate")
{
    TEST_CASE("start at the steady state converges at once")
    {
        const ModelParams p = ModelParams::from_lambda(2, 0.3);
        const Allocation a = Allocation::uniform(0.2);
        const Trajectory tr = integrate(DynState::from_steady_state(full_steady_state(p, a)), p, a);
        CHECK(tr.status == TrajectoryStatus::Converged);
        CHECK(tr.steps <= 1);
    }

    TEST_CASE("seeded and high starts reach the analytic state")
    {
        const ModelParams p = ModelParams::from_lambda(2, 0.3);
        const Allocation a = Allocation::uniform(0.2);
        const double t0 = oracle::truth_uniform(2, 0.3, 0.2);
        for (double v : {kDefaultSeedLevel, 0.9}) {
            const Trajectory tr = integrate(DynState::uniform(v), p, a);
            REQUIRE(tr.status == TrajectoryStatus::Converged);
            const Prevalences th = prevalences(tr.final_state, p, a);
            CHECK(std::abs(th.theta0 - t0) < 1e-6);
            CHECK(std::abs(th.theta1 - 0.06) < 1e-6);
        }
    }

    TEST_CASE("limits match the steady state componentwise")
    {
        for (double lambda : {0.5, 1.5, 2.0, 3.0, 5.0}) {
            for (double x : {0.0, 0.3, 0.7, 1.0}) {
                for (double alpha : {0.0, 0.1, 0.5, 1.0}) {
                    const ModelParams p = ModelParams::from_lambda(lambda, x);
                    const Allocation a = Allocation::uniform(alpha);
                    const SteadyState ss = full_steady_state(p, a);
                    const Trajectory tr = integrate(DynState::uniform(kDefaultSeedLevel), p, a);
                    if (tr.status != TrajectoryStatus::Converged)
                        continue; // critical points decay algebraically
                    CAPTURE(lambda);
                    CAPTURE(x);
                    CAPTURE(alpha);
                    CHECK(max_diff(tr.final_state, DynState::from_steady_state(ss)) < 1e-6);
                }
            }
        }
    }

    TEST_CASE("zero start stays at zero")
    {
        const ModelParams p = ModelParams::from_lambda(4, 0.3);
        const Allocation a = Allocation::uniform(0.2);
        const Trajectory tr = integrate(DynState{}, p, a);
        CHECK(tr.status == TrajectoryStatus::Converged);
        for (const DynState& s : tr.samples)
            CHECK(max_diff(s, DynState{}) == 0.0);
    }

    TEST_CASE("rumor coordinate rises monotonically from below")
    {
        const ModelParams p = ModelParams::from_lambda(3, 0.2);
        const Allocation a = Allocation::uniform(0.1);
        DynState s = DynState::from_steady_state(full_steady_state(p, a));
        const double target = s.r11na;
        s.r11na = 0.2 * target;
        IntegratorConfig cfg;
        cfg.sample_interval = 0.01;
        const Trajectory tr = integrate(s, p, a, cfg);
        CHECK(tr.status == TrajectoryStatus::Converged);
        for (std::size_t i = 1; i < tr.samples.size(); ++i)
            CHECK(tr.samples[i].r11na >= tr.samples[i - 1].r11na);
        CHECK(std::abs(tr.final_state.r11na - target) < 1e-8);
    }

    TEST_CASE("common rescaling of nu and delta leaves the limit unchanged")
    {
        IntegratorConfig cfg;
        cfg.conv_tol = 1e-13;
        const Allocation a = Allocation::uniform(0.15);
        const ModelParams slow = ModelParams::from_rates(1.25, 1.0, 0.5, 0.3);
        const ModelParams fast = ModelParams::from_rates(1.25 * 3, 1.0, 0.5 * 3, 0.3);
        const Trajectory ts = integrate(DynState::uniform(0.01), slow, a, cfg);
        const Trajectory tf = integrate(DynState::uniform(0.01), fast, a, cfg);
        REQUIRE(ts.status == TrajectoryStatus::Converged);
        REQUIRE(tf.status == TrajectoryStatus::Converged);
        CHECK(max_diff(ts.final_state, tf.final_state) < 1e-9);
        CHECK(tf.final_state.t < ts.final_state.t);
    }

    TEST_CASE("states stay in the unit box")
    {
        const ModelParams p = ModelParams::from_lambda(6, 0.5);
        const Allocation a = Allocation::targeted(0.9, 0.1);
        IntegratorConfig cfg;
        cfg.dt = 0.2;
        cfg.sample_interval = 0.2;
        const Trajectory tr = integrate(DynState::uniform(0.99), p, a, cfg);
        for (const DynState& s : tr.samples) {
            for (double v : {s.r00a, s.r00na, s.r10a, s.r11na}) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }

    TEST_CASE("overshooting step without halvings is an error")
    {
        IntegratorConfig cfg;
        cfg.dt = 50.0;
        cfg.max_halvings = 0;
        CHECK_THROWS_AS(integrate(DynState::uniform(0.5), ModelParams::from_lambda(4, 0.3), Allocation::uniform(0.2), cfg),
                        IntegratorError);
        cfg.max_halvings = 30;
        CHECK_NOTHROW(integrate(DynState::uniform(0.5), ModelParams::from_lambda(4, 0.3), Allocation::uniform(0.2), cfg));
    }

    TEST_CASE("bad configuration")
    {
        IntegratorConfig cfg;
        cfg.dt = 0.0;
        CHECK_THROWS_AS(integrate(DynState{}, ModelParams::from_lambda(2, 0.3), Allocation::uniform(0.2), cfg), ParamError);
        cfg = {};
        cfg.t_max = -1.0;
        CHECK_THROWS_AS(cfg.validate(), ParamError);
        CHECK_THROWS_AS(integrate(DynState::uniform(1.5), ModelParams::from_lambda(2, 0.3), Allocation::uniform(0.2)),
                        ParamError);
    }

    TEST_CASE("horizon status")
    {
        IntegratorConfig cfg;
        cfg.t_max = 1.0;
        const Trajectory tr = integrate(DynState::uniform(kDefaultSeedLevel), ModelParams::from_lambda(2, 0.3),
                                        Allocation::uniform(0.2), cfg);
        CHECK(tr.status == TrajectoryStatus::Horizon);
        CHECK(tr.final_state.t == doctest::Approx(1.0));
    }
}

TEST_SUITE("global stability")
{
    TEST_CASE("subcritical limits are zero")
    {
        const ModelParams p = ModelParams::from_lambda(0.5, 0.4);
        const StabilityReport r = verify_global_stability(p, Allocation::uniform(0.3), 4);
        CHECK(r.passed);
        for (const DynState& s : r.limits)
            CHECK(max_diff(s, DynState{}) < 1e-9);
    }

    TEST_CASE("endemic interior point")
    {
        const ModelParams p = ModelParams::from_lambda(2, 0.3);
        const Allocation a = Allocation::uniform(0.2);
        const StabilityReport r = verify_global_stability(p, a, 8);
        CHECK(r.starts.size() == 9);
        CHECK(r.all_converged);
        CHECK(r.passed);
        CHECK(r.failure.empty());
        CHECK(r.max_pairwise_distance < kStabilityTol);
        const SteadyState ss = full_steady_state(p, a);
        for (const DynState& s : r.limits)
            CHECK(max_diff(s, DynState::from_steady_state(ss)) < 1e-6);
    }

    TEST_CASE("full inspection")
    {
        const ModelParams p = ModelParams::from_lambda(2, 0.3);
        const Allocation a = Allocation::uniform(1.0);
        const StabilityReport r = verify_global_stability(p, a, 8);
        CHECK(r.passed);
        CHECK(prevalences(r.limits.front(), p, a).theta0 == doctest::Approx(0.5).epsilon(1e-8));
    }

    TEST_CASE("non-convergence is reported, not thrown")
    {
        IntegratorConfig cfg;
        cfg.t_max = 0.5;
        const StabilityReport r = verify_global_stability(ModelParams::from_lambda(2, 0.3), Allocation::uniform(0.2), 3, cfg);
        CHECK_FALSE(r.all_converged);
        CHECK_FALSE(r.passed);
        CHECK_FALSE(r.failure.empty());
    }

    TEST_CASE("too few starts")
    {
        CHECK_THROWS_AS(verify_global_stability(ModelParams::from_lambda(2, 0.3), Allocation::uniform(0.2), 1), ParamError);
    }

    TEST_CASE("random starts are reproducible and interior")
    {
        const auto a = random_interior_states(5, 7);
        const auto b = random_interior_states(5, 7);
        REQUIRE(a.size() == 5);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(max_diff(a[i], b[i]) == 0.0);
            CHECK(a[i].r00a > 0.0);
            CHECK(a[i].r11na < 1.0);
        }
        CHECK(max_diff(a[0], random_interior_states(1, 8)[0]) > 0.0);
    }
}
