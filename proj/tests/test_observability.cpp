#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "degenbeam/config.hpp"
#include "degenbeam/observability.hpp"
#include "oracles.hpp"

using namespace degenbeam;

namespace
{
    struct Lab
    {
        DegeneracyProfile profile;
        Grid grid;
        WeightedQuadrature quad;
        BeamOperator op;

        Lab(double alpha, int N)
            : profile(make_power_profile(alpha, 1.0)),
              grid(build_grid(N)),
              quad(make_weighted_quadrature(profile, grid)),
              op(assemble_beam_operator(profile, grid))
        {
        }
    };

    BeamState bump_state(const Grid & g)
    {
        BeamState s;
        s.y.resize(g.n_cells + 1);
        s.v.assign(g.n_cells + 1, 0.0);
        for (int i = 0; i <= g.n_cells; ++i)
        {
            const double x = g.nodes[i];
            s.y[i] = x * x * (1.0 - x) * (1.0 - x);
        }
        return s;
    }

    BeamState zero_state(const Grid & g)
    {
        BeamState s;
        s.y.assign(g.n_cells + 1, 0.0);
        s.v.assign(g.n_cells + 1, 0.0);
        return s;
    }
} // namespace

TEST_CASE("identity residuals vanish on the zero trajectory")
{
    Lab lab(0.5, 64);
    const Trajectory traj = solve_homogeneous(zero_state(lab.grid), 0.5, 1e-2, lab.op,
                                              lab.quad, lab.grid);
    const IdentityReport first = identity_residual_first(traj, lab.profile, lab.quad, lab.grid);
    const IdentityReport second = identity_residual_second(traj, lab.profile, lab.quad, lab.grid);
    CHECK(first.lhs == 0.0);
    CHECK(first.rhs == 0.0);
    CHECK(first.relative_residual == 0.0);
    CHECK(second.relative_residual == 0.0);
}

TEST_CASE("identity residuals are small and shrink under refinement")
{
    double prev1 = 1e300, prev2 = 1e300;
    const struct { int N; double dt; } levels[] = {{100, 2e-3}, {200, 1e-3}, {400, 5e-4}};
    for (const auto & level : levels)
    {
        Lab lab(0.5, level.N);
        const Trajectory traj = solve_homogeneous(bump_state(lab.grid), 1.0, level.dt, lab.op,
                                                  lab.quad, lab.grid);
        const IdentityReport r1 = identity_residual_first(traj, lab.profile, lab.quad, lab.grid);
        const IdentityReport r2 = identity_residual_second(traj, lab.profile, lab.quad, lab.grid);
        CHECK(r1.relative_residual < prev1);
        CHECK(r2.relative_residual < prev2);
        prev1 = r1.relative_residual;
        prev2 = r2.relative_residual;
    }
    CHECK(prev1 <= 0.05);
    CHECK(prev2 <= 0.05);
}

TEST_CASE("identities hold for a non-power coefficient with varying x a'/a")
{
    // a = x(2-x): the log-derivative (2-2x)/(2-x) actually depends on x, so
    // this exercises the analytic-factor path the power profiles short-cut
    const DegeneracyProfile p = DegeneracyProfile::custom(
        [](double x) { return x * (2.0 - x); }, [](double x) { return 2.0 - 2.0 * x; });
    double prev1 = 1e300, prev2 = 1e300;
    for (int N : {100, 200})
    {
        const Grid grid = build_grid(N);
        const WeightedQuadrature quad = make_weighted_quadrature(p, grid);
        const BeamOperator op = assemble_beam_operator(p, grid);
        const Trajectory traj =
            solve_homogeneous(bump_state(grid), 1.0, 0.2 / N, op, quad, grid);
        const IdentityReport r1 = identity_residual_first(traj, p, quad, grid);
        const IdentityReport r2 = identity_residual_second(traj, p, quad, grid);
        CHECK(r1.relative_residual < prev1);
        CHECK(r2.relative_residual < prev2);
        prev1 = r1.relative_residual;
        prev2 = r2.relative_residual;
    }
    CHECK(prev1 <= 0.03);
    CHECK(prev2 <= 0.03);
}

TEST_CASE("identities agree in order of magnitude on a non-degenerate coefficient")
{
    const DegeneracyProfile flat = DegeneracyProfile::custom(
        [](double) { return 1.0; }, [](double) { return 0.0; });
    const Grid grid = build_grid(200);
    const WeightedQuadrature quad = make_weighted_quadrature(flat, grid);
    const BeamOperator op = assemble_beam_operator(flat, grid);

    const Trajectory traj = solve_homogeneous(bump_state(grid), 1.0, 1e-3, op, quad, grid);
    const IdentityReport r1 = identity_residual_first(traj, flat, quad, grid);
    const IdentityReport r2 = identity_residual_second(traj, flat, quad, grid);
    CHECK(r1.relative_residual < 0.05);
    CHECK(r2.relative_residual < 0.05);
    const double ratio = (r1.relative_residual + 1e-14) / (r2.relative_residual + 1e-14);
    CHECK(ratio > 0.01);
    CHECK(ratio < 100.0);
}

TEST_CASE("observability bound arithmetic")
{
    const auto [l1, u1] = observability_bounds({1.0, Regime::SD, 1.0}, 32.0);
    CHECK(l1 == doctest::Approx(16.0));
    CHECK(u1 == doctest::Approx(400.0));

    const auto [l2, u2] = observability_bounds({0.5, Regime::WD, 1.0}, 32.0 / 3.0);
    CHECK(l2 == doctest::Approx(0.0).scale(1.0));   // T0 is the vanishing point
    CHECK(u2 == doctest::Approx(144.0));

    const auto [l3, u3] = observability_bounds({1.0, Regime::SD, 4.0}, 10.0);
    CHECK(l3 == doctest::Approx(6.0));
    CHECK(u3 == doctest::Approx(124.0));
}

TEST_CASE("quotient rejects zero data and is scale invariant")
{
    Lab lab(0.5, 100);
    CHECK_THROWS_AS(quotient(zero_state(lab.grid), 1.0, 1e-2, lab.op, lab.quad, lab.grid),
                    Error);

    // scaling by a power of two is exact in floating point, so the quotient
    // must come back bit-identical
    BeamState s = bump_state(lab.grid);
    const double q1 = quotient(s, 2.0, 1e-2, lab.op, lab.quad, lab.grid);
    for (double & x : s.y) x *= -4.0;
    for (double & x : s.v) x *= -4.0;
    const double q2 = quotient(s, 2.0, 1e-2, lab.op, lab.quad, lab.grid);
    CHECK(q1 == doctest::Approx(q2).epsilon(1e-13));
}

TEST_CASE("single-mode quotient matches the modal closed form")
{
    // from (phi_1, 0) the discrete solution is exactly cos(k theta) phi_1, so
    // the quotient has the closed form trace(phi_1)^2 * S / (lambda_1 / 2)
    // with S the time trapezoid of cos^2(k theta)
    Lab lab(0.5, 100);
    const ModalBasis modes = compute_modes(lab.op, lab.grid, 1);

    const double T = 4.0, dt = 1e-3;
    BeamState initial;
    initial.y = dof_to_full(modes.shapes[0], lab.grid);
    initial.v.assign(lab.grid.n_cells + 1, 0.0);
    const double q = quotient(initial, T, dt, lab.op, lab.quad, lab.grid);

    const double theta = oracles::midpoint_theta(modes.omegas[0], dt);
    const int nsteps = int(std::round(T / dt));
    double S = 0.0;
    for (int k = 0; k <= nsteps; ++k)
    {
        const double c = std::cos(double(k) * theta);
        S += (k == 0 || k == nsteps) ? 0.5 * c * c : c * c;
    }
    S *= dt;
    const double trace_phi = modes.traces[0];
    const double oracle = trace_phi * trace_phi * S / (0.5 * modes.lambdas[0]);
    // the discrete energy of (phi_1, 0) is lambda_1/2 exactly; the trace
    // stencil is shared, so the only mismatch is roundoff
    CHECK(q == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("quotients of low-mode data stay inside the closed-form bracket")
{
    Lab lab(0.5, 100);
    const DegeneracyClass cls = classify(lab.profile);
    const double T0 = observability_time(cls);
    const TimeGrid tg = snap_time(2.0 * T0, 2e-3);
    const auto [lower, upper] = observability_bounds(cls, tg.T);
    CHECK(lower == doctest::Approx(16.0));

    const ModalBasis modes = compute_modes(lab.op, lab.grid, 8);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 10; ++trial)
    {
        std::vector<double> y(lab.op.dim(), 0.0), v(lab.op.dim(), 0.0);
        for (int k = 0; k < 8; ++k)
        {
            const double cy = gauss(rng), cv = gauss(rng);
            for (std::size_t i = 0; i < y.size(); ++i)
            {
                y[i] += cy * modes.shapes[k][i];
                v[i] += cv * modes.shapes[k][i];
            }
        }
        BeamState s;
        s.y = dof_to_full(y, lab.grid);
        s.v = dof_to_full(v, lab.grid);
        const double q = quotient(s, tg.T, tg.dt, lab.op, lab.quad, lab.grid);
        CHECK(q >= 0.9 * lower);
        CHECK(q <= 1.1 * upper);
    }
}

TEST_CASE("C_T estimate: coercivity, monotonicity, and sample consistency")
{
    Lab lab(0.5, 100);
    const DegeneracyClass cls = classify(lab.profile);
    const double T0 = observability_time(cls);
    const TimeGrid tg = snap_time(2.0 * T0, 2e-3);

    const ObservabilityReport rep =
        estimate_CT(lab.profile, lab.op, lab.grid, tg.T, tg.dt, 10, 50, 7);
    CHECK(rep.samples == 50);
    CHECK(int(rep.sample_quotients.size()) == 50);
    CHECK(rep.lower_bound == doctest::Approx(16.0));
    CHECK(rep.C_T_estimate >= 0.9 * rep.lower_bound);
    CHECK(rep.C_T_estimate <= rep.quotient_min + 1e-9);

    // doubling the horizon cannot shrink the estimate on the same subspace
    const TimeGrid tg2 = snap_time(4.0 * T0, 2e-3);
    const ObservabilityReport rep2 =
        estimate_CT(lab.profile, lab.op, lab.grid, tg2.T, tg2.dt, 10, 10, 7);
    CHECK(rep2.C_T_estimate >= rep.C_T_estimate);

    // the infimum over a larger span is no larger
    const ObservabilityReport rep5 =
        estimate_CT(lab.profile, lab.op, lab.grid, tg.T, tg.dt, 5, 10, 7);
    const ObservabilityReport rep1 =
        estimate_CT(lab.profile, lab.op, lab.grid, tg.T, tg.dt, 1, 10, 7);
    CHECK(rep.C_T_estimate <= rep5.C_T_estimate + 1e-9);
    CHECK(rep5.C_T_estimate <= rep1.C_T_estimate + 1e-9);

    // a one-mode subspace reproduces the fundamental quotient
    const ModalBasis modes = compute_modes(lab.op, lab.grid, 1);
    BeamState fundamental;
    fundamental.y = dof_to_full(modes.shapes[0], lab.grid);
    fundamental.v.assign(lab.grid.n_cells + 1, 0.0);
    const double q1 = quotient(fundamental, tg.T, tg.dt, lab.op, lab.quad, lab.grid);
    CHECK(rep1.C_T_estimate == doctest::Approx(q1).epsilon(0.02));

    CHECK_THROWS_AS(
        estimate_CT(lab.profile, lab.op, lab.grid, tg.T, tg.dt, 1000, 1, 7), Error);
}
