#include "degenbeam/hum.hpp"

#include <cmath>

namespace degenbeam
{
    TraceSeries observation_map(const BeamState & V_T, double T, double dt,
                                const BeamOperator & op, const WeightedQuadrature & quad,
                                const Grid & grid)
    {
        return solve_backward(V_T, T, dt, op, quad, grid, false).trace;
    }

    HUMSystem::HUMSystem(const DegeneracyProfile & profile, const BeamOperator & op,
                         const WeightedQuadrature & quad, const Grid & grid,
                         const ControlProblem & problem)
        : _op(op), _quad(quad), _grid(grid), _problem(problem)
    {
        if (problem.filter_modes < 1)
        {
            throw Error(ErrorCode::ConfigError, "filter_modes must be >= 1");
        }
        if (!(problem.cg_tol > 0.0) || problem.max_iter < 1)
        {
            throw Error(ErrorCode::ConfigError, "cg_tol must be positive and max_iter >= 1");
        }

        const double T0 = observability_time(classify(profile));
        _short_time = !(problem.T > T0);
        if (_short_time && !problem.allow_short_time)
        {
            throw Error(ErrorCode::ConfigError,
                        "control horizon T = " + std::to_string(problem.T) +
                            " does not exceed T0 = " + std::to_string(T0) +
                            " (set the short-time override to proceed)");
        }

        _modes = compute_modes(op, grid, problem.filter_modes);
        _basis = solve_basis_trajectories(_modes, op, problem.T, problem.dt);
        _G = trace_gramian(_basis);
    }

    std::vector<double> HUMSystem::gramian_apply(const std::vector<double> & coords) const
    {
        const std::size_t nb = _basis.basis_size();
        std::vector<double> out(nb, 0.0);
        for (std::size_t i = 0; i < nb; ++i)
        {
            double s = 0.0;
            for (std::size_t j = 0; j < nb; ++j)
            {
                s += _G[i * nb + j] * coords[j];
            }
            out[i] = s;
        }
        return out;
    }

    std::vector<double> HUMSystem::gramian_apply(const BeamState & V_T) const
    {
        return gramian_apply(project_state(V_T, _modes, _op, _grid));
    }

    std::vector<double> HUMSystem::rhs_functional() const
    {
        const std::vector<double> u0 = full_to_dof(_problem.u0, _grid);
        const std::vector<double> u1 = full_to_dof(_problem.u1, _grid);
        const int nb = _basis.basis_size();
        std::vector<double> b(nb);
        for (int i = 0; i < nb; ++i)
        {
            b[i] = weighted_dot_dof(u1, _basis.w0_at_0[i], _op) -
                   weighted_dot_dof(u0, _basis.w1_at_0[i], _op);
        }
        return b;
    }

    HUMSystem::TerminalPair HUMSystem::verify_null_control(const TraceSeries & control) const
    {
        if (int(control.samples.size()) != _basis.nsteps + 1 ||
            std::abs(control.dt - _basis.dt) > 1e-12 * std::abs(_basis.dt))
        {
            throw Error(ErrorCode::TimeGridMismatch,
                        "control is not sampled on the problem's time grid");
        }

        const std::vector<double> b = rhs_functional();
        const int nb = _basis.basis_size();

        TerminalPair out;
        out.duality_coords.resize(nb);
        std::vector<double> prod(control.samples.size());
        for (int i = 0; i < nb; ++i)
        {
            for (std::size_t k = 0; k < prod.size(); ++k)
            {
                prod[k] = control.samples[k] * _basis.trace_series[i][k];
            }
            out.duality_coords[i] = b[i] - time_trapezoid(prod, control.dt);
        }

        double vel2 = 0.0, state2 = 0.0;
        for (int k = 0; k < _modes.count(); ++k)
        {
            vel2 += out.duality_coords[2 * k] * out.duality_coords[2 * k];
            state2 += out.duality_coords[2 * k + 1] * out.duality_coords[2 * k + 1];
        }
        out.velocity_norm = std::sqrt(vel2);
        out.state_norm = std::sqrt(state2);
        out.energy = 0.5 * (vel2 + state2);
        return out;
    }

    namespace
    {
        /// CG on (G + tau I) x = b with relative residual stopping rule.
        struct CGResult
        {
            std::vector<double> x;
            int iterations = 0;
            double relative_residual = 0.0;
            bool converged = false;
        };

        CGResult conjugate_gradient(const HUMSystem & sys, const std::vector<double> & b,
                                    double tau, double tol, int max_iter)
        {
            const std::size_t n = b.size();
            CGResult res;
            res.x.assign(n, 0.0);

            double b_norm = 0.0;
            for (double v : b) b_norm += v * v;
            b_norm = std::sqrt(b_norm);
            if (b_norm == 0.0)
            {
                res.converged = true;
                return res;
            }

            std::vector<double> r = b;
            std::vector<double> p = b;
            double rs = b_norm * b_norm;
            for (int it = 0; it < max_iter; ++it)
            {
                std::vector<double> Gp = sys.gramian_apply(p);
                double pGp = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                {
                    Gp[i] += tau * p[i];
                    pGp += p[i] * Gp[i];
                }
                if (!(pGp > 0.0))
                {
                    break;   // lost positive definiteness; report best iterate
                }
                const double alpha = rs / pGp;
                double rs_new = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                {
                    res.x[i] += alpha * p[i];
                    r[i] -= alpha * Gp[i];
                    rs_new += r[i] * r[i];
                }
                res.iterations = it + 1;
                if (std::sqrt(rs_new) <= tol * b_norm)
                {
                    rs = rs_new;
                    res.converged = true;
                    break;
                }
                const double beta = rs_new / rs;
                for (std::size_t i = 0; i < n; ++i)
                {
                    p[i] = r[i] + beta * p[i];
                }
                rs = rs_new;
            }
            res.relative_residual = std::sqrt(rs) / b_norm;
            return res;
        }
    } // namespace

    HUMSolution HUMSystem::synthesize() const
    {
        const std::vector<double> b = rhs_functional();
        const CGResult cg =
            conjugate_gradient(*this, b, _problem.tikhonov, _problem.cg_tol, _problem.max_iter);

        HUMSolution sol;
        sol.iterations = cg.iterations;
        sol.cg_residual = cg.relative_residual;
        sol.short_time_warning = _short_time;

        sol.V_bar = reconstruct_state(cg.x, _modes, _grid, _problem.T);
        sol.control = observation_map(sol.V_bar, _problem.T, _problem.dt, _op, _quad, _grid);

        std::vector<double> f2(sol.control.samples.size());
        for (std::size_t k = 0; k < f2.size(); ++k)
        {
            f2[k] = sol.control.samples[k] * sol.control.samples[k];
        }
        sol.control_cost = time_trapezoid(f2, _problem.dt);

        const TerminalPair terminal = verify_null_control(sol.control);
        sol.terminal_state_norm = terminal.state_norm;
        sol.terminal_velocity_norm = terminal.velocity_norm;
        sol.terminal_energy = terminal.energy;

        // transposition energy of the filtered data and of the free (f = 0) run
        const std::vector<double> u0 = full_to_dof(_problem.u0, _grid);
        const std::vector<double> u1 = full_to_dof(_problem.u1, _grid);
        double e0 = 0.0;
        for (int k = 0; k < _modes.count(); ++k)
        {
            const double c0 = weighted_dot_dof(u0, _modes.shapes[k], _op);
            const double c1 = weighted_dot_dof(u1, _modes.shapes[k], _op);
            e0 += c0 * c0 + c1 * c1 / _modes.lambdas[k];
        }
        sol.initial_energy = 0.5 * e0;
        double b2 = 0.0;
        for (double v : b) b2 += v * v;
        sol.uncontrolled_terminal_energy = 0.5 * b2;
        sol.energy_reduction = sol.uncontrolled_terminal_energy > 0.0
                                   ? sol.terminal_energy / sol.uncontrolled_terminal_energy
                                   : 0.0;

        if (!cg.converged)
        {
            throw ControlSynthesisError(
                "CG reached " + std::to_string(cg.iterations) + " iterations with residual " +
                    std::to_string(cg.relative_residual) + " > tol",
                std::move(sol));
        }
        return sol;
    }

    HUMSolution synthesize_control(const DegeneracyProfile & profile, const BeamOperator & op,
                                   const WeightedQuadrature & quad, const Grid & grid,
                                   const ControlProblem & problem)
    {
        return HUMSystem(profile, op, quad, grid, problem).synthesize();
    }
} // namespace degenbeam
