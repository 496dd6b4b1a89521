#include "degenbeam/dynamics.hpp"

#include <cmath>

namespace degenbeam
{
    double energy(const BeamState & state, const WeightedQuadrature & quad, const Grid & grid)
    {
        return 0.5 * (weighted_l2_norm_sq(state.v, quad) +
                      h2_seminorm_sq(state.y, grid, VectorKind::Clamped));
    }

    int time_step_count(double T, double dt)
    {
        if (!(T > 0.0) || !(dt > 0.0) || dt > T)
        {
            throw Error(ErrorCode::TimeGridMismatch, "need 0 < dt <= T");
        }
        const double steps = std::round(T / dt);
        if (std::abs(steps * dt - T) > 1e-12)
        {
            throw Error(ErrorCode::TimeGridMismatch,
                        "T is not an integer multiple of dt (within 1e-12)");
        }
        return int(steps);
    }

    namespace
    {
        BandedPenta<long double> widen(const SymPentaMatrix & m)
        {
            BandedPenta<long double> out;
            out.diag.assign(m.diag.begin(), m.diag.end());
            out.off1.assign(m.off1.begin(), m.off1.end());
            out.off2.assign(m.off2.begin(), m.off2.end());
            return out;
        }
    } // namespace

    MidpointStepper::MidpointStepper(const BeamOperator & op, double dt)
        : _dt(dt),
          _a(op.profile_values.begin(), op.profile_values.end()),
          _d4(widen(op.fourth_difference)),
          _factor([&]
          {
              BandedPenta<long double> P = widen(op.fourth_difference);
              const long double c = 0.25L * (long double)dt * (long double)dt;
              for (std::size_t i = 0; i < P.size(); ++i)
              {
                  P.diag[i] = c * P.diag[i] + 1.0L / (long double)op.profile_values[i];
              }
              for (long double & x : P.off1) x *= c;
              for (long double & x : P.off2) x *= c;
              return BandedCholesky<long double>(P);
          }())
    {
        const std::size_t n = op.dim();
        _y.assign(n, 0.0L);
        _v.assign(n, 0.0L);
        _t1.resize(n);
        _rhs.resize(n);
    }

    void MidpointStepper::load(const std::vector<double> & y, const std::vector<double> & v)
    {
        _y.assign(y.begin(), y.end());
        _v.assign(v.begin(), v.end());
    }

    void MidpointStepper::step()
    {
        const std::size_t n = _y.size();
        const long double half = 0.5L * (long double)_dt;

        _d4.apply(_y.data(), _t1.data());
        for (std::size_t i = 0; i < n; ++i)
        {
            const long double rv = _v[i] - half * _a[i] * _t1[i];
            _rhs[i] = (_y[i] + half * _v[i] + half * rv) / _a[i];
            _v[i] = rv;
        }
        _factor.solve(_rhs.data());
        _d4.apply(_rhs.data(), _t1.data());
        for (std::size_t i = 0; i < n; ++i)
        {
            _y[i] = _rhs[i];
            _v[i] -= half * _a[i] * _t1[i];
        }
    }

    void MidpointStepper::read(std::vector<double> & y, std::vector<double> & v) const
    {
        y.assign(_y.begin(), _y.end());
        v.assign(_v.begin(), _v.end());
    }

    void MidpointStepper::step_dof(std::vector<double> & y, std::vector<double> & v)
    {
        load(y, v);
        step();
        read(y, v);
    }

    BeamState step_midpoint(const BeamState & state, double dt, const BeamOperator & op,
                            const Grid & grid)
    {
        MidpointStepper stepper(op, dt);
        std::vector<double> y = full_to_dof(state.y, grid);
        std::vector<double> v = full_to_dof(state.v, grid);
        stepper.step_dof(y, v);
        BeamState out;
        out.y = dof_to_full(y, grid);
        out.v = dof_to_full(v, grid);
        out.t = state.t + dt;
        return out;
    }

    void integrate_homogeneous(const BeamOperator & op, std::vector<double> & y_dof,
                               std::vector<double> & v_dof, double dt, int nsteps,
                               const std::function<void(int, const std::vector<double> &,
                                                        const std::vector<double> &)> & observe)
    {
        MidpointStepper stepper(op, dt);
        stepper.load(y_dof, v_dof);
        observe(0, y_dof, v_dof);
        for (int k = 1; k <= nsteps; ++k)
        {
            stepper.step();
            stepper.read(y_dof, v_dof);
            observe(k, y_dof, v_dof);
        }
    }

    Trajectory solve_homogeneous(const BeamState & initial, double T, double dt,
                                 const BeamOperator & op, const WeightedQuadrature & quad,
                                 const Grid & grid, bool store_states)
    {
        const int nsteps = time_step_count(T, dt);

        Trajectory traj;
        traj.energies.resize(nsteps + 1);
        traj.trace.samples.resize(nsteps + 1);
        traj.trace.dt = dt;
        traj.trace.T = T;
        if (store_states)
        {
            traj.states.reserve(nsteps + 1);
        }

        std::vector<double> y = full_to_dof(initial.y, grid);
        std::vector<double> v = full_to_dof(initial.v, grid);
        integrate_homogeneous(op, y, v, dt, nsteps,
            [&](int k, const std::vector<double> & yk, const std::vector<double> & vk)
            {
                BeamState s;
                s.y = dof_to_full(yk, grid);
                s.v = dof_to_full(vk, grid);
                s.t = k * dt;
                traj.energies[k] = energy(s, quad, grid);
                traj.trace.samples[k] = trace_y_xx_at_1(s.y, grid, VectorKind::Clamped);
                if (store_states)
                {
                    traj.states.push_back(std::move(s));
                }
            });
        return traj;
    }

    Trajectory solve_backward(const BeamState & terminal, double T, double dt,
                              const BeamOperator & op, const WeightedQuadrature & quad,
                              const Grid & grid, bool store_states)
    {
        BeamState flipped = terminal;
        for (double & x : flipped.v) x = -x;
        flipped.t = 0.0;

        Trajectory fwd = solve_homogeneous(flipped, T, dt, op, quad, grid, store_states);
        const int nsteps = int(fwd.energies.size()) - 1;

        Trajectory traj;
        traj.energies.resize(nsteps + 1);
        traj.trace.samples.resize(nsteps + 1);
        traj.trace.dt = dt;
        traj.trace.T = T;
        for (int k = 0; k <= nsteps; ++k)
        {
            traj.energies[k] = fwd.energies[nsteps - k];
            traj.trace.samples[k] = fwd.trace.samples[nsteps - k];
        }
        if (store_states)
        {
            traj.states.resize(nsteps + 1);
            for (int k = 0; k <= nsteps; ++k)
            {
                BeamState s = std::move(fwd.states[nsteps - k]);
                for (double & x : s.v) x = -x;
                s.t = k * dt;
                traj.states[k] = std::move(s);
            }
        }
        return traj;
    }

    double time_trapezoid(const std::vector<double> & samples, double dt)
    {
        if (samples.size() < 2)
        {
            return 0.0;
        }
        double s = 0.5 * (samples.front() + samples.back());
        for (std::size_t k = 1; k + 1 < samples.size(); ++k)
        {
            s += samples[k];
        }
        return s * dt;
    }

    std::vector<double> dof_to_full(const std::vector<double> & u_dof, const Grid & grid)
    {
        std::vector<double> full(grid.n_cells + 1, 0.0);
        for (int i = 0; i < grid.n_dof(); ++i)
        {
            full[i + 1] = u_dof[i];
        }
        return full;
    }

    std::vector<double> full_to_dof(const std::vector<double> & u_full, const Grid & grid)
    {
        if (int(u_full.size()) != grid.n_cells + 1)
        {
            throw std::invalid_argument("state length does not match the grid");
        }
        return std::vector<double>(u_full.begin() + 1, u_full.end() - 1);
    }

    double trace_from_dof(const std::vector<double> & u_dof, double h)
    {
        const std::size_t n = u_dof.size();
        return (8.0 * u_dof[n - 1] - u_dof[n - 2]) / (2.0 * h * h);
    }
} // namespace degenbeam
