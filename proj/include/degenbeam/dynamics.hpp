#ifndef DEGENBEAM_DYNAMICS_HPP
#define DEGENBEAM_DYNAMICS_HPP

#include <functional>
#include <vector>

#include "degenbeam/operators.hpp"

namespace degenbeam
{
    /// Deflection / velocity pair on the full node set at time t. Solution
    /// states vanish at nodes 0 and N and carry clamped slopes through the
    /// ghost convention of the operator.
    struct BeamState
    {
        std::vector<double> y;
        std::vector<double> v;
        double t = 0.0;
    };

    /// Sampled boundary observation y_xx(t_k, 1), t_k = k dt, spanning [0,T].
    struct TraceSeries
    {
        std::vector<double> samples;
        double dt = 0.0;
        double T = 0.0;
    };

    struct Trajectory
    {
        std::vector<BeamState> states;
        std::vector<double> energies;
        TraceSeries trace;
    };

    /// E = 1/2 ( ||v||^2_{1/a} + ||y''||^2 ), with the clamped-end second
    /// difference stencil so that the value is the exact quadratic invariant
    /// of the midpoint stepper.
    double energy(const BeamState & state, const WeightedQuadrature & quad, const Grid & grid);

    /// Number of steps for an admissible (T, dt) pair; TimeGridMismatch unless
    /// round(T/dt) * dt hits T within 1e-12.
    int time_step_count(double T, double dt);

    /// One implicit-midpoint step of U' = (v, -a y''''):
    ///   (I - dt/2 A) U_{k+1} = (I + dt/2 A) U_k,
    /// reduced to one SPD pentadiagonal solve for y_{k+1} by eliminating
    /// v_{k+1}. The system matrix diag(1/a) + (dt^2/4) D4 is factored once at
    /// construction and reused for every step; it depends on dt only through
    /// dt^2, so the same stepper integrates in either time direction and
    /// step(dt) o step(-dt) is the identity up to roundoff.
    ///
    /// The working state lives in extended precision between steps. The
    /// bending form weights node-level noise by up to ||D4|| ~ 16/h^4, so a
    /// state rounded to double every step would wear the conserved energy
    /// down by ~sqrt(steps) * 1e-11; carrying the state wide keeps the drift
    /// below 1e-10 over any horizon used here. Exported states are double.
    class MidpointStepper
    {
    public:
        MidpointStepper(const BeamOperator & op, double dt);

        /// Set the internal state from the unknowns u_1..u_{N-1}.
        void load(const std::vector<double> & y, const std::vector<double> & v);

        /// Advance the internal state by one step.
        void step();

        /// Export the internal state.
        void read(std::vector<double> & y, std::vector<double> & v) const;

        /// load + step + read, for single-step use.
        void step_dof(std::vector<double> & y, std::vector<double> & v);

        double dt() const { return _dt; }

    private:
        double _dt;
        std::vector<long double> _a;
        BandedPenta<long double> _d4;
        BandedCholesky<long double> _factor;
        std::vector<long double> _y, _v, _t1, _rhs;
    };

    /// Single midpoint step on a full state (convenience wrapper; trajectory
    /// solves construct one stepper and reuse its factorization).
    BeamState step_midpoint(const BeamState & state, double dt, const BeamOperator & op,
                            const Grid & grid);

    /// Integrates the homogeneous clamped problem from `initial` over [0,T],
    /// recording the energy and the boundary trace at every step. States are
    /// stored unless store_states is false.
    Trajectory solve_homogeneous(const BeamState & initial, double T, double dt,
                                 const BeamOperator & op, const WeightedQuadrature & quad,
                                 const Grid & grid, bool store_states = true);

    /// Solution v of the backward problem with data (v0_T, v1_T) prescribed at
    /// time T, returned in forward time order on [0,T]. Realized as a forward
    /// solve from (v0_T, -v1_T) with the time index reversed, so the reversal
    /// identity is exact rather than approximate.
    Trajectory solve_backward(const BeamState & terminal, double T, double dt,
                              const BeamOperator & op, const WeightedQuadrature & quad,
                              const Grid & grid, bool store_states = true);

    /// Streaming forward integration on the unknowns: `observe(k, y, v)` is
    /// called at k = 0..nsteps with the state after k steps. Lets callers
    /// accumulate traces or space-time integrals without storing trajectories.
    void integrate_homogeneous(const BeamOperator & op, std::vector<double> & y_dof,
                               std::vector<double> & v_dof, double dt, int nsteps,
                               const std::function<void(int, const std::vector<double> &,
                                                        const std::vector<double> &)> & observe);

    /// Trapezoid-in-time integral of a sampled series with uniform spacing dt.
    double time_trapezoid(const std::vector<double> & samples, double dt);

    /// Full node vector from unknowns (zero boundary values).
    std::vector<double> dof_to_full(const std::vector<double> & u_dof, const Grid & grid);
    std::vector<double> full_to_dof(const std::vector<double> & u_full, const Grid & grid);

    /// Boundary trace from the unknowns of a clamped vector (u_N = 0 implied).
    double trace_from_dof(const std::vector<double> & u_dof, double h);
} // namespace degenbeam

#endif
