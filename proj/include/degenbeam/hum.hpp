#ifndef DEGENBEAM_HUM_HPP
#define DEGENBEAM_HUM_HPP

#include "degenbeam/observability.hpp"

namespace degenbeam
{
    /// Null-control problem data. u0 is the deflection datum in the weighted
    /// L^2 sense; u1 stands in for the dual velocity datum through its Riesz
    /// representative under the same weighted product (the pairing has no
    /// other concrete realization on the grid). Both are full node vectors.
    struct ControlProblem
    {
        std::vector<double> u0;
        std::vector<double> u1;
        double T = 0.0;
        double dt = 1e-3;
        int filter_modes = 10;
        double cg_tol = 1e-10;
        int max_iter = 500;
        double tikhonov = 0.0;
        bool allow_short_time = false;   // permit T <= T0 (records a warning)
    };

    struct HUMSolution
    {
        BeamState V_bar;                 // minimizer at time T
        TraceSeries control;             // f(t_k) = v_xx(t_k, 1) of the backward solve
        int iterations = 0;
        double cg_residual = 0.0;        // relative residual at exit
        double terminal_state_norm = 0.0;      // ||u(T)||_{1/a}
        double terminal_velocity_norm = 0.0;   // dual norm of u_t(T) on the filtered space
        double energy_reduction = 0.0;         // terminal energy vs uncontrolled terminal energy
        double initial_energy = 0.0;           // transposition energy of the filtered data
        double terminal_energy = 0.0;
        double uncontrolled_terminal_energy = 0.0;
        double control_cost = 0.0;             // int_0^T f^2 dt
        bool short_time_warning = false;
    };

    /// Thrown when CG fails to reach cg_tol within max_iter; carries the best
    /// iterate so callers can inspect how far the synthesis got.
    class ControlSynthesisError : public Error
    {
    public:
        ControlSynthesisError(const std::string & what, HUMSolution best)
            : Error(ErrorCode::ControlSynthesisFailed, what), best_iterate(std::move(best))
        {
        }

        HUMSolution best_iterate;
    };

    /// V_T |-> v_xx(.,1) of the backward solve from V_T, sampled on the time
    /// grid in forward order. Linear in V_T.
    TraceSeries observation_map(const BeamState & V_T, double T, double dt,
                                const BeamOperator & op, const WeightedQuadrature & quad,
                                const Grid & grid);

    /// Everything HUM needs for one (problem, discretization) pair: the
    /// filtered modal basis, its backward trace trajectories, and the
    /// assembled Gramian representing the bilinear form
    ///   Lambda(V, W) = int_0^T v_xx(t,1) w_xx(t,1) dt
    /// in energy-orthonormal coordinates. The controlled forward problem is
    /// never discretized directly; terminal data are read off through the
    /// transposition identity, which the discrete construction satisfies
    /// exactly (the forward controlled map is the algebraic transpose of the
    /// observation map).
    class HUMSystem
    {
    public:
        HUMSystem(const DegeneracyProfile & profile, const BeamOperator & op,
                  const WeightedQuadrature & quad, const Grid & grid,
                  const ControlProblem & problem);

        /// G c for coordinates c on the filtered basis.
        std::vector<double> gramian_apply(const std::vector<double> & coords) const;

        /// G applied to the projection of a full state.
        std::vector<double> gramian_apply(const BeamState & V_T) const;

        /// b_i = L(B_i) = <u1, w_i(0)> - <u0, (w_i)_t(0)>_{1/a} for the
        /// problem's data over the filtered basis.
        std::vector<double> rhs_functional() const;

        /// Terminal pair of the controlled problem, defined by duality: the
        /// coordinates d_i satisfy
        ///   <u_t(T), w0_i> - <u(T), w1_i>_{1/a} = L(B_i) - int f w_xx(.,1) dt
        /// exactly for every basis element, hence for every W in the span.
        struct TerminalPair
        {
            std::vector<double> duality_coords;
            double state_norm = 0.0;      // ||u(T)||_{1/a}
            double velocity_norm = 0.0;   // dual norm of u_t(T)
            double energy = 0.0;          // 1/2 (state^2 + velocity^2)
        };

        TerminalPair verify_null_control(const TraceSeries & control) const;

        /// Full synthesis: CG on (G + tikhonov I) x = b, reconstruction of the
        /// minimizer, the control trace, and the terminal verification.
        HUMSolution synthesize() const;

        const ModalBasis & modes() const { return _modes; }
        const FilteredTraceBasis & basis() const { return _basis; }
        const std::vector<double> & gramian() const { return _G; }
        bool short_time() const { return _short_time; }

    private:
        const BeamOperator & _op;
        const WeightedQuadrature & _quad;
        const Grid & _grid;
        ControlProblem _problem;
        ModalBasis _modes;
        FilteredTraceBasis _basis;
        std::vector<double> _G;
        bool _short_time = false;
    };

    /// One-call form of the pipeline above.
    HUMSolution synthesize_control(const DegeneracyProfile & profile, const BeamOperator & op,
                                   const WeightedQuadrature & quad, const Grid & grid,
                                   const ControlProblem & problem);
} // namespace degenbeam

#endif
