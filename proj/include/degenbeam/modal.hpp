#ifndef DEGENBEAM_MODAL_HPP
#define DEGENBEAM_MODAL_HPP

#include <vector>

#include "degenbeam/dynamics.hpp"

namespace degenbeam
{
    /// Lowest eigenpairs of the generalized problem D4 phi = lambda (1/a) phi,
    /// i.e. of the beam operator a d^4/dx^4 made self-adjoint under the
    /// discrete 1/a-weighted inner product  <u,v>_M = h sum u_i v_i / a_i.
    /// Shapes are M-orthonormal, so  h phi_j^T D4 phi_k = lambda_j delta_jk.
    struct ModalBasis
    {
        std::vector<double> lambdas;                // ascending
        std::vector<double> omegas;                 // sqrt(lambda)
        std::vector<std::vector<double>> shapes;    // unknowns u_1..u_{N-1}
        std::vector<double> traces;                 // phi_k''(1)
        double h = 0.0;

        int count() const { return int(lambdas.size()); }
    };

    /// Dense generalized symmetric eigensolve of the pentadiagonal pair.
    /// Throws TooManyModes if count exceeds the number of unknowns.
    ModalBasis compute_modes(const BeamOperator & op, const Grid & grid, int count);

    /// <u, v>_M on the unknowns.
    double weighted_dot_dof(const std::vector<double> & u, const std::vector<double> & v,
                            const BeamOperator & op);

    /// The 2m-dimensional invariant subspace spanned by the lowest m modes of
    /// the first-order generator, with the energy-orthonormal state basis
    ///   B_{2k}   = (phi_k / omega_k, 0)      (deflection direction)
    ///   B_{2k+1} = (0, phi_k)                (velocity direction).
    /// Holds everything HUM and the observability estimate need per (T, dt):
    /// the boundary trace series of the backward solve from each basis state
    /// (in forward time order) and the corresponding state at t = 0.
    struct FilteredTraceBasis
    {
        const ModalBasis * modes = nullptr;
        double T = 0.0;
        double dt = 0.0;
        int nsteps = 0;
        std::vector<std::vector<double>> trace_series;  // 2m series, length nsteps+1
        std::vector<std::vector<double>> w0_at_0;       // w_i(0) on the unknowns
        std::vector<std::vector<double>> w1_at_0;       // (w_i)_t(0) on the unknowns

        int basis_size() const { return int(trace_series.size()); }
    };

    FilteredTraceBasis solve_basis_trajectories(const ModalBasis & modes, const BeamOperator & op,
                                                double T, double dt);

    /// Gramian G_ij = int_0^T f_i f_j dt of the basis traces (trapezoid in
    /// time). Since the basis is energy-orthonormal with E(B_i) = 1/2, the
    /// observability quotient of V = sum c_i B_i is 2 c^T G c / |c|^2.
    std::vector<double> trace_gramian(const FilteredTraceBasis & basis);   // row-major 2m x 2m

    /// Projection of a full state onto the filtered basis (energy inner
    /// product coordinates) and the reconstruction from coordinates.
    std::vector<double> project_state(const BeamState & state, const ModalBasis & modes,
                                      const BeamOperator & op, const Grid & grid);
    BeamState reconstruct_state(const std::vector<double> & coords, const ModalBasis & modes,
                                const Grid & grid, double t);
} // namespace degenbeam

#endif
