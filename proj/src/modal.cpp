#include "degenbeam/modal.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace degenbeam
{
    ModalBasis compute_modes(const BeamOperator & op, const Grid & grid, int count)
    {
        const int n = int(op.dim());
        if (count < 1 || count > n)
        {
            throw Error(ErrorCode::TooManyModes,
                        "mode count " + std::to_string(count) + " not in [1, " +
                            std::to_string(n) + "]");
        }

        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
        {
            A(i, i) = op.fourth_difference.diag[i];
            if (i + 1 < n)
            {
                A(i + 1, i) = A(i, i + 1) = op.fourth_difference.off1[i];
            }
            if (i + 2 < n)
            {
                A(i + 2, i) = A(i, i + 2) = op.fourth_difference.off2[i];
            }
            B(i, i) = 1.0 / op.profile_values[i];
        }

        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, B);
        if (solver.info() != Eigen::Success)
        {
            throw Error(ErrorCode::InternalSolverFailure, "generalized eigensolve failed");
        }

        ModalBasis basis;
        basis.h = grid.h;
        basis.lambdas.resize(count);
        basis.omegas.resize(count);
        basis.shapes.resize(count);
        basis.traces.resize(count);
        const double rescale = 1.0 / std::sqrt(grid.h);   // B-orthonormal -> M-orthonormal
        for (int k = 0; k < count; ++k)
        {
            basis.lambdas[k] = solver.eigenvalues()(k);
            basis.omegas[k] = std::sqrt(basis.lambdas[k]);
            basis.shapes[k].resize(n);
            for (int i = 0; i < n; ++i)
            {
                basis.shapes[k][i] = solver.eigenvectors()(i, k) * rescale;
            }
            // fix the sign so results do not depend on solver internals
            if (basis.shapes[k][0] < 0.0)
            {
                for (double & x : basis.shapes[k]) x = -x;
            }
            basis.traces[k] = trace_from_dof(basis.shapes[k], grid.h);
        }
        return basis;
    }

    double weighted_dot_dof(const std::vector<double> & u, const std::vector<double> & v,
                            const BeamOperator & op)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
        {
            s += u[i] * v[i] / op.profile_values[i];
        }
        return s * op.h;
    }

    FilteredTraceBasis solve_basis_trajectories(const ModalBasis & modes, const BeamOperator & op,
                                                double T, double dt)
    {
        const int nsteps = time_step_count(T, dt);
        const int m = modes.count();

        FilteredTraceBasis basis;
        basis.modes = &modes;
        basis.T = T;
        basis.dt = dt;
        basis.nsteps = nsteps;
        basis.trace_series.assign(2 * m, std::vector<double>(nsteps + 1));
        basis.w0_at_0.resize(2 * m);
        basis.w1_at_0.resize(2 * m);

        const std::size_t n = op.dim();
        for (int i = 0; i < 2 * m; ++i)
        {
            const int k = i / 2;
            std::vector<double> y(n, 0.0), v(n, 0.0);
            if (i % 2 == 0)
            {
                for (std::size_t j = 0; j < n; ++j)
                {
                    y[j] = modes.shapes[k][j] / modes.omegas[k];
                }
            }
            else
            {
                // backward data (0, phi_k): forward solve carries -phi_k
                for (std::size_t j = 0; j < n; ++j)
                {
                    v[j] = -modes.shapes[k][j];
                }
            }

            std::vector<double> & series = basis.trace_series[i];
            integrate_homogeneous(op, y, v, dt, nsteps,
                [&](int step, const std::vector<double> & yk, const std::vector<double> &)
                {
                    series[nsteps - step] = trace_from_dof(yk, op.h);
                });
            basis.w0_at_0[i] = y;                 // w_i(0)  = forward state at T
            basis.w1_at_0[i] = std::move(v);      // (w_i)_t(0) = -forward velocity at T
            for (double & x : basis.w1_at_0[i]) x = -x;
        }
        return basis;
    }

    std::vector<double> trace_gramian(const FilteredTraceBasis & basis)
    {
        const int nb = basis.basis_size();
        const int nsteps = basis.nsteps;
        std::vector<double> G(std::size_t(nb) * nb, 0.0);
        for (int i = 0; i < nb; ++i)
        {
            for (int j = i; j < nb; ++j)
            {
                const double * si = basis.trace_series[i].data();
                const double * sj = basis.trace_series[j].data();
                double s = 0.5 * (si[0] * sj[0] + si[nsteps] * sj[nsteps]);
                for (int k = 1; k < nsteps; ++k)
                {
                    s += si[k] * sj[k];
                }
                G[std::size_t(i) * nb + j] = G[std::size_t(j) * nb + i] = s * basis.dt;
            }
        }
        return G;
    }

    std::vector<double> project_state(const BeamState & state, const ModalBasis & modes,
                                      const BeamOperator & op, const Grid & grid)
    {
        const std::vector<double> y = full_to_dof(state.y, grid);
        const std::vector<double> v = full_to_dof(state.v, grid);
        std::vector<double> coords(2 * modes.count());
        for (int k = 0; k < modes.count(); ++k)
        {
            coords[2 * k] = modes.omegas[k] * weighted_dot_dof(y, modes.shapes[k], op);
            coords[2 * k + 1] = weighted_dot_dof(v, modes.shapes[k], op);
        }
        return coords;
    }

    BeamState reconstruct_state(const std::vector<double> & coords, const ModalBasis & modes,
                                const Grid & grid, double t)
    {
        const int m = modes.count();
        const std::size_t n = modes.shapes.empty() ? 0 : modes.shapes[0].size();
        std::vector<double> y(n, 0.0), v(n, 0.0);
        for (int k = 0; k < m; ++k)
        {
            const double cy = coords[2 * k] / modes.omegas[k];
            const double cv = coords[2 * k + 1];
            for (std::size_t i = 0; i < n; ++i)
            {
                y[i] += cy * modes.shapes[k][i];
                v[i] += cv * modes.shapes[k][i];
            }
        }
        BeamState s;
        s.y = dof_to_full(y, grid);
        s.v = dof_to_full(v, grid);
        s.t = t;
        return s;
    }
} // namespace degenbeam
