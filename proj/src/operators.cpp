#include "degenbeam/operators.hpp"

namespace degenbeam
{
    void BeamOperator::apply(const double * x, double * y) const
    {
        fourth_difference.apply(x, y);
        for (std::size_t i = 0; i < profile_values.size(); ++i)
        {
            y[i] *= profile_values[i];
        }
    }

    void BeamOperator::apply(const std::vector<double> & x, std::vector<double> & y) const
    {
        y.resize(x.size());
        apply(x.data(), y.data());
    }

    BeamOperator assemble_beam_operator(const DegeneracyProfile & profile, const Grid & grid)
    {
        const int n = grid.n_dof();
        const double h4 = grid.h * grid.h * grid.h * grid.h;

        BeamOperator op;
        op.h = grid.h;
        op.fourth_difference.diag.assign(n, 6.0 / h4);
        op.fourth_difference.off1.assign(n - 1, -4.0 / h4);
        op.fourth_difference.off2.assign(n - 2, 1.0 / h4);
        op.fourth_difference.diag.front() = 7.0 / h4;  // ghost u_{-1} = u_1
        op.fourth_difference.diag.back() = 7.0 / h4;   // ghost u_{N+1} = u_{N-1}

        op.profile_values.resize(n);
        for (int i = 0; i < n; ++i)
        {
            const double a_i = profile.a(grid.nodes[i + 1]);
            if (!(a_i > 0.0))
            {
                throw Error(ErrorCode::InvalidProfile, "a(x) must be positive at interior nodes");
            }
            op.profile_values[i] = a_i;
        }
        return op;
    }

    std::vector<double> second_differences(const std::vector<double> & u, const Grid & grid,
                                           VectorKind kind)
    {
        const int N = grid.n_cells;
        const double h2 = grid.h * grid.h;
        std::vector<double> d(N + 1);
        for (int i = 1; i < N; ++i)
        {
            d[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2;
        }
        if (kind == VectorKind::Clamped)
        {
            d[0] = 2.0 * u[1] / h2;
            d[N] = 2.0 * u[N - 1] / h2;
        }
        else
        {
            d[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
            d[N] = (2.0 * u[N] - 5.0 * u[N - 1] + 4.0 * u[N - 2] - u[N - 3]) / h2;
        }
        return d;
    }

    std::vector<double> first_differences(const std::vector<double> & u, const Grid & grid,
                                          VectorKind kind)
    {
        const int N = grid.n_cells;
        std::vector<double> g(N + 1);
        for (int i = 1; i < N; ++i)
        {
            g[i] = (u[i + 1] - u[i - 1]) / (2.0 * grid.h);
        }
        if (kind == VectorKind::Clamped)
        {
            g[0] = 0.0;
            g[N] = 0.0;
        }
        else
        {
            g[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * grid.h);
            g[N] = (3.0 * u[N] - 4.0 * u[N - 1] + u[N - 2]) / (2.0 * grid.h);
        }
        return g;
    }

    double h2_inner(const std::vector<double> & u, const std::vector<double> & v,
                    const Grid & grid, VectorKind kind)
    {
        const int N = grid.n_cells;
        const std::vector<double> du = second_differences(u, grid, kind);
        const std::vector<double> dv = second_differences(v, grid, kind);
        double s = 0.5 * (du[0] * dv[0] + du[N] * dv[N]);
        for (int i = 1; i < N; ++i)
        {
            s += du[i] * dv[i];
        }
        return s * grid.h;
    }

    double h2_seminorm_sq(const std::vector<double> & u, const Grid & grid, VectorKind kind)
    {
        return h2_inner(u, u, grid, kind);
    }

    double trace_y_xx_at_1(const std::vector<double> & u, const Grid & grid, VectorKind kind)
    {
        const int N = grid.n_cells;
        const double h2 = grid.h * grid.h;
        if (kind == VectorKind::Clamped)
        {
            return (-7.0 * u[N] + 8.0 * u[N - 1] - u[N - 2]) / (2.0 * h2);
        }
        return (2.0 * u[N] - 5.0 * u[N - 1] + 4.0 * u[N - 2] - u[N - 3]) / h2;
    }
} // namespace degenbeam
