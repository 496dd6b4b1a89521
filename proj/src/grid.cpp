#include "degenbeam/grid.hpp"

#include <cmath>

namespace degenbeam
{
    Grid build_grid(int n_cells)
    {
        if (n_cells < 8)
        {
            throw Error(ErrorCode::GridTooCoarse,
                        "need N >= 8 cells, got " + std::to_string(n_cells));
        }
        Grid g;
        g.n_cells = n_cells;
        g.h = 1.0 / n_cells;
        g.nodes.resize(n_cells + 1);
        for (int i = 0; i <= n_cells; ++i)
        {
            g.nodes[i] = double(i) / n_cells;
        }
        return g;
    }

    WeightedQuadrature make_weighted_quadrature(const DegeneracyProfile & profile, const Grid & grid)
    {
        const int N = grid.n_cells;
        WeightedQuadrature q;
        q.weights_inv_a.assign(N + 1, 0.0);
        q.weights_plain.assign(N + 1, 0.0);
        q.a_nodes.resize(N + 1);

        q.a_nodes[0] = profile.a(0.0);
        for (int i = 1; i <= N; ++i)
        {
            const double a_i = profile.a(grid.nodes[i]);
            if (!(a_i > 0.0))
            {
                throw Error(ErrorCode::InvalidProfile,
                            "a(x) must be positive at interior nodes");
            }
            q.a_nodes[i] = a_i;
            const double w = (i == N) ? 0.5 * grid.h : grid.h;
            q.weights_plain[i] = w;
            q.weights_inv_a[i] = w / a_i;
        }
        return q;
    }

    double weighted_l2_norm_sq(const std::vector<double> & u, const WeightedQuadrature & quad)
    {
        return weighted_l2_inner(u, u, quad);
    }

    double weighted_l2_inner(const std::vector<double> & u, const std::vector<double> & v,
                             const WeightedQuadrature & quad)
    {
        if (u.size() != quad.weights_inv_a.size() || v.size() != quad.weights_inv_a.size())
        {
            throw Error(ErrorCode::InvalidProfile, "vector length does not match the grid");
        }
        if (u[0] != 0.0 || v[0] != 0.0)
        {
            throw Error(ErrorCode::SingularAtOrigin,
                        "1/a-weighted integrals require u(0) = 0");
        }
        double s = 0.0;
        for (std::size_t i = 1; i < u.size(); ++i)
        {
            s += quad.weights_inv_a[i] * u[i] * v[i];
        }
        return s;
    }
} // namespace degenbeam
