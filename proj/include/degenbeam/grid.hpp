#ifndef DEGENBEAM_GRID_HPP
#define DEGENBEAM_GRID_HPP

#include <vector>

#include "degenbeam/errors.hpp"
#include "degenbeam/profiles.hpp"

namespace degenbeam
{
    /// Uniform mesh on [0,1] with N+1 nodes x_i = i/N. The unknowns of the
    /// clamped problem live at nodes 1..N-1; the end values are pinned to zero
    /// and the end slopes are eliminated through ghost reflection.
    struct Grid
    {
        int n_cells = 0;              // N
        double h = 0.0;               // 1/N
        std::vector<double> nodes;    // x_0 .. x_N

        int n_dof() const { return n_cells - 1; }
    };

    /// Throws GridTooCoarse for N < 8 (the trace stencil and the clamped
    /// elimination need a few genuinely interior nodes).
    Grid build_grid(int n_cells);

    /// Trapezoidal quadrature weights on the node set, with the x = 0 node
    /// excluded: the 1/a-weighted integrand is 0*inf there, and admissible
    /// functions vanish fast enough at 0 that the dropped panel is O(h).
    struct WeightedQuadrature
    {
        std::vector<double> weights_inv_a;   // for \int u^2 / a dx
        std::vector<double> weights_plain;   // for \int u^2 dx
        std::vector<double> a_nodes;         // a(x_i), i = 0..N (a_nodes[0] may be 0)
    };

    WeightedQuadrature make_weighted_quadrature(const DegeneracyProfile & profile, const Grid & grid);

    /// \int_0^1 u^2/a dx by the quadrature above. u must vanish at node 0
    /// (SingularAtOrigin otherwise).
    double weighted_l2_norm_sq(const std::vector<double> & u, const WeightedQuadrature & quad);

    /// Weighted L2 inner product <u, v>_{1/a} with the same weights.
    double weighted_l2_inner(const std::vector<double> & u, const std::vector<double> & v,
                             const WeightedQuadrature & quad);
} // namespace degenbeam

#endif
