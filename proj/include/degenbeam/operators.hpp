#ifndef DEGENBEAM_OPERATORS_HPP
#define DEGENBEAM_OPERATORS_HPP

#include <vector>

#include "degenbeam/banded.hpp"
#include "degenbeam/grid.hpp"

namespace degenbeam
{
    /// Whether a node vector is a clamped solution vector (u = u_x = 0 at both
    /// ends, slopes realized by ghost reflection) or an arbitrary sample. The
    /// end stencils of the H^2 seminorm and of the boundary trace differ
    /// between the two cases.
    enum class VectorKind
    {
        Raw,
        Clamped,
    };

    /// Discrete u |-> a u'''' on the clamped unknowns u_1..u_{N-1}.
    ///
    /// The five-point fourth difference is applied at every interior node;
    /// u_0 = u_N = 0 and the ghost values u_{-1} = u_1, u_{N+1} = u_{N-1}
    /// (second-order elimination of u_x = 0) fold into the matrix, which makes
    /// the unscaled difference matrix symmetric: row 1 and row N-1 carry 7/h^4
    /// on the diagonal, all other rows are (1,-4,6,-4,1)/h^4. Row i is scaled
    /// by a(x_i), so diag(1/a) * matrix is the SPD form of the operator: the
    /// discrete counterpart of <Au,v>_{1/a} = int u'' v''.
    struct BeamOperator
    {
        SymPentaMatrix fourth_difference;   // unscaled, symmetric
        std::vector<double> profile_values; // a(x_i), i = 1..N-1
        double h = 0.0;

        std::size_t dim() const { return profile_values.size(); }

        /// y = diag(a) * fourth_difference * x on the unknowns.
        void apply(const double * x, double * y) const;
        void apply(const std::vector<double> & x, std::vector<double> & y) const;
    };

    BeamOperator assemble_beam_operator(const DegeneracyProfile & profile, const Grid & grid);

    /// \int_0^1 (u'')^2 dx with centered second differences at interior nodes,
    /// trapezoidal weights, and end values from one-sided stencils (Raw) or
    /// from the clamped ghost reflection (Clamped). For clamped vectors the
    /// result coincides exactly with the quadratic form h * u^T D4 u of the
    /// beam operator, which is what makes the midpoint stepper conserve the
    /// discrete energy to roundoff.
    double h2_seminorm_sq(const std::vector<double> & u, const Grid & grid,
                          VectorKind kind = VectorKind::Raw);

    /// Bilinear version of the above (same stencils and weights).
    double h2_inner(const std::vector<double> & u, const std::vector<double> & v,
                    const Grid & grid, VectorKind kind = VectorKind::Raw);

    /// Second-difference profile u''(x_i) on all nodes, end stencils per kind.
    std::vector<double> second_differences(const std::vector<double> & u, const Grid & grid,
                                           VectorKind kind);

    /// Centered first differences at interior nodes; end slopes are zero for
    /// Clamped vectors and one-sided second-order for Raw ones.
    std::vector<double> first_differences(const std::vector<double> & u, const Grid & grid,
                                          VectorKind kind);

    /// u''(1) to second order. Clamped vectors use nodes x_{N-2}, x_{N-1}, x_N
    /// together with the u_x(1) = 0 ghost relation:
    ///     (-7 u_N + 8 u_{N-1} - u_{N-2}) / (2 h^2);
    /// raw vectors use the plain one-sided stencil
    ///     (2 u_N - 5 u_{N-1} + 4 u_{N-2} - u_{N-3}) / h^2.
    double trace_y_xx_at_1(const std::vector<double> & u, const Grid & grid,
                           VectorKind kind = VectorKind::Clamped);
} // namespace degenbeam

#endif
