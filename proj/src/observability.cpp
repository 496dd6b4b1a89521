#include "degenbeam/observability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace degenbeam
{
    namespace
    {
        constexpr double residual_floor = 1e-14;

        struct SpaceIntegrals
        {
            double kinetic_weighted = 0.0;   // first identity:  (x/a)(2 - x a'/a) y_t^2
            double bending_weighted = 0.0;   //                  x y_xx^2
            double kinetic_plain = 0.0;      // second identity: (1/a)(1 - x a'/a) y_t^2
            double bending_plain = 0.0;      //                  y_xx^2
        };

        SpaceIntegrals space_terms(const BeamState & s, const DegeneracyProfile & profile,
                                   const WeightedQuadrature & quad, const Grid & grid)
        {
            const int N = grid.n_cells;
            const std::vector<double> d = second_differences(s.y, grid, VectorKind::Clamped);
            SpaceIntegrals out;
            for (int i = 1; i <= N; ++i)
            {
                const double x = grid.nodes[i];
                const double ld = profile.log_derivative(x);
                const double wv = quad.weights_inv_a[i] * s.v[i] * s.v[i];
                out.kinetic_weighted += wv * x * (2.0 - ld);
                out.kinetic_plain += wv * (1.0 - ld);
                const double wp = (i == N) ? 0.5 * grid.h : grid.h;
                out.bending_weighted += wp * x * d[i] * d[i];
                out.bending_plain += wp * d[i] * d[i];
            }
            // x = 0 panel of the plain bending integral (the weighted terms all
            // vanish there)
            out.bending_plain += 0.5 * grid.h * d[0] * d[0];
            return out;
        }

        double boundary_bracket(const BeamState & s, const WeightedQuadrature & quad,
                                const Grid & grid, IdentityKind which)
        {
            const int N = grid.n_cells;
            const std::vector<double> g = first_differences(s.y, grid, VectorKind::Clamped);
            double sum = 0.0;
            for (int i = 1; i <= N; ++i)
            {
                const double x = grid.nodes[i];
                const double factor = which == IdentityKind::First ? x * x : x;
                sum += quad.weights_inv_a[i] * factor * s.v[i] * g[i];
            }
            return sum;
        }

        IdentityReport identity_residual(const Trajectory & traj, const DegeneracyProfile & profile,
                                         const WeightedQuadrature & quad, const Grid & grid,
                                         IdentityKind which)
        {
            if (traj.states.empty())
            {
                throw std::invalid_argument("identity evaluation needs a trajectory with states");
            }
            const double dt = traj.trace.dt;

            std::vector<double> tr2(traj.trace.samples.size());
            for (std::size_t k = 0; k < tr2.size(); ++k)
            {
                tr2[k] = traj.trace.samples[k] * traj.trace.samples[k];
            }
            const double lhs = 0.5 * time_trapezoid(tr2, dt);

            std::vector<double> kin(traj.states.size()), bend(traj.states.size());
            for (std::size_t k = 0; k < traj.states.size(); ++k)
            {
                const SpaceIntegrals terms = space_terms(traj.states[k], profile, quad, grid);
                kin[k] = which == IdentityKind::First ? terms.kinetic_weighted : terms.kinetic_plain;
                bend[k] = which == IdentityKind::First ? terms.bending_weighted : terms.bending_plain;
            }
            const double bracket = boundary_bracket(traj.states.back(), quad, grid, which) -
                                   boundary_bracket(traj.states.front(), quad, grid, which);
            const double bending_factor = which == IdentityKind::First ? 3.0 : 1.5;
            const double rhs = bracket + 0.5 * time_trapezoid(kin, dt) +
                               bending_factor * time_trapezoid(bend, dt);

            IdentityReport report;
            report.lhs = lhs;
            report.rhs = rhs;
            report.which = which;
            report.relative_residual =
                std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), residual_floor});
            return report;
        }
    } // namespace

    IdentityReport identity_residual_first(const Trajectory & traj,
                                           const DegeneracyProfile & profile,
                                           const WeightedQuadrature & quad, const Grid & grid)
    {
        return identity_residual(traj, profile, quad, grid, IdentityKind::First);
    }

    IdentityReport identity_residual_second(const Trajectory & traj,
                                            const DegeneracyProfile & profile,
                                            const WeightedQuadrature & quad, const Grid & grid)
    {
        return identity_residual(traj, profile, quad, grid, IdentityKind::Second);
    }

    std::pair<double, double> observability_bounds(const DegeneracyClass & cls, double T)
    {
        const double m_lower = std::max({1.0, 4.0 / cls.a_at_1, 4.0 * cls.K / cls.a_at_1});
        const double m_upper = std::max(4.0 / cls.a_at_1, 1.0);
        return {T * (2.0 - cls.K) - 4.0 * m_lower, 12.0 * T + 4.0 * m_upper};
    }

    double quotient(const BeamState & initial, double T, double dt, const BeamOperator & op,
                    const WeightedQuadrature & quad, const Grid & grid)
    {
        const double E0 = energy(initial, quad, grid);
        if (!(E0 > 0.0))
        {
            throw Error(ErrorCode::ZeroEnergyData, "observability quotient needs E(0) > 0");
        }
        const int nsteps = time_step_count(T, dt);

        std::vector<double> y = full_to_dof(initial.y, grid);
        std::vector<double> v = full_to_dof(initial.v, grid);
        double sum = 0.0, first = 0.0, last = 0.0;
        integrate_homogeneous(op, y, v, dt, nsteps,
            [&](int k, const std::vector<double> & yk, const std::vector<double> &)
            {
                const double tr = trace_from_dof(yk, grid.h);
                sum += tr * tr;
                if (k == 0) first = tr * tr;
                if (k == nsteps) last = tr * tr;
            });
        return dt * (sum - 0.5 * (first + last)) / E0;
    }

    ObservabilityReport estimate_CT(const DegeneracyProfile & profile, const BeamOperator & op,
                                    const Grid & grid, double T, double dt, int mode_count,
                                    int samples, std::uint64_t seed)
    {
        const DegeneracyClass cls = classify(profile);
        const ModalBasis modes = compute_modes(op, grid, mode_count);
        const FilteredTraceBasis basis = solve_basis_trajectories(modes, op, T, dt);
        const std::vector<double> G = trace_gramian(basis);

        const int nb = basis.basis_size();
        Eigen::Map<const Eigen::MatrixXd> Gmap(G.data(), nb, nb);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Gmap);
        if (eig.info() != Eigen::Success)
        {
            throw Error(ErrorCode::InternalSolverFailure, "Gramian eigensolve failed");
        }

        ObservabilityReport report;
        report.T = T;
        report.C_T_estimate = 2.0 * eig.eigenvalues()(0);
        std::tie(report.lower_bound, report.upper_bound) = observability_bounds(cls, T);
        report.samples = samples;

        // random data in the same modal span; the quotient of V = sum c_i B_i
        // is 2 c^T G c / |c|^2 because the basis is energy-orthonormal
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        report.sample_quotients.reserve(samples);
        Eigen::VectorXd c(nb);
        for (int s = 0; s < samples; ++s)
        {
            for (int i = 0; i < nb; ++i)
            {
                c(i) = gauss(rng);
            }
            const double q = 2.0 * c.dot(Gmap * c) / c.squaredNorm();
            report.sample_quotients.push_back(q);
        }
        if (samples > 0)
        {
            const auto [lo, hi] = std::minmax_element(report.sample_quotients.begin(),
                                                      report.sample_quotients.end());
            report.quotient_min = *lo;
            report.quotient_max = *hi;
        }
        return report;
    }
} // namespace degenbeam
