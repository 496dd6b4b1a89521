#ifndef DEGENBEAM_PROFILES_HPP
#define DEGENBEAM_PROFILES_HPP

#include <functional>
#include <string>

#include "degenbeam/errors.hpp"

namespace degenbeam
{
    /// Degeneracy regime of the stiffness coefficient a(x): weak for
    /// K in (0,1), strong for K in [1,2). Coefficients with K >= 2 are
    /// rejected everywhere.
    enum class Regime
    {
        WD,
        SD,
    };

    enum class ProfileKind
    {
        Power,
        Custom,
    };

    /// Stiffness coefficient a(x) on [0,1] with a(0) = 0 and a > 0 on (0,1].
    ///
    /// Power profiles are a(x) = scale * x^alpha with alpha in (0,2); they are
    /// the canonical family and get exact (analytic) classification. Custom
    /// profiles must supply a' explicitly; no numerical differentiation is
    /// ever performed, since x|a'|/a amplifies noise near the degenerate end.
    class DegeneracyProfile
    {
    public:
        ProfileKind kind() const { return _kind; }
        double alpha() const { return _alpha; }
        double scale() const { return _scale; }

        double a(double x) const { return _a(x); }
        double a_prime(double x) const { return _a_prime(x); }

        /// x a'(x) / a(x), evaluated analytically (== alpha for power kind).
        double log_derivative(double x) const;

        static DegeneracyProfile power(double alpha, double scale);
        static DegeneracyProfile custom(std::function<double(double)> a,
                                        std::function<double(double)> a_prime);

    private:
        DegeneracyProfile() = default;

        ProfileKind _kind = ProfileKind::Power;
        double _alpha = 0.0;
        double _scale = 1.0;
        std::function<double(double)> _a;
        std::function<double(double)> _a_prime;
    };

    /// Classification result: K = sup_{(0,1]} x|a'|/a, the regime it implies,
    /// and a(1) (which enters every constant of the energy estimates).
    struct DegeneracyClass
    {
        double K = 0.0;
        Regime regime = Regime::WD;
        double a_at_1 = 1.0;
    };

    /// a(x) = scale * x^alpha. Throws DegeneracyOutOfRange unless alpha is in
    /// (0,2); throws InvalidProfile unless scale > 0.
    DegeneracyProfile make_power_profile(double alpha, double scale);

    /// Computes K as the maximum of x|a'|/a over a log-spaced sample of at
    /// least `resolution` points in (0,1] plus the endpoint 1. The log spacing
    /// resolves suprema attained only in the limit x -> 0+. Power profiles
    /// bypass the sampling and return K = alpha exactly.
    ///
    /// Throws DegeneracyOutOfRange if K falls outside (0,2), InvalidProfile if
    /// a is non-positive at a sample, if a(0) != 0, or if x^K/a(x) fails to be
    /// non-decreasing on (0, 0.1].
    DegeneracyClass classify(const DegeneracyProfile & profile, int resolution = 2000);

    /// Minimal observability time T0 = 4/(2-K) * max{1, 4/a(1), 4K/a(1)}.
    double observability_time(const DegeneracyClass & cls);

    const char * regime_name(Regime regime);
} // namespace degenbeam

#endif
