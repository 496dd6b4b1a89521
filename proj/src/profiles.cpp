#include "degenbeam/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace degenbeam
{
    double DegeneracyProfile::log_derivative(double x) const
    {
        if (_kind == ProfileKind::Power)
        {
            return _alpha;
        }
        return x * _a_prime(x) / _a(x);
    }

    DegeneracyProfile DegeneracyProfile::power(double alpha, double scale)
    {
        DegeneracyProfile p;
        p._kind = ProfileKind::Power;
        p._alpha = alpha;
        p._scale = scale;
        p._a = [alpha, scale](double x) { return scale * std::pow(x, alpha); };
        p._a_prime = [alpha, scale](double x) { return scale * alpha * std::pow(x, alpha - 1.0); };
        return p;
    }

    DegeneracyProfile DegeneracyProfile::custom(std::function<double(double)> a,
                                                std::function<double(double)> a_prime)
    {
        DegeneracyProfile p;
        p._kind = ProfileKind::Custom;
        p._a = std::move(a);
        p._a_prime = std::move(a_prime);
        p._scale = p._a(1.0);

        // positivity on a dense sample of (0,1]
        const int samples = 512;
        for (int i = 1; i <= samples; ++i)
        {
            const double x = double(i) / samples;
            if (!(p._a(x) > 0.0))
            {
                throw Error(ErrorCode::InvalidProfile,
                            "a(x) must be positive on (0,1]; a(" + std::to_string(x) + ") <= 0");
            }
        }
        return p;
    }

    DegeneracyProfile make_power_profile(double alpha, double scale)
    {
        if (!(scale > 0.0))
        {
            throw Error(ErrorCode::InvalidProfile, "scale must be positive");
        }
        if (!(alpha > 0.0) || !(alpha < 2.0))
        {
            throw Error(ErrorCode::DegeneracyOutOfRange,
                        "power exponent " + std::to_string(alpha) + " outside (0,2)");
        }
        return DegeneracyProfile::power(alpha, scale);
    }

    DegeneracyClass classify(const DegeneracyProfile & profile, int resolution)
    {
        if (resolution < 100)
        {
            throw Error(ErrorCode::InvalidProfile, "classification resolution must be >= 100");
        }

        DegeneracyClass cls;
        cls.a_at_1 = profile.a(1.0);
        if (!(cls.a_at_1 > 0.0))
        {
            throw Error(ErrorCode::InvalidProfile, "a(1) must be positive");
        }

        if (profile.kind() == ProfileKind::Power)
        {
            cls.K = profile.alpha();
        }
        else
        {
            // log-spaced sample of (0,1]; the lower end is taken deep enough
            // that limits like (2-2x)/(2-x) -> 1 are resolved to double precision
            const double x_min = 1e-18;
            const double log_min = std::log(x_min);
            double sup = 0.0;
            for (int i = 0; i <= resolution; ++i)
            {
                const double x = std::exp(log_min * (1.0 - double(i) / resolution));
                const double ax = profile.a(x);
                if (!(ax > 0.0))
                {
                    throw Error(ErrorCode::InvalidProfile,
                                "a(x) must be positive on (0,1]; a(" + std::to_string(x) + ") <= 0");
                }
                sup = std::max(sup, x * std::abs(profile.a_prime(x)) / ax);
            }
            cls.K = sup;

            const double a0 = profile.a(0.0);
            if (!(std::abs(a0) <= 1e-12 * std::max(1.0, cls.a_at_1)))
            {
                throw Error(ErrorCode::InvalidProfile, "a(0) must vanish");
            }
        }

        if (!(cls.K > 0.0 && cls.K < 2.0))
        {
            throw Error(ErrorCode::DegeneracyOutOfRange,
                        "K = " + std::to_string(cls.K) + " outside the admissible range (0,2)");
        }

        if (profile.kind() == ProfileKind::Custom)
        {
            // x^K/a must be non-decreasing near 0; checked on (0, 0.1]
            const int checks = 256;
            double prev = 0.0;
            for (int i = 1; i <= checks; ++i)
            {
                const double x = 0.1 * double(i) / checks;
                const double val = std::pow(x, cls.K) / profile.a(x);
                if (i > 1 && val < prev * (1.0 - 1e-10))
                {
                    throw Error(ErrorCode::InvalidProfile,
                                "x^K/a(x) must be non-decreasing near the degenerate end");
                }
                prev = val;
            }
        }

        cls.regime = cls.K < 1.0 ? Regime::WD : Regime::SD;
        return cls;
    }

    double observability_time(const DegeneracyClass & cls)
    {
        const double m = std::max({1.0, 4.0 / cls.a_at_1, 4.0 * cls.K / cls.a_at_1});
        return 4.0 / (2.0 - cls.K) * m;
    }

    const char * regime_name(Regime regime)
    {
        return regime == Regime::WD ? "WD" : "SD";
    }
} // namespace degenbeam
