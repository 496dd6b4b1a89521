#ifndef DEGENBEAM_BANDED_HPP
#define DEGENBEAM_BANDED_HPP

#include <cstddef>
#include <vector>

#include "degenbeam/errors.hpp"

namespace degenbeam
{
    /// Symmetric pentadiagonal matrix stored by bands: diag[i] = A(i,i),
    /// off1[i] = A(i+1,i), off2[i] = A(i+2,i).
    template <class Scalar>
    struct BandedPenta
    {
        std::vector<Scalar> diag;
        std::vector<Scalar> off1;
        std::vector<Scalar> off2;

        std::size_t size() const { return diag.size(); }

        template <class In, class Out>
        void apply(const In * x, Out * y) const
        {
            const std::size_t n = diag.size();
            for (std::size_t i = 0; i < n; ++i)
            {
                Scalar s = diag[i] * x[i];
                if (i >= 1) s += off1[i - 1] * x[i - 1];
                if (i >= 2) s += off2[i - 2] * x[i - 2];
                if (i + 1 < n) s += off1[i] * x[i + 1];
                if (i + 2 < n) s += off2[i] * x[i + 2];
                y[i] = Out(s);
            }
        }
    };

    /// LDL^T factorization of an SPD pentadiagonal matrix (no pivoting; SPD
    /// guarantees positive pivots). Factor once, solve many.
    template <class Scalar>
    class BandedCholesky
    {
    public:
        explicit BandedCholesky(const BandedPenta<Scalar> & A)
        {
            const std::size_t n = A.size();
            _d.resize(n);
            _l1.assign(n > 1 ? n - 1 : 0, Scalar(0));
            _l2.assign(n > 2 ? n - 2 : 0, Scalar(0));

            for (std::size_t i = 0; i < n; ++i)
            {
                Scalar d = A.diag[i];
                if (i >= 1) d -= _l1[i - 1] * _l1[i - 1] * _d[i - 1];
                if (i >= 2) d -= _l2[i - 2] * _l2[i - 2] * _d[i - 2];
                if (!(d > Scalar(0)))
                {
                    throw Error(ErrorCode::InternalSolverFailure,
                                "non-positive pivot in banded factorization");
                }
                _d[i] = d;

                if (i + 1 < n)
                {
                    Scalar v = A.off1[i];
                    if (i >= 1) v -= _l1[i - 1] * _l2[i - 1] * _d[i - 1];
                    _l1[i] = v / d;
                }
                if (i + 2 < n)
                {
                    _l2[i] = A.off2[i] / d;
                }
            }
        }

        /// In-place solve A x = b.
        void solve(Scalar * b) const
        {
            const std::size_t n = _d.size();
            for (std::size_t i = 1; i < n; ++i)
            {
                Scalar v = b[i] - _l1[i - 1] * b[i - 1];
                if (i >= 2) v -= _l2[i - 2] * b[i - 2];
                b[i] = v;
            }
            for (std::size_t i = 0; i < n; ++i)
            {
                b[i] /= _d[i];
            }
            for (std::size_t k = n; k-- > 0;)
            {
                Scalar v = b[k];
                if (k + 1 < n) v -= _l1[k] * b[k + 1];
                if (k + 2 < n) v -= _l2[k] * b[k + 2];
                b[k] = v;
            }
        }

        std::size_t size() const { return _d.size(); }

    private:
        std::vector<Scalar> _d;
        std::vector<Scalar> _l1;
        std::vector<Scalar> _l2;
    };

    using SymPentaMatrix = BandedPenta<double>;
    using PentaCholesky = BandedCholesky<double>;
} // namespace degenbeam

#endif
