// Naive reference implementations used only by the tests: plain loops over the
// coefficient arrays, no shared code with the library arithmetic.
#pragma once

#include "tristab/algebra.hpp"
#include "tristab/trimap.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using tristab::AlgebraDescriptor;
using tristab::AlgebraKind;
using tristab::cplx;
using tristab::Element;

using Coeffs = std::vector<cplx>;

inline Coeffs lin(cplx a, const Coeffs& p, cplx b, const Coeffs& q)
{
    Coeffs out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        out[i] = a * p[i] + b * q[i];
    return out;
}

inline Coeffs mul(const AlgebraDescriptor& alg, const Coeffs& p, const Coeffs& q)
{
    const std::size_t n = static_cast<std::size_t>(alg.dim);
    Coeffs out(p.size(), 0.0);
    switch (alg.kind) {
    case AlgebraKind::PointwiseCn:
        for (std::size_t i = 0; i < n; ++i)
            out[i] = p[i] * q[i];
        break;
    case AlgebraKind::TruncatedPoly:
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j)
                out[i + j] += p[i] * q[j];
        break;
    case AlgebraKind::MatrixCStar:
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    out[i * n + j] += p[i * n + k] * q[k * n + j];
        break;
    }
    return out;
}

// Largest singular value by power iteration on m* m.
inline double op_norm(std::size_t n, const Coeffs& m)
{
    std::vector<cplx> g(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                g[i * n + j] += std::conj(m[k * n + i]) * m[k * n + j];
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = cplx(1.0 + 0.1 * static_cast<double>(i), 0.05 * static_cast<double>(i));
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
        std::vector<cplx> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                w[i] += g[i * n + j] * v[j];
        double s = 0.0;
        for (auto c : w)
            s += std::norm(c);
        s = std::sqrt(s);
        if (s == 0.0)
            return 0.0;
        for (std::size_t i = 0; i < n; ++i)
            v[i] = w[i] / s;
        lambda = s;
    }
    return std::sqrt(lambda);
}

inline double norm(const AlgebraDescriptor& alg, const Coeffs& p)
{
    switch (alg.kind) {
    case AlgebraKind::PointwiseCn: {
        double m = 0.0;
        for (auto c : p)
            m = std::max(m, std::abs(c));
        return m;
    }
    case AlgebraKind::TruncatedPoly: {
        double s = 0.0;
        for (auto c : p)
            s += std::abs(c);
        return s;
    }
    case AlgebraKind::MatrixCStar: return op_norm(static_cast<std::size_t>(alg.dim), p);
    }
    return 0.0;
}

// D(x, z, a) by the defining quadruple sum.
inline Coeffs contract(const tristab::TrilinearTensor& t, const Coeffs& x, const Coeffs& z, const Coeffs& a)
{
    const std::size_t n = t.domain().size(), m = t.codomain().size();
    Coeffs out(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < m; ++l)
                    out[l] += x[i] * z[j] * a[k] * t.at(i, j, k, l);
    return out;
}

inline double max_abs_diff(const Coeffs& p, const Coeffs& q)
{
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        m = std::max(m, std::abs(p[i] - q[i]));
    return m;
}

} // namespace oracle
