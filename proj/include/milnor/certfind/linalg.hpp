#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "milnor/polyring/interval.hpp"

namespace milnor::linalg {

using Matrix = std::vector<std::vector<double>>;
using IntervalMatrix = std::vector<std::vector<Interval>>;

inline Matrix identity(std::size_t n) {
    Matrix m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline Matrix midpoint(const IntervalMatrix& a) {
    Matrix m(a.size(), std::vector<double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m[i][j] = a[i][j].mid();
    return m;
}

/// Inverse by Gauss-Jordan with partial pivoting; nullopt when numerically singular.
inline std::optional<Matrix> inverse(Matrix a) {
    const std::size_t n = a.size();
    Matrix inv = identity(n);
    double scale = 0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0) return std::nullopt;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) <= 1e-14 * scale) return std::nullopt;
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        double d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = a[r][c];
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns the
/// (approximately orthogonal) matrix whose columns are eigenvectors.
inline Matrix jacobi_eigenvectors(Matrix a, int sweeps = 60) {
    const std::size_t n = a.size();
    Matrix v = identity(n);
    for (int s = 0; s < sweeps; ++s) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-300) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0) continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - sn * vkq;
                    v[k][q] = sn * vkp + c * vkq;
                }
            }
    }
    return v;
}

inline IntervalMatrix to_interval(const Matrix& m) {
    IntervalMatrix r(m.size(), std::vector<Interval>(m.empty() ? 0 : m[0].size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) r[i][j] = Interval(m[i][j]);
    return r;
}

inline IntervalMatrix multiply(const IntervalMatrix& a, const IntervalMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntervalMatrix r(n, std::vector<Interval>(m, Interval(0.0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Interval s(0.0);
            for (std::size_t l = 0; l < k; ++l) s += a[i][l] * b[l][j];
            r[i][j] = s;
        }
    return r;
}

inline IntervalMatrix transpose(const IntervalMatrix& a) {
    IntervalMatrix r(a.empty() ? 0 : a[0].size(), std::vector<Interval>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
    return r;
}

/// True when the interval matrix is certainly strictly diagonally dominant
/// with positive diagonal (hence symmetric positive definite if symmetric).
inline bool certainly_dominant_positive(const IntervalMatrix& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        Interval off(0.0);
        for (std::size_t j = 0; j < p.size(); ++j)
            if (j != i) off += Interval(p[i][j].mag());
        if (!(p[i][i].lo() > off.hi())) return false;
    }
    return true;
}

struct Inertia {
    std::size_t negative = 0;
    std::size_t positive = 0;
};

/// Certified inertia of every symmetric matrix inside the interval matrix `h`.
///
/// The midpoint is diagonalized approximately by Jacobi rotations Q, the
/// congruent matrix Q^T H Q is formed in interval arithmetic, and an interval
/// LDL^T factorization reads off the signs of the pivots. Sylvester's law of
/// inertia makes the count independent of Q, which only has to be
/// nonsingular (checked via Q^T Q). Returns nullopt when some pivot straddles 0.
inline std::optional<Inertia> certified_inertia(const IntervalMatrix& h) {
    const std::size_t n = h.size();
    IntervalMatrix q = to_interval(jacobi_eigenvectors(midpoint(h)));
    IntervalMatrix qt = transpose(q);
    if (!certainly_dominant_positive(multiply(qt, q))) return std::nullopt;
    IntervalMatrix a = multiply(multiply(qt, h), q);
    // Symmetrize: both triangles enclose the same true entries.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto both = intersect(a[i][j], a[j][i]);
            if (!both) return std::nullopt;
            a[i][j] = a[j][i] = *both;
        }
    std::vector<Interval> d(n);
    IntervalMatrix l(n, std::vector<Interval>(n, Interval(0.0)));
    Inertia in;
    for (std::size_t j = 0; j < n; ++j) {
        Interval dj = a[j][j];
        for (std::size_t k = 0; k < j; ++k) dj -= sqr(l[j][k]) * d[k];
        if (dj.contains_zero()) return std::nullopt;
        d[j] = dj;
        (dj.negative() ? in.negative : in.positive)++;
        for (std::size_t i = j + 1; i < n; ++i) {
            Interval s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k] * d[k];
            l[i][j] = s / dj;
        }
    }
    return in;
}

}  // namespace milnor::linalg
