#pragma once

// Exactly-decided geometric predicates (double filter with rational fallback)
// and exact rational linear algebra for the small Vandermonde systems.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "minktens/common.hpp"

namespace minktens {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline Rational rat(double x) { return Rational(x); }  // doubles are exact rationals

inline int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

}  // namespace detail

// sign of det [b - a; c - a] for points in the plane.
inline int orient2d(const double* a, const double* b, const double* c) {
    const double acx = a[0] - c[0], acy = a[1] - c[1];
    const double bcx = b[0] - c[0], bcy = b[1] - c[1];
    const double det = acx * bcy - acy * bcx;
    const double mag = std::abs(acx * bcy) + std::abs(acy * bcx);
    // forward-error filter; constant covers the few roundings involved
    if (std::abs(det) > 8.0 * 1.1102230246251565e-16 * mag)
        return det > 0 ? 1 : -1;
    using detail::rat;
    Rational d = (rat(a[0]) - rat(c[0])) * (rat(b[1]) - rat(c[1])) -
                 (rat(a[1]) - rat(c[1])) * (rat(b[0]) - rat(c[0]));
    return detail::sign_of(d);
}

// sign of det [b - a; c - a; d - a]; positive when d lies on the side of
// plane (a,b,c) given by the right-hand rule.
inline int orient3d(const double* a, const double* b, const double* c, const double* d) {
    const double adx = a[0] - d[0], ady = a[1] - d[1], adz = a[2] - d[2];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1], bdz = b[2] - d[2];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1], cdz = c[2] - d[2];

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;

    const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) +
                       cdz * (adxbdy - bdxady);
    const double mag = std::abs(adz) * (std::abs(bdxcdy) + std::abs(cdxbdy)) +
                       std::abs(bdz) * (std::abs(cdxady) + std::abs(adxcdy)) +
                       std::abs(cdz) * (std::abs(adxbdy) + std::abs(bdxady));
    if (std::abs(det) > 16.0 * 1.1102230246251565e-16 * mag)
        return det > 0 ? 1 : -1;

    using detail::rat;
    Rational ax = rat(a[0]) - rat(d[0]), ay = rat(a[1]) - rat(d[1]), az = rat(a[2]) - rat(d[2]);
    Rational bx = rat(b[0]) - rat(d[0]), by = rat(b[1]) - rat(d[1]), bz = rat(b[2]) - rat(d[2]);
    Rational cx = rat(c[0]) - rat(d[0]), cy = rat(c[1]) - rat(d[1]), cz = rat(c[2]) - rat(d[2]);
    Rational dd = az * (bx * cy - cx * by) + bz * (cx * ay - ax * cy) + cz * (ax * by - bx * ay);
    return detail::sign_of(dd);
}

inline int orient2d(const Vec& a, const Vec& b, const Vec& c) {
    return orient2d(a.data(), b.data(), c.data());
}
inline int orient3d(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    return orient3d(a.data(), b.data(), c.data(), d.data());
}

// Exact solve of V x = rhs for the Vandermonde matrix V[i][j] = nodes[i]^j,
// with integer nodes; used for the translation / homogeneity extractions.
inline std::vector<std::vector<Rational>> vandermonde_inverse(const std::vector<int>& nodes) {
    const int m = static_cast<int>(nodes.size());
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(2 * m, 0));
    for (int i = 0; i < m; ++i) {
        Rational pw = 1;
        for (int j = 0; j < m; ++j) {
            a[i][j] = pw;
            pw *= nodes[i];
        }
        a[i][m + i] = 1;
    }
    for (int col = 0; col < m; ++col) {  // Gauss-Jordan, exact
        int piv = -1;
        for (int r = col; r < m; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw std::runtime_error("vandermonde_inverse: singular");
        std::swap(a[col], a[piv]);
        Rational inv = a[col][col];
        for (int j = col; j < 2 * m; ++j) a[col][j] /= inv;
        for (int r = 0; r < m; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (int j = col; j < 2 * m; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<std::vector<Rational>> inv(m, std::vector<Rational>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) inv[i][j] = a[i][m + j];
    return inv;
}

// Univariate polynomial with exact rational coefficients, index = degree.
using RatPoly = std::vector<Rational>;

inline RatPoly rp_add(const RatPoly& a, const RatPoly& b) {
    RatPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

inline RatPoly rp_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline RatPoly rp_scale(RatPoly a, const Rational& s) {
    for (auto& c : a) c *= s;
    return a;
}

inline RatPoly rp_pow(const RatPoly& a, int e) {
    RatPoly r{Rational(1)};
    for (int i = 0; i < e; ++i) r = rp_mul(r, a);
    return r;
}

inline Rational rp_coeff(const RatPoly& a, int deg) {
    return deg < static_cast<int>(a.size()) ? a[deg] : Rational(0);
}

inline double rp_eval(const RatPoly& a, double x) {
    double r = 0.0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        r = r * x + static_cast<double>(a[i]);
    return r;
}

}  // namespace minktens
