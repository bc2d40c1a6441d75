#pragma once

// Small shared helpers: vector aliases sized for R^2..R^4, combinatorics,
// and the default tolerances used on exact computation paths.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace minktens {

// Stack-allocated dynamic vectors/matrices; ambient dimension never exceeds 4.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

inline constexpr double kExactTol = 1e-10;   // default for exact-path assertions
inline constexpr double kOrthoTol = 1e-12;   // rotation matrix orthonormality

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double binomial(int n, int m) {
    if (m < 0 || m > n) return 0.0;
    double b = 1.0;
    for (int i = 0; i < m; ++i) b = b * (n - i) / (i + 1);
    return std::round(b);
}

inline double double_factorial(int n) {  // n!! with (-1)!! = 1
    double f = 1.0;
    for (int i = n; i >= 2; i -= 2) f *= i;
    return f;
}

inline Vec make_vec(std::initializer_list<double> xs) {
    Vec v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

inline Vec unit_axis(int n, int i) {
    Vec v = Vec::Zero(n);
    v[i] = 1.0;
    return v;
}

// Some unit vector orthogonal to u (n >= 2).
inline Vec any_orthogonal(const Vec& u) {
    const int n = static_cast<int>(u.size());
    int imin = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(u[i]) < std::abs(u[imin])) imin = i;
    Vec v = unit_axis(n, imin);
    v -= u * u.dot(v);
    double nv = v.norm();
    if (nv < 1e-14) throw std::runtime_error("any_orthogonal: zero input");
    return v / nv;
}

inline Vec cross3(const Vec& a, const Vec& b) {
    Vec c(3);
    c[0] = a[1] * b[2] - a[2] * b[1];
    c[1] = a[2] * b[0] - a[0] * b[2];
    c[2] = a[0] * b[1] - a[1] * b[0];
    return c;
}

// Deterministic RNG wrapper so every randomized test/check is replayable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double a = 0.0, double b = 1.0) {
        return std::uniform_real_distribution<double>(a, b)(eng_);
    }
    double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }

    Vec gaussian_vec(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = gaussian();
        return v;
    }

    Vec unit_vec(int n) {
        for (;;) {
            Vec v = gaussian_vec(n);
            double r = v.norm();
            if (r > 1e-8) return v / r;
        }
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace minktens
