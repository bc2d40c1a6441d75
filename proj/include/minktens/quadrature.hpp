#pragma once

// Numeric integration building blocks: adaptive Gauss-Kronrod on intervals,
// a degree-8 symmetric triangle rule with two-level error control, exact
// trigonometric moments, and a Halton sequence for the QMC paths.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "minktens/common.hpp"

namespace minktens {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    int max_depth = 22;
    int mc_samples = 65536;
    std::uint64_t seed = 1;
};

// Vector-valued integrand: writes `m` components at point(s) into out[].
using VectorIntegrand1D = std::function<void(double, double*)>;

namespace quadrule {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1] (QUADPACK constants).
inline constexpr std::array<double, 8> kK15Nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> kK15Weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kG7Weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

}  // namespace quadrule

namespace detail {

struct GKResult {
    std::vector<double> value;
    double error = 0.0;
};

inline GKResult gk15(const VectorIntegrand1D& f, int m, double a, double b) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    GKResult r;
    r.value.assign(m, 0.0);
    std::vector<double> gauss(m, 0.0), buf(m);
    for (int i = 0; i < 8; ++i) {
        const double x = quadrule::kK15Nodes[i];
        const int reps = (i == 7) ? 1 : 2;
        for (int sgn = 0; sgn < reps; ++sgn) {
            const double t = c + (sgn == 0 ? h * x : -h * x);
            f(t, buf.data());
            for (int j = 0; j < m; ++j) r.value[j] += quadrule::kK15Weights[i] * buf[j];
            if (i % 2 == 1 || i == 7) {
                const double wg = quadrule::kG7Weights[i / 2];
                for (int j = 0; j < m; ++j) gauss[j] += wg * buf[j];
            }
        }
    }
    for (int j = 0; j < m; ++j) {
        r.value[j] *= h;
        gauss[j] *= h;
        r.error += std::abs(r.value[j] - gauss[j]);
    }
    return r;
}

}  // namespace detail

// Adaptive Gauss-Kronrod for an m-component integrand on [a, b].
// Returns the value; *err_out receives the accumulated error estimate.
inline std::vector<double> integrate_interval(const VectorIntegrand1D& f, int m, double a,
                                              double b, const QuadratureSpec& spec,
                                              double* err_out = nullptr) {
    struct Piece {
        double a, b, error;
        std::vector<double> value;
        int depth;
    };
    auto eval = [&](double x, double y, int depth) {
        auto r = detail::gk15(f, m, x, y);
        return Piece{x, y, r.error, std::move(r.value), depth};
    };
    std::vector<Piece> work{eval(a, b, 0)};
    std::vector<double> total(m, 0.0);
    double total_err = 0.0;
    double scale = 0.0;
    for (double v : work[0].value) scale += std::abs(v);
    while (!work.empty()) {
        Piece p = std::move(work.back());
        work.pop_back();
        const double local_tol =
            spec.rel_tol * std::max(scale, 1e-300) * (p.b - p.a) / std::max(b - a, 1e-300);
        if (p.error <= local_tol || p.depth >= spec.max_depth) {
            for (int j = 0; j < m; ++j) total[j] += p.value[j];
            total_err += p.error;
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        work.push_back(eval(p.a, mid, p.depth + 1));
        work.push_back(eval(mid, p.b, p.depth + 1));
    }
    if (err_out) *err_out = total_err;
    return total;
}

// Exact trigonometric moments M(a,b) = integral of cos^a(t) sin^b(t) dt
// over [t0, t1], by the standard reduction formulas.
class TrigMoments {
public:
    TrigMoments(double t0, double t1, int max_deg)
        : t0_(t0), t1_(t1), maxd_(max_deg), m_(sz(), kUnset) {}

    double operator()(int a, int b) const {
        if (a < 0 || b < 0 || a + b > maxd_) throw std::out_of_range("TrigMoments");
        double& slot = m_[idx(a, b)];
        if (!std::isnan(slot)) return slot;
        double v;
        if (a == 0 && b == 0) {
            v = t1_ - t0_;
        } else if (a >= 1) {
            // d/dt (cos^{a-1} sin^{b+1}) = (a+b) cos^a sin^b - (a-1) cos^{a-2} sin^b
            double boundary = std::pow(std::cos(t1_), a - 1) * std::pow(std::sin(t1_), b + 1) -
                              std::pow(std::cos(t0_), a - 1) * std::pow(std::sin(t0_), b + 1);
            v = boundary / (a + b);
            if (a >= 2) v += static_cast<double>(a - 1) / (a + b) * (*this)(a - 2, b);
        } else {
            double boundary = -(std::pow(std::sin(t1_), b - 1) * std::cos(t1_) -
                                std::pow(std::sin(t0_), b - 1) * std::cos(t0_));
            v = boundary / b;
            if (b >= 2) v += static_cast<double>(b - 1) / b * (*this)(0, b - 2);
        }
        slot = v;
        return v;
    }

private:
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    int sz() const { return (maxd_ + 1) * (maxd_ + 1); }
    int idx(int a, int b) const { return a * (maxd_ + 1) + b; }
    double t0_, t1_;
    int maxd_;
    mutable std::vector<double> m_;

public:
    double operator()(int a, int b) { return const_cast<const TrigMoments&>(*this)(a, b); }
};

// Dunavant degree-8 rule on the reference triangle, 16 points, weights sum 1.
struct TriangleRule {
    struct Node {
        double l0, l1, l2, w;
    };
    static const std::vector<Node>& nodes() {
        static const std::vector<Node> pts = [] {
            std::vector<Node> v;
            auto push3 = [&v](double a, double b, double w) {
                v.push_back({a, b, 1.0 - a - b, w});
                v.push_back({b, a, 1.0 - a - b, w});
                v.push_back({b, 1.0 - a - b, a, w});
            };
            v.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.144315607677787});
            push3(0.081414823414554, 0.459292588292723, 0.095091634413923);
            push3(0.658861384496480, 0.170569307751760, 0.103217370534718);
            push3(0.898905543365938, 0.050547228317031, 0.032458497623198);
            auto push6 = [&v](double a, double b, double w) {
                double c = 1.0 - a - b;
                v.push_back({a, b, c, w});
                v.push_back({a, c, b, w});
                v.push_back({b, a, c, w});
                v.push_back({b, c, a, w});
                v.push_back({c, a, b, w});
                v.push_back({c, b, a, w});
            };
            push6(0.008394777409958, 0.263112829634638, 0.027230314174435);
            return v;
        }();
        return pts;
    }
};

// Halton sequence in the given bases, with an index offset as deterministic seed.
class Halton {
public:
    explicit Halton(int dim, std::uint64_t seed) : dim_(dim), index_(409 + seed * 7919) {}

    std::vector<double> next() {
        static constexpr std::array<int, 6> bases{2, 3, 5, 7, 11, 13};
        std::vector<double> x(dim_);
        for (int d = 0; d < dim_; ++d) x[d] = radical_inverse(index_, bases[d]);
        ++index_;
        return x;
    }

private:
    static double radical_inverse(std::uint64_t i, int base) {
        double f = 1.0, r = 0.0;
        while (i > 0) {
            f /= base;
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        return r;
    }
    int dim_;
    std::uint64_t index_;
};

}  // namespace minktens
