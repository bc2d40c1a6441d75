#pragma once

// Integration of tensor monomials u^s, optionally weighted by a scalar
// function f on the sphere, over spherical regions. Exact paths: atoms,
// arcs with polynomial-in-<u,axis> weights (trig moments), caps with zonal
// weights, full spheres, and polygon areas by angle excess. Numeric paths:
// adaptive geodesic-triangle subdivision (d = 2) and seeded QMC (d = 3).

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "minktens/quadrature.hpp"
#include "minktens/spherical_region.hpp"
#include "minktens/symtensor.hpp"

namespace minktens {

// (n-1)-dimensional Hausdorff measure of S^{n-1}.
inline double omega_n(int n) {
    if (n < 1) throw std::invalid_argument("omega_n: n >= 1");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// Volume of the unit ball B^n; kappa_n = omega_n / n (and kappa_0 = 1).
inline double kappa_n(int n) {
    if (n == 0) return 1.0;
    return omega_n(n) / n;
}

// Scalar weight on the sphere. When `zonal` is set, f(u) = P(<u, axis>) on
// {<u, axis> >= support_cos} and 0 below; this enables the exact paths.
struct SphericalWeight {
    std::function<double(const Vec&)> fn;

    struct Zonal {
        Vec axis;
        std::vector<double> poly;  // coefficients in z = <u, axis>, index = degree
        double support_cos = -1.0;
    };
    std::optional<Zonal> zonal;

    double operator()(const Vec& u) const { return fn(u); }

    static SphericalWeight constant(int n, double c) {
        SphericalWeight w;
        w.fn = [c](const Vec&) { return c; };
        Zonal z;
        z.axis = unit_axis(n, n - 1);
        z.poly = {c};
        z.support_cos = -1.0;
        w.zonal = z;
        return w;
    }

    static SphericalWeight zonal_poly(Vec axis, std::vector<double> coeffs,
                                      double support_cos = -1.0) {
        SphericalWeight w;
        Vec a = axis / axis.norm();
        auto poly = coeffs;
        w.fn = [a, poly, support_cos](const Vec& u) {
            double z = a.dot(u);
            if (z < support_cos) return 0.0;
            double v = 0.0;
            for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i) v = v * z + poly[i];
            return v;
        };
        w.zonal = Zonal{a, std::move(coeffs), support_cos};
        return w;
    }

    static SphericalWeight generic(std::function<double(const Vec&)> f) {
        SphericalWeight w;
        w.fn = std::move(f);
        return w;
    }

    SphericalWeight rotated(const Rotation& rot) const {
        SphericalWeight w;
        auto base = fn;
        w.fn = [base, rot](const Vec& u) { return base(rot.apply_inverse(u)); };
        if (zonal) w.zonal = Zonal{rot.apply(zonal->axis), zonal->poly, zonal->support_cos};
        return w;
    }
};

struct SphereIntResult {
    SymTensor tensor;
    double error = 0.0;  // 0 on exact paths
    bool tolerance_reached = true;
};

namespace sphereint_detail {

// integral of u^s over the full sphere S^{n-1}: 0 for odd s, else
// omega_n (s-1)!! / (n (n+2) ... (n+s-2)) Q^{s/2}.
inline SymTensor full_sphere_moment(int n, int s) {
    if (s % 2 == 1) return SymTensor::zero(n, s);
    double c = omega_n(n);
    for (int i = 0; i < s / 2; ++i) c = c * (2 * i + 1) / (n + 2 * i);
    return SymTensor::metric(n).sym_power(s / 2) * c;
}

// Moment of v^m over the unit sphere of the subspace orthogonal to `axis`.
inline SymTensor subsphere_moment(int n, const Vec& axis, int m) {
    if (m % 2 == 1) return SymTensor::zero(n, m);
    double c = omega_n(n - 1);
    for (int i = 0; i < m / 2; ++i) c = c * (2 * i + 1) / (n - 1 + 2 * i);
    SymTensor qperp = SymTensor::metric(n) - vector_power(axis, 2);
    return qperp.sym_power(m / 2) * c;
}

// Exact arc integration of f(u) u^s over theta ranges where f is a
// polynomial in <u, axis>, via trigonometric moments.
inline SymTensor arc_exact(const SphericalRegion& arc, int s, const SphericalWeight* f) {
    const int n = arc.ambient();
    SymTensor total = SymTensor::zero(n, s);

    std::vector<std::pair<double, double>> ranges;
    std::vector<double> poly{1.0};
    Vec axis = unit_axis(n, n - 1);
    if (f && f->zonal) {
        poly = f->zonal->poly;
        axis = f->zonal->axis;
        if (f->zonal->support_cos > -1.0 + 1e-14) {
            double mu = 1.0 - f->zonal->support_cos;
            ranges = arc.arc_clip_by_cap(axis, mu);
        } else {
            ranges = {{arc.theta0(), arc.theta1()}};
        }
    } else {
        ranges = {{arc.theta0(), arc.theta1()}};
    }

    const int deg = static_cast<int>(poly.size()) - 1;
    for (auto [t0, t1] : ranges) {
        // z(theta) = <u, axis> = zc cos + zs sin
        const double zc = arc.arc_e().dot(axis), zs = arc.arc_f().dot(axis);
        TrigMoments mom(t0, t1, s + deg);
        // u^s = sum_i binom(s, i) cos^i sin^(s-i) E^i . F^(s-i)
        for (int i = 0; i <= s; ++i) {
            SymTensor basis = vector_power(arc.arc_e(), i)
                                  .sym_product(vector_power(arc.arc_f(), s - i));
            double w = 0.0;
            for (int dgr = 0; dgr <= deg; ++dgr) {
                if (poly[dgr] == 0.0) continue;
                // (zc cos + zs sin)^dgr expanded
                for (int a = 0; a <= dgr; ++a) {
                    double term = poly[dgr] * binomial(dgr, a) * std::pow(zc, a) *
                                  std::pow(zs, dgr - a);
                    if (term == 0.0) continue;
                    w += term * mom(i + a, s - i + dgr - a);
                }
            }
            total += basis * (binomial(s, i) * w);
        }
    }
    return total;
}

// Cap integral of f(u) u^s with zonal f about the cap axis. Exact in the
// zeta-integral for odd n; one adaptive 1D quadrature for even n.
inline SphereIntResult cap_zonal(int n, const Vec& axis, double z_lo, double z_hi,
                                 const std::vector<double>& poly, int s,
                                 const QuadratureSpec& spec) {
    SphereIntResult res{SymTensor::zero(n, s), 0.0, true};
    if (z_hi <= z_lo) return res;
    const int deg = static_cast<int>(poly.size()) - 1;
    for (int i = s % 2 == 0 ? 0 : 1; i <= s; i += 2) {
        // terms with odd (s - i) vanish on the subsphere
        int m = s - i;
        if (m % 2 == 1) continue;
        SymTensor block = vector_power(axis, i).sym_product(subsphere_moment(n, axis, m));
        // radial factor: integral z^i (1-z^2)^{(m + n - 3)/2} P(z) dz
        double w = 0.0, werr = 0.0;
        const int half2 = m + n - 3;  // twice the exponent is half2; even n -> odd half2
        if (half2 % 2 == 0) {
            // polynomial integrand, integrate exactly term by term
            for (int dgr = 0; dgr <= deg; ++dgr) {
                if (poly[dgr] == 0.0) continue;
                // z^(i+dgr) (1-z^2)^(half2/2)
                for (int b = 0; b <= half2 / 2; ++b) {
                    double c = binomial(half2 / 2, b) * (b % 2 == 0 ? 1.0 : -1.0);
                    int e = i + dgr + 2 * b;
                    w += poly[dgr] * c *
                         (std::pow(z_hi, e + 1) - std::pow(z_lo, e + 1)) / (e + 1);
                }
            }
        } else {
            auto integrand = [&](double z, double* out) {
                double p = 0.0;
                for (int dgr = deg; dgr >= 0; --dgr) p = p * z + poly[dgr];
                out[0] = p * std::pow(z, i) * std::pow(1.0 - z * z, 0.5 * half2);
            };
            QuadratureSpec tight = spec;
            tight.rel_tol = std::min(spec.rel_tol, 1e-13);
            auto v = integrate_interval(integrand, 1, z_lo, z_hi, tight, &werr);
            w = v[0];
        }
        res.tensor += block * (binomial(s, i) * w);
        res.error += std::abs(werr) * block.norm_inf() * binomial(s, i);
    }
    return res;
}

// Adaptive integration of a vector integrand over the spherical triangle with
// vertices a, b, c (unit, in R^3 local coordinates): maps the flat triangle
// radially onto the sphere with Jacobian h / |x|^3.
template <typename F>
void triangle_rule_eval(const Vec& va, const Vec& vb, const Vec& vc, const F& eval, int m,
                        std::vector<double>& out) {
    out.assign(m, 0.0);
    Vec n2 = cross3(vb - va, vc - va);
    double flat_area = 0.5 * n2.norm();
    if (flat_area < 1e-300) return;
    double h = std::abs(n2.normalized().dot(va));
    std::vector<double> buf(m);
    for (const auto& node : TriangleRule::nodes()) {
        Vec x = node.l0 * va + node.l1 * vb + node.l2 * vc;
        double r = x.norm();
        eval(x / r, buf.data());
        double jac = h / (r * r * r);
        for (int j = 0; j < m; ++j) out[j] += node.w * buf[j] * jac;
    }
    for (int j = 0; j < m; ++j) out[j] *= flat_area;
}

template <typename F>
void spherical_triangle_adaptive(const Vec& a, const Vec& b, const Vec& c, const F& eval,
                                 int m, double tol, int depth, int max_depth,
                                 std::vector<double>& acc, double& err_acc) {
    std::vector<double> whole;
    triangle_rule_eval(a, b, c, eval, m, whole);

    Vec ab = ((a + b) * 0.5).normalized();
    Vec bc = ((b + c) * 0.5).normalized();
    Vec ca = ((c + a) * 0.5).normalized();
    const Vec* children[4][3] = {{&a, &ab, &ca}, {&ab, &b, &bc}, {&ca, &bc, &c},
                                 {&ab, &bc, &ca}};
    std::vector<double> parts(m, 0.0), piece;
    for (const auto& ch : children) {
        triangle_rule_eval(*ch[0], *ch[1], *ch[2], eval, m, piece);
        for (int j = 0; j < m; ++j) parts[j] += piece[j];
    }
    double diff = 0.0, scale = 0.0;
    for (int j = 0; j < m; ++j) {
        diff += std::abs(parts[j] - whole[j]);
        scale += std::abs(parts[j]);
    }
    if (depth >= max_depth || diff <= tol * std::max(scale, 1e-14) + 1e-16) {
        for (int j = 0; j < m; ++j) acc[j] += parts[j];
        err_acc += diff;
        return;
    }
    for (const auto& ch : children)
        spherical_triangle_adaptive(*ch[0], *ch[1], *ch[2], eval, m, tol, depth + 1,
                                    max_depth, acc, err_acc);
}

}  // namespace sphereint_detail

// integral over the region of f(u) u^s dH^d(u). f = nullptr means f == 1.
inline SphereIntResult integrate_monomial(const SphericalRegion& reg, int s,
                                          const SphericalWeight* f,
                                          const QuadratureSpec& spec = {}) {
    using K = SphericalRegion::Kind;
    const int n = reg.ambient();
    SphereIntResult res{SymTensor::zero(n, s), 0.0, true};

    switch (reg.kind()) {
        case K::Points: {
            for (const Vec& a : reg.atoms()) {
                double w = f ? (*f)(a) : 1.0;
                if (w != 0.0) res.tensor += vector_power(a, s) * w;
            }
            return res;
        }

        case K::Arc: {
            if (!f || f->zonal) {
                res.tensor = sphereint_detail::arc_exact(reg, s, f);
                return res;
            }
            // generic continuous weight: adaptive on the angle
            const auto& mis = MultiIndexSet::get(n, s);
            const int m = mis.size();
            auto integrand = [&](double t, double* out) {
                Vec u = reg.arc_point(t);
                double w = (*f)(u);
                SymTensor us = vector_power(u, s);
                for (int j = 0; j < m; ++j) out[j] = w * us.raw()[j];
            };
            auto v = integrate_interval(integrand, m, reg.theta0(), reg.theta1(), spec,
                                        &res.error);
            res.tensor.raw() = v;
            return res;
        }

        case K::FullSphere: {
            if (!f) {
                res.tensor = sphereint_detail::full_sphere_moment(n, s);
                return res;
            }
            if (f->zonal) {
                return sphereint_detail::cap_zonal(n, f->zonal->axis,
                                                   std::max(-1.0, f->zonal->support_cos), 1.0,
                                                   f->zonal->poly, s, spec);
            }
            if (n != 3)
                throw std::invalid_argument(
                    "integrate_monomial: generic weight on full sphere only for n = 3");
            // split into octants and integrate each as a polygon
            SphereIntResult total{SymTensor::zero(n, s), 0.0, true};
            for (int sx = -1; sx <= 1; sx += 2)
                for (int sy = -1; sy <= 1; sy += 2)
                    for (int sz = -1; sz <= 1; sz += 2) {
                        auto oct = SphericalRegion::polygon3(
                            {make_vec({double(sx), 0, 0}), make_vec({0, double(sy), 0}),
                             make_vec({0, 0, double(sz)})});
                        auto part = integrate_monomial(oct, s, f, spec);
                        total.tensor += part.tensor;
                        total.error += part.error;
                        total.tolerance_reached =
                            total.tolerance_reached && part.tolerance_reached;
                    }
            return total;
        }

        case K::Cap: {
            const Vec& axis = reg.cap_axis();
            double z_lo = 1.0 - reg.cap_mu();
            if (!f)
                return sphereint_detail::cap_zonal(n, axis, z_lo, 1.0, {1.0}, s, spec);
            if (f->zonal && std::abs(f->zonal->axis.dot(axis) - 1.0) < 1e-12) {
                return sphereint_detail::cap_zonal(n, axis,
                                                   std::max(z_lo, f->zonal->support_cos), 1.0,
                                                   f->zonal->poly, s, spec);
            }
            // generic weight: 2D chart (z, angle(s)) -- only needed for n = 3
            if (n != 3)
                throw std::invalid_argument(
                    "integrate_monomial: generic weight on cap only for n = 3");
            Vec b1 = any_orthogonal(axis);
            Vec b2 = cross3(axis, b1);
            const auto& mis = MultiIndexSet::get(n, s);
            const int m = mis.size();
            auto outer = [&](double z, double* out) {
                double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                auto inner = [&](double phi, double* o2) {
                    Vec u = z * axis + r * (std::cos(phi) * b1 + std::sin(phi) * b2);
                    double w = (*f)(u);
                    SymTensor us = vector_power(u, s);
                    for (int j = 0; j < m; ++j) o2[j] = w * us.raw()[j];
                };
                double ierr = 0.0;
                auto v = integrate_interval(inner, m, 0.0, kTwoPi, spec, &ierr);
                for (int j = 0; j < m; ++j) out[j] = v[j];
            };
            auto v = integrate_interval(outer, m, z_lo, 1.0, spec, &res.error);
            res.tensor.raw() = v;
            return res;
        }

        case K::Polygon: {
            const Mat& B = reg.subspace();
            const auto& verts = reg.polygon_local();
            const int nv = static_cast<int>(verts.size());
            if (s == 0 && !f) {
                // exact area via spherical angle excess
                double angles = 0.0;
                for (int i = 0; i < nv; ++i) {
                    const Vec& v = verts[i];
                    const Vec& vp = verts[(i + nv - 1) % nv];
                    const Vec& vn = verts[(i + 1) % nv];
                    Vec tp = vp - vp.dot(v) * v;
                    Vec tn = vn - vn.dot(v) * v;
                    angles += std::acos(std::clamp(tp.normalized().dot(tn.normalized()),
                                                   -1.0, 1.0));
                }
                res.tensor = SymTensor::scalar(n, angles - (nv - 2) * std::numbers::pi);
                return res;
            }
            const auto& mis = MultiIndexSet::get(n, s);
            const int m = mis.size();
            auto eval = [&](const Vec& w, double* out) {
                Vec u = B * w;
                double wt = f ? (*f)(u) : 1.0;
                SymTensor us = vector_power(u, s);
                for (int j = 0; j < m; ++j) out[j] = wt * us.raw()[j];
            };
            std::vector<double> acc(m, 0.0);
            double err = 0.0;
            for (int i = 1; i + 1 < nv; ++i)
                sphereint_detail::spherical_triangle_adaptive(
                    verts[0], verts[i], verts[i + 1], eval, m, spec.rel_tol, 0,
                    spec.max_depth, acc, err);
            res.tensor.raw() = acc;
            res.error = err;
            return res;
        }

        case K::Cone3: {
            // QMC over the flat simplices, radially projected: J = h / |x|^4.
            const auto& mis = MultiIndexSet::get(n, s);
            const int m = mis.size();
            std::vector<double> acc(m, 0.0), var(m, 0.0);
            const int batches = 16;
            const int per_batch = std::max(64, spec.mc_samples / batches);
            for (const auto& sx : reg.cone_simplices()) {
                std::array<Vec, 4> g;
                for (int j = 0; j < 4; ++j) g[j] = reg.atoms()[sx[j]];
                // flat volume and plane distance of the tetrahedron conv(g)
                Mat d(4, 3);
                for (int j = 0; j < 3; ++j) d.col(j) = g[j + 1] - g[0];
                double vol = std::sqrt(std::abs(
                                 (d.transpose() * d).determinant())) / 6.0;
                if (vol < 1e-300) continue;
                // unit normal of the affine hull within R^4
                Eigen::FullPivLU<Mat> lu(d.transpose());
                Mat ker = lu.kernel();
                Vec nrm = ker.col(0).normalized();
                double h = std::abs(nrm.dot(g[0]));
                Halton seq(3, spec.seed);
                std::vector<double> bacc(m);
                std::vector<double> batch_mean(static_cast<std::size_t>(m) * batches);
                for (int bt = 0; bt < batches; ++bt) {
                    std::fill(bacc.begin(), bacc.end(), 0.0);
                    for (int i = 0; i < per_batch; ++i) {
                        auto q = seq.next();
                        std::sort(q.begin(), q.end());
                        double l0 = q[0], l1 = q[1] - q[0], l2 = q[2] - q[1],
                               l3 = 1.0 - q[2];
                        Vec x = l0 * g[0] + l1 * g[1] + l2 * g[2] + l3 * g[3];
                        double r = x.norm();
                        Vec u = x / r;
                        double w = (f ? (*f)(u) : 1.0) * h / (r * r * r * r);
                        SymTensor us = vector_power(u, s);
                        for (int j = 0; j < m; ++j) bacc[j] += w * us.raw()[j];
                    }
                    for (int j = 0; j < m; ++j)
                        batch_mean[static_cast<std::size_t>(bt) * m + j] =
                            bacc[j] / per_batch * vol;
                }
                for (int j = 0; j < m; ++j) {
                    double mean = 0.0;
                    for (int bt = 0; bt < batches; ++bt)
                        mean += batch_mean[static_cast<std::size_t>(bt) * m + j];
                    mean /= batches;
                    double v2 = 0.0;
                    for (int bt = 0; bt < batches; ++bt) {
                        double dv = batch_mean[static_cast<std::size_t>(bt) * m + j] - mean;
                        v2 += dv * dv;
                    }
                    acc[j] += mean;
                    var[j] += v2 / (batches * (batches - 1));
                }
            }
            res.tensor.raw() = acc;
            res.error = 0.0;
            for (int j = 0; j < m; ++j) res.error += std::sqrt(var[j]);
            return res;
        }
    }
    throw std::logic_error("integrate_monomial: unreachable");
}

// H^d measure of the region.
inline double region_measure(const SphericalRegion& reg, const QuadratureSpec& spec = {}) {
    return integrate_monomial(reg, 0, nullptr, spec).tensor.scalar_value();
}

}  // namespace minktens
