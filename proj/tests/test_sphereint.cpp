#include <gtest/gtest.h>

#include <numbers>

#include "minktens/sphereint.hpp"

using namespace minktens;

namespace {

constexpr std::uint64_t kSeed = 77031;
const double kPi = std::numbers::pi;

// Monte Carlo oracle: uniform samples on S^{n-1} kept by region membership.
// Returns mean tensor * omega_n and a per-coefficient standard error.
struct McOracle {
    SymTensor value;
    SymTensor stderr_;
};

McOracle mc_region_integral(const SphericalRegion& reg, int s, const SphericalWeight* f,
                            int samples, std::uint64_t seed) {
    const int n = reg.ambient();
    Rng rng(seed);
    const auto& mis = MultiIndexSet::get(n, s);
    std::vector<double> sum(mis.size(), 0.0), sum2(mis.size(), 0.0);
    for (int i = 0; i < samples; ++i) {
        Vec u = rng.unit_vec(n);
        double w = reg.contains(u, 1e-12) ? (f ? (*f)(u) : 1.0) : 0.0;
        SymTensor us = vector_power(u, s);
        for (std::size_t j = 0; j < sum.size(); ++j) {
            double x = w * us.raw()[j];
            sum[j] += x;
            sum2[j] += x * x;
        }
    }
    McOracle out{SymTensor::zero(n, s), SymTensor::zero(n, s)};
    const double area = omega_n(n);
    for (std::size_t j = 0; j < sum.size(); ++j) {
        double mean = sum[j] / samples;
        double var = std::max(0.0, sum2[j] / samples - mean * mean);
        out.value.raw()[j] = area * mean;
        out.stderr_.raw()[j] = area * std::sqrt(var / samples);
    }
    return out;
}

void expect_within_3se(const SymTensor& exact, const McOracle& mc) {
    for (std::size_t j = 0; j < exact.raw().size(); ++j) {
        double tol = 3.0 * mc.stderr_.raw()[j] + 1e-12;
        EXPECT_NEAR(exact.raw()[j], mc.value.raw()[j], tol) << "coefficient " << j;
    }
}

}  // namespace

TEST(OmegaKappa, ClosedFormValues) {
    EXPECT_NEAR(omega_n(1), 2.0, 1e-14);
    EXPECT_NEAR(omega_n(2), 2.0 * kPi, 1e-14);
    EXPECT_NEAR(omega_n(3), 4.0 * kPi, 1e-13);
    EXPECT_NEAR(omega_n(4), 2.0 * kPi * kPi, 1e-13);
    EXPECT_NEAR(kappa_n(3), 4.0 * kPi / 3.0, 1e-14);
    EXPECT_NEAR(kappa_n(0), 1.0, 1e-15);
}

TEST(SphereInt, FullSphereMoments) {
    for (int n = 2; n <= 4; ++n) {
        auto r0 = integrate_monomial(SphericalRegion::full_sphere(n), 0, nullptr);
        EXPECT_NEAR(r0.tensor.scalar_value(), omega_n(n), 1e-12);
        auto r1 = integrate_monomial(SphericalRegion::full_sphere(n), 1, nullptr);
        EXPECT_NEAR(r1.tensor.norm_inf(), 0.0, 1e-14);
    }
    // full S^2, s = 2 -> (4 pi / 3) Q, trace = omega_3
    auto r2 = integrate_monomial(SphericalRegion::full_sphere(3), 2, nullptr);
    EXPECT_TRUE(r2.tensor.approx_equal(metric_tensor(3) * (4.0 * kPi / 3.0), 1e-12));
    EXPECT_NEAR(r2.tensor.trace().scalar_value(), omega_n(3), 1e-12);
    // cross-check s = 4 against Monte Carlo
    auto r4 = integrate_monomial(SphericalRegion::full_sphere(3), 4, nullptr);
    auto mc = mc_region_integral(SphericalRegion::full_sphere(3), 4, nullptr, 400000, kSeed);
    expect_within_3se(r4.tensor, mc);
}

TEST(SphereInt, QuarterArcFirstMoment) {
    // quarter arc from e2 to e3 in R^3, s = 1 -> e2 + e3
    Vec e2 = unit_axis(3, 1), e3 = unit_axis(3, 2);
    auto arc = SphericalRegion::arc_between(e2, e3);
    auto r = integrate_monomial(arc, 1, nullptr);
    SymTensor expect = vector_power(e2, 1) + vector_power(e3, 1);
    EXPECT_TRUE(r.tensor.approx_equal(expect, 1e-13));
    EXPECT_EQ(r.error, 0.0);
}

TEST(SphereInt, FullCircleMoments) {
    // circle in the e2-e3 plane: s = 2 -> pi (e2^2 + e3^2)
    auto circ = SphericalRegion::full_circle(unit_axis(3, 1), unit_axis(3, 2));
    EXPECT_TRUE(circ.full_circle_flag());
    auto r = integrate_monomial(circ, 2, nullptr);
    SymTensor expect = (vector_power(unit_axis(3, 1), 2) +
                        vector_power(unit_axis(3, 2), 2)) * kPi;
    EXPECT_TRUE(r.tensor.approx_equal(expect, 1e-13));
    EXPECT_NEAR(region_measure(circ), 2.0 * kPi, 1e-13);
}

TEST(SphereInt, ArcExactMatchesGenericQuadrature) {
    Rng rng(kSeed + 1);
    QuadratureSpec spec;
    for (int it = 0; it < 10; ++it) {
        Vec a = rng.unit_vec(3);
        Vec b = rng.unit_vec(3);
        if (std::abs(a.dot(b)) > 0.95) continue;
        auto arc = SphericalRegion::arc_between(a, b);
        Vec axis = rng.unit_vec(3);
        double c0 = rng.uniform(-0.2, 0.6);
        auto zon = SphericalWeight::zonal_poly(axis, {0.3, -1.1, 0.7}, c0);
        auto gen = SphericalWeight::generic(zon.fn);
        for (int s = 0; s <= 3; ++s) {
            auto exact = integrate_monomial(arc, s, &zon, spec);
            auto numeric = integrate_monomial(arc, s, &gen, spec);
            EXPECT_TRUE(exact.tensor.approx_equal(numeric.tensor, 1e-8))
                << "s=" << s << " it=" << it;
            EXPECT_EQ(exact.error, 0.0);
        }
    }
}

TEST(SphereInt, ArcAdditivity) {
    Rng rng(kSeed + 2);
    for (int it = 0; it < 20; ++it) {
        Vec e = rng.unit_vec(3);
        Vec f = any_orthogonal(e);
        double t0 = rng.uniform(0, 2), t1 = t0 + rng.uniform(0.3, 2.5);
        double tm = rng.uniform(t0 + 0.01, t1 - 0.01);
        for (int s = 0; s <= 2; ++s) {
            auto whole = integrate_monomial(SphericalRegion::arc_param(e, f, t0, t1), s, nullptr);
            auto p1 = integrate_monomial(SphericalRegion::arc_param(e, f, t0, tm), s, nullptr);
            auto p2 = integrate_monomial(SphericalRegion::arc_param(e, f, tm, t1), s, nullptr);
            EXPECT_TRUE(whole.tensor.approx_equal(p1.tensor + p2.tensor, 1e-12));
        }
    }
}

TEST(SphereInt, CapMeasureAndMoments) {
    // area of a cap of height mu about axis: 2 pi mu (n = 3)
    Vec axis = make_vec({0.0, 0.0, -1.0});
    double mu = 0.35;
    auto cap = SphericalRegion::cap(axis, mu);
    EXPECT_NEAR(region_measure(cap), 2.0 * kPi * mu, 1e-12);

    auto r1 = integrate_monomial(cap, 1, nullptr);
    // integral of u over the cap = axis * pi (1 - (1-mu)^2)
    double c = kPi * (1.0 - (1.0 - mu) * (1.0 - mu));
    EXPECT_TRUE(r1.tensor.approx_equal(vector_power(axis, 1) * c, 1e-12));

    auto mc2 = mc_region_integral(cap, 2, nullptr, 400000, kSeed + 3);
    expect_within_3se(integrate_monomial(cap, 2, nullptr).tensor, mc2);

    // zonal quadratic bump on its support, against Monte Carlo
    auto bump = SphericalWeight::zonal_poly(axis, {std::pow(1 - mu, 2) * 1.0,
                                                   -2 * (1 - mu), 1.0}, 1.0 - mu);
    auto exact = integrate_monomial(cap, 2, &bump);
    auto mcw = mc_region_integral(SphericalRegion::full_sphere(3), 2, &bump, 400000, kSeed + 4);
    expect_within_3se(exact.tensor, mcw);
}

TEST(SphereInt, CapN4ZonalAgainstMc) {
    Vec axis = make_vec({0.0, 0.0, 0.0, -1.0});
    double mu = 0.3;
    auto cap = SphericalRegion::cap(axis, mu);
    for (int s = 0; s <= 2; ++s) {
        auto exact = integrate_monomial(cap, s, nullptr);
        auto mc = mc_region_integral(cap, s, nullptr, 300000, kSeed + 5 + s);
        expect_within_3se(exact.tensor, mc);
        EXPECT_LT(exact.error, 1e-10);
    }
}

TEST(SphereInt, OctantPolygonExact) {
    // octant of S^2: area pi/2 by angle excess; s = 2 integral has closed form
    auto oct = SphericalRegion::polygon3({unit_axis(3, 0), unit_axis(3, 1), unit_axis(3, 2)});
    EXPECT_NEAR(region_measure(oct), kPi / 2.0, 1e-13);

    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    auto r2 = integrate_monomial(oct, 2, nullptr, spec);
    // by symmetry: (1/8) of full sphere diagonal = (4 pi / 3)/8 on diagonal;
    // off-diagonal from MC
    auto mc = mc_region_integral(oct, 2, nullptr, 400000, kSeed + 6);
    expect_within_3se(r2.tensor, mc);
    EXPECT_NEAR(r2.tensor.coeff({0, 0}), 4.0 * kPi / 24.0, 1e-8);
}

TEST(SphereInt, PolygonAdditivity) {
    // splitting the octant along a geodesic: integrals add
    Vec mid = (unit_axis(3, 0) + unit_axis(3, 1)).normalized();
    auto whole = SphericalRegion::polygon3({unit_axis(3, 0), unit_axis(3, 1), unit_axis(3, 2)});
    auto p1 = SphericalRegion::polygon3({unit_axis(3, 0), mid, unit_axis(3, 2)});
    auto p2 = SphericalRegion::polygon3({mid, unit_axis(3, 1), unit_axis(3, 2)});
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    for (int s = 1; s <= 2; ++s) {
        auto w = integrate_monomial(whole, s, nullptr, spec);
        auto a = integrate_monomial(p1, s, nullptr, spec);
        auto b = integrate_monomial(p2, s, nullptr, spec);
        EXPECT_TRUE(w.tensor.approx_equal(a.tensor + b.tensor, 1e-8));
    }
}

TEST(SphereInt, RotationEquivariance) {
    Rng rng(kSeed + 7);
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    for (int it = 0; it < 5; ++it) {
        Rotation rot = Rotation::random(3, rng);
        auto reg = SphericalRegion::polygon3(
            {rng.unit_vec(3) * 0.0 + unit_axis(3, 0), unit_axis(3, 1),
             (unit_axis(3, 2) + 0.3 * unit_axis(3, 0)).normalized()});
        for (int s = 1; s <= 2; ++s) {
            auto base = integrate_monomial(reg, s, nullptr, spec);
            auto rot_reg = integrate_monomial(reg.rotated(rot), s, nullptr, spec);
            EXPECT_TRUE(rot_reg.tensor.approx_equal(base.tensor.rotate(rot), 1e-7));
        }
        // arcs as well (exact path)
        Vec a = rng.unit_vec(3), b = rng.unit_vec(3);
        if (std::abs(a.dot(b)) > 0.9) continue;
        auto arc = SphericalRegion::arc_between(a, b);
        auto r1 = integrate_monomial(arc.rotated(rot), 2, nullptr);
        auto r2 = integrate_monomial(arc, 2, nullptr);
        EXPECT_TRUE(r1.tensor.approx_equal(r2.tensor.rotate(rot), 1e-11));
    }
}

TEST(SphereInt, Cone3OrthantMeasure) {
    // positive orthant cone of S^3 decomposed into one simplex: measure
    // omega_4 / 16, first moments omega_3/... checked against closed form
    std::vector<Vec> gens{unit_axis(4, 0), unit_axis(4, 1), unit_axis(4, 2), unit_axis(4, 3)};
    auto cone = SphericalRegion::cone3(gens, {{0, 1, 2, 3}});
    QuadratureSpec spec;
    spec.mc_samples = 1 << 16;
    auto r = integrate_monomial(cone, 0, nullptr, spec);
    EXPECT_NEAR(r.tensor.scalar_value(), omega_n(4) / 16.0, std::max(5.0 * r.error, 2e-4));
    EXPECT_GT(r.error, 0.0);
}

TEST(SphereInt, PointsAtoms) {
    Vec n1 = unit_axis(3, 2), n2 = -unit_axis(3, 2);
    auto pts = SphericalRegion::points(3, {n1, n2});
    auto r = integrate_monomial(pts, 2, nullptr);
    EXPECT_TRUE(r.tensor.approx_equal(vector_power(n1, 2) * 2.0, 1e-15));
    auto r1 = integrate_monomial(pts, 1, nullptr);
    EXPECT_NEAR(r1.tensor.norm_inf(), 0.0, 1e-15);
}

TEST(SphereInt, RegionMaxDotAndMembership) {
    Vec axis = make_vec({0.0, 0.0, -1.0});
    auto cap = SphericalRegion::cap(axis, 0.2);
    EXPECT_NEAR(cap.max_dot(axis), 1.0, 1e-14);
    EXPECT_TRUE(cap.contains(axis));
    EXPECT_FALSE(cap.contains(unit_axis(3, 0)));

    auto arc = SphericalRegion::arc_between(unit_axis(3, 0), unit_axis(3, 1));
    EXPECT_NEAR(arc.max_dot((unit_axis(3, 0) + unit_axis(3, 1)).normalized()), 1.0, 1e-13);
    EXPECT_NEAR(arc.max_dot(unit_axis(3, 2)), 0.0, 1e-13);
    EXPECT_TRUE(arc.contains((unit_axis(3, 0) + unit_axis(3, 1)).normalized()));
    EXPECT_FALSE(arc.contains(unit_axis(3, 2)));

    auto clip = arc.arc_clip_by_cap(unit_axis(3, 0), 1.0 - std::sqrt(0.5));
    ASSERT_EQ(clip.size(), 1u);
    EXPECT_NEAR(clip[0].first, 0.0, 1e-12);
    EXPECT_NEAR(clip[0].second, kPi / 4.0, 1e-12);
}
