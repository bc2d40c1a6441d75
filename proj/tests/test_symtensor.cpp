#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "minktens/symtensor.hpp"

using namespace minktens;

namespace {

constexpr int kIterations = 50;
constexpr std::uint64_t kSeed = 20240817;

SymTensor random_tensor(int n, int p, Rng& rng) {
    SymTensor t(n, p);
    for (double& c : t.raw()) c = rng.uniform(-1.0, 1.0);
    return t;
}

// Independent oracle for the symmetric product: the explicit symmetrization
// sum over all permutations of the combined argument tuple.
double sym_product_oracle(const SymTensor& a, const SymTensor& b,
                          const std::vector<Vec>& args) {
    const int p = a.rank(), q = b.rank();
    std::vector<int> perm(p + q);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    std::size_t count = 0;
    do {
        std::vector<Vec> aa, ba;
        for (int i = 0; i < p; ++i) aa.push_back(args[perm[i]]);
        for (int i = p; i < p + q; ++i) ba.push_back(args[perm[i]]);
        total += a.evaluate(aa) * b.evaluate(ba);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / static_cast<double>(count);
}

}  // namespace

TEST(SymTensor, ScalarIdentityActsAsUnit) {
    Rng rng(kSeed);
    SymTensor one = SymTensor::scalar(3, 1.0);
    SymTensor t = random_tensor(3, 3, rng);
    EXPECT_TRUE(one.sym_product(t).approx_equal(t, 1e-14));
    EXPECT_TRUE(t.sym_product(one).approx_equal(t, 1e-14));
}

TEST(SymTensor, VectorSquareCoefficients) {
    Vec e1 = unit_axis(2, 0);
    SymTensor t = vector_power(e1, 1).sym_product(vector_power(e1, 1));
    EXPECT_DOUBLE_EQ(t.coeff({0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(t.coeff({0, 1}), 0.0);
    EXPECT_DOUBLE_EQ(t.coeff({1, 1}), 0.0);
}

TEST(SymTensor, MixedProductEvaluation) {
    // evaluate(e1 . e2, (e1, e2)) = 1/2 from the S(2) symmetrization sum
    Vec e1 = unit_axis(2, 0), e2 = unit_axis(2, 1);
    SymTensor t = vector_power(e1, 1).sym_product(vector_power(e2, 1));
    EXPECT_NEAR(t.evaluate({e1, e2}), 0.5, 1e-15);
}

TEST(SymTensor, ProductMatchesSymmetrizationOracle) {
    Rng rng(kSeed + 1);
    for (int it = 0; it < kIterations; ++it) {
        int n = rng.uniform_int(2, 3);
        int p = rng.uniform_int(0, 2);
        int q = rng.uniform_int(p == 0 ? 1 : 0, 4 - p > 2 ? 2 : 4 - p);
        SymTensor a = random_tensor(n, p, rng);
        SymTensor b = random_tensor(n, q, rng);
        std::vector<Vec> args;
        for (int i = 0; i < p + q; ++i) args.push_back(rng.gaussian_vec(n));
        double got = a.sym_product(b).evaluate(args);
        double expect = sym_product_oracle(a, b, args);
        EXPECT_NEAR(got, expect, 1e-10);
    }
}

TEST(SymTensor, ProductAssociativeCommutative) {
    Rng rng(kSeed + 2);
    for (int it = 0; it < kIterations; ++it) {
        int n = rng.uniform_int(2, 4);
        SymTensor a = random_tensor(n, rng.uniform_int(0, 2), rng);
        SymTensor b = random_tensor(n, rng.uniform_int(0, 2), rng);
        SymTensor c = random_tensor(n, rng.uniform_int(0, 2), rng);
        EXPECT_TRUE(a.sym_product(b).approx_equal(b.sym_product(a), 1e-10));
        SymTensor ab_c = a.sym_product(b).sym_product(c);
        SymTensor a_bc = a.sym_product(b.sym_product(c));
        EXPECT_TRUE(ab_c.approx_equal(a_bc, 1e-10));
    }
}

TEST(SymTensor, VectorPowerEvaluatesAsInnerProducts) {
    Vec e1 = unit_axis(3, 0);
    EXPECT_NEAR(vector_power(e1, 2).evaluate({e1, e1}), 1.0, 1e-15);

    Vec zero = Vec::Zero(3);
    EXPECT_DOUBLE_EQ(vector_power(zero, 0).scalar_value(), 1.0);  // 0^0 := 1

    Vec x = make_vec({1.0, 2.0, 0.0});
    Vec y1 = unit_axis(3, 0), y2 = unit_axis(3, 1);
    EXPECT_NEAR(vector_power(x, 2).evaluate({y1, y2}), 2.0, 1e-15);

    Rng rng(kSeed + 3);
    for (int it = 0; it < kIterations; ++it) {
        int n = rng.uniform_int(2, 4);
        int r = rng.uniform_int(0, 4);
        Vec v = rng.gaussian_vec(n);
        std::vector<Vec> args;
        double expect = 1.0;
        for (int i = 0; i < r; ++i) {
            args.push_back(rng.gaussian_vec(n));
            expect *= v.dot(args.back());
        }
        EXPECT_NEAR(vector_power(v, r).evaluate(args), expect, 1e-10);
    }
}

TEST(SymTensor, MetricTensorIsScalarProduct) {
    SymTensor q = metric_tensor(3);
    Vec e1 = unit_axis(3, 0), e2 = unit_axis(3, 1);
    EXPECT_DOUBLE_EQ(q.evaluate({e1, e2}), 0.0);
    Rng rng(kSeed + 4);
    for (int it = 0; it < kIterations; ++it) {
        Vec v = rng.gaussian_vec(3);
        EXPECT_NEAR(q.evaluate({v, v}), v.squaredNorm(), 1e-12);
    }
    EXPECT_DOUBLE_EQ(SymTensor::scalar(3, 2.5).evaluate(std::vector<Vec>{}), 2.5);
}

TEST(SymTensor, ProjectionTensor) {
    // Q_L for L = span(e1) in R^3
    std::vector<Vec> basis{unit_axis(3, 0)};
    SymTensor ql = projection_tensor(3, basis);
    Vec e1 = unit_axis(3, 0), e2 = unit_axis(3, 1);
    EXPECT_DOUBLE_EQ(ql.evaluate({e1, e1}), 1.0);
    EXPECT_DOUBLE_EQ(ql.evaluate({e2, e2}), 0.0);

    // Q_L + Q_{L^perp} = Q for a random subspace, and evaluation matches
    // projected scalar products
    Rng rng(kSeed + 5);
    for (int it = 0; it < kIterations; ++it) {
        int n = rng.uniform_int(2, 4);
        int dl = rng.uniform_int(0, n);
        Rotation rot = Rotation::random(n, rng);
        std::vector<Vec> bl, bperp;
        for (int i = 0; i < n; ++i)
            (i < dl ? bl : bperp).push_back(rot.matrix().col(i));
        SymTensor sum = projection_tensor(n, bl) + projection_tensor(n, bperp);
        EXPECT_TRUE(sum.approx_equal(metric_tensor(n), 1e-10));

        Vec a = rng.gaussian_vec(n), b = rng.gaussian_vec(n);
        Vec pa = Vec::Zero(n), pb = Vec::Zero(n);
        for (const Vec& u : bl) {
            pa += u * u.dot(a);
            pb += u * u.dot(b);
        }
        EXPECT_NEAR(projection_tensor(n, bl).evaluate({a, b}), pa.dot(pb), 1e-10);
    }

    // full space gives the metric tensor
    std::vector<Vec> full{unit_axis(3, 0), unit_axis(3, 1), unit_axis(3, 2)};
    EXPECT_TRUE(projection_tensor(3, full).approx_equal(metric_tensor(3), 1e-14));

    std::vector<Vec> bad{make_vec({1.0, 1.0, 0.0})};
    EXPECT_THROW(projection_tensor(3, bad), std::invalid_argument);
}

TEST(SymTensor, RotationAction) {
    Rng rng(kSeed + 6);
    for (int it = 0; it < kIterations; ++it) {
        int n = rng.uniform_int(2, 4);
        Rotation rot = Rotation::random(n, rng);

        // Q is invariant
        EXPECT_TRUE(metric_tensor(n).rotate(rot).approx_equal(metric_tensor(n), 1e-12));

        // rotate(Q_L) = Q_{rot L}
        int dl = rng.uniform_int(1, n - 1);
        Rotation frame = Rotation::random(n, rng);
        std::vector<Vec> bl, blr;
        for (int i = 0; i < dl; ++i) {
            bl.push_back(frame.matrix().col(i));
            blr.push_back(rot.apply(frame.matrix().col(i)));
        }
        EXPECT_TRUE(projection_tensor(n, bl).rotate(rot).approx_equal(
            projection_tensor(n, blr), 1e-10));

        // rotate(x^r) = (rot x)^r
        Vec x = rng.gaussian_vec(n);
        int r = rng.uniform_int(0, 3);
        EXPECT_TRUE(vector_power(x, r).rotate(rot).approx_equal(
            vector_power(rot.apply(x), r), 1e-10));

        // definition: rotate(T)(v...) = T(rot^{-1} v ...)
        SymTensor t = random_tensor(n, 2, rng);
        Vec v1 = rng.gaussian_vec(n), v2 = rng.gaussian_vec(n);
        EXPECT_NEAR(t.rotate(rot).evaluate({v1, v2}),
                    t.evaluate({rot.apply_inverse(v1), rot.apply_inverse(v2)}), 1e-10);

        // group action: rotate twice composes
        Rotation rot2 = Rotation::random(n, rng);
        EXPECT_TRUE(t.rotate(rot).rotate(rot2).approx_equal(t.rotate(rot2 * rot), 1e-10));
    }
}

TEST(SymTensor, EvaluateSymmetricInArguments) {
    Rng rng(kSeed + 7);
    for (int it = 0; it < kIterations; ++it) {
        int n = rng.uniform_int(2, 3);
        SymTensor t = random_tensor(n, 3, rng);
        std::vector<Vec> args{rng.gaussian_vec(n), rng.gaussian_vec(n), rng.gaussian_vec(n)};
        double base = t.evaluate(args);
        std::vector<int> perm{0, 1, 2};
        while (std::next_permutation(perm.begin(), perm.end())) {
            std::vector<Vec> p{args[perm[0]], args[perm[1]], args[perm[2]]};
            EXPECT_NEAR(t.evaluate(p), base, 1e-12);
        }
    }
}

TEST(SymTensor, PartialEvaluate) {
    Rng rng(kSeed + 8);
    SymTensor t = random_tensor(3, 4, rng);
    Vec a = rng.gaussian_vec(3), b = rng.gaussian_vec(3);
    Vec c = rng.gaussian_vec(3), d = rng.gaussian_vec(3);
    SymTensor t2 = t.partial_evaluate({a, b});
    EXPECT_EQ(t2.rank(), 2);
    EXPECT_NEAR(t2.evaluate({c, d}), t.evaluate({a, b, c, d}), 1e-10);
}

TEST(SymTensor, TraceOfMetricIsDimension) {
    EXPECT_DOUBLE_EQ(metric_tensor(3).trace().scalar_value(), 3.0);
    Rng rng(kSeed + 9);
    Vec v = rng.gaussian_vec(3);
    EXPECT_NEAR(vector_power(v, 2).trace().scalar_value(), v.squaredNorm(), 1e-12);
}

TEST(SymTensor, ErrorsOnMismatch) {
    SymTensor a(2, 1), b(3, 1);
    EXPECT_THROW(a.sym_product(b), std::invalid_argument);
    EXPECT_THROW(a.evaluate({unit_axis(3, 0)}), std::invalid_argument);
    EXPECT_THROW(a.evaluate(std::vector<Vec>{}), std::invalid_argument);
}

TEST(Rotation, ValidatesOrthonormality) {
    Mat bad = Mat::Identity(3, 3);
    bad(0, 1) = 1e-6;
    EXPECT_THROW(Rotation{bad}, std::invalid_argument);
    Rng rng(kSeed + 10);
    Rotation r = Rotation::random(3, rng);
    EXPECT_NEAR(std::abs(r.determinant()), 1.0, 1e-10);
}
