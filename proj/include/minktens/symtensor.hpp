#pragma once

// Symmetric tensor algebra on R^n, stored densely by weakly increasing
// multi-index. A rank-p symmetric tensor is identified with the symmetric
// p-linear functional it defines; a rank-0 tensor is a scalar.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "minktens/common.hpp"
#include "minktens/multiindex.hpp"

namespace minktens {

class Rotation {
public:
    explicit Rotation(Mat m, double tol = kOrthoTol) : m_(std::move(m)) {
        const int n = static_cast<int>(m_.rows());
        if (m_.cols() != n) throw std::invalid_argument("Rotation: not square");
        Mat g = m_.transpose() * m_;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (std::abs(g(i, j) - (i == j ? 1.0 : 0.0)) > tol)
                    throw std::invalid_argument("Rotation: columns not orthonormal");
    }

    static Rotation identity(int n) { return Rotation(Mat::Identity(n, n)); }

    // Rotation by angle in the (i, j) coordinate plane, fixing the rest.
    static Rotation plane(int n, int i, int j, double angle) {
        Mat m = Mat::Identity(n, n);
        m(i, i) = std::cos(angle);
        m(j, j) = std::cos(angle);
        m(i, j) = -std::sin(angle);
        m(j, i) = std::sin(angle);
        return Rotation(m);
    }

    static Rotation random(int n, Rng& rng) {
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
        Eigen::HouseholderQR<Mat> qr(g);
        Mat q = qr.householderQ() * Mat::Identity(n, n);
        Mat r = q.transpose() * g;
        for (int i = 0; i < n; ++i)
            if (r(i, i) < 0) q.col(i) = -q.col(i);
        return Rotation(q);
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& matrix() const { return m_; }
    Vec apply(const Vec& v) const { return m_ * v; }
    Vec apply_inverse(const Vec& v) const { return m_.transpose() * v; }
    Rotation inverse() const { return Rotation(m_.transpose()); }
    Rotation operator*(const Rotation& o) const { return Rotation(Mat(m_ * o.m_)); }
    double determinant() const { return m_.determinant(); }

private:
    Mat m_;
};

class SymTensor {
public:
    SymTensor() : n_(1), p_(0), c_(1, 0.0) {}

    SymTensor(int n, int p) : n_(n), p_(p), c_(MultiIndexSet::get(n, p).size(), 0.0) {}

    static SymTensor zero(int n, int p) { return SymTensor(n, p); }

    static SymTensor scalar(int n, double value) {
        SymTensor t(n, 0);
        t.c_[0] = value;
        return t;
    }

    // Metric tensor Q(x, y) = <x, y>.
    static SymTensor metric(int n) {
        SymTensor t(n, 2);
        for (int i = 0; i < n; ++i) t.coeff({i, i}) = 1.0;
        return t;
    }

    // Projection tensor Q_L(a, b) = <pi_L a, pi_L b> for an orthonormal basis of L.
    // An empty basis yields the zero tensor (L = {0}).
    static SymTensor projection(int n, const std::vector<Vec>& basis, double tol = 1e-10) {
        SymTensor t(n, 2);
        for (std::size_t a = 0; a < basis.size(); ++a) {
            if (static_cast<int>(basis[a].size()) != n)
                throw std::invalid_argument("projection: basis dimension mismatch");
            for (std::size_t b = 0; b < basis.size(); ++b) {
                double g = basis[a].dot(basis[b]) - (a == b ? 1.0 : 0.0);
                if (std::abs(g) > tol)
                    throw std::invalid_argument("projection: basis not orthonormal");
            }
        }
        for (const Vec& v : basis)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) t.coeff({i, j}) += v[i] * v[j];
        return t;
    }

    // x^r with x^r(y_1,...,y_r) = <x,y_1>...<x,y_r>; r = 0 gives the scalar 1
    // (the convention 0^0 := 1 applies, so x = 0 is allowed).
    static SymTensor vector_power(const Vec& x, int r) {
        const int n = static_cast<int>(x.size());
        if (r < 0) throw std::invalid_argument("vector_power: negative rank");
        SymTensor t(n, r);
        const auto& mis = MultiIndexSet::get(n, r);
        for (int i = 0; i < mis.size(); ++i) {
            double v = 1.0;
            for (int q : mis[i]) v *= x[q];
            t.c_[i] = v;
        }
        return t;
    }

    int dim() const { return n_; }
    int rank() const { return p_; }
    const MultiIndexSet& index_set() const { return MultiIndexSet::get(n_, p_); }
    const std::vector<double>& raw() const { return c_; }
    std::vector<double>& raw() { return c_; }

    double& coeff(MultiIndex idx) {
        return c_[index_set().position_of_unsorted(std::move(idx))];
    }
    double coeff(MultiIndex idx) const {
        return c_[index_set().position_of_unsorted(std::move(idx))];
    }
    double scalar_value() const {
        if (p_ != 0) throw std::logic_error("scalar_value: rank > 0");
        return c_[0];
    }

    // Multilinear evaluation T(v_1, ..., v_p); symmetric in the arguments.
    double evaluate(std::span<const Vec> args) const {
        if (static_cast<int>(args.size()) != p_)
            throw std::invalid_argument("evaluate: arity mismatch");
        for (const Vec& a : args)
            if (static_cast<int>(a.size()) != n_)
                throw std::invalid_argument("evaluate: dimension mismatch");
        if (p_ == 0) return c_[0];
        const auto& mis = index_set();
        double total = 0.0;
        MultiIndex tuple(p_, 0);
        std::vector<double> partial(p_ + 1, 1.0);  // partial[k] = prod of first k factors
        int k = 0;
        for (;;) {
            while (k < p_) {
                partial[k + 1] = partial[k] * args[k][tuple[k]];
                ++k;
            }
            total += c_[mis.position_of_unsorted(tuple)] * partial[p_];
            // odometer increment
            --k;
            while (k >= 0 && tuple[k] == n_ - 1) {
                tuple[k] = 0;
                --k;
            }
            if (k < 0) break;
            ++tuple[k];
        }
        return total;
    }

    double evaluate(const std::vector<Vec>& args) const {
        return evaluate(std::span<const Vec>(args.data(), args.size()));
    }

    // T(x, ..., x), the associated homogeneous polynomial.
    double power_eval(const Vec& x) const {
        std::vector<Vec> args(p_, x);
        return evaluate(args);
    }

    // Fix the first args.size() slots, returning a tensor of lower rank.
    SymTensor partial_evaluate(const std::vector<Vec>& args) const {
        const int q = static_cast<int>(args.size());
        if (q > p_) throw std::invalid_argument("partial_evaluate: too many arguments");
        SymTensor out(n_, p_ - q);
        const auto& mo = out.index_set();
        for (int i = 0; i < mo.size(); ++i) {
            std::vector<Vec> full = args;
            for (int v : mo[i]) full.push_back(unit_axis(n_, v));
            out.c_[i] = evaluate(full);
        }
        return out;
    }

    // Symmetric tensor product. Computed through the polynomial representation:
    // the monomial coefficients of T(x,...,x) multiply as polynomials.
    SymTensor sym_product(const SymTensor& other) const {
        if (n_ != other.n_) throw std::invalid_argument("sym_product: dimension mismatch");
        const auto& ma = index_set();
        const auto& mb = other.index_set();
        SymTensor out(n_, p_ + other.p_);
        const auto& mo = out.index_set();
        MultiIndex merged(p_ + other.p_);
        for (int a = 0; a < ma.size(); ++a) {
            if (c_[a] == 0.0) continue;
            const double ca = c_[a] * ma.multiplicity(a);
            for (int b = 0; b < mb.size(); ++b) {
                if (other.c_[b] == 0.0) continue;
                const double cb = other.c_[b] * mb.multiplicity(b);
                std::merge(ma[a].begin(), ma[a].end(), mb[b].begin(), mb[b].end(),
                           merged.begin());
                out.c_[mo.position(merged)] += ca * cb;
            }
        }
        for (int i = 0; i < mo.size(); ++i) out.c_[i] /= mo.multiplicity(i);
        return out;
    }

    SymTensor sym_power(int m) const {
        if (m < 0) throw std::invalid_argument("sym_power: negative exponent");
        SymTensor out = scalar(n_, 1.0);
        for (int i = 0; i < m; ++i) out = out.sym_product(*this);
        return out;
    }

    // (theta T)(x_1,...,x_p) = T(theta^{-1} x_1, ..., theta^{-1} x_p).
    SymTensor rotate(const Rotation& rot) const {
        if (rot.dim() != n_) throw std::invalid_argument("rotate: dimension mismatch");
        SymTensor out(n_, p_);
        const auto& mis = index_set();
        std::vector<Vec> rows(n_);
        for (int i = 0; i < n_; ++i) rows[i] = rot.matrix().row(i).transpose();
        for (int i = 0; i < mis.size(); ++i) {
            std::vector<Vec> args;
            args.reserve(p_);
            for (int v : mis[i]) args.push_back(rows[v]);
            out.c_[i] = evaluate(args);
        }
        return out;
    }

    // Trace over two slots (rank >= 2): sum_i T(e_i, e_i, ...).
    SymTensor trace() const {
        if (p_ < 2) throw std::logic_error("trace: rank < 2");
        SymTensor out(n_, p_ - 2);
        const auto& mo = out.index_set();
        for (int i = 0; i < mo.size(); ++i) {
            double s = 0.0;
            for (int q = 0; q < n_; ++q) {
                MultiIndex idx = mo[i];
                idx.push_back(q);
                idx.push_back(q);
                s += coeff(std::move(idx));
            }
            out.c_[i] = s;
        }
        return out;
    }

    SymTensor& operator+=(const SymTensor& o) {
        check_same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    SymTensor& operator-=(const SymTensor& o) {
        check_same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    SymTensor& operator*=(double s) {
        for (double& x : c_) x *= s;
        return *this;
    }
    friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
    friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
    friend SymTensor operator*(SymTensor a, double s) { return a *= s; }
    friend SymTensor operator*(double s, SymTensor a) { return a *= s; }

    // Max absolute coefficient; coefficients determine evaluations up to
    // multiplicities, so this is a faithful vanishing test.
    double norm_inf() const {
        double m = 0.0;
        for (double x : c_) m = std::max(m, std::abs(x));
        return m;
    }

    bool approx_equal(const SymTensor& o, double tol) const {
        check_same(o);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (std::abs(c_[i] - o.c_[i]) > tol) return false;
        return true;
    }

private:
    void check_same(const SymTensor& o) const {
        if (n_ != o.n_ || p_ != o.p_)
            throw std::invalid_argument("SymTensor: shape mismatch");
    }

    int n_, p_;
    std::vector<double> c_;
};

inline SymTensor sym_product(const SymTensor& a, const SymTensor& b) {
    return a.sym_product(b);
}

inline SymTensor metric_tensor(int n) { return SymTensor::metric(n); }

inline SymTensor projection_tensor(int n, const std::vector<Vec>& basis) {
    return SymTensor::projection(n, basis);
}

inline SymTensor vector_power(const Vec& x, int r) { return SymTensor::vector_power(x, r); }

inline SymTensor rotate(const SymTensor& t, const Rotation& rot) { return t.rotate(rot); }

}  // namespace minktens
