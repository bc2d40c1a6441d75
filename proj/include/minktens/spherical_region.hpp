#pragma once

// Spherical regions: the sets nu(P, F) = N(P, F) cap S^{n-1} and the caps /
// test sets the valuation machinery integrates over. A region knows its
// spherical dimension and supports membership, rotation and max<u, c> queries.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "minktens/common.hpp"
#include "minktens/symtensor.hpp"

namespace minktens {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class SphericalRegion {
public:
    enum class Kind { Points, Arc, Polygon, Cap, FullSphere, Cone3 };

    Kind kind() const { return kind_; }
    int ambient() const { return ambient_; }

    int sdim() const {
        switch (kind_) {
            case Kind::Points: return 0;
            case Kind::Arc: return 1;
            case Kind::Polygon: return 2;
            case Kind::Cap: return ambient_ - 1;
            case Kind::FullSphere: return ambient_ - 1;
            case Kind::Cone3: return 3;
        }
        return -1;
    }

    // --- constructors ----------------------------------------------------

    static SphericalRegion points(int n, std::vector<Vec> atoms) {
        SphericalRegion r(Kind::Points, n);
        for (auto& a : atoms) r.atoms_.push_back(normalized(a));
        return r;
    }

    static SphericalRegion point(const Vec& u) {
        return points(static_cast<int>(u.size()), {u});
    }

    // Minor arc from a to b along the great circle through them.
    static SphericalRegion arc_between(const Vec& a, const Vec& b) {
        Vec e = normalized(a);
        Vec f = b - b.dot(e) * e;
        double nf = f.norm();
        if (nf < 1e-13)
            throw std::invalid_argument("arc_between: endpoints parallel or antipodal");
        SphericalRegion r(Kind::Arc, static_cast<int>(a.size()));
        r.arc_e_ = e;
        r.arc_f_ = f / nf;
        r.theta0_ = 0.0;
        r.theta1_ = std::acos(std::clamp(normalized(b).dot(e), -1.0, 1.0));
        return r;
    }

    // Arc through m from a to b (used for half circles where a, b are antipodal).
    static SphericalRegion arc_via(const Vec& a, const Vec& m, const Vec& b) {
        Vec e = normalized(a);
        Vec f = m - m.dot(e) * e;
        double nf = f.norm();
        if (nf < 1e-13) throw std::invalid_argument("arc_via: midpoint on axis");
        f /= nf;
        Vec bu = normalized(b);
        double c = bu.dot(e), s = bu.dot(f);
        double t1 = std::atan2(s, c);
        if (t1 <= 1e-14) t1 += kTwoPi;
        SphericalRegion r(Kind::Arc, static_cast<int>(a.size()));
        r.arc_e_ = e;
        r.arc_f_ = f;
        r.theta0_ = 0.0;
        r.theta1_ = t1;
        return r;
    }

    static SphericalRegion arc_param(const Vec& e, const Vec& f, double t0, double t1) {
        if (t1 <= t0 || t1 - t0 > kTwoPi + 1e-12)
            throw std::invalid_argument("arc_param: bad angle range");
        SphericalRegion r(Kind::Arc, static_cast<int>(e.size()));
        r.arc_e_ = normalized(e);
        r.arc_f_ = normalized(f);
        if (std::abs(r.arc_e_.dot(r.arc_f_)) > 1e-10)
            throw std::invalid_argument("arc_param: frame not orthogonal");
        r.theta0_ = t0;
        r.theta1_ = t1;
        return r;
    }

    // Full great circle in span(e, f).
    static SphericalRegion full_circle(const Vec& e, const Vec& f) {
        return arc_param(e, f, 0.0, kTwoPi);
    }

    // Convex spherical polygon on the unit 2-sphere of span(subspace columns),
    // given by its ordered boundary vertices in local coordinates.
    static SphericalRegion polygon(const Mat& subspace, std::vector<Vec> local_verts) {
        if (subspace.cols() != 3) throw std::invalid_argument("polygon: need 3 basis columns");
        if (local_verts.size() < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
        SphericalRegion r(Kind::Polygon, static_cast<int>(subspace.rows()));
        r.subspace_ = subspace;
        for (auto& v : local_verts) r.poly_.push_back(normalized(v));
        r.orient_and_check();
        return r;
    }

    // Polygon directly in R^3.
    static SphericalRegion polygon3(std::vector<Vec> verts) {
        return polygon(Mat::Identity(3, 3), std::move(verts));
    }

    // Cap {u : <u, axis> > 1 - mu}; mu = 2 covers the whole sphere.
    static SphericalRegion cap(const Vec& axis, double mu) {
        if (mu <= 0.0 || mu > 2.0) throw std::invalid_argument("cap: mu out of (0, 2]");
        SphericalRegion r(Kind::Cap, static_cast<int>(axis.size()));
        r.axis_ = normalized(axis);
        r.mu_ = mu;
        return r;
    }

    static SphericalRegion full_sphere(int n) { return SphericalRegion(Kind::FullSphere, n); }

    // Pointed cone in R^4 given by generators plus a simplicial decomposition
    // (index quadruples into the generator list).
    static SphericalRegion cone3(std::vector<Vec> generators,
                                 std::vector<std::array<int, 4>> simplices) {
        if (generators.empty() || simplices.empty())
            throw std::invalid_argument("cone3: empty");
        SphericalRegion r(Kind::Cone3, static_cast<int>(generators[0].size()));
        if (r.ambient_ != 4) throw std::invalid_argument("cone3: ambient must be 4");
        for (auto& g : generators) r.atoms_.push_back(normalized(g));
        r.simplices_ = std::move(simplices);
        return r;
    }

    // --- accessors --------------------------------------------------------

    const std::vector<Vec>& atoms() const { return atoms_; }
    const Vec& arc_e() const { return arc_e_; }
    const Vec& arc_f() const { return arc_f_; }
    double theta0() const { return theta0_; }
    double theta1() const { return theta1_; }
    bool full_circle_flag() const {
        return kind_ == Kind::Arc && theta1_ - theta0_ >= kTwoPi - 1e-12;
    }
    const Mat& subspace() const { return subspace_; }
    const std::vector<Vec>& polygon_local() const { return poly_; }
    Vec polygon_vertex_global(int i) const { return subspace_ * poly_[i]; }
    const Vec& cap_axis() const { return axis_; }
    double cap_mu() const { return mu_; }
    const std::vector<std::array<int, 4>>& cone_simplices() const { return simplices_; }

    Vec arc_point(double theta) const {
        return std::cos(theta) * arc_e_ + std::sin(theta) * arc_f_;
    }

    // --- queries ----------------------------------------------------------

    bool contains(const Vec& u, double tol = 1e-10) const {
        switch (kind_) {
            case Kind::FullSphere:
                return true;
            case Kind::Cap:
                return axis_.dot(u) > 1.0 - mu_ - tol;
            case Kind::Points:
                for (const Vec& a : atoms_)
                    if ((a - u).norm() <= tol) return true;
                return false;
            case Kind::Arc: {
                double c = u.dot(arc_e_), s = u.dot(arc_f_);
                if (std::abs(c * c + s * s - 1.0) > 2 * tol) return false;
                if (full_circle_flag()) return true;
                double t = std::atan2(s, c);
                while (t < theta0_ - tol) t += kTwoPi;
                return t <= theta1_ + tol;
            }
            case Kind::Polygon: {
                Vec w = subspace_.transpose() * u;
                if (std::abs(w.squaredNorm() - 1.0) > 2 * tol) return false;
                const int m = static_cast<int>(poly_.size());
                for (int i = 0; i < m; ++i)
                    if (cross3(poly_[i], poly_[(i + 1) % m]).dot(w) < -tol) return false;
                return true;
            }
            case Kind::Cone3: {
                for (const auto& sx : simplices_) {
                    Mat g(4, 4);
                    for (int j = 0; j < 4; ++j) g.col(j) = atoms_[sx[j]];
                    Eigen::Matrix<double, 4, 1> lam =
                        g.fullPivLu().solve(Eigen::Matrix<double, 4, 1>(u));
                    if (lam.minCoeff() >= -tol) return true;
                }
                return false;
            }
        }
        return false;
    }

    // sup over the region of <u, c> for a unit vector c.
    double max_dot(const Vec& c) const {
        switch (kind_) {
            case Kind::FullSphere:
                return 1.0;
            case Kind::Cap: {
                double z = axis_.dot(c);
                if (z > 1.0 - mu_) return 1.0;
                Vec tang = c - z * axis_;
                return (1.0 - mu_) * z + std::sqrt(mu_ * (2.0 - mu_)) * tang.norm();
            }
            case Kind::Points: {
                double m = -2.0;
                for (const Vec& a : atoms_) m = std::max(m, a.dot(c));
                return m;
            }
            case Kind::Arc: {
                double pc = arc_e_.dot(c), ps = arc_f_.dot(c);
                double amp = std::hypot(pc, ps);
                if (amp < 1e-15) return 0.0;
                if (full_circle_flag()) return amp;
                double tstar = std::atan2(ps, pc);
                while (tstar < theta0_) tstar += kTwoPi;
                if (tstar <= theta1_) return amp;
                double f0 = pc * std::cos(theta0_) + ps * std::sin(theta0_);
                double f1 = pc * std::cos(theta1_) + ps * std::sin(theta1_);
                return std::max(f0, f1);
            }
            case Kind::Polygon: {
                Vec w = subspace_.transpose() * c;
                double wn = w.norm();
                if (wn < 1e-15) return 0.0;
                Vec wu = w / wn;
                const int m = static_cast<int>(poly_.size());
                bool inside = true;
                for (int i = 0; i < m; ++i)
                    if (cross3(poly_[i], poly_[(i + 1) % m]).dot(wu) < 0) inside = false;
                if (inside) return wn;
                double best = -2.0;
                for (int i = 0; i < m; ++i) {
                    Vec a = poly_[i], b = poly_[(i + 1) % m];
                    Vec e = a;
                    Vec f = b - b.dot(a) * a;
                    double nf = f.norm();
                    if (nf < 1e-14) continue;
                    f /= nf;
                    double t1 = std::acos(std::clamp(b.dot(a), -1.0, 1.0));
                    double pc = e.dot(w), ps = f.dot(w);
                    double tstar = std::atan2(ps, pc);
                    double v = std::max(pc, pc * std::cos(t1) + ps * std::sin(t1));
                    if (tstar >= 0 && tstar <= t1)
                        v = std::max(v, std::hypot(pc, ps));
                    best = std::max(best, v);
                }
                return best;
            }
            case Kind::Cone3:
                throw std::logic_error("max_dot: unsupported for Cone3");
        }
        return -2.0;
    }

    bool intersects_cap(const Vec& axis, double mu) const {
        return max_dot(axis) > 1.0 - mu + 1e-14;
    }

    SphericalRegion rotated(const Rotation& rot) const {
        SphericalRegion r(*this);
        for (auto& a : r.atoms_) a = rot.apply(a);
        if (kind_ == Kind::Arc) {
            r.arc_e_ = rot.apply(arc_e_);
            r.arc_f_ = rot.apply(arc_f_);
        }
        if (kind_ == Kind::Polygon) r.subspace_ = rot.matrix() * subspace_;
        if (kind_ == Kind::Cap) r.axis_ = rot.apply(axis_);
        return r;
    }

    // Sub-intervals of an arc where <u, axis> >= 1 - mu (closed-form clip).
    std::vector<std::pair<double, double>> arc_clip_by_cap(const Vec& axis, double mu) const {
        if (kind_ != Kind::Arc) throw std::logic_error("arc_clip_by_cap: not an arc");
        const double pc = arc_e_.dot(axis), ps = arc_f_.dot(axis);
        const double amp = std::hypot(pc, ps);
        const double c0 = 1.0 - mu;
        if (amp < c0) return {};
        if (-amp >= c0) return {{theta0_, theta1_}};  // whole circle satisfies
        const double tc = std::atan2(ps, pc);
        const double delta = std::acos(std::clamp(c0 / amp, -1.0, 1.0));
        // satisfied on [tc - delta, tc + delta] (mod 2pi); intersect with arc range
        std::vector<std::pair<double, double>> out;
        for (int k = -2; k <= 2; ++k) {
            double lo = std::max(theta0_, tc - delta + k * kTwoPi);
            double hi = std::min(theta1_, tc + delta + k * kTwoPi);
            if (hi - lo > 1e-14) out.emplace_back(lo, hi);
        }
        return out;
    }

private:
    SphericalRegion(Kind k, int n) : kind_(k), ambient_(n) {
        if (n < 2 || n > 4) throw std::invalid_argument("SphericalRegion: ambient in 2..4");
    }

    static Vec normalized(const Vec& v) {
        double n = v.norm();
        if (n < 1e-14) throw std::invalid_argument("SphericalRegion: zero vector");
        return v / n;
    }

    void orient_and_check() {
        const int m = static_cast<int>(poly_.size());
        Vec mean = Vec::Zero(3);
        for (const Vec& v : poly_) mean += v;
        if (mean.norm() < 1e-12)
            throw std::invalid_argument("polygon: degenerate vertex set");
        mean.normalize();
        int pos = 0, neg = 0;
        for (int i = 0; i < m; ++i) {
            double s = cross3(poly_[i], poly_[(i + 1) % m]).dot(mean);
            (s > 0 ? pos : neg)++;
        }
        if (neg > pos) std::reverse(poly_.begin(), poly_.end());
        for (int i = 0; i < m; ++i) {
            Vec h = cross3(poly_[i], poly_[(i + 1) % m]);
            if (h.norm() < 1e-13)
                throw std::invalid_argument("polygon: consecutive vertices parallel");
            for (int j = 0; j < m; ++j)
                if (h.dot(poly_[j]) < -1e-9)
                    throw std::invalid_argument("polygon: not convex");
        }
    }

    Kind kind_;
    int ambient_;
    std::vector<Vec> atoms_;                      // Points / Cone3 generators
    Vec arc_e_, arc_f_;                           // Arc frame
    double theta0_ = 0.0, theta1_ = 0.0;          // Arc range
    Mat subspace_;                                // Polygon: ambient x 3
    std::vector<Vec> poly_;                       // Polygon local vertices (ccw)
    Vec axis_;                                    // Cap
    double mu_ = 0.0;                             // Cap
    std::vector<std::array<int, 4>> simplices_;   // Cone3
};

}  // namespace minktens
