#pragma once

// Convex polytopes in R^2..R^4 with explicit face lattices: per-face
// Hausdorff measure, direction-space basis, and spherical normal cone.
// Lower-dimensional polytopes (points, segments, polygons in R^3) are
// first-class, with their own lattices and normal cones.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "minktens/common.hpp"
#include "minktens/spherical_region.hpp"
#include "minktens/symtensor.hpp"

namespace minktens {

struct Halfspace {
    Vec normal;   // unit
    double offset;  // {y : <y, normal> <= offset}

    Halfspace(Vec u, double h) : normal(std::move(u)), offset(h) {
        double nn = normal.norm();
        if (std::abs(nn - 1.0) > 1e-9) {
            normal /= nn;
            offset /= nn;
        }
    }
};

struct Face {
    int dim;
    std::vector<int> vertex_ids;   // corners; ordered cycle for 2-faces in R^3
    double measure;                // H^dim
    std::vector<Vec> basis;        // orthonormal basis of L(F)
    SphericalRegion normal_cone;   // nu(P, F)

    Face(int d, std::vector<int> vids, double meas, std::vector<Vec> b, SphericalRegion cone)
        : dim(d), vertex_ids(std::move(vids)), measure(meas), basis(std::move(b)),
          normal_cone(std::move(cone)) {}
};

class Polytope {
public:
    int ambient() const { return ambient_; }
    int dim() const { return dim_; }
    bool full_dim() const { return dim_ == ambient_; }
    bool partial_lattice() const { return partial_; }

    const std::vector<Vec>& vertices() const { return vertices_; }

    // Faces of dimension k. For full-dimensional P this covers k = 0..n-1;
    // lower-dimensional P includes itself as its top face.
    const std::vector<Face>& faces(int k) const {
        static const std::vector<Face> empty;
        if (k < 0 || k >= static_cast<int>(faces_.size())) return empty;
        return faces_[k];
    }
    int max_face_dim() const { return static_cast<int>(faces_.size()) - 1; }

    const std::vector<Halfspace>& facet_halfspaces() const { return halfspaces_; }

    double support(const Vec& u) const {
        double m = -std::numeric_limits<double>::infinity();
        for (const Vec& v : vertices_) m = std::max(m, v.dot(u));
        return m;
    }

    std::vector<int> support_set(const Vec& u, double tol = 1e-9) const {
        double m = support(u);
        std::vector<int> ids;
        for (int i = 0; i < static_cast<int>(vertices_.size()); ++i)
            if (vertices_[i].dot(u) >= m - tol * (1.0 + std::abs(m))) ids.push_back(i);
        return ids;
    }

    bool contains(const Vec& x, double tol = 1e-9) const {
        if (full_dim()) {
            for (const auto& h : halfspaces_)
                if (x.dot(h.normal) > h.offset + tol) return false;
            return true;
        }
        // affine-hull membership plus in-face test
        Vec d = x - vertices_[0];
        Vec proj = Vec::Zero(ambient_);
        for (const Vec& b : affine_basis_) proj += b * b.dot(d);
        if ((d - proj).norm() > tol) return false;
        if (dim_ == 0) return d.norm() <= tol;
        if (dim_ == 1) {
            const Vec dir = affine_basis_[0];
            double t = d.dot(dir);
            double tmax = (vertices_[1] - vertices_[0]).dot(dir);
            double lo = std::min(0.0, tmax), hi = std::max(0.0, tmax);
            return t >= lo - tol && t <= hi + tol;
        }
        for (const auto& h : halfspaces_)  // in-plane halfspaces for planar polygons
            if (x.dot(h.normal) > h.offset + tol) return false;
        return true;
    }

    // Nearest point p(P, x) and direction u(P, x) for x outside P.
    struct NearestPoint {
        Vec point;
        Vec direction;
        double distance;
    };

    NearestPoint nearest_point(const Vec& x) const {
        double best = std::numeric_limits<double>::infinity();
        Vec bp = vertices_[0];
        auto consider = [&](const Vec& cand) {
            double d = (x - cand).norm();
            if (d < best) {
                best = d;
                bp = cand;
            }
        };
        for (const Vec& v : vertices_) consider(v);
        for (int k = 1; k <= max_face_dim(); ++k) {
            for (const Face& f : faces(k)) {
                const Vec& origin = vertices_[f.vertex_ids[0]];
                Vec d = x - origin;
                Vec proj = Vec::Zero(ambient_);
                Vec local(k);
                for (int i = 0; i < k; ++i) {
                    local[i] = f.basis[i].dot(d);
                    proj += f.basis[i] * local[i];
                }
                Vec cand = origin + proj;
                if (face_contains_local(f, cand)) consider(cand);
            }
        }
        NearestPoint np{bp, Vec::Zero(ambient_), best};
        if (best > 1e-14) np.direction = (x - bp) / best;
        return np;
    }

    double distance(const Vec& x) const {
        if (contains(x, 1e-12)) return 0.0;
        return nearest_point(x).distance;
    }

    Vec centroid_of_vertices() const {
        Vec c = Vec::Zero(ambient_);
        for (const Vec& v : vertices_) c += v;
        return c / static_cast<double>(vertices_.size());
    }

    // --- isometries and scaling -------------------------------------------

    Polytope translated(const Vec& t) const {
        Polytope p(*this);
        for (Vec& v : p.vertices_) v += t;
        for (auto& h : p.halfspaces_) h.offset += h.normal.dot(t);
        return p;
    }

    Polytope rotated(const Rotation& rot) const {
        Polytope p(*this);
        for (Vec& v : p.vertices_) v = rot.apply(v);
        for (auto& fs : p.faces_)
            for (Face& f : fs) {
                for (Vec& b : f.basis) b = rot.apply(b);
                f.normal_cone = f.normal_cone.rotated(rot);
            }
        for (auto& h : p.halfspaces_) h.normal = rot.apply(h.normal);
        for (Vec& b : p.affine_basis_) b = rot.apply(b);
        return p;
    }

    Polytope scaled(double lambda) const {
        if (lambda <= 0) throw std::invalid_argument("scaled: lambda > 0 required");
        Polytope p(*this);
        for (Vec& v : p.vertices_) v *= lambda;
        for (auto& fs : p.faces_)
            for (Face& f : fs) f.measure *= std::pow(lambda, f.dim);
        for (auto& h : p.halfspaces_) h.offset *= lambda;
        return p;
    }

    // --- direct builders ----------------------------------------------------

    static Polytope make_point(const Vec& x) {
        Polytope p(static_cast<int>(x.size()), 0);
        p.vertices_ = {x};
        p.faces_.resize(1);
        p.faces_[0].emplace_back(0, std::vector<int>{0}, 1.0, std::vector<Vec>{},
                                 SphericalRegion::full_sphere(p.ambient_));
        return p;
    }

    static Polytope make_segment(const Vec& a, const Vec& b) {
        const int n = static_cast<int>(a.size());
        Vec d = b - a;
        double len = d.norm();
        if (len < 1e-13) throw std::invalid_argument("make_segment: degenerate");
        Vec dir = d / len;
        Polytope p(n, 1);
        p.vertices_ = {a, b};
        p.affine_basis_ = {dir};
        p.faces_.resize(2);
        // endpoint normal cones: closed hemispheres {<u, +-dir> <= 0}
        p.faces_[0].emplace_back(0, std::vector<int>{0}, 1.0, std::vector<Vec>{},
                                 hemisphere(-dir));
        p.faces_[0].emplace_back(0, std::vector<int>{1}, 1.0, std::vector<Vec>{},
                                 hemisphere(dir));
        // the segment itself: full unit sphere of dir^perp
        SphericalRegion cone = (n == 2)
            ? SphericalRegion::points(2, {perp2(dir), Vec(-perp2(dir))})
            : SphericalRegion::full_circle(any_orthogonal(dir),
                                           cross3(dir, any_orthogonal(dir)));
        p.faces_[1].emplace_back(1, std::vector<int>{0, 1}, len, std::vector<Vec>{dir},
                                 std::move(cone));
        return p;
    }

    // Full-dimensional polytope in R^2 from its boundary cycle (ccw).
    static Polytope make_polygon2(std::vector<Vec> cycle) {
        const int m = static_cast<int>(cycle.size());
        if (m < 3) throw std::invalid_argument("make_polygon2: need >= 3 vertices");
        Polytope p(2, 2);
        p.vertices_ = std::move(cycle);
        p.faces_.resize(2);
        double area2 = 0.0;
        for (int i = 0; i < m; ++i) {
            const Vec& a = p.vertices_[i];
            const Vec& b = p.vertices_[(i + 1) % m];
            area2 += a[0] * b[1] - a[1] * b[0];
        }
        if (area2 <= 0) throw std::invalid_argument("make_polygon2: cycle not ccw");
        std::vector<Vec> edge_normals(m);
        for (int i = 0; i < m; ++i) {
            const Vec& a = p.vertices_[i];
            const Vec& b = p.vertices_[(i + 1) % m];
            Vec e = b - a;
            Vec nrm = make_vec({e[1], -e[0]});
            nrm /= nrm.norm();
            edge_normals[i] = nrm;
            p.halfspaces_.emplace_back(nrm, nrm.dot(a));
            p.faces_[1].emplace_back(1, std::vector<int>{i, (i + 1) % m}, e.norm(),
                                     std::vector<Vec>{e / e.norm()},
                                     SphericalRegion::point(nrm));
        }
        for (int i = 0; i < m; ++i) {
            const Vec& nprev = edge_normals[(i + m - 1) % m];
            const Vec& nnext = edge_normals[i];
            p.faces_[0].emplace_back(0, std::vector<int>{i}, 1.0, std::vector<Vec>{},
                                     SphericalRegion::arc_between(nprev, nnext));
        }
        return p;
    }

    // Planar polygon embedded in R^3, given by its ccw cycle w.r.t. `normal`.
    static Polytope make_planar_polygon3(std::vector<Vec> cycle, const Vec& normal) {
        const int m = static_cast<int>(cycle.size());
        if (m < 3) throw std::invalid_argument("make_planar_polygon3: need >= 3 vertices");
        Vec nrm = normal / normal.norm();
        Polytope p(3, 2);
        p.vertices_ = std::move(cycle);
        p.faces_.resize(3);

        std::vector<Vec> edge_dirs(m), edge_out(m);
        double area = 0.0;
        for (int i = 0; i < m; ++i) {
            const Vec& a = p.vertices_[i];
            const Vec& b = p.vertices_[(i + 1) % m];
            Vec e = b - a;
            edge_dirs[i] = e / e.norm();
            edge_out[i] = cross3(edge_dirs[i], nrm);  // in-plane outward for ccw cycle
            area += 0.5 * cross3(a - p.vertices_[0], b - p.vertices_[0]).dot(nrm);
            p.halfspaces_.emplace_back(edge_out[i], edge_out[i].dot(a));
        }
        if (area <= 0) throw std::invalid_argument("make_planar_polygon3: cycle not ccw");

        for (int i = 0; i < m; ++i) {
            // half great circle from +n through the outward edge normal to -n
            p.faces_[1].emplace_back(
                1, std::vector<int>{i, (i + 1) % m},
                (p.vertices_[(i + 1) % m] - p.vertices_[i]).norm(),
                std::vector<Vec>{edge_dirs[i]},
                SphericalRegion::arc_param(nrm, edge_out[i], 0.0, std::numbers::pi));
        }
        for (int i = 0; i < m; ++i) {
            // lune spanned by +-n and the outward normals of the incident edges
            const Vec& m1 = edge_out[(i + m - 1) % m];
            const Vec& m2 = edge_out[i];
            p.faces_[0].emplace_back(
                0, std::vector<int>{i}, 1.0, std::vector<Vec>{},
                SphericalRegion::polygon3({nrm, m1, Vec(-nrm), m2}));
        }
        Vec b0 = edge_dirs[0];
        Vec b1 = cross3(nrm, b0);
        p.faces_[2].emplace_back(2, identity_ids(m), area, std::vector<Vec>{b0, b1},
                                 SphericalRegion::points(3, {nrm, Vec(-nrm)}));
        p.affine_basis_ = {b0, b1};
        return p;
    }

    // Full-dimensional polytope in R^3 from vertices plus facet cycles
    // (each ccw seen from outside).
    static Polytope from_vertex_facets(std::vector<Vec> verts,
                                       const std::vector<std::vector<int>>& facet_cycles);

    static Polytope box(const Vec& lo, const Vec& hi);
    static Polytope unit_cube(int n) {
        return box(Vec::Zero(n), Vec::Ones(n));
    }
    static Polytope icosphere(double radius, int level);

    // filled by the builders in hull.hpp
    friend Polytope assemble_full3(std::vector<Vec> verts,
                                   std::vector<std::vector<int>> facet_cycles);
    friend class LiftedComplexBuilder;

private:
    Polytope(int n, int d) : ambient_(n), dim_(d) {
        if (n < 2 || n > 4) throw std::invalid_argument("Polytope: ambient in 2..4");
        affine_basis_.clear();
    }

    static std::vector<int> identity_ids(int m) {
        std::vector<int> ids(m);
        std::iota(ids.begin(), ids.end(), 0);
        return ids;
    }

    static Vec perp2(const Vec& d) { return make_vec({-d[1], d[0]}); }

    // closed hemisphere {u : <u, inward> >= 0} as a 3-vertex polygon on its
    // boundary circle (R^3), or a half circle (R^2)
    static SphericalRegion hemisphere(const Vec& inward) {
        const int n = static_cast<int>(inward.size());
        if (n == 2) {
            Vec f = inward / inward.norm();
            Vec e = make_vec({f[1], -f[0]});
            return SphericalRegion::arc_param(e, f, 0.0, std::numbers::pi);
        }
        Vec d = inward / inward.norm();
        Vec e = any_orthogonal(d);
        Vec f = cross3(d, e);
        double c = std::cos(2.0 * std::numbers::pi / 3.0);
        double s = std::sin(2.0 * std::numbers::pi / 3.0);
        std::vector<Vec> tri{e, Vec(c * e + s * f), Vec(c * e - s * f)};
        // ensure ccw orientation about d
        if (cross3(tri[0], tri[1]).dot(d) < 0) std::swap(tri[1], tri[2]);
        return SphericalRegion::polygon3(tri);
    }

    bool face_contains_local(const Face& f, const Vec& x, double tol = 1e-9) const {
        if (f.dim == 0) return true;
        if (f.dim == 1) {
            const Vec& a = vertices_[f.vertex_ids.front()];
            const Vec& b = vertices_[f.vertex_ids.back()];
            double t = (x - a).dot(f.basis[0]);
            double tmax = (b - a).dot(f.basis[0]);
            double lo = std::min(0.0, tmax), hi = std::max(0.0, tmax);
            return t >= lo - tol && t <= hi + tol;
        }
        // 2-face: point-in-convex-polygon via edge cross signs (cycle order)
        const int m = static_cast<int>(f.vertex_ids.size());
        const Vec nrm = (f.basis.size() == 2 && ambient_ == 3)
                            ? cross3(f.basis[0], f.basis[1])
                            : Vec();
        for (int i = 0; i < m; ++i) {
            const Vec& a = vertices_[f.vertex_ids[i]];
            const Vec& b = vertices_[f.vertex_ids[(i + 1) % m]];
            if (ambient_ == 3 && f.dim == 2) {
                if (cross3(b - a, x - a).dot(nrm) < -tol * (b - a).norm()) return false;
            } else if (ambient_ == 2) {
                Vec e = b - a;
                if (e[0] * (x[1] - a[1]) - e[1] * (x[0] - a[0]) < -tol * e.norm())
                    return false;
            }
        }
        return true;
    }

    int ambient_;
    int dim_;
    bool partial_ = false;
    std::vector<Vec> vertices_;
    std::vector<std::vector<Face>> faces_;
    std::vector<Halfspace> halfspaces_;
    std::vector<Vec> affine_basis_;  // orthonormal basis of L(P) for dim < ambient
};

}  // namespace minktens
