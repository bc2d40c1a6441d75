#pragma once

// Convex hulls (n <= 3) by gift wrapping with exactly decided orientation
// predicates, the face-lattice assembly for full-dimensional 3-polytopes,
// and the polytope operations built on them: halfspace cuts, hyperplane
// sections and Minkowski sums.

#include <array>
#include <map>
#include <optional>
#include <set>

#include "minktens/exactmath.hpp"
#include "minktens/polytope.hpp"

namespace minktens {

namespace hull_detail {

// Deduplicate points within `tol` (cluster representative = first seen).
inline std::vector<Vec> dedupe(const std::vector<Vec>& pts, double tol) {
    std::vector<Vec> out;
    for (const Vec& p : pts) {
        bool dup = false;
        for (const Vec& q : out)
            if ((p - q).norm() <= tol) { dup = true; break; }
        if (!dup) out.push_back(p);
    }
    return out;
}

// 2D convex hull (monotone chain) with exact orientation; strict turns,
// so collinear boundary points are dropped. Returns ccw index cycle.
inline std::vector<int> hull2_indices(const std::vector<Vec>& pts) {
    const int m = static_cast<int>(pts.size());
    std::vector<int> ord(m);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) {
        if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
        return pts[a][1] < pts[b][1];
    });
    auto build = [&](bool upper) {
        std::vector<int> chain;
        for (int i = 0; i < m; ++i) {
            int id = ord[upper ? m - 1 - i : i];
            while (chain.size() >= 2) {
                int s = orient2d(pts[chain[chain.size() - 2]], pts[chain.back()], pts[id]);
                if (s > 0) break;
                chain.pop_back();
            }
            chain.push_back(id);
        }
        return chain;
    };
    std::vector<int> lower = build(false), upper = build(true);
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    return lower;
}

// Project 3D points in a plane with normal-ish direction `nrm` to 2D by
// dropping the dominant axis, keeping an orientation-consistent pair.
inline std::vector<Vec> project_plane(const std::vector<Vec>& pts, const Vec& nrm,
                                      std::array<int, 2>* axes_out) {
    int drop = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(nrm[i]) > std::abs(nrm[drop])) drop = i;
    std::array<int, 2> axes = {(drop + 1) % 3, (drop + 2) % 3};
    if (nrm[drop] < 0) std::swap(axes[0], axes[1]);  // keep ccw = outward
    std::vector<Vec> flat;
    flat.reserve(pts.size());
    for (const Vec& p : pts) flat.push_back(make_vec({p[axes[0]], p[axes[1]]}));
    if (axes_out) *axes_out = axes;
    return flat;
}

struct WrapResult {
    std::vector<std::vector<int>> facet_cycles;  // ccw from outside
};

// Gift wrapping for full-dimensional point sets in R^3. Convention: a facet
// triple (a, b, c) is oriented so that orient3d(a, b, c, x) >= 0 for every
// point x, which makes cross(b - a, c - a) the outward normal.
inline WrapResult giftwrap3(const std::vector<Vec>& pts) {
    const int m = static_cast<int>(pts.size());

    // initial vertex: lexicographic min in (z, y, x)
    int p0 = 0;
    for (int i = 1; i < m; ++i) {
        const Vec &a = pts[i], &b = pts[p0];
        if (std::tie(a[2], a[1], a[0]) < std::tie(b[2], b[1], b[0])) p0 = i;
    }

    // tournament: winner q has orient3d(ea, eb, q, x) >= 0 for all x; points on
    // the line through (ea, eb) never win and may not initialize
    auto pivot = [&](const Vec& ea, const Vec& eb) {
        int cur = -1;
        double best = -1.0;
        Vec d = eb - ea;
        for (int i = 0; i < m; ++i) {
            double dist = cross3(d, pts[i] - ea).norm();
            if (dist > best) {
                best = dist;
                cur = i;
            }
        }
        if (cur < 0 || best <= 0.0) return -1;
        for (int i = 0; i < m; ++i)
            if (orient3d(ea, eb, pts[cur], pts[i]) < 0) cur = i;
        return cur;
    };

    // pivot around the horizontal line through p0 with direction e1: every
    // point has z >= z(p0), so the angular sweep is well defined
    Vec virtual_b = pts[p0] + unit_axis(3, 0);
    int q1 = pivot(pts[p0], virtual_b);
    if (q1 < 0) throw std::runtime_error("giftwrap3: degenerate input (rank < 2)");
    int q2 = pivot(pts[p0], pts[q1]);
    if (q2 < 0) throw std::runtime_error("giftwrap3: degenerate input (rank < 3)");
    std::array<int, 3> first = {p0, q1, q2};

    WrapResult out;
    std::set<std::vector<int>> seen_facets;
    // directed edges still to process, each with a point completing its facet plane
    std::vector<std::array<int, 3>> stack;

    auto emit_facet = [&](int a, int b, int c) {
        // all points with orient3d(a, b, c, x) == 0 belong to this facet
        std::vector<int> on_ids;
        for (int i = 0; i < m; ++i)
            if (orient3d(pts[a], pts[b], pts[c], pts[i]) == 0) on_ids.push_back(i);
        Vec nrm = cross3(pts[b] - pts[a], pts[c] - pts[a]);
        std::vector<Vec> sub;
        sub.reserve(on_ids.size());
        for (int id : on_ids) sub.push_back(pts[id]);
        auto flat = project_plane(sub, nrm, nullptr);
        std::vector<int> cycle_local = hull2_indices(flat);
        std::vector<int> cycle;
        cycle.reserve(cycle_local.size());
        for (int cl : cycle_local) cycle.push_back(on_ids[cl]);

        std::vector<int> key = cycle;
        std::sort(key.begin(), key.end());
        if (!seen_facets.insert(key).second) return;
        out.facet_cycles.push_back(cycle);
        const int mc = static_cast<int>(cycle.size());
        for (int i = 0; i < mc; ++i) {
            // neighbor across directed edge (next, cur) shares it reversed
            stack.push_back({cycle[(i + 1) % mc], cycle[i], cycle[(i + 2) % mc]});
        }
    };

    emit_facet(first[0], first[1], first[2]);
    std::set<std::pair<int, int>> processed;
    while (!stack.empty()) {
        auto [a, b, inplane] = stack.back();
        stack.pop_back();
        if (!processed.insert({a, b}).second) continue;
        // wrap around edge (a, b): find extreme point off the current plane
        int cur = -1;
        for (int i = 0; i < m; ++i) {
            if (i == a || i == b) continue;
            if (orient3d(pts[a], pts[b], pts[inplane], pts[i]) == 0) continue;
            if (cur < 0) {
                cur = i;
                continue;
            }
            if (orient3d(pts[a], pts[b], pts[cur], pts[i]) < 0) cur = i;
        }
        if (cur < 0) throw std::runtime_error("giftwrap3: open surface");
        emit_facet(a, b, cur);
    }
    return out;
}

// Merge near-coplanar adjacent facets (relative tolerance on normals and
// offsets); Minkowski averages produce exactly-coplanar facets that floating
// arithmetic splits.
inline std::vector<std::vector<int>> merge_coplanar(const std::vector<Vec>& pts,
                                                    std::vector<std::vector<int>> cycles,
                                                    double tol) {
    const int nf = static_cast<int>(cycles.size());
    std::vector<Vec> normals(nf);
    std::vector<double> offsets(nf);
    double scale = 1e-30;
    for (const Vec& p : pts) scale = std::max(scale, p.norm());
    for (int f = 0; f < nf; ++f) {
        Vec nrm = Vec::Zero(3);  // Newell
        const auto& cy = cycles[f];
        for (std::size_t i = 0; i < cy.size(); ++i)
            nrm += cross3(pts[cy[i]], pts[cy[(i + 1) % cy.size()]]);
        normals[f] = nrm / nrm.norm();
        offsets[f] = normals[f].dot(pts[cy[0]]);
    }
    // union-find over edge-adjacent near-coplanar facets
    std::vector<int> parent(nf);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::map<std::pair<int, int>, int> edge_owner;
    for (int f = 0; f < nf; ++f) {
        const auto& cy = cycles[f];
        for (std::size_t i = 0; i < cy.size(); ++i) {
            int u = cy[i], v = cy[(i + 1) % cy.size()];
            auto key = std::minmax(u, v);
            auto it = edge_owner.find(key);
            if (it == edge_owner.end()) {
                edge_owner[key] = f;
            } else {
                int g = it->second;
                if ((normals[f] - normals[g]).norm() < tol &&
                    std::abs(offsets[f] - offsets[g]) < tol * scale)
                    parent[find(f)] = find(g);
            }
        }
    }
    std::map<int, std::set<int>> groups;
    for (int f = 0; f < nf; ++f) groups[find(f)].insert(f);
    std::vector<std::vector<int>> merged;
    for (auto& [root, members] : groups) {
        if (members.size() == 1) {
            merged.push_back(cycles[*members.begin()]);
            continue;
        }
        std::set<int> ids;
        Vec nrm = Vec::Zero(3);
        for (int f : members) {
            ids.insert(cycles[f].begin(), cycles[f].end());
            nrm += normals[f];
        }
        nrm /= nrm.norm();
        std::vector<int> idv(ids.begin(), ids.end());
        std::vector<Vec> sub;
        for (int id : idv) sub.push_back(pts[id]);
        auto flat = project_plane(sub, nrm, nullptr);
        std::vector<int> cyc_local = hull2_indices(flat);
        std::vector<int> cyc;
        for (int cl : cyc_local) cyc.push_back(idv[cl]);
        merged.push_back(cyc);
    }
    return merged;
}

}  // namespace hull_detail

// Face lattice of a full-dimensional 3-polytope from facet cycles
// (ccw seen from outside). Non-corner points are dropped.
inline Polytope assemble_full3(std::vector<Vec> verts,
                               std::vector<std::vector<int>> facet_cycles) {
    // keep only points that appear as facet corners
    std::vector<int> remap(verts.size(), -1);
    std::vector<Vec> used;
    for (auto& cy : facet_cycles)
        for (int& id : cy) {
            if (remap[id] < 0) {
                remap[id] = static_cast<int>(used.size());
                used.push_back(verts[id]);
            }
            id = remap[id];
        }

    Polytope p(3, 3);
    p.vertices_ = std::move(used);
    p.faces_.resize(3);

    const int nf = static_cast<int>(facet_cycles.size());
    std::vector<Vec> normals(nf);
    for (int f = 0; f < nf; ++f) {
        const auto& cy = facet_cycles[f];
        Vec nrm = Vec::Zero(3);
        for (std::size_t i = 0; i < cy.size(); ++i)
            nrm += cross3(p.vertices_[cy[i]], p.vertices_[cy[(i + 1) % cy.size()]]);
        double nn = nrm.norm();
        if (nn < 1e-14) throw std::runtime_error("assemble_full3: degenerate facet");
        normals[f] = nrm / nn;
    }

    // facets
    for (int f = 0; f < nf; ++f) {
        const auto& cy = facet_cycles[f];
        double area = 0.0;
        for (std::size_t i = 1; i + 1 < cy.size(); ++i)
            area += 0.5 * cross3(p.vertices_[cy[i]] - p.vertices_[cy[0]],
                                 p.vertices_[cy[i + 1]] - p.vertices_[cy[0]])
                              .dot(normals[f]);
        Vec b0 = (p.vertices_[cy[1]] - p.vertices_[cy[0]]).normalized();
        Vec b1 = cross3(normals[f], b0);
        p.faces_[2].emplace_back(2, cy, area, std::vector<Vec>{b0, b1},
                                 SphericalRegion::point(normals[f]));
        p.halfspaces_.emplace_back(normals[f], normals[f].dot(p.vertices_[cy[0]]));
    }

    // edges: shared by exactly two facets
    std::map<std::pair<int, int>, std::vector<int>> edge_facets;
    for (int f = 0; f < nf; ++f) {
        const auto& cy = facet_cycles[f];
        for (std::size_t i = 0; i < cy.size(); ++i) {
            auto key = std::minmax(cy[i], cy[(i + 1) % cy.size()]);
            edge_facets[key].push_back(f);
        }
    }
    std::map<std::pair<int, int>, int> edge_index;
    for (const auto& [key, fs] : edge_facets) {
        if (fs.size() != 2)
            throw std::runtime_error("assemble_full3: edge not shared by two facets");
        Vec a = p.vertices_[key.first], b = p.vertices_[key.second];
        edge_index[key] = static_cast<int>(p.faces_[1].size());
        p.faces_[1].emplace_back(
            1, std::vector<int>{key.first, key.second}, (b - a).norm(),
            std::vector<Vec>{(b - a).normalized()},
            SphericalRegion::arc_between(normals[fs[0]], normals[fs[1]]));
    }

    // vertices: cyclically ordered incident facet normals
    std::map<int, std::vector<int>> vert_facets;
    for (int f = 0; f < nf; ++f)
        for (int id : facet_cycles[f]) vert_facets[id].push_back(f);
    for (auto& [vid, fs] : vert_facets) {
        // walk the facet fan around the vertex via shared edges
        std::vector<int> ordered{fs[0]};
        std::set<int> left(fs.begin() + 1, fs.end());
        while (!left.empty()) {
            int cur = ordered.back();
            const auto& cy = facet_cycles[cur];
            int pos = static_cast<int>(std::find(cy.begin(), cy.end(), vid) - cy.begin());
            int nxt_vertex = cy[(pos + 1) % cy.size()];
            auto key = std::minmax(vid, nxt_vertex);
            const auto& pair = edge_facets[key];
            int other = pair[0] == cur ? pair[1] : pair[0];
            if (!left.erase(other))
                throw std::runtime_error("assemble_full3: vertex fan walk failed");
            ordered.push_back(other);
        }
        if (ordered.size() < 3)
            throw std::runtime_error("assemble_full3: vertex with < 3 facets");
        std::vector<Vec> cone;
        for (int f : ordered) cone.push_back(normals[f]);
        p.faces_[0].emplace_back(0, std::vector<int>{vid}, 1.0, std::vector<Vec>{},
                                 SphericalRegion::polygon3(cone));
    }
    return p;
}

// Convex hull / lattice construction for <= 3 ambient dimensions.
// The result's dimension matches the affine rank of the input.
inline Polytope make_hull(std::vector<Vec> points, double dedupe_tol = 1e-12,
                          double coplanar_tol = 1e-9) {
    if (points.empty()) throw std::invalid_argument("make_hull: empty input");
    const int n = static_cast<int>(points[0].size());
    if (n > 3) throw std::invalid_argument("make_hull: ambient > 3 unsupported");
    double scale = 1e-30;
    for (const Vec& p : points) scale = std::max(scale, p.norm());
    auto pts = hull_detail::dedupe(points, dedupe_tol * std::max(1.0, scale));

    if (pts.size() == 1) return Polytope::make_point(pts[0]);

    // affine rank with tolerance
    Mat diffs(n, static_cast<int>(pts.size()) - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.col(i - 1) = pts[i] - pts[0];
    Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeThinU);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-9 * std::max(1.0, scale)) ++rank;

    if (rank == 0) return Polytope::make_point(pts[0]);

    if (rank == 1) {
        Vec dir = svd.matrixU().col(0);
        double lo = 0.0, hi = 0.0;
        int ilo = 0, ihi = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double t = (pts[i] - pts[0]).dot(dir);
            if (t < lo) { lo = t; ilo = static_cast<int>(i); }
            if (t > hi) { hi = t; ihi = static_cast<int>(i); }
        }
        return Polytope::make_segment(pts[ilo], pts[ihi]);
    }

    if (n == 2) {
        auto cyc = hull_detail::hull2_indices(pts);
        std::vector<Vec> cycle;
        for (int id : cyc) cycle.push_back(pts[id]);
        return Polytope::make_polygon2(std::move(cycle));
    }

    if (rank == 2) {
        // planar point set in R^3
        Vec nrm = cross3(svd.matrixU().col(0), svd.matrixU().col(1));
        nrm.normalize();
        auto flat = hull_detail::project_plane(pts, nrm, nullptr);
        auto cyc = hull_detail::hull2_indices(flat);
        std::vector<Vec> cycle;
        for (int id : cyc) cycle.push_back(pts[id]);
        return Polytope::make_planar_polygon3(std::move(cycle), nrm);
    }

    auto wrap = hull_detail::giftwrap3(pts);
    auto cycles = hull_detail::merge_coplanar(pts, wrap.facet_cycles, coplanar_tol);
    return assemble_full3(std::move(pts), std::move(cycles));
}

inline Polytope Polytope::from_vertex_facets(std::vector<Vec> verts,
                                             const std::vector<std::vector<int>>& cycles) {
    return assemble_full3(std::move(verts), cycles);
}

inline Polytope Polytope::box(const Vec& lo, const Vec& hi) {
    const int n = static_cast<int>(lo.size());
    std::vector<Vec> corners;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? hi[i] : lo[i];
        corners.push_back(v);
    }
    return make_hull(std::move(corners));
}

inline Polytope Polytope::icosphere(double radius, int level) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec> verts;
    auto add = [&](double a, double b, double c) {
        Vec v = make_vec({a, b, c});
        verts.push_back(v / v.norm());
    };
    add(-1, phi, 0); add(1, phi, 0); add(-1, -phi, 0); add(1, -phi, 0);
    add(0, -1, phi); add(0, 1, phi); add(0, -1, -phi); add(0, 1, -phi);
    add(phi, 0, -1); add(phi, 0, 1); add(-phi, 0, -1); add(-phi, 0, 1);
    std::vector<std::array<int, 3>> tris = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec v = (verts[a] + verts[b]).normalized();
            verts.push_back(v);
            int id = static_cast<int>(verts.size()) - 1;
            midpoint[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> next;
        for (auto [a, b, c] : tris) {
            int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }
    for (Vec& v : verts) v *= radius;
    std::vector<std::vector<int>> cycles;
    cycles.reserve(tris.size());
    for (auto [a, b, c] : tris) cycles.push_back({a, b, c});
    return assemble_full3(std::move(verts), std::move(cycles));
}

// --- polytope operations ----------------------------------------------------

// P cap {y : <y, u> <= h}. Empty intersection -> nullopt. When the result
// loses dimension (P touches the plane only), the section is returned.
inline std::optional<Polytope> intersect_halfspace(const Polytope& p, const Halfspace& hs,
                                                   double tol = 1e-10) {
    const Vec& u = hs.normal;
    const double h = hs.offset;
    double scale = 1.0;
    for (const Vec& v : p.vertices()) scale = std::max(scale, v.norm());
    const double eps = tol * scale;

    std::vector<Vec> kept;
    int below = 0, above = 0;
    for (const Vec& v : p.vertices()) {
        double d = v.dot(u) - h;
        if (d <= eps) kept.push_back(v);
        if (d < -eps) ++below;
        if (d > eps) ++above;
    }
    if (kept.empty()) return std::nullopt;
    if (above == 0) return p;  // entirely inside
    if (below == 0) {
        // only the section remains
        return make_hull(std::move(kept));
    }
    // add edge crossings
    int edge_dim = std::min(1, p.max_face_dim());
    for (const Face& e : p.faces(edge_dim)) {
        if (e.dim != 1) continue;
        const Vec& a = p.vertices()[e.vertex_ids.front()];
        const Vec& b = p.vertices()[e.vertex_ids.back()];
        double da = a.dot(u) - h, db = b.dot(u) - h;
        if ((da < -eps && db > eps) || (da > eps && db < -eps)) {
            double s = da / (da - db);
            kept.push_back(a + s * (b - a));
        }
    }
    return make_hull(std::move(kept));
}

// P cap {y : <y, u> = h}; nullopt when the plane misses P.
inline std::optional<Polytope> hyperplane_section(const Polytope& p, const Halfspace& hs,
                                                  double tol = 1e-10) {
    const Vec& u = hs.normal;
    const double h = hs.offset;
    double scale = 1.0;
    for (const Vec& v : p.vertices()) scale = std::max(scale, v.norm());
    const double eps = tol * scale;

    std::vector<Vec> pts;
    for (const Vec& v : p.vertices())
        if (std::abs(v.dot(u) - h) <= eps) pts.push_back(v);
    int edge_dim = std::min(1, p.max_face_dim());
    for (const Face& e : p.faces(edge_dim)) {
        if (e.dim != 1) continue;
        const Vec& a = p.vertices()[e.vertex_ids.front()];
        const Vec& b = p.vertices()[e.vertex_ids.back()];
        double da = a.dot(u) - h, db = b.dot(u) - h;
        if ((da < -eps && db > eps) || (da > eps && db < -eps)) {
            double s = da / (da - db);
            pts.push_back(a + s * (b - a));
        }
    }
    if (pts.empty()) return std::nullopt;
    return make_hull(std::move(pts));
}

inline Polytope minkowski_sum(const Polytope& p, const Polytope& r) {
    if (p.ambient() != r.ambient())
        throw std::invalid_argument("minkowski_sum: dimension mismatch");
    if (p.ambient() > 3)
        throw std::invalid_argument("minkowski_sum: ambient > 3 unsupported");
    std::vector<Vec> sums;
    sums.reserve(p.vertices().size() * r.vertices().size());
    for (const Vec& a : p.vertices())
        for (const Vec& b : r.vertices()) sums.push_back(a + b);
    return make_hull(std::move(sums));
}

}  // namespace minktens
