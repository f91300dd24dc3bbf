#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "helidens/error.hpp"
#include "helidens/mesh.hpp"

namespace helidens::fixtures {

// Code of the GeometryError thrown by f; records a failure if none is.
inline ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const GeometryError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no GeometryError thrown";
    return ErrorCode::InvalidArgument;
}

inline TriMesh tetrahedron() {
    std::vector<Point3> v{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<Face> f{{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    return build_mesh(v, {}, f);
}

inline std::vector<Point3> icosahedron_vertices() {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    return {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
            {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
}

inline std::vector<Face> icosahedron_faces() {
    return {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
            {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
            {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
}

// Icosahedron subdivided `levels` times with vertices pushed to the sphere.
inline TriMesh icosphere(double radius, int levels) {
    TriMesh m = build_mesh(icosahedron_vertices(), {}, icosahedron_faces());
    for (int l = 0; l < levels; ++l) m = subdivide_midpoint(m);
    std::vector<Point3> v;
    for (const Point3& p : m.vertices()) v.push_back(radius * p.normalized());
    return build_mesh(v, {}, std::vector<Face>(m.faces().begin(), m.faces().end()));
}

// Flat annulus r in [1, 2], n_theta x n_r quads, each split in two, normals +z.
inline TriMesh annulus(int n_theta, int n_r) {
    std::vector<Point3> v;
    for (int j = 0; j <= n_r; ++j)
        for (int i = 0; i < n_theta; ++i) {
            const double r = 1.0 + static_cast<double>(j) / n_r;
            const double a = 2.0 * std::numbers::pi * i / n_theta;
            v.push_back({r * std::cos(a), r * std::sin(a), 0.0});
        }
    auto id = [n_theta](int i, int j) { return j * n_theta + (i % n_theta); };
    std::vector<Face> f;
    for (int j = 0; j < n_r; ++j)
        for (int i = 0; i < n_theta; ++i) {
            f.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
            f.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
        }
    return build_mesh(v, {}, f);
}

} // namespace helidens::fixtures
