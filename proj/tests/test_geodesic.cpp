#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "helidens/generators.hpp"
#include "helidens/geodesic.hpp"
#include "test_util.hpp"

using namespace helidens;

namespace {

// Worst and best ratio of graph distance to Euclidean distance from the
// center of a flat disk, over vertices at least `rmin` away.
std::pair<double, double> plane_ratios(const MeshedSurface& disk, const DistanceField& f, double rmin) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    const Point3& c = disk.mesh().vertex(f.source());
    for (int v = 0; v < static_cast<int>(disk.mesh().num_vertices()); ++v) {
        const double d = (disk.mesh().vertex(v) - c).norm();
        if (d < rmin) continue;
        const double r = f.dist[static_cast<std::size_t>(v)] / d;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo, hi};
}

} // namespace

TEST(Geodesic, PlaneCalibrationRefined) {
    const MeshedSurface disk = make_plane_disk(1.0, 24);
    const int c = nearest_vertex(disk.mesh(), Point3::Zero());
    const DistanceField f = geodesic_distance_field(disk, c);
    EXPECT_EQ(f.dist[static_cast<std::size_t>(c)], 0.0);
    EXPECT_EQ(f.method, GeodesicMethod::RefinedDijkstra);
    EXPECT_EQ(f.upper_bias_bound, kRefinedDijkstraBias);
    const auto [lo, hi] = plane_ratios(disk, f, 0.2);
    EXPECT_GE(lo, 1.0 - 1e-12); // polylines in the plane are never shorter
    EXPECT_LE(hi, kRefinedDijkstraBias);
}

TEST(Geodesic, PlaneCalibrationEdgeGraph) {
    const MeshedSurface disk = make_plane_disk(1.0, 24);
    const int c = nearest_vertex(disk.mesh(), Point3::Zero());
    GeodesicOptions opt;
    opt.method = GeodesicMethod::EdgeDijkstra;
    const DistanceField f = geodesic_distance_field(disk, c, opt);
    EXPECT_EQ(f.upper_bias_bound, kEdgeDijkstraBias);
    const auto [lo, hi] = plane_ratios(disk, f, 0.2);
    EXPECT_GE(lo, 1.0 - 1e-12);
    EXPECT_LE(hi, kEdgeDijkstraBias);
    EXPECT_GT(hi, kRefinedDijkstraBias); // the refined graph is the better one
}

TEST(Geodesic, HelicoidRulingIsStraight) {
    // The rulings v = const are straight lines on the helicoid, hence geodesics.
    HelicoidSpec spec;
    spec.rho_max = 2.0;
    spec.n_u = 41;
    spec.n_v = 41;
    const MeshedSurface h = make_helicoid(spec);
    const int axis = nearest_vertex(h.mesh(), Point3::Zero());
    const DistanceField f = geodesic_distance_field(h, axis);
    const int tip = nearest_vertex(h.mesh(), helicoid_point(1.0, 2.0, 0.0));
    EXPECT_NEAR(f.dist[static_cast<std::size_t>(tip)], 2.0, 1e-9);
}

TEST(Geodesic, ResumableMatchesOneShot) {
    const MeshedSurface disk = make_plane_disk(1.0, 16);
    const int c = nearest_vertex(disk.mesh(), Point3(0.3, 0.1, 0.0));
    GeodesicOptions opt;
    opt.cutoff = 0.8;
    const DistanceField once = geodesic_distance_field(disk.mesh(), {c}, opt);
    GeodesicSolver solver(disk.mesh(), {c});
    solver.advance(0.25);
    const DistanceField partial = solver.field();
    solver.advance(0.8);
    const DistanceField later = solver.field();
    int unreached = 0;
    for (std::size_t v = 0; v < once.dist.size(); ++v) {
        EXPECT_EQ(later.dist[v], once.dist[v]);
        if (partial.reached(static_cast<int>(v))) EXPECT_EQ(partial.dist[v], once.dist[v]);
        unreached += !once.reached(static_cast<int>(v));
    }
    EXPECT_GT(unreached, 0);
    for (std::size_t e = 0; e < once.edge_mid.size(); ++e) EXPECT_EQ(later.edge_mid[e], once.edge_mid[e]);
}

TEST(Geodesic, MultipleSourcesTakeMinimum) {
    const MeshedSurface disk = make_plane_disk(1.0, 12);
    const int a = nearest_vertex(disk.mesh(), Point3(-0.5, 0, 0));
    const int b = nearest_vertex(disk.mesh(), Point3(0.5, 0, 0));
    const DistanceField fa = geodesic_distance_field(disk, a);
    const DistanceField fb = geodesic_distance_field(disk, b);
    const DistanceField fab = geodesic_distance_field(disk.mesh(), {a, b});
    for (std::size_t v = 0; v < fab.dist.size(); ++v) EXPECT_DOUBLE_EQ(fab.dist[v], std::min(fa.dist[v], fb.dist[v]));
}

TEST(Geodesic, DisconnectedMeshThrows) {
    const std::vector<Point3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}};
    const TriMesh m = build_mesh(v, {}, {{0, 1, 2}, {3, 4, 5}});
    EXPECT_EQ(fixtures::code_of([&] { geodesic_distance_field(m, {0}); }), ErrorCode::DisconnectedMesh);
    GeodesicOptions opt;
    opt.cutoff = 10.0;
    const DistanceField f = geodesic_distance_field(m, {0}, opt);
    EXPECT_FALSE(f.reached(4));
}

TEST(Geodesic, InvalidOptions) {
    const MeshedSurface disk = make_plane_disk(1.0, 4);
    GeodesicOptions opt;
    opt.steiner_points = 4;
    EXPECT_EQ(fixtures::code_of([&] { geodesic_distance_field(disk, 0, opt); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(fixtures::code_of([&] { geodesic_distance_field(disk.mesh(), {}); }), ErrorCode::InvalidArgument);
}

TEST(Geodesic, MethodNames) {
    EXPECT_FALSE(to_string(GeodesicMethod::EdgeDijkstra).empty());
    EXPECT_NE(to_string(GeodesicMethod::EdgeDijkstra), to_string(GeodesicMethod::RefinedDijkstra));
}
