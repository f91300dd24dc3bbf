#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helidens/density.hpp"
#include "helidens/generators.hpp"
#include "test_util.hpp"

using namespace helidens;

namespace {

// Area of the helicoid inside the ball B_s(0) over pi s^2. The ball is
// u^2 + c^2 v^2 <= s^2 in parameters and the area element is sqrt(u^2 + c^2).
double helicoid_extrinsic_oracle(double c, double s) {
    const int n = 20000; // composite midpoint rule in u
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = -s + (i + 0.5) * 2.0 * s / n;
        sum += std::sqrt(u * u + c * c) * 2.0 * std::sqrt(s * s - u * u) / c;
    }
    return sum * (2.0 * s / n) / (std::numbers::pi * s * s);
}

MeshedSurface helicoid_ball(double c, double radius, double h) {
    HelicoidBallSpec spec;
    spec.pitch = c;
    spec.radius = radius;
    spec.h_fine = h;
    spec.zones = {{0.0, 0.0, radius}};
    return make_helicoid_ball(spec);
}

} // namespace

TEST(Density, OracleSanity) {
    EXPECT_NEAR(helicoid_extrinsic_oracle(1.0, 1.0), 1.11284, 1e-4);
    // Only s / c matters.
    EXPECT_NEAR(helicoid_extrinsic_oracle(1.0, 2.0), helicoid_extrinsic_oracle(0.5, 1.0), 1e-9);
    EXPECT_NEAR(helicoid_extrinsic_oracle(1.0, 1e-3), 1.0, 1e-6);
}

TEST(Density, PlaneIsOne) {
    const MeshedSurface disk = make_plane_disk(1.0, 32);
    const int c = nearest_vertex(disk.mesh(), Point3::Zero());
    for (double s : {0.2, 0.5}) {
        const DensityReport in = intrinsic_density(disk, c, s);
        EXPECT_LE(std::abs(in.value - 1.0), in.abs_error()) << s;
        EXPECT_FALSE(in.boundary_truncated);
        const DensityReport ex = extrinsic_density(disk, c, s);
        EXPECT_NEAR(ex.value, 1.0, 0.01);
        EXPECT_EQ(ex.kind, DensityKind::Extrinsic);
    }
    EXPECT_TRUE(intrinsic_density(disk, c, 1.5).boundary_truncated);
}

TEST(Density, ExtrinsicHelicoidMatchesQuadrature) {
    for (auto [c, s] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{0.5, 1.0}}) {
        const MeshedSurface h = helicoid_ball(c, s + 0.5, 0.04);
        const int o = nearest_vertex(h.mesh(), Point3::Zero());
        const DensityReport r = extrinsic_density(h, o, s);
        const double oracle = helicoid_extrinsic_oracle(c, s);
        EXPECT_LE(std::abs(r.value - oracle), r.abs_error()) << c << " " << s;
        EXPECT_NEAR(r.value, oracle, 0.01) << c << " " << s;
    }
}

TEST(Density, IntrinsicBelowExtrinsic) {
    const MeshedSurface h = helicoid_ball(1.0, 3.0, 0.08);
    for (const Point3 q : {Point3(Point3::Zero()), helicoid_point(1.0, 0.7, 0.3)}) {
        const int p = nearest_vertex(h.mesh(), q);
        const DensityReport in = intrinsic_density(h, p, 1.5);
        const DensityReport ex = extrinsic_density(h, p, 1.5);
        EXPECT_TRUE(within_combined_error(in, ex));
        EXPECT_GT(in.value, 1.0); // the helicoid is not flat at this scale
    }
}

TEST(Density, ScaleInvariance) {
    const MeshedSurface h = helicoid_ball(1.0, 3.0, 0.1);
    const MeshedSurface h2 = scaled(h, 2.0);
    const int p = nearest_vertex(h.mesh(), Point3::Zero());
    const DensityReport a = intrinsic_density(h, p, 1.2);
    const DensityReport b = intrinsic_density(h2, p, 2.4);
    EXPECT_NEAR(a.value, b.value, 1e-9);
    EXPECT_NEAR(extrinsic_density(h, p, 1.2).value, extrinsic_density(h2, p, 2.4).value, 1e-9);
}

TEST(Density, FieldOverloadAgrees) {
    const MeshedSurface disk = make_plane_disk(1.0, 16);
    const int c = nearest_vertex(disk.mesh(), Point3::Zero());
    const DistanceField f = distance_field_for_ball(disk.mesh(), c, 0.6);
    EXPECT_DOUBLE_EQ(intrinsic_density(disk, f, 0.6).value, intrinsic_density(disk, c, 0.6).value);
    // Ball areas grow with s.
    EXPECT_LT(intrinsic_ball_area(disk.mesh(), f, 0.3), intrinsic_ball_area(disk.mesh(), f, 0.6));
}

TEST(Density, GraphCheckOnPlaneAndSheet) {
    const MeshedSurface disk = make_plane_disk(1.0, 16);
    const GraphDensityReport pr = graph_density_check(disk, 0, 0.5);
    EXPECT_TRUE(pr.graphicality.certified);
    EXPECT_EQ(pr.graphicality.evidence, GraphEvidence::PlanarSurface);
    EXPECT_TRUE(pr.pass);

    const MeshedSurface h = helicoid_ball(1.0, 6.0, 0.1);
    const int far = nearest_vertex(h.mesh(), helicoid_point(1.0, 4.0, 0.0));
    const GraphDensityReport hr = graph_density_check(h, far, 1.0);
    EXPECT_EQ(hr.graphicality.evidence, GraphEvidence::HelicoidSheet);
    EXPECT_TRUE(hr.pass);
    EXPECT_LE(hr.density.value, 2.0);

    const int axis = nearest_vertex(h.mesh(), Point3::Zero());
    EXPECT_EQ(fixtures::code_of([&] { graph_density_check(h, axis, 1.0); }), ErrorCode::GraphicalityNotCertified);
    const GraphDensityReport asserted = graph_density_check(h, axis, 1.0, true);
    EXPECT_EQ(asserted.graphicality.evidence, GraphEvidence::Asserted);
}

TEST(Density, InvalidScale) {
    const MeshedSurface disk = make_plane_disk(1.0, 4);
    EXPECT_EQ(fixtures::code_of([&] { intrinsic_density(disk, 0, 0.0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(fixtures::code_of([&] { extrinsic_density(disk, 0, -1.0); }), ErrorCode::InvalidArgument);
}
