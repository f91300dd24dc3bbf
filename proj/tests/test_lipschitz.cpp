#include <gtest/gtest.h>

#include <cmath>

#include "helidens/generators.hpp"
#include "helidens/lipschitz.hpp"
#include "test_util.hpp"

using namespace helidens;

namespace {

MeshedSurface mapped(const MeshedSurface& s, const Eigen::Matrix3d& m) {
    std::vector<Point3> p;
    for (const Point3& q : s.mesh().vertices()) p.push_back(m * q);
    return with_positions(s, std::move(p));
}

} // namespace

TEST(Lipschitz, IdentityAndScaling) {
    const MeshedSurface disk = make_plane_disk(1.0, 10);
    const StretchBounds id = estimate_bilipschitz(LipschitzCorrespondence(disk, disk));
    EXPECT_DOUBLE_EQ(id.lo, 1.0);
    EXPECT_DOUBLE_EQ(id.hi, 1.0);
    EXPECT_TRUE(id.accepted(1.01));
    const MeshedSurface big = scaled(disk, 1.5);
    const StretchBounds sc = estimate_bilipschitz(LipschitzCorrespondence(disk, big));
    EXPECT_NEAR(sc.lo, 1.5, 1e-12);
    EXPECT_NEAR(sc.hi, 1.5, 1e-12);
    EXPECT_FALSE(sc.accepted(1.5)); // strict inequalities
    EXPECT_TRUE(sc.accepted(1.51));
}

TEST(Lipschitz, ShearSingularValues) {
    const MeshedSurface disk = make_plane_disk(1.0, 24);
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 1) = 0.1;
    const MeshedSurface sheared = mapped(disk, m);
    const StretchBounds b = estimate_bilipschitz(LipschitzCorrespondence(disk, sheared));
    // Singular values of [[1, 0.1], [0, 1]].
    const double smax = 1.05125, smin = 0.95125;
    EXPECT_GE(b.lo, smin - 1e-4);
    EXPECT_LE(b.hi, smax + 1e-4);
    EXPECT_NEAR(b.lo, smin, 0.02 * smin);
    EXPECT_NEAR(b.hi, smax, 0.02 * smax);
}

TEST(Lipschitz, InverseSwapsBounds) {
    const MeshedSurface disk = make_plane_disk(1.0, 12);
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = 1.2;
    m(1, 1) = 0.9;
    const MeshedSurface t = mapped(disk, m);
    const LipschitzCorrespondence c(disk, t);
    const StretchBounds fwd = estimate_bilipschitz(c);
    const StretchBounds inv = estimate_bilipschitz(c.inverse());
    EXPECT_NEAR(inv.lo, 1.0 / fwd.hi, 1e-12);
    EXPECT_NEAR(inv.hi, 1.0 / fwd.lo, 1e-12);
}

TEST(Lipschitz, CompositionMultipliesBounds) {
    const MeshedSurface disk = make_plane_disk(1.0, 12);
    Eigen::Matrix3d a = Eigen::Matrix3d::Identity(), b = Eigen::Matrix3d::Identity();
    a(0, 1) = 0.05;
    b(1, 0) = -0.08;
    const MeshedSurface s1 = mapped(disk, a);
    const MeshedSurface s2 = mapped(s1, b);
    const StretchBounds f = estimate_bilipschitz(LipschitzCorrespondence(disk, s1));
    const StretchBounds g = estimate_bilipschitz(LipschitzCorrespondence(s1, s2));
    const StretchBounds gf = estimate_bilipschitz(LipschitzCorrespondence(disk, s2));
    EXPECT_LE(gf.hi, f.hi * g.hi + 1e-12);
    EXPECT_GE(gf.lo, f.lo * g.lo - 1e-12);
}

TEST(Lipschitz, Errors) {
    const MeshedSurface a = make_plane_disk(1.0, 6);
    const MeshedSurface b = make_plane_disk(1.0, 7);
    EXPECT_EQ(fixtures::code_of([&] { LipschitzCorrespondence(a, b); }), ErrorCode::CombinatoricsMismatch);
    std::vector<Point3> p(a.mesh().vertices().begin(), a.mesh().vertices().end());
    const int left = nearest_vertex(a.mesh(), Point3(-1, 0, 0));
    const int right = nearest_vertex(a.mesh(), Point3(1, 0, 0));
    p[static_cast<std::size_t>(left)] = p[static_cast<std::size_t>(right)];
    const MeshedSurface folded = with_positions(a, p);
    EXPECT_EQ(fixtures::code_of([&] { LipschitzCorrespondence(a, folded); }), ErrorCode::NonInjectiveVertexMap);
}

TEST(Lipschitz, DensityTransport) {
    HelicoidBallSpec spec;
    spec.radius = 4.0;
    spec.h_fine = 0.08;
    spec.zones = {{0.0, 0.0, 4.0}};
    const MeshedSurface h = make_helicoid_ball(spec);
    const int o = nearest_vertex(h.mesh(), Point3::Zero());

    const TransportReport id = check_density_transport(LipschitzCorrespondence(h, h), o, 1.0, 1.1);
    EXPECT_TRUE(id.map_accepted);
    EXPECT_TRUE(id.holds());
    EXPECT_FALSE(id.truncated);
    EXPECT_DOUBLE_EQ(id.target.value, intrinsic_density(h, o, 1.0).value);

    const MeshedSurface big = scaled(h, 1.05);
    const TransportReport sc = check_density_transport(LipschitzCorrespondence(h, big), o, 1.0, 1.1);
    EXPECT_TRUE(sc.map_accepted);
    EXPECT_TRUE(sc.holds());
    EXPECT_GT(sc.lower_slack, 0.0);
    EXPECT_GT(sc.upper_slack, 0.0);
}

TEST(Lipschitz, HelicoidMatchPoint) {
    HelicoidBallSpec spec;
    spec.radius = 5.0;
    spec.h_fine = 0.2;
    const MeshedSurface h = make_helicoid_ball(spec);
    std::vector<int> rim;
    for (int v = 0; v < static_cast<int>(h.mesh().num_vertices()); ++v)
        if (h.mesh().is_boundary(v)) rim.push_back(v);
    const MatchResult m = helicoid_match_point(h, rim, 2.5);
    EXPECT_TRUE(h.mesh().is_boundary(m.vertex));
    EXPECT_NEAR(m.achieved, axis_distance(h, m.vertex), 1e-15);
    EXPECT_LT(m.residual, 0.3);
    EXPECT_EQ(fixtures::code_of([&] { helicoid_match_point(h, rim, 50.0); }), ErrorCode::TargetOutOfRange);
}
