#include <gtest/gtest.h>

#include <sstream>

#include "helidens/error.hpp"
#include "helidens/generators.hpp"
#include "helidens/mesh.hpp"
#include "helidens/mesh_io.hpp"
#include "test_util.hpp"

using namespace helidens;

TEST(Mesh, TetrahedronIsClosedSphere) {
    const TriMesh m = fixtures::tetrahedron();
    EXPECT_EQ(m.num_edges(), 6u);
    EXPECT_EQ(euler_characteristic(m), 2);
    EXPECT_TRUE(boundary_loops(m).empty());
    EXPECT_FALSE(is_disk(m));
}

TEST(Mesh, IcosphereEulerCharacteristic) {
    const TriMesh m = fixtures::icosphere(2.0, 2);
    EXPECT_EQ(m.num_faces(), 20u * 16u);
    EXPECT_EQ(euler_characteristic(m), 2);
    for (const Point3& p : m.vertices()) EXPECT_NEAR(p.norm(), 2.0, 1e-12);
}

TEST(Mesh, AnnulusHasTwoBoundaryLoops) {
    const TriMesh m = fixtures::annulus(8, 2);
    EXPECT_EQ(euler_characteristic(m), 0);
    const auto loops = boundary_loops(m);
    ASSERT_EQ(loops.size(), 2u);
    EXPECT_EQ(loops[0].size(), 8u);
    EXPECT_EQ(loops[1].size(), 8u);
    EXPECT_FALSE(is_disk(m));
}

TEST(Mesh, RepeatedFaceIsNonManifold) {
    auto faces = fixtures::icosahedron_faces();
    faces.push_back(faces.front());
    EXPECT_EQ(fixtures::code_of([&] { build_mesh(fixtures::icosahedron_vertices(), {}, faces); }), ErrorCode::NonManifoldEdge);
}

TEST(Mesh, FlippedFaceIsInconsistent) {
    auto faces = fixtures::icosahedron_faces();
    std::swap(faces[3][1], faces[3][2]);
    EXPECT_EQ(fixtures::code_of([&] { build_mesh(fixtures::icosahedron_vertices(), {}, faces); }),
              ErrorCode::InconsistentOrientation);
}

TEST(Mesh, DegenerateFaces) {
    const std::vector<Point3> v{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
    EXPECT_EQ(fixtures::code_of([&] { build_mesh(v, {}, {{0, 1, 2}}); }), ErrorCode::DegenerateFace);
    EXPECT_EQ(fixtures::code_of([&] { build_mesh(v, {}, {{0, 1, 1}}); }), ErrorCode::DegenerateFace);
    EXPECT_EQ(fixtures::code_of([&] { build_mesh(v, {}, {{0, 1, 7}}); }), ErrorCode::InvalidArgument);
}

TEST(Mesh, TopologyQueries) {
    const TriMesh m = fixtures::annulus(8, 2);
    for (int f = 0; f < static_cast<int>(m.num_faces()); ++f) {
        const Face& fc = m.face(f);
        for (int i = 0; i < 3; ++i) {
            const Edge& e = m.edges()[static_cast<std::size_t>(m.face_edges(f)[static_cast<std::size_t>(i)])];
            const int a = fc[static_cast<std::size_t>(i)], b = fc[static_cast<std::size_t>((i + 1) % 3)];
            EXPECT_EQ(e[0], std::min(a, b));
            EXPECT_EQ(e[1], std::max(a, b));
        }
        EXPECT_GT(m.face_normal(f).z(), 0.0);
    }
    int boundary_edges = 0;
    for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) boundary_edges += m.is_boundary_edge(e);
    EXPECT_EQ(boundary_edges, 16);
}

TEST(Mesh, MidpointSubdivision) {
    const TriMesh m = fixtures::tetrahedron();
    const TriMesh s = subdivide_midpoint(m);
    EXPECT_EQ(s.num_faces(), 16u);
    EXPECT_EQ(s.num_vertices(), 10u);
    EXPECT_EQ(euler_characteristic(s), 2);
    EXPECT_NEAR(max_edge_length(s), 0.5 * max_edge_length(m), 1e-12);
}

TEST(Mesh, HdmeshRoundTripIsLossless) {
    HelicoidSpec spec;
    spec.pitch = 0.7;
    spec.n_u = 9;
    spec.n_v = 17;
    const MeshedSurface h = make_helicoid(spec);
    std::stringstream ss;
    write_hdmesh(ss, h);
    const MeshedSurface back = read_hdmesh(ss);
    ASSERT_EQ(back.mesh().num_vertices(), h.mesh().num_vertices());
    ASSERT_EQ(back.mesh().num_faces(), h.mesh().num_faces());
    for (int v = 0; v < static_cast<int>(h.mesh().num_vertices()); ++v) {
        EXPECT_EQ(back.mesh().vertex(v), h.mesh().vertex(v));
        EXPECT_EQ(back.mesh().param(v).u, h.mesh().param(v).u);
        EXPECT_EQ(back.mesh().param(v).v, h.mesh().param(v).v);
    }
    EXPECT_EQ(back.kind(), SurfaceKind::Helicoid);
    ASSERT_TRUE(back.analytic().has_value());
    EXPECT_EQ(back.analytic()->pitch, 0.7);
    EXPECT_TRUE(back.multigraph_certified());
}

TEST(Mesh, HdmeshRejectsGarbage) {
    std::stringstream a("HDMESH 2\n");
    EXPECT_EQ(fixtures::code_of([&] { read_hdmesh(a); }), ErrorCode::ParseError);
    std::stringstream b("HDMESH 1\nv 0 0 0 0 0 -1\nv 1 0 0 0 0 -1\nv 0 1 0 0 0 -1\nf 0 1 x\n");
    EXPECT_EQ(fixtures::code_of([&] { read_hdmesh(b); }), ErrorCode::ParseError);
}

TEST(Mesh, ImportedMeshWithoutCharts) {
    std::stringstream in("HDMESH 1\nv 0 0 0 0 0 -1\nv 1 0 0 0 0 -1\nv 0 1 0 0 0 -1\nf 0 1 2\n");
    const MeshedSurface s = read_hdmesh(in);
    EXPECT_EQ(s.kind(), SurfaceKind::Imported);
    EXPECT_FALSE(s.mesh().has_charts());
    EXPECT_NEAR(axis_distance(s, 1), 1.0, 1e-15);
}

TEST(Mesh, ScalingHelicoidMetadata) {
    HelicoidSpec spec;
    spec.n_u = 9;
    spec.n_v = 17;
    const MeshedSurface h = make_helicoid(spec);
    const MeshedSurface b = scaled(h, 2.5);
    EXPECT_DOUBLE_EQ(b.analytic()->pitch, 2.5);
    EXPECT_NEAR(b.h_max(), 2.5 * h.h_max(), 1e-12);
    for (int v = 0; v < static_cast<int>(h.mesh().num_vertices()); ++v) {
        EXPECT_NEAR((b.mesh().vertex(v) - 2.5 * h.mesh().vertex(v)).norm(), 0.0, 1e-12);
        EXPECT_NEAR(b.mesh().param(v).u, 2.5 * h.mesh().param(v).u, 1e-12);
    }
    EXPECT_EQ(fixtures::code_of([&] { scaled(h, 0.0); }), ErrorCode::InvalidArgument);
}

TEST(Mesh, SubmeshAndComponents) {
    const MeshedSurface disk = make_plane_disk(1.0, 8);
    const TriMesh& m = disk.mesh();
    std::vector<std::uint8_t> mask(m.num_vertices());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = m.vertex(static_cast<int>(i)).norm() < 0.5;
    const int c = nearest_vertex(m, Point3::Zero());
    const auto comp = connected_component(m, c, mask);
    EXPECT_EQ(comp, mask);
    const SubSurface sub = extract_submesh(disk, comp);
    EXPECT_TRUE(is_disk(sub.surface.mesh()));
    EXPECT_EQ(sub.surface.kind(), SurfaceKind::Plane);
    for (int v = 0; v < static_cast<int>(sub.surface.mesh().num_vertices()); ++v) {
        const int p = sub.to_parent[static_cast<std::size_t>(v)];
        EXPECT_EQ(sub.from_parent[static_cast<std::size_t>(p)], v);
        EXPECT_EQ(sub.surface.mesh().vertex(v), m.vertex(p));
    }
}

TEST(Mesh, DisconnectedMaskComponent) {
    const TriMesh m = fixtures::annulus(16, 1);
    std::vector<std::uint8_t> mask(m.num_vertices());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = m.vertex(static_cast<int>(i)).x() > 0.5 || m.vertex(static_cast<int>(i)).x() < -0.5;
    const int right = nearest_vertex(m, Point3(2, 0, 0));
    const auto comp = connected_component(m, right, mask);
    for (std::size_t i = 0; i < comp.size(); ++i)
        if (comp[i]) EXPECT_GT(m.vertex(static_cast<int>(i)).x(), 0.0);
}
