#include <gtest/gtest.h>

#include <cmath>

#include "helidens/experiment.hpp"
#include "test_util.hpp"

using namespace helidens;

namespace {

MeshedSurface helicoid_ball(double radius, double h, double zone) {
    HelicoidBallSpec spec;
    spec.radius = radius;
    spec.h_fine = h;
    spec.zones = {{0.0, 0.0, zone}};
    return make_helicoid_ball(spec);
}

} // namespace

TEST(Experiment, ConfigValidation) {
    ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_NEAR(c.inner_threshold(), 4 * std::pow(1.1, 8), 1e-12);
    EXPECT_DOUBLE_EQ(c.target(), c.inner_threshold());
    EXPECT_DOUBLE_EQ(c.probe_radius(100.0, 2.0), 90.0);
    c.gamma = 0.25;
    EXPECT_NEAR(c.probe_radius(16.0, 1.0), 0.9 * 8.0, 1e-12);

    auto bad = [](auto mutate) {
        ExperimentConfig k;
        mutate(k);
        return fixtures::code_of([&] { k.validate(); });
    };
    EXPECT_EQ(bad([](ExperimentConfig& k) { k.epsilon = 0.0; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(bad([](ExperimentConfig& k) { k.omega = 1.0; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(bad([](ExperimentConfig& k) { k.gamma = 0.5; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(bad([](ExperimentConfig& k) { k.blow_up_constant = 0.5; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(bad([](ExperimentConfig& k) { k.density_target = -1.0; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(bad([](ExperimentConfig& k) { k.resolution.steiner_points = 2; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(bad([](ExperimentConfig& k) { k.resolution.h_coarse = 0.5; }), ErrorCode::InvalidArgument);
}

TEST(Experiment, LemmaSearchFindsFirstRadius) {
    const LemmaSearchResult r = lemma_radius_search(1.0, 1.0, 1.0, {2.0, 3.0});
    ASSERT_EQ(r.found, 0);
    EXPECT_DOUBLE_EQ(r.found_R(), 2.0);
    EXPECT_NEAR(r.scale, 1.0 / std::sqrt(2.0), 1e-12);
    ASSERT_EQ(r.table.size(), 2u);
    EXPECT_TRUE(r.monotone);
    EXPECT_GT(r.table[1].theta, r.table[0].theta);
    for (const LemmaRow& row : r.table) EXPECT_FALSE(row.truncated);
}

TEST(Experiment, LemmaSearchReportsTableWhenTargetMissed) {
    try {
        lemma_radius_search(1.0, 1.0, 100.0, {2.0, 3.0});
        FAIL() << "target should not be reached";
    } catch (const TargetNotReachedError& e) {
        EXPECT_EQ(e.code(), ErrorCode::TargetNotReached);
        EXPECT_EQ(e.result().found, -1);
        EXPECT_EQ(e.result().table.size(), 2u);
        EXPECT_DOUBLE_EQ(e.result().found_R(), 0.0);
    }
    EXPECT_EQ(fixtures::code_of([] { lemma_radius_search(1.0, 1.0, 1.0, {3.0, 2.0}); }), ErrorCode::InvalidArgument);
}

TEST(Experiment, PlaneHasNoBlowUpPair) {
    const MeshedSurface disk = make_plane_disk(10.0, 20);
    ExperimentConfig c;
    c.inner_radius_factor = 1.0;
    EXPECT_EQ(fixtures::code_of([&] { run_density_gap(disk, c); }), ErrorCode::BlowUpUnverified);
}

TEST(Experiment, SmallHelicoidFailsSeparation) {
    const MeshedSurface h = helicoid_ball(20.0, 0.3, 4.0);
    ExperimentConfig c;
    c.inner_radius_factor = 3.0; // 4 alpha^2 r s = 10.3 > the ~9 between the two boundaries
    EXPECT_EQ(fixtures::code_of([&] { run_density_gap(h, c); }), ErrorCode::SeparationTooSmall);
}

TEST(Experiment, RegionDensityMatchesSubmesh) {
    const MeshedSurface h = helicoid_ball(6.0, 0.15, 6.0);
    std::vector<std::uint8_t> region(h.mesh().num_vertices());
    for (std::size_t i = 0; i < region.size(); ++i) region[i] = h.mesh().vertex(static_cast<int>(i)).norm() < 4.0;
    const int v = nearest_vertex(h.mesh(), helicoid_point(1.0, 2.0, 0.3));
    region = connected_component(h.mesh(), v, region);
    const PatchDensity local = region_density(h, region, v, 1.2);
    const SubSurface sub = extract_submesh(h, region);
    const DensityReport full = intrinsic_density(sub.surface, sub.from_parent[static_cast<std::size_t>(v)], 1.2);
    EXPECT_NEAR(local.density.value, full.value, 1e-12);
    EXPECT_LT(local.patch_vertices, sub.surface.mesh().num_vertices());
    EXPECT_FALSE(local.graphicality.certified); // not requested
}

TEST(Experiment, FamilyOfRescaledHelicoids) {
    const MeshedSurface base = helicoid_ball(8.0, 0.1, 3.0);
    std::vector<MeshedSurface> surfaces;
    // |A|^2 on the axis is 2 / c^2, so member a has pitch a^2.
    for (double a : {1.0, 0.5, 0.25}) surfaces.push_back(scaled(base, a * a));
    std::vector<FamilyMember> fam{{&surfaces[0], 1.0, "a1"}, {&surfaces[1], 0.5, "a1/2"}, {&surfaces[2], 0.25, "a1/4"}};
    const FamilyReport r = validate_family_properties(fam, 1.0, 1e6, {0.5, 1.0});
    EXPECT_TRUE(r.growth_ok);
    EXPECT_TRUE(r.curvature_ok);
    EXPECT_TRUE(r.envelope_ok);
    EXPECT_TRUE(std::isfinite(r.fitted_k));
    EXPECT_TRUE(r.multigraph_ok);
    EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures.front());
    for (const FamilyMemberReport& m : r.members) EXPECT_NEAR(m.center_norm2, 2 / std::pow(m.a, 4), 1e-9);

    // K_probe below the fitted envelope fails (3).
    EXPECT_FALSE(validate_family_properties(fam, 1.0, 0.5 * r.fitted_k, {0.5, 1.0}).envelope_ok);
}

TEST(Experiment, ConstantFamilyFailsGrowth) {
    const MeshedSurface base = helicoid_ball(6.0, 0.2, 2.0);
    std::vector<FamilyMember> fam{{&base, 1.0, "x"}, {&base, 1.0, "y"}};
    const FamilyReport r = validate_family_properties(fam, 1.0, std::nullopt, {1.0});
    EXPECT_FALSE(r.growth_ok);
    EXPECT_FALSE(r.ok());
}

TEST(Experiment, UncertifiedMultigraphFailsProperty4) {
    const MeshedSurface base = helicoid_ball(6.0, 0.2, 2.0);
    const MeshedSurface plain(base.mesh(), base.kind(), base.analytic(), false);
    const MeshedSurface half = scaled(base, 0.25);
    std::vector<FamilyMember> fam{{&plain, 1.0, "plain"}, {&half, 0.5, "half"}};
    const FamilyReport r = validate_family_properties(fam, 1.0, std::nullopt, {1.0});
    EXPECT_FALSE(r.multigraph_ok);
    EXPECT_TRUE(r.growth_ok);
    EXPECT_FALSE(r.ok());
}
