#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "helidens/json_io.hpp"
#include "test_util.hpp"

using namespace helidens;

TEST(Json, ConfigParse) {
    const Json j = Json::parse(R"j({"epsilon": 0.2, "Omega": 0.8, "C": 2, "D": 5, "r": 1.5,
        "resolution": {"h_fine": 0.5, "steiner_points": 3, "refine": true},
        "boundary_hint": [1, 2, 3], "center_vertex": 7})j");
    const ExperimentConfig c = experiment_config_from_json(j);
    EXPECT_DOUBLE_EQ(c.alpha(), 1.2);
    EXPECT_DOUBLE_EQ(c.omega, 0.8);
    EXPECT_DOUBLE_EQ(c.blow_up_constant, 2.0);
    EXPECT_DOUBLE_EQ(c.target(), 5.0);
    EXPECT_DOUBLE_EQ(c.inner_radius_factor, 1.5);
    EXPECT_DOUBLE_EQ(c.resolution.h_fine, 0.5);
    EXPECT_EQ(c.resolution.steiner_points, 3);
    EXPECT_TRUE(c.resolution.refine);
    EXPECT_EQ(c.center_vertex, 7);
    ASSERT_TRUE(c.boundary_hint.has_value());
    EXPECT_EQ(*c.boundary_hint, Point3(1, 2, 3));
}

TEST(Json, ConfigRoundTrip) {
    ExperimentConfig c;
    c.epsilon = 0.05;
    c.inner_radius_factor = 2.0;
    c.boundary_hint = Point3(0.5, 0, 1);
    const Json j = to_json(c);
    EXPECT_TRUE(j["resolution"]["h_coarse"].is_null()); // infinite cap
    const ExperimentConfig back = experiment_config_from_json(j);
    EXPECT_EQ(to_json(back), j);
    EXPECT_TRUE(std::isinf(back.resolution.h_coarse));
}

TEST(Json, ConfigRejects) {
    auto code = [](const char* text) {
        return fixtures::code_of([&] { experiment_config_from_json(Json::parse(text)); });
    };
    EXPECT_EQ(code(R"j({"epsilon": 0.1, "colour": 1})j"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"j({"resolution": {"h_fin": 1}})j"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"j({"epsilon": 0.1, "alpha": 1.2})j"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"j({"epsilon": "big"})j"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"j({"epsilon": -1})j"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"j({"boundary_hint": [1, 2]})j"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"j([1, 2])j"), ErrorCode::ParseError);
}

TEST(Json, WeierstrassSpecMatchesPreset) {
    const Json j = Json::parse(R"j({"g": "exp(z)", "dh": "1", "domain": [-1, 1, -3.141592653589793, 3.141592653589793],
        "res": [17, 33]})j");
    const WeierstrassSpec spec = weierstrass_spec_from_json(j);
    EXPECT_EQ(spec.n_re, 17);
    EXPECT_EQ(spec.n_im, 33);
    const WeierstrassResult a = weierstrass_evaluate(spec);
    const WeierstrassResult b = weierstrass_evaluate(weierstrass_preset("ez", 17, 33));
    ASSERT_EQ(a.surface.mesh().num_vertices(), b.surface.mesh().num_vertices());
    for (int v = 0; v < static_cast<int>(a.surface.mesh().num_vertices()); ++v)
        EXPECT_LT((a.surface.mesh().vertex(v) - b.surface.mesh().vertex(v)).norm(), 1e-12);
    EXPECT_EQ(fixtures::code_of([] { weierstrass_spec_from_json(Json::parse(R"j({"g": "exp(", "dh": "1"})j")); }),
              ErrorCode::ParseError);
    EXPECT_EQ(fixtures::code_of([] { weierstrass_spec_from_json(Json::parse(R"j({"dh": "1"})j")); }),
              ErrorCode::ParseError);
}

TEST(Json, CertificateFields) {
    ObstructionCertificate c;
    c.surface_id = "h1";
    c.alpha = 1.1;
    c.separation.distance = 3.0;
    c.separation.required = 2.0;
    c.separation.ok = true;
    c.inner.value = 8.8;
    c.inner_threshold = 8.57;
    c.inner_ok = true;
    c.outer.value = 0.99;
    c.outer.scale = std::numeric_limits<double>::infinity();
    c.chain.holds = false;
    c.chain.text = "2.93 >= 1.45 >= 5.86";
    c.valid = true;
    c.notes = {"first", "second"};
    const Json j = to_json(c);
    for (const char* key : {"surface", "config", "alpha", "blow_up", "separation", "inner", "outer", "chain", "valid"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["surface"], "h1");
    EXPECT_EQ(j["separation"]["ok"], true);
    EXPECT_DOUBLE_EQ(j["inner"]["report"]["value"].get<double>(), 8.8);
    EXPECT_EQ(j["chain"]["holds"], false);
    EXPECT_EQ(j["valid"], true);
    // Non-finite numbers come out as null, so the text stays strict JSON.
    const Json back = Json::parse(j.dump());
    EXPECT_TRUE(back["outer"]["report"]["scale"].is_null());
    EXPECT_EQ(back["notes"].size(), 2u);
}

TEST(Json, LemmaTable) {
    LemmaSearchResult r;
    r.pitch = 1.0;
    r.target = 2.0;
    r.table = {{10, 1.5, 0.01, 0.015, false}, {20, 2.5, 0.01, 0.025, false}};
    r.found = 1;
    const Json j = to_json(r);
    EXPECT_TRUE(j.dump().find("table") != std::string::npos);
    EXPECT_EQ(j.dump().find("inf"), std::string::npos);
}
