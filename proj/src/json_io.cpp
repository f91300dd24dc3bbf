#include "helidens/json_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "helidens/complex_expr.hpp"
#include "helidens/error.hpp"

namespace helidens {

namespace {

// Non-finite numbers become null.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json point(const Point3& p) { return Json::array({p.x(), p.y(), p.z()}); }

[[noreturn]] void parse_fail(const std::string& what) { throw GeometryError(ErrorCode::ParseError, what); }

double get_number(const Json& j, const char* key) {
    const Json& v = j.at(key);
    if (v.is_null()) return std::numeric_limits<double>::infinity();
    if (!v.is_number()) parse_fail(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const char* where) {
    if (!j.is_object()) parse_fail(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) parse_fail(std::string("unknown key '") + key + "' in " + where);
}

std::vector<double> number_array(const Json& j, const char* key, std::size_t n) {
    const Json& v = j.at(key);
    if (!v.is_array() || v.size() != n) parse_fail(std::string("'") + key + "' must be an array of " + std::to_string(n));
    std::vector<double> out;
    for (const Json& x : v) {
        if (!x.is_number()) parse_fail(std::string("'") + key + "' must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace

Json to_json(const DensityReport& r) {
    return Json{{"center", r.center},
                {"scale", r.scale},
                {"kind", std::string(to_string(r.kind))},
                {"value", r.value},
                {"area", r.area},
                {"error_estimate", r.error_estimate},
                {"abs_error", r.abs_error()},
                {"local_h", r.local_h},
                {"boundary_truncated", r.boundary_truncated},
                {"method", r.method}};
}

Json to_json(const GraphicalityCertificate& g) {
    return Json{{"certified", g.certified}, {"evidence", std::string(to_string(g.evidence))}, {"detail", g.detail}};
}

Json to_json(const GraphDensityReport& r) {
    return Json{{"density", to_json(r.density)},
                {"graphicality", to_json(r.graphicality)},
                {"threshold", r.threshold},
                {"pass", r.pass}};
}

Json to_json(const BlowUpPair& b) {
    return Json{{"center", b.center},
                {"scale", b.scale},
                {"constant", b.constant},
                {"center_value", b.center_value},
                {"sup_check", b.sup_check},
                {"sup_vertex", b.sup_vertex},
                {"vertices_in_ball", b.vertices_in_ball},
                {"bound", b.bound},
                {"tolerance", b.tolerance},
                {"sup_ok", b.sup_ok},
                {"equality_ok", b.equality_ok},
                {"accepted", b.accepted},
                {"method", b.method}};
}

Json to_json(const StretchBounds& s) {
    return Json{{"stretch_lo", s.lo}, {"stretch_hi", s.hi}, {"argmin_edge", s.argmin_edge}, {"argmax_edge", s.argmax_edge}};
}

Json to_json(const TransportReport& r) {
    return Json{{"vertex", r.vertex},
                {"scale", r.scale},
                {"alpha", r.alpha},
                {"stretch", to_json(r.stretch)},
                {"map_accepted", r.map_accepted},
                {"source_small", to_json(r.source_small)},
                {"target", to_json(r.target)},
                {"source_large", to_json(r.source_large)},
                {"lower_slack", r.lower_slack},
                {"upper_slack", r.upper_slack},
                {"lower_holds", r.lower_holds},
                {"upper_holds", r.upper_holds},
                {"truncated", r.truncated}};
}

Json to_json(const ExperimentConfig& c) {
    const ResolutionConfig& res = c.resolution;
    Json j{{"epsilon", c.epsilon},
           {"alpha", c.alpha()},
           {"Omega", c.omega},
           {"gamma", c.gamma},
           {"C", c.blow_up_constant},
           {"D", c.target()},
           {"r", c.inner_radius_factor},
           {"resolution",
            {{"h_fine", res.h_fine},
             {"grading", res.grading},
             {"h_coarse", num(res.h_coarse)},
             {"max_angle_step", res.max_angle_step},
             {"steiner_points", res.steiner_points},
             {"refine", res.refine}}},
           {"blow_up_tolerance", c.blow_up_tolerance},
           {"max_boundary_candidates", c.max_boundary_candidates}};
    if (c.center_vertex) j["center_vertex"] = *c.center_vertex;
    if (c.boundary_hint) j["boundary_hint"] = point(*c.boundary_hint);
    return j;
}

Json to_json(const LemmaSearchResult& r) {
    Json table = Json::array();
    for (const LemmaRow& row : r.table)
        table.push_back({{"R", row.R},
                         {"theta", row.theta},
                         {"error_estimate", row.error_estimate},
                         {"abs_error", row.abs_error},
                         {"truncated", row.truncated}});
    Json j{{"pitch", r.pitch},
           {"C", r.constant},
           {"D", r.target},
           {"s", r.scale},
           {"mesh_vertices", r.mesh_vertices},
           {"mesh_radius", r.mesh_radius},
           {"monotone", r.monotone},
           {"found", r.found >= 0},
           {"table", table}};
    if (r.found >= 0) j["R"] = r.found_R();
    return j;
}

Json to_json(const ObstructionCertificate& c) {
    const SeparationReport& sep = c.separation;
    Json notes = Json::array();
    for (const auto& n : c.notes) notes.push_back(n);
    return Json{
        {"surface", c.surface_id},
        {"config", to_json(c.config)},
        {"alpha", c.alpha},
        {"blow_up", to_json(c.blow_up)},
        {"outer_radius", c.outer_radius},
        {"probe_radius", c.probe_radius},
        {"inner_region_radius", c.inner_region_radius},
        {"sigma_vertices", c.sigma_vertices},
        {"u_vertices", c.u_vertices},
        {"separation",
         {{"distance", sep.distance},
          {"required", sep.required},
          {"method", sep.method},
          {"u_vertex", sep.u_vertex},
          {"sigma_vertex", sep.sigma_vertex},
          {"u_boundary_vertices", sep.u_boundary_vertices},
          {"sigma_boundary_vertices", sep.sigma_boundary_vertices},
          {"ok", sep.ok}}},
        {"inner", {{"report", to_json(c.inner)}, {"threshold", c.inner_threshold}, {"ok", c.inner_ok}}},
        {"outer",
         {{"boundary_point", c.boundary_point},
          {"axis_distance", c.boundary_axis_distance},
          {"candidates_tried", c.boundary_candidates_tried},
          {"graphicality", to_json(c.graphicality)},
          {"report", to_json(c.outer)},
          {"threshold", c.outer_threshold},
          {"ok", c.outer_ok}}},
        {"chain",
         {{"upper", c.chain.upper},
          {"middle", c.chain.middle},
          {"lower", c.chain.lower},
          {"implied_outer_lower_bound", c.chain.implied_outer_lower_bound},
          {"holds", c.chain.holds},
          {"text", c.chain.text}}},
        {"truncated", c.truncated},
        {"valid", c.valid},
        {"notes", notes}};
}

Json to_json(const FamilyReport& r) {
    Json members = Json::array();
    for (const auto& m : r.members) {
        Json env = Json::array();
        for (std::size_t i = 0; i < m.envelope.deltas.size(); ++i)
            env.push_back({{"delta", m.envelope.deltas[i]}, {"sup", m.envelope.sups[i]}});
        members.push_back({{"id", m.id},
                           {"a", m.a},
                           {"center", m.center},
                           {"center_norm2", m.center_norm2},
                           {"expected_center", m.expected_center},
                           {"sup_norm2", m.sup_norm2},
                           {"sup_bound", m.sup_bound},
                           {"equality_ok", m.equality_ok},
                           {"sup_ok", m.sup_ok},
                           {"envelope", env},
                           {"fitted_k", m.envelope.fitted_k},
                           {"multigraph", m.multigraph_certified ? "certified" : "not certified"}});
    }
    Json failures = Json::array();
    for (const auto& f : r.failures) failures.push_back(f);
    Json j{{"members", members},
           {"growth_ok", r.growth_ok},
           {"curvature_ok", r.curvature_ok},
           {"fitted_k", num(r.fitted_k)},
           {"envelope_ok", r.envelope_ok},
           {"multigraph_ok", r.multigraph_ok},
           {"failures", failures},
           {"ok", r.ok()}};
    if (r.k_probe) j["K_probe"] = *r.k_probe;
    return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
    check_keys(j,
               {"epsilon", "alpha", "Omega", "gamma", "C", "D", "r", "resolution", "center_vertex", "boundary_hint",
                "blow_up_tolerance", "max_boundary_candidates"},
               "experiment config");
    ExperimentConfig c;
    try {
        if (j.contains("epsilon")) c.epsilon = get_number(j, "epsilon");
        if (j.contains("Omega")) c.omega = get_number(j, "Omega");
        if (j.contains("gamma")) c.gamma = get_number(j, "gamma");
        if (j.contains("C")) c.blow_up_constant = get_number(j, "C");
        if (j.contains("D")) c.density_target = get_number(j, "D");
        if (j.contains("r")) c.inner_radius_factor = get_number(j, "r");
        if (j.contains("blow_up_tolerance")) c.blow_up_tolerance = get_number(j, "blow_up_tolerance");
        if (j.contains("max_boundary_candidates")) c.max_boundary_candidates = j.at("max_boundary_candidates").get<int>();
        if (j.contains("center_vertex")) c.center_vertex = j.at("center_vertex").get<int>();
        if (j.contains("boundary_hint")) {
            const auto p = number_array(j, "boundary_hint", 3);
            c.boundary_hint = Point3(p[0], p[1], p[2]);
        }
        if (j.contains("resolution")) {
            const Json& r = j.at("resolution");
            check_keys(r, {"h_fine", "grading", "h_coarse", "max_angle_step", "steiner_points", "refine"},
                       "resolution");
            ResolutionConfig& res = c.resolution;
            if (r.contains("h_fine")) res.h_fine = get_number(r, "h_fine");
            if (r.contains("grading")) res.grading = get_number(r, "grading");
            if (r.contains("h_coarse")) res.h_coarse = get_number(r, "h_coarse");
            if (r.contains("max_angle_step")) res.max_angle_step = get_number(r, "max_angle_step");
            if (r.contains("steiner_points")) res.steiner_points = r.at("steiner_points").get<int>();
            if (r.contains("refine")) res.refine = r.at("refine").get<bool>();
        }
    } catch (const nlohmann::json::exception& e) {
        parse_fail(std::string("experiment config: ") + e.what());
    }
    if (j.contains("alpha") && std::abs(get_number(j, "alpha") - c.alpha()) > 1e-12)
        parse_fail("'alpha' must equal 1 + epsilon");
    try {
        c.validate();
    } catch (const GeometryError& e) {
        parse_fail(e.what());
    }
    return c;
}

WeierstrassSpec weierstrass_spec_from_json(const Json& j) {
    check_keys(j, {"g", "dh", "domain", "basepoint", "res"}, "Weierstrass spec");
    if (!j.contains("g") || !j.contains("dh")) parse_fail("Weierstrass spec needs 'g' and 'dh'");
    if (!j.at("g").is_string() || !j.at("dh").is_string()) parse_fail("'g' and 'dh' must be expression strings");
    const auto g = std::make_shared<ComplexExpression>(ComplexExpression::parse(j.at("g").get<std::string>()));
    const auto dh = std::make_shared<ComplexExpression>(ComplexExpression::parse(j.at("dh").get<std::string>()));
    WeierstrassSpec spec;
    spec.gauss_map = [g](std::complex<double> z) { return (*g)(z); };
    spec.height_differential = [dh](std::complex<double> z) { return (*dh)(z); };
    if (j.contains("domain")) {
        const auto d = number_array(j, "domain", 4);
        spec.re0 = d[0];
        spec.re1 = d[1];
        spec.im0 = d[2];
        spec.im1 = d[3];
    }
    if (j.contains("basepoint")) {
        const auto b = number_array(j, "basepoint", 2);
        spec.basepoint = {b[0], b[1]};
    }
    if (j.contains("res")) {
        const auto r = number_array(j, "res", 2);
        spec.n_re = static_cast<int>(r[0]);
        spec.n_im = static_cast<int>(r[1]);
        if (spec.n_re != r[0] || spec.n_im != r[1]) parse_fail("'res' must hold integers");
    }
    return spec;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        parse_fail(path + ": " + e.what());
    }
}

} // namespace helidens
