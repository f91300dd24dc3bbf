// helidens command line: mesh generation, curvature, densities, Lipschitz
// checks and the density-gap experiments.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helidens/curvature.hpp"
#include "helidens/density.hpp"
#include "helidens/error.hpp"
#include "helidens/experiment.hpp"
#include "helidens/generators.hpp"
#include "helidens/json_io.hpp"
#include "helidens/lipschitz.hpp"
#include "helidens/mesh_io.hpp"

using namespace helidens;

namespace {

void emit(const Json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw GeometryError(ErrorCode::InvalidArgument, "cannot write " + out);
    f << j.dump(2) << "\n";
}

std::vector<double> split_numbers(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw GeometryError(ErrorCode::ParseError, "bad number '" + item + "' in '" + text + "'");
        }
    }
    return out;
}

// "lo:hi:n" -> n evenly spaced values
std::vector<double> parse_grid(const std::string& text) {
    const auto p = split_numbers(text, ':');
    if (p.size() != 3 || p[2] < 1 || p[2] != std::floor(p[2]))
        throw GeometryError(ErrorCode::ParseError, "grid must be lo:hi:n, got '" + text + "'");
    const int n = static_cast<int>(p[2]);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? p[0] : p[0] + (p[1] - p[0]) * i / (n - 1));
    return out;
}

void write_mesh(const MeshedSurface& s, const std::string& out) {
    if (out.empty() || out == "-")
        write_hdmesh(std::cout, s);
    else
        write_hdmesh(std::filesystem::path(out), s);
    std::cerr << s.mesh().num_vertices() << " vertices, " << s.mesh().num_faces() << " faces, h_max " << s.h_max()
              << "\n";
}

// map.csv: vertex_index,x,y,z per line; every source vertex exactly once.
std::vector<Point3> read_map(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw GeometryError(ErrorCode::ParseError, "cannot open " + path);
    std::vector<Point3> pos(n);
    std::vector<char> seen(n, 0);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_numbers(line, ',');
        if (f.size() != 4 || f[0] < 0 || f[0] >= static_cast<double>(n) || f[0] != std::floor(f[0]))
            throw GeometryError(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": bad map line");
        const auto i = static_cast<std::size_t>(f[0]);
        if (seen[i])
            throw GeometryError(ErrorCode::ParseError,
                                path + ":" + std::to_string(lineno) + ": vertex " + std::to_string(i) + " repeated");
        seen[i] = 1;
        pos[i] = Point3(f[1], f[2], f[3]);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i]) throw GeometryError(ErrorCode::ParseError, path + ": vertex " + std::to_string(i) + " missing");
    return pos;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete minimal surfaces, density ratios and the helicoid density-gap experiment"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a generated surface as HDMESH");
    gen->require_subcommand(1);
    std::string out;

    double pitch = 1.0, rho_max = 1.0, turns = 1.0;
    std::string res_text = "21,41";
    auto* g_hel = gen->add_subcommand("helicoid", "Helicoid grid over [-rho_max, rho_max] x turns");
    g_hel->add_option("--pitch", pitch, "Pitch c")->capture_default_str();
    g_hel->add_option("--rho-max", rho_max, "Largest |u|")->capture_default_str();
    g_hel->add_option("--turns", turns, "Number of turns in v, centered on v = 0")->capture_default_str();
    g_hel->add_option("--res", res_text, "nu,nv")->capture_default_str();
    g_hel->add_option("-o,--out", out, "Output file (default stdout)");
    g_hel->callback([&] {
        const auto r = split_numbers(res_text, ',');
        if (r.size() != 2) throw GeometryError(ErrorCode::ParseError, "--res expects nu,nv");
        HelicoidSpec spec;
        spec.pitch = pitch;
        spec.rho_max = rho_max;
        spec.v_range = {-std::numbers::pi * turns, std::numbers::pi * turns};
        spec.n_u = static_cast<int>(r[0]);
        spec.n_v = static_cast<int>(r[1]);
        write_mesh(make_helicoid(spec), out);
    });

    double radius = 1.0;
    int rings = kDefaultPlaneRings;
    auto* g_plane = gen->add_subcommand("plane", "Flat disk");
    g_plane->add_option("--radius", radius)->capture_default_str();
    g_plane->add_option("--res", rings, "Number of rings")->capture_default_str();
    g_plane->add_option("-o,--out", out);
    g_plane->callback([&] { write_mesh(make_plane_disk(radius, rings), out); });

    std::string preset, spec_path, wres_text;
    auto* g_w = gen->add_subcommand("weierstrass", "Surface from Weierstrass data");
    auto* preset_opt = g_w->add_option("--preset", preset, "ez or ez-conjugate");
    auto* spec_opt = g_w->add_option("--spec", spec_path, "WeierstrassSpec JSON file");
    preset_opt->excludes(spec_opt);
    g_w->add_option("--res", wres_text, "n_re,n_im (overrides the spec)");
    g_w->add_option("-o,--out", out);
    g_w->callback([&] {
        WeierstrassSpec spec;
        if (!spec_path.empty())
            spec = weierstrass_spec_from_json(read_json_file(spec_path));
        else if (!preset.empty())
            spec = weierstrass_preset(preset);
        else
            throw GeometryError(ErrorCode::InvalidArgument, "give --preset or --spec");
        if (!wres_text.empty()) {
            const auto r = split_numbers(wres_text, ',');
            if (r.size() != 2) throw GeometryError(ErrorCode::ParseError, "--res expects n_re,n_im");
            spec.n_re = static_cast<int>(r[0]);
            spec.n_im = static_cast<int>(r[1]);
        }
        const WeierstrassResult result = weierstrass_evaluate(spec);
        std::cerr << "path discrepancy " << result.diagnostics.path_discrepancy << ", quadrature tolerance "
                  << result.diagnostics.quadrature_tolerance << "\n";
        write_mesh(result.surface, out);
    });

    HelicoidBallSpec ball;
    ball.zones.clear();
    std::vector<std::string> zone_texts;
    bool refine_ball = false;
    auto* g_ball = gen->add_subcommand("helicoid-ball", "Graded helicoid piece inside B_R(0)");
    g_ball->add_option("--pitch", ball.pitch)->capture_default_str();
    g_ball->add_option("--radius", ball.radius)->capture_default_str();
    g_ball->add_option("--h-fine", ball.h_fine)->capture_default_str();
    g_ball->add_option("--h-coarse", ball.h_coarse)->capture_default_str();
    g_ball->add_option("--grading", ball.grading)->capture_default_str();
    g_ball->add_option("--max-angle-step", ball.max_angle_step)->capture_default_str();
    g_ball->add_option("--zone", zone_texts, "u,v,radius (repeatable; default 0,0,1)");
    g_ball->add_flag("--refine", refine_ball, "Halve all sizing once");
    g_ball->add_option("-o,--out", out);
    g_ball->callback([&] {
        for (const auto& z : zone_texts) {
            const auto p = split_numbers(z, ',');
            if (p.size() != 3) throw GeometryError(ErrorCode::ParseError, "--zone expects u,v,radius");
            ball.zones.push_back({p[0], p[1], p[2]});
        }
        if (ball.zones.empty()) ball.zones.push_back({0.0, 0.0, 1.0});
        write_mesh(make_helicoid_ball(refine_ball ? refined(ball) : ball), out);
    });

    std::string parent_path;
    double rho_min = 0.5;
    auto* g_multi = gen->add_subcommand("multigraph", "Annular multi-valued graph cut from a helicoid mesh");
    g_multi->add_option("--from", parent_path, "Helicoid HDMESH")->required();
    g_multi->add_option("--rho-min", rho_min)->capture_default_str();
    g_multi->add_option("--rho-max", rho_max)->capture_default_str();
    g_multi->add_option("--turns", turns)->capture_default_str();
    g_multi->add_option("-o,--out", out);
    g_multi->callback([&] {
        write_mesh(extract_annular_multigraph(read_hdmesh(std::filesystem::path(parent_path)), rho_min, rho_max, turns),
                   out);
    });

    // curvature
    std::string mesh_path, method_name = "auto";
    auto* curv = app.add_subcommand("curvature", "Per-vertex |A|^2 and H as CSV");
    curv->add_option("file", mesh_path)->required();
    curv->add_option("--method", method_name, "auto, analytic or quadric-fit")->capture_default_str();
    curv->add_option("--out", out, "CSV file (default stdout)");
    curv->callback([&] {
        const auto method = curvature_method_from_string(method_name);
        if (!method) throw GeometryError(ErrorCode::InvalidArgument, "unknown method " + method_name);
        const MeshedSurface s = read_hdmesh(std::filesystem::path(mesh_path));
        const CurvatureField field = estimate_curvature(s, *method);
        std::ofstream file;
        if (!out.empty() && out != "-") file.open(out);
        std::ostream& os = file.is_open() ? file : std::cout;
        os.precision(12);
        os << "vertex,u,v,A2,H\n";
        for (int v = 0; v < static_cast<int>(s.mesh().num_vertices()); ++v) {
            if (!field.has(v)) continue;
            const ParamPoint& p = s.mesh().param(v);
            os << v << "," << p.u << "," << p.v << "," << field.a2(v) << "," << field.h(v) << "\n";
        }
    });

    // blowup
    int center = -1;
    double constant = 0.0, scale = 0.0, tol = kDefaultBlowUpTolerance;
    auto* blow = app.add_subcommand("blowup", "Check a blow-up pair (y, s)");
    blow->add_option("file", mesh_path)->required();
    blow->add_option("--center-vertex", center)->required();
    blow->add_option("--constant", constant, "Blow-up constant C (no default)")->required();
    blow->add_option("--scale", scale, "s; defaults to C / |A|(y)");
    blow->add_option("--tol", tol)->capture_default_str();
    blow->add_option("--method", method_name)->capture_default_str();
    blow->callback([&] {
        const auto method = curvature_method_from_string(method_name);
        if (!method) throw GeometryError(ErrorCode::InvalidArgument, "unknown method " + method_name);
        const MeshedSurface s = read_hdmesh(std::filesystem::path(mesh_path));
        const CurvatureField field = estimate_curvature(s, *method);
        const double sc = scale > 0.0 ? scale : blow_up_scale(field, center, constant);
        emit(to_json(check_blow_up_pair(s, field, center, sc, constant, tol)), "");
    });

    // density
    int vertex = -1, samples = 32;
    std::string kind = "intrinsic", profile;
    bool as_json = false, graph_check = false, assert_graphical = false;
    auto* dens = app.add_subcommand("density", "Density ratio theta_s at a vertex, or an axis-distance profile");
    dens->add_option("file", mesh_path)->required();
    dens->add_option("--vertex", vertex);
    dens->add_option("--scale", scale)->required();
    dens->add_option("--kind", kind, "intrinsic or extrinsic")->capture_default_str();
    dens->add_flag("--json", as_json, "JSON report instead of a single number");
    dens->add_flag("--graph-check", graph_check, "Compare against the minimal-graph bound 2");
    dens->add_flag("--assert-graphical", assert_graphical, "Vouch for graphicality in --graph-check");
    dens->add_option("--profile", profile, "axis-distance: CSV axis_distance,theta over the mesh");
    dens->add_option("--samples", samples, "Profile sample count")->capture_default_str();
    dens->callback([&] {
        const MeshedSurface s = read_hdmesh(std::filesystem::path(mesh_path));
        if (!profile.empty()) {
            if (profile != "axis-distance") throw GeometryError(ErrorCode::InvalidArgument, "unknown profile " + profile);
            // One vertex per axis-distance bin, nearest the middle height.
            const TriMesh& m = s.mesh();
            double lo = 1e300, hi = 0.0, zmid = 0.0;
            for (int v = 0; v < static_cast<int>(m.num_vertices()); ++v) {
                lo = std::min(lo, axis_distance(s, v));
                hi = std::max(hi, axis_distance(s, v));
                zmid += m.vertex(v).z() / static_cast<double>(m.num_vertices());
            }
            std::map<int, int> pick;
            for (int v = 0; v < static_cast<int>(m.num_vertices()); ++v) {
                if (m.is_boundary(v)) continue;
                const int bin = std::min(samples - 1, static_cast<int>((axis_distance(s, v) - lo) / (hi - lo + 1e-300) *
                                                                       samples));
                auto it = pick.find(bin);
                if (it == pick.end() || std::abs(m.vertex(v).z() - zmid) < std::abs(m.vertex(it->second).z() - zmid))
                    pick[bin] = v;
            }
            std::cout.precision(10);
            std::cout << "axis_distance,theta\n";
            for (const auto& [bin, v] : pick) {
                const DensityReport r = kind == "extrinsic" ? extrinsic_density(s, v, scale) : intrinsic_density(s, v, scale);
                if (!r.boundary_truncated) std::cout << axis_distance(s, v) << "," << r.value << "\n";
            }
            return;
        }
        if (vertex < 0) throw GeometryError(ErrorCode::InvalidArgument, "--vertex is required without --profile");
        if (graph_check) {
            emit(to_json(graph_density_check(s, vertex, scale, assert_graphical)), "");
            return;
        }
        DensityReport r;
        if (kind == "intrinsic")
            r = intrinsic_density(s, vertex, scale);
        else if (kind == "extrinsic")
            r = extrinsic_density(s, vertex, scale);
        else
            throw GeometryError(ErrorCode::InvalidArgument, "unknown kind " + kind);
        if (as_json)
            emit(to_json(r), "");
        else
            std::cout << r.value << "\n";
    });

    // lipschitz-check
    std::string source_path, target_path, map_path, transport;
    double alpha = 1.0;
    auto* lip = app.add_subcommand("lipschitz-check", "Edge stretch bounds and the density transport inequality");
    lip->add_option("--source", source_path)->required();
    lip->add_option("--target", target_path, "Target mesh with the source's face list");
    lip->add_option("--map", map_path, "CSV vertex_index,x,y,z of target positions");
    lip->add_option("--alpha", alpha)->required();
    lip->add_option("--transport", transport, "p,s: also check the density bounds at vertex p, scale s");
    lip->callback([&] {
        const MeshedSurface source = read_hdmesh(std::filesystem::path(source_path));
        if (target_path.empty() && map_path.empty())
            throw GeometryError(ErrorCode::InvalidArgument, "give --target, --map or both");
        std::optional<MeshedSurface> target;
        double map_mismatch = 0.0;
        if (!target_path.empty()) target = read_hdmesh(std::filesystem::path(target_path));
        if (!map_path.empty()) {
            auto positions = read_map(map_path, source.mesh().num_vertices());
            if (target) {
                if (target->mesh().num_vertices() != positions.size())
                    throw GeometryError(ErrorCode::CombinatoricsMismatch, "map and target sizes differ");
                for (std::size_t i = 0; i < positions.size(); ++i)
                    map_mismatch = std::max(map_mismatch, (positions[i] - target->mesh().vertex(static_cast<int>(i))).norm());
            } else {
                target = with_positions(source, std::move(positions));
            }
        }
        const LipschitzCorrespondence corr(source, *target);
        const StretchBounds b = estimate_bilipschitz(corr);
        Json j{{"alpha", alpha}, {"stretch", to_json(b)}, {"accepted", b.accepted(alpha)}};
        if (!map_path.empty() && !target_path.empty()) j["map_target_mismatch"] = map_mismatch;
        if (!transport.empty()) {
            const auto ps = split_numbers(transport, ',');
            if (ps.size() != 2) throw GeometryError(ErrorCode::ParseError, "--transport expects p,s");
            j["transport"] = to_json(check_density_transport(corr, static_cast<int>(ps[0]), ps[1], alpha));
        }
        emit(j, "");
    });

    // experiment
    auto* exp = app.add_subcommand("experiment", "Lemma radius search, density-gap certificate, family checks");
    exp->require_subcommand(1);

    std::string surface_path, config_path, surface_id;
    auto* e_gap = exp->add_subcommand("density-gap", "Run the density-gap obstruction on a surface");
    e_gap->add_option("--surface", surface_path)->required();
    e_gap->add_option("--config", config_path, "cfg.json")->required();
    e_gap->add_option("--id", surface_id, "Surface id in the certificate (default: file name)");
    e_gap->add_option("--out", out, "Certificate JSON (default stdout)");
    e_gap->callback([&] {
        const MeshedSurface s = read_hdmesh(std::filesystem::path(surface_path));
        const ExperimentConfig cfg = experiment_config_from_json(read_json_file(config_path));
        const auto cert = run_density_gap(s, cfg, surface_id.empty() ? surface_path : surface_id);
        emit(to_json(cert), out);
        std::cerr << "certificate " << (cert.valid ? "valid" : "NOT valid") << "; chain " << cert.chain.text << "\n";
    });

    double C = 0.0, D = 0.0;
    std::string r_grid;
    bool refine_lemma = false;
    auto* e_lemma = exp->add_subcommand("lemma-search", "Smallest tabulated R with theta_{Rs}(axis) >= D");
    e_lemma->add_option("--pitch", pitch)->capture_default_str();
    e_lemma->add_option("--C", C, "Blow-up constant")->required();
    e_lemma->add_option("--D", D, "Density target (default 4 (1.1)^8)");
    e_lemma->add_option("--r-grid", r_grid, "lo:hi:n")->required();
    e_lemma->add_option("--config", config_path, "cfg.json supplying D and resolution");
    e_lemma->add_flag("--refine", refine_lemma, "Refine the mesh once");
    e_lemma->add_option("--out", out);
    e_lemma->callback([&] {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = experiment_config_from_json(read_json_file(config_path));
        if (refine_lemma) cfg.resolution.refine = true;
        const double target = D > 0.0 ? D : cfg.target();
        try {
            emit(to_json(lemma_radius_search(pitch, C, target, parse_grid(r_grid), cfg.resolution)), out);
        } catch (const TargetNotReachedError& e) {
            emit(to_json(e.result()), out);
            throw;
        }
    });

    std::string manifest;
    auto* e_fam = exp->add_subcommand("validate-family", "Check the four family properties");
    e_fam->add_option("--manifest", manifest,
                      "JSON: {\"C\": c, \"K_probe\": k, \"delta_grid\": [...], \"members\": [{\"surface\": f, \"a\": a}]}")
        ->required();
    e_fam->add_option("--out", out);
    e_fam->callback([&] {
        const Json j = read_json_file(manifest);
        std::vector<MeshedSurface> surfaces;
        std::vector<FamilyMember> family;
        std::vector<double> deltas;
        double c = 1.0;
        std::optional<double> k_probe;
        try {
            c = j.value("C", 1.0);
            if (j.contains("K_probe")) k_probe = j.at("K_probe").get<double>();
            deltas = j.at("delta_grid").get<std::vector<double>>();
            const Json& members = j.at("members");
            surfaces.reserve(members.size());
            for (const Json& m : members) {
                const std::string path = m.at("surface").get<std::string>();
                surfaces.push_back(read_hdmesh(std::filesystem::path(path)));
                family.push_back({&surfaces.back(), m.at("a").get<double>(), m.value("id", path)});
            }
        } catch (const nlohmann::json::exception& e) {
            throw GeometryError(ErrorCode::ParseError, manifest + ": " + e.what());
        }
        const FamilyReport rep = validate_family_properties(family, c, k_probe, deltas);
        emit(to_json(rep), out);
        for (const auto& f : rep.failures) std::cerr << "failure: " << f << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
