#include "helidens/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace helidens {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw GeometryError(ErrorCode::InvalidArgument, what);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

bool face_in(const TriMesh& mesh, int f, const std::vector<std::uint8_t>& mask) {
    for (int v : mesh.face(f))
        if (!mask[static_cast<std::size_t>(v)]) return false;
    return true;
}

// Vertices on the boundary of the sub-mesh formed by the faces lying entirely
// in mask.
std::vector<int> masked_boundary(const TriMesh& mesh, const std::vector<std::uint8_t>& mask) {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v) {
        if (!mask[static_cast<std::size_t>(v)]) continue;
        bool any = false, all = true;
        for (int f : mesh.vertex_faces(v)) {
            const bool in = face_in(mesh, f, mask);
            any = any || in;
            all = all && in;
        }
        if (any && (!all || mesh.is_boundary(v))) out.push_back(v);
    }
    return out;
}

std::size_t count(const std::vector<std::uint8_t>& mask) {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double segment_distance(const Point3& p, const Point3& a, const Point3& b) {
    const Point3 d = b - a;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    return (a + t * d - p).norm();
}

// Number of parent faces inside region that contain the edge (a, b).
int region_faces_on_edge(const TriMesh& mesh, int a, int b, const std::vector<std::uint8_t>& region) {
    int n = 0;
    for (int f : mesh.vertex_faces(a)) {
        const Face& fc = mesh.face(f);
        if ((fc[0] == b || fc[1] == b || fc[2] == b) && face_in(mesh, f, region)) ++n;
    }
    return n;
}

} // namespace

GeodesicOptions ResolutionConfig::geodesic() const {
    GeodesicOptions o;
    o.method = GeodesicMethod::RefinedDijkstra;
    o.steiner_points = steiner_points;
    return o;
}

void ResolutionConfig::validate() const {
    require(h_fine > 0.0 && h_coarse >= h_fine, "resolution needs 0 < h_fine <= h_coarse");
    require(grading >= 0.0, "resolution grading must be nonnegative");
    require(max_angle_step > 0.0, "resolution max_angle_step must be positive");
    require(steiner_points >= 1 && steiner_points % 2 == 1, "steiner_points must be odd and positive");
}

double ExperimentConfig::inner_threshold() const { return 4.0 * std::pow(alpha(), 8); }

double ExperimentConfig::probe_radius(double outer_radius, double s) const {
    return omega * std::pow(outer_radius, 1.0 - gamma) * std::pow(s, gamma);
}

void ExperimentConfig::validate() const {
    require(epsilon > 0.0, "epsilon must be positive");
    require(omega > 0.0 && omega < 1.0, "Omega must lie in (0, 1)");
    require(gamma >= 0.0 && gamma < 0.5, "gamma must lie in [0, 1/2)");
    require(blow_up_constant >= 1.0, "C must be at least 1");
    require(!density_target || *density_target > 0.0, "D must be positive");
    require(inner_radius_factor >= 0.0, "r must be nonnegative");
    require(blow_up_tolerance > 0.0, "blow-up tolerance must be positive");
    require(max_boundary_candidates >= 1, "max_boundary_candidates must be positive");
    resolution.validate();
}

TargetNotReachedError::TargetNotReachedError(LemmaSearchResult result)
    : GeometryError(ErrorCode::TargetNotReached,
                    "theta at R = " + fmt(result.table.empty() ? 0.0 : result.table.back().R) + " is " +
                        fmt(result.table.empty() ? 0.0 : result.table.back().theta) + ", below D = " +
                        fmt(result.target)),
      result_(std::move(result)) {}

LemmaSearchResult lemma_radius_search(double pitch, double C, double D, const std::vector<double>& R_grid,
                                      const ResolutionConfig& resolution) {
    require(pitch > 0.0, "pitch must be positive");
    require(C >= 1.0, "C must be at least 1");
    require(D > 0.0, "D must be positive");
    require(!R_grid.empty() && R_grid.front() > 0.0, "R grid must be nonempty and positive");
    for (std::size_t i = 1; i < R_grid.size(); ++i) require(R_grid[i] > R_grid[i - 1], "R grid must be increasing");
    resolution.validate();

    const double a0 = std::sqrt(AnalyticData{AnalyticData::Model::Helicoid, pitch}.curvature_norm2(0.0));
    const double s_est = C / a0;
    const double reach = R_grid.back() * s_est;

    HelicoidBallSpec spec;
    spec.pitch = pitch;
    spec.radius = 1.15 * reach + 2.0 * pitch;
    // Small probe balls need a finer core than the pitch-relative default.
    spec.h_fine = std::min(resolution.h_fine * pitch, 0.25 * R_grid.front() * s_est);
    spec.h_coarse = std::max(resolution.h_coarse * pitch, spec.h_fine);
    spec.grading = resolution.grading;
    spec.max_angle_step = resolution.max_angle_step;
    spec.zones = {{0.0, 0.0, 1.05 * reach + 2.0 * pitch}};
    if (resolution.refine) spec = refined(spec);
    const MeshedSurface surface = make_helicoid_ball(spec);

    const int center = nearest_vertex(surface.mesh(), Point3::Zero());
    const CurvatureField curvature = estimate_curvature(surface);
    LemmaSearchResult out;
    out.pitch = pitch;
    out.constant = C;
    out.target = D;
    out.scale = blow_up_scale(curvature, center, C);
    out.mesh_vertices = surface.mesh().num_vertices();
    out.mesh_radius = spec.radius;

    const DistanceField field =
        distance_field_for_ball(surface.mesh(), center, R_grid.back() * out.scale, resolution.geodesic());
    for (double R : R_grid) {
        const DensityReport d = intrinsic_density(surface, field, R * out.scale);
        out.table.push_back({R, d.value, d.error_estimate, d.abs_error(), d.boundary_truncated});
        if (out.table.size() > 1 && d.value < out.table[out.table.size() - 2].theta) out.monotone = false;
        if (out.found < 0 && d.value >= D) out.found = static_cast<int>(out.table.size()) - 1;
    }
    if (out.found < 0) throw TargetNotReachedError(std::move(out));
    return out;
}

PatchDensity region_density(const MeshedSurface& surface, const std::vector<std::uint8_t>& region, int v, double s,
                            const GeodesicOptions& options, bool certify) {
    const TriMesh& mesh = surface.mesh();
    require(region.size() == mesh.num_vertices(), "region mask size does not match the mesh");
    require(v >= 0 && v < static_cast<int>(mesh.num_vertices()) && region[static_cast<std::size_t>(v)],
            "density center must lie in the region");
    require(s > 0.0, "density scale must be positive");
    const Point3 x = mesh.vertex(v);
    double radius = 1.25 * s;
    for (;;) {
        std::vector<std::uint8_t> near(mesh.num_vertices(), 0);
        for (std::size_t i = 0; i < near.size(); ++i)
            near[i] = region[i] && (mesh.vertex(static_cast<int>(i)) - x).norm() <= radius;
        const SubSurface patch = extract_submesh(surface, connected_component(mesh, v, near));
        const TriMesh& pm = patch.surface.mesh();
        const int pv = patch.from_parent[static_cast<std::size_t>(v)];
        const DistanceField field = distance_field_for_ball(pm, pv, s, options);

        // Edges where the patch was cut out of the region. A graph path of
        // length <= cutoff from v stays inside the Euclidean ball of that
        // radius, so the patch is exact once every cut lies beyond it.
        double nearest_cut = std::numeric_limits<double>::infinity();
        for (int e = 0; e < static_cast<int>(pm.num_edges()); ++e) {
            if (!pm.is_boundary_edge(e)) continue;
            const Edge& ed = pm.edges()[static_cast<std::size_t>(e)];
            const int a = patch.to_parent[static_cast<std::size_t>(ed[0])];
            const int b = patch.to_parent[static_cast<std::size_t>(ed[1])];
            if (region_faces_on_edge(mesh, a, b, region) < 2) continue;
            nearest_cut = std::min(nearest_cut, segment_distance(x, mesh.vertex(a), mesh.vertex(b)));
        }
        if (nearest_cut > field.cutoff) {
            PatchDensity out;
            out.density = intrinsic_density(patch.surface, field, s);
            out.density.center = v;
            if (certify) out.graphicality = certify_graphical(patch.surface, field, s);
            out.patch_vertices = pm.num_vertices();
            out.patch_radius = radius;
            return out;
        }
        radius = std::max(1.5 * radius, 1.1 * field.cutoff + (radius - nearest_cut));
    }
}

ObstructionCertificate run_density_gap(const MeshedSurface& surface, const ExperimentConfig& config,
                                       const std::string& surface_id) {
    config.validate();
    require(config.inner_radius_factor > 0.0, "r must be positive (see lemma_radius_search)");
    const TriMesh& mesh = surface.mesh();
    const std::size_t nv = mesh.num_vertices();
    const double alpha = config.alpha();
    const double a4 = std::pow(alpha, 4);
    const double C = config.blow_up_constant;
    const GeodesicOptions geo = config.resolution.geodesic();

    ObstructionCertificate cert;
    cert.surface_id = surface_id;
    cert.config = config;
    cert.alpha = alpha;

    const int y = config.center_vertex ? *config.center_vertex : nearest_vertex(mesh, Point3::Zero());
    require(y >= 0 && y < static_cast<int>(nv), "center vertex out of range");
    const CurvatureField curvature = estimate_curvature(surface);
    try {
        const double s = blow_up_scale(curvature, y, C);
        cert.blow_up = check_blow_up_pair(surface, curvature, y, s, C, config.blow_up_tolerance);
    } catch (const GeometryError& e) {
        throw GeometryError(ErrorCode::BlowUpUnverified, "no blow-up pair at vertex " + std::to_string(y) + " (" +
                                                             e.what() + ")");
    }
    if (!cert.blow_up.accepted)
        throw GeometryError(ErrorCode::BlowUpUnverified,
                            "blow-up pair rejected at vertex " + std::to_string(y) + ": sup |A|^2 = " +
                                fmt(cert.blow_up.sup_check) + ", bound 4C^2/s^2 = " + fmt(cert.blow_up.bound) +
                                ", 4|A|^2(y) = " + fmt(4.0 * cert.blow_up.center_value));
    const double s = cert.blow_up.scale;
    const double r = config.inner_radius_factor;
    const Point3 center = mesh.vertex(y);

    for (const Point3& x : mesh.vertices()) cert.outer_radius = std::max(cert.outer_radius, (x - center).norm());
    cert.probe_radius = config.probe_radius(cert.outer_radius, s);
    cert.inner_region_radius = 0.5 * cert.probe_radius;

    std::vector<std::uint8_t> ball(nv), half(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        const double d = (mesh.vertex(static_cast<int>(i)) - center).norm();
        ball[i] = d < cert.probe_radius;
        half[i] = d < cert.inner_region_radius;
    }
    const std::vector<std::uint8_t> sigma = connected_component(mesh, y, ball);
    for (std::size_t i = 0; i < nv; ++i) half[i] = half[i] && sigma[i];
    const std::vector<std::uint8_t> inner_region = connected_component(mesh, y, half);
    cert.sigma_vertices = count(sigma);
    cert.u_vertices = count(inner_region);

    const std::vector<int> du = masked_boundary(mesh, inner_region);
    const std::vector<int> dsigma = masked_boundary(mesh, sigma);
    SeparationReport& sep = cert.separation;
    sep.method = "euclidean-lower-bound";
    sep.required = 4.0 * alpha * alpha * r * s;
    sep.u_boundary_vertices = du.size();
    sep.sigma_boundary_vertices = dsigma.size();
    sep.distance = std::numeric_limits<double>::infinity();
    for (int a : du)
        for (int b : dsigma) {
            const double d = (mesh.vertex(a) - mesh.vertex(b)).norm();
            if (d < sep.distance) {
                sep.distance = d;
                sep.u_vertex = a;
                sep.sigma_vertex = b;
            }
        }
    sep.ok = du.size() > 0 && sep.distance > sep.required;
    if (!sep.ok)
        throw GeometryError(ErrorCode::SeparationTooSmall,
                            "distance between the inner and outer boundaries is " + fmt(sep.distance) +
                                ", needs more than 4 alpha^2 r s = " + fmt(sep.required));

    const PatchDensity inner = region_density(surface, sigma, y, r * s, geo);
    cert.inner = inner.density;
    cert.inner_threshold = config.inner_threshold();
    cert.inner_ok = cert.inner.value >= cert.inner_threshold * (1.0 - cert.inner.error_estimate);

    // Far from the axis the surface is graphical. Among boundary points at
    // least half as far from the axis as the farthest one, prefer the finest
    // mesh; the rest follow by decreasing axis distance. A hint overrides this
    // with plain distance to the hint.
    double max_axis = 0.0;
    for (int v : du) max_axis = std::max(max_axis, axis_distance(surface, v));
    auto star_h = [&](int v) {
        double h = 0.0;
        for (int w : mesh.vertex_neighbors(v)) h = std::max(h, (mesh.vertex(w) - mesh.vertex(v)).norm());
        return h;
    };
    std::vector<std::pair<int, double>> far, rest;
    for (int v : du) {
        const double ax = axis_distance(surface, v);
        if (config.boundary_hint)
            far.push_back({v, (mesh.vertex(v) - *config.boundary_hint).norm()});
        else
            (ax >= 0.5 * max_axis ? far : rest).push_back({v, ax >= 0.5 * max_axis ? star_h(v) : -ax});
    }
    auto by_key = [&](const std::pair<int, double>& a, const std::pair<int, double>& b) {
        if (a.second != b.second) return a.second < b.second;
        return axis_distance(surface, a.first) > axis_distance(surface, b.first);
    };
    std::sort(far.begin(), far.end(), by_key);
    std::sort(rest.begin(), rest.end(), by_key);
    std::vector<int> candidates;
    for (const auto& [v, key] : far) candidates.push_back(v);
    for (const auto& [v, key] : rest) candidates.push_back(v);
    const double outer_scale = alpha * alpha * r * s;
    std::string last_detail = "no boundary candidates";
    for (int p : candidates) {
        if (cert.boundary_candidates_tried >= config.max_boundary_candidates) break;
        ++cert.boundary_candidates_tried;
        PatchDensity outer = region_density(surface, sigma, p, outer_scale, geo, true);
        if (!outer.graphicality.certified) {
            last_detail = outer.graphicality.detail;
            continue;
        }
        cert.boundary_point = p;
        cert.boundary_axis_distance = axis_distance(surface, p);
        cert.graphicality = outer.graphicality;
        cert.outer = outer.density;
        break;
    }
    if (cert.boundary_point < 0)
        throw GeometryError(ErrorCode::GraphicalityNotCertified,
                            "none of " + std::to_string(cert.boundary_candidates_tried) +
                                " boundary candidates is certified graphical: " + last_detail);
    cert.outer_threshold = config.outer_threshold();
    cert.outer_ok = cert.outer.value <= cert.outer_threshold * (1.0 + cert.outer.error_estimate);

    ChainReport& chain = cert.chain;
    chain.upper = 2.0 * a4;
    chain.middle = a4 * cert.outer.value;
    chain.lower = 4.0 * a4;
    chain.implied_outer_lower_bound = cert.inner.value / (a4 * a4);
    chain.holds = chain.upper >= chain.lower;
    chain.text = fmt(chain.upper) + " >= " + fmt(chain.middle) + " >= " + fmt(chain.lower) + " is " +
                 (chain.holds ? "true" : "false");

    cert.truncated = cert.inner.boundary_truncated || cert.outer.boundary_truncated;
    cert.valid = cert.inner_ok && cert.outer_ok && sep.ok && cert.graphicality.certified && !cert.truncated &&
                 !chain.holds;
    cert.notes.push_back("Mesh-level statement: a map from Sigma' to a helicoid piece with edge stretch in (1/alpha, "
                         "alpha) would carry theta_inner >= 4 alpha^8 at the center to theta >= 4 at a boundary "
                         "point at the matching axis distance, against the graph bound 2.");
    cert.notes.push_back("The inner and outer thresholds do not involve the target pitch; screw symmetry of the "
                         "helicoid makes the density at the matched point pitch independent, so the verdict covers "
                         "every pitch at once.");
    if (cert.graphicality.evidence == GraphEvidence::Asserted)
        cert.notes.push_back("Graphicality of the outer ball was asserted, not derived.");
    return cert;
}

FamilyReport validate_family_properties(const std::vector<FamilyMember>& family, double C,
                                        std::optional<double> k_probe, const std::vector<double>& delta_grid,
                                        double tol) {
    require(!family.empty(), "family is empty");
    require(C >= 1.0, "C must be at least 1");
    require(!delta_grid.empty(), "delta grid is empty");
    FamilyReport rep;
    rep.k_probe = k_probe;
    for (const FamilyMember& m : family) {
        require(m.surface != nullptr, "family member without a surface");
        require(m.a > 0.0, "a values must be positive");
        const MeshedSurface& surf = *m.surface;
        const CurvatureField field = estimate_curvature(surf);
        FamilyMemberReport r;
        r.id = m.id;
        r.a = m.a;
        r.center = nearest_vertex(surf.mesh(), Point3::Zero());
        r.center_norm2 = field.has(r.center) ? field.a2(r.center) : 0.0;
        r.expected_center = 2.0 / std::pow(m.a, 4);
        for (int v = 0; v < static_cast<int>(surf.mesh().num_vertices()); ++v)
            if (field.has(v)) r.sup_norm2 = std::max(r.sup_norm2, field.a2(v));
        r.sup_bound = 4.0 * r.center_norm2;
        r.equality_ok = std::abs(r.center_norm2 - r.expected_center) <= tol * r.expected_center;
        r.sup_ok = r.sup_norm2 <= r.sup_bound * (1.0 + tol);
        r.envelope = curvature_envelope(surf, field, delta_grid);
        r.multigraph_certified = surf.multigraph_certified();
        rep.fitted_k = std::max(rep.fitted_k, r.envelope.fitted_k);
        rep.members.push_back(std::move(r));
    }

    rep.growth_ok = rep.members.size() >= 2;
    for (std::size_t i = 1; i < rep.members.size(); ++i) {
        const auto& prev = rep.members[i - 1];
        const auto& cur = rep.members[i];
        if (!(cur.a < prev.a)) rep.failures.push_back("(1) a values not decreasing at " + cur.id);
        if (!(cur.center_norm2 > prev.center_norm2)) {
            rep.growth_ok = false;
            rep.failures.push_back("(1) |A|^2(0) does not grow from " + prev.id + " to " + cur.id + ": " +
                                   fmt(prev.center_norm2) + " -> " + fmt(cur.center_norm2));
        }
    }
    if (rep.members.size() < 2) rep.failures.push_back("(1) growth needs at least two members");

    rep.curvature_ok = true;
    for (const auto& r : rep.members) {
        if (!r.equality_ok) {
            rep.curvature_ok = false;
            rep.failures.push_back("(2) " + r.id + ": |A|^2(0) = " + fmt(r.center_norm2) + ", expected 2a^-4 = " +
                                   fmt(r.expected_center));
        }
        if (!r.sup_ok) {
            rep.curvature_ok = false;
            rep.failures.push_back("(2) " + r.id + ": sup |A|^2 = " + fmt(r.sup_norm2) + " exceeds 4|A|^2(0) = " +
                                   fmt(r.sup_bound));
        }
    }

    rep.envelope_ok = std::isfinite(rep.fitted_k) && (!k_probe || rep.fitted_k < *k_probe);
    if (!rep.envelope_ok)
        rep.failures.push_back("(3) fitted K = " + fmt(rep.fitted_k) +
                               (k_probe ? " is not below K_probe = " + fmt(*k_probe) : std::string(" is not finite")));

    rep.multigraph_ok = true;
    for (const auto& r : rep.members) {
        if (!r.multigraph_certified) {
            rep.multigraph_ok = false;
            rep.failures.push_back("(4) " + r.id + ": multigraph decomposition not certified");
        }
    }
    return rep;
}

} // namespace helidens
