#include "helidens/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "helidens/error.hpp"

namespace helidens {

std::string_view to_string(DensityKind kind) {
    return kind == DensityKind::Intrinsic ? "intrinsic" : "extrinsic";
}

std::string_view to_string(GraphEvidence evidence) {
    switch (evidence) {
    case GraphEvidence::None: return "none";
    case GraphEvidence::PlanarSurface: return "planar-surface";
    case GraphEvidence::HelicoidSheet: return "helicoid-sheet";
    case GraphEvidence::Asserted: return "asserted";
    }
    return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

// Fraction of a triangle where a linear function with corner values
// (a, b, c) is <= s.
double sublevel_fraction(std::array<double, 3> w, double s) {
    std::sort(w.begin(), w.end());
    const auto [a, b, c] = w;
    if (s >= c) return 1.0;
    if (s < a) return 0.0;
    if (s <= b) {
        if (b == a) return 0.0;
        return (s - a) * (s - a) / ((b - a) * (c - a));
    }
    return 1.0 - (c - s) * (c - s) / ((c - a) * (c - b));
}

double tri_area(const Point3& a, const Point3& b, const Point3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

double face_max_edge(const TriMesh& mesh, int f) {
    double h = 0.0;
    for (int e : mesh.face_edges(f)) h = std::max(h, mesh.edge_length(e));
    return h;
}

// Signed area of the disk of radius r about the origin intersected with the
// triangle (0, a, b).
double origin_triangle_disk(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double r) {
    const Eigen::Vector2d d = b - a;
    const double qa = d.squaredNorm(), qb = 2.0 * a.dot(d), qc = a.squaredNorm() - r * r;
    std::array<double, 4> cuts{0.0, 1.0, 1.0, 1.0};
    int n = 1;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (qa > 0.0 && disc > 0.0) {
        const double root = std::sqrt(disc);
        for (double t : {(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)})
            if (t > 0.0 && t < 1.0) cuts[static_cast<std::size_t>(n++)] = t;
    }
    cuts[static_cast<std::size_t>(n++)] = 1.0;
    double area = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const Eigen::Vector2d p = a + cuts[static_cast<std::size_t>(i)] * d;
        const Eigen::Vector2d q = a + cuts[static_cast<std::size_t>(i + 1)] * d;
        const double cross = p.x() * q.y() - p.y() * q.x();
        const Eigen::Vector2d mid = 0.5 * (p + q);
        if (mid.squaredNorm() <= r * r) area += 0.5 * cross;
        else area += 0.5 * r * r * std::atan2(cross, p.dot(q));
    }
    return area;
}

} // namespace

BallArea intrinsic_ball(const TriMesh& mesh, const DistanceField& field, double s) {
    if (!(s > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "ball radius must be positive");
    if (s > field.cutoff)
        throw GeometryError(ErrorCode::InvalidArgument, "ball radius exceeds the distance-field cutoff");
    BallArea out;
    for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
        const Face& fc = mesh.face(f);
        const auto& fe = mesh.face_edges(f);
        const std::array<double, 3> d{field.dist[static_cast<std::size_t>(fc[0])],
                                      field.dist[static_cast<std::size_t>(fc[1])],
                                      field.dist[static_cast<std::size_t>(fc[2])]};
        const std::array<double, 3> m{field.edge_mid[static_cast<std::size_t>(fe[0])],
                                      field.edge_mid[static_cast<std::size_t>(fe[1])],
                                      field.edge_mid[static_cast<std::size_t>(fe[2])]};
        if (std::min({d[0], d[1], d[2], m[0], m[1], m[2]}) > s) continue;
        out.local_h = std::max(out.local_h, face_max_edge(mesh, f));
        const Point3& p0 = mesh.vertex(fc[0]);
        const Point3& p1 = mesh.vertex(fc[1]);
        const Point3& p2 = mesh.vertex(fc[2]);
        const double quarter = tri_area(p0, p1, p2) / 4.0;
        // Midpoint i sits on face edge i (corners i, i + 1).
        out.area += quarter * (sublevel_fraction({d[0], m[0], m[2]}, s) + sublevel_fraction({d[1], m[1], m[0]}, s) +
                               sublevel_fraction({d[2], m[2], m[1]}, s) + sublevel_fraction({m[0], m[1], m[2]}, s));
        for (int i = 0; i < 3; ++i) {
            if (mesh.is_boundary_edge(fe[static_cast<std::size_t>(i)]) && m[static_cast<std::size_t>(i)] <= s)
                out.boundary_truncated = true;
            if (mesh.is_boundary(fc[static_cast<std::size_t>(i)]) && d[static_cast<std::size_t>(i)] <= s)
                out.boundary_truncated = true;
        }
    }
    return out;
}

DensityReport intrinsic_density(const MeshedSurface& surface, const DistanceField& field, double s) {
    const BallArea ball = intrinsic_ball(surface.mesh(), field, s);
    DensityReport r;
    r.center = field.source();
    r.scale = s;
    r.kind = DensityKind::Intrinsic;
    r.area = ball.area;
    r.value = ball.area / (kPi * s * s);
    r.local_h = ball.local_h;
    r.boundary_truncated = ball.boundary_truncated;
    r.error_estimate = 2.0 * (field.upper_bias_bound - 1.0) + 2.0 * ball.local_h / s;
    r.method = std::string(to_string(field.method));
    return r;
}

DistanceField distance_field_for_ball(const TriMesh& mesh, int p, double s, GeodesicOptions options) {
    double ring = 0.0;
    for (int f : mesh.vertex_faces(p)) ring = std::max(ring, face_max_edge(mesh, f));
    GeodesicSolver solver(mesh, std::vector<int>{p}, options);
    double cutoff = s + 3.0 * ring;
    for (;;) {
        solver.advance(cutoff);
        DistanceField field = solver.field();
        double need = s;
        for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
            const Face& fc = mesh.face(f);
            double lo = std::numeric_limits<double>::infinity();
            for (int v : fc) lo = std::min(lo, field.dist[static_cast<std::size_t>(v)]);
            for (int e : mesh.face_edges(f)) lo = std::min(lo, field.edge_mid[static_cast<std::size_t>(e)]);
            if (lo <= s) need = std::max(need, s + 3.0 * face_max_edge(mesh, f));
        }
        if (need <= cutoff) return field;
        cutoff = need;
    }
}

DensityReport intrinsic_density(const MeshedSurface& surface, int p, double s, const GeodesicOptions& options) {
    if (!(s > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "density scale must be positive");
    return intrinsic_density(surface, distance_field_for_ball(surface.mesh(), p, s, options), s);
}

BallArea extrinsic_ball(const TriMesh& mesh, const Point3& center, double s) {
    if (!(s > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "ball radius must be positive");
    BallArea out;
    const double s2 = s * s;
    for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
        const Face& fc = mesh.face(f);
        const Point3& a = mesh.vertex(fc[0]);
        const Point3& b = mesh.vertex(fc[1]);
        const Point3& c = mesh.vertex(fc[2]);
        const Point3 g = (a + b + c) / 3.0;
        const double spread = std::max({(a - g).norm(), (b - g).norm(), (c - g).norm()});
        if ((g - center).norm() - spread >= s) continue;
        double area = 0.0;
        if ((a - center).squaredNorm() <= s2 && (b - center).squaredNorm() <= s2 && (c - center).squaredNorm() <= s2) {
            area = tri_area(a, b, c);
        } else {
            const Point3 n = mesh.face_normal(f);
            const double height = n.dot(center - a);
            if (std::abs(height) >= s) continue;
            const double r = std::sqrt(s2 - height * height);
            const Point3 q = center - height * n;
            const Point3 e1 = (b - a).normalized();
            const Point3 e2 = n.cross(e1);
            auto flat = [&](const Point3& x) { return Eigen::Vector2d((x - q).dot(e1), (x - q).dot(e2)); };
            const Eigen::Vector2d pa = flat(a), pb = flat(b), pc = flat(c);
            area = std::abs(origin_triangle_disk(pa, pb, r) + origin_triangle_disk(pb, pc, r) +
                            origin_triangle_disk(pc, pa, r));
        }
        if (area <= 0.0) continue;
        out.area += area;
        out.local_h = std::max(out.local_h, face_max_edge(mesh, f));
        for (int v : fc)
            if (mesh.is_boundary(v) && (mesh.vertex(v) - center).squaredNorm() <= s2) out.boundary_truncated = true;
    }
    return out;
}

DensityReport extrinsic_density(const MeshedSurface& surface, int p, double s) {
    const BallArea ball = extrinsic_ball(surface.mesh(), surface.mesh().vertex(p), s);
    DensityReport r;
    r.center = p;
    r.scale = s;
    r.kind = DensityKind::Extrinsic;
    r.area = ball.area;
    r.value = ball.area / (kPi * s * s);
    r.local_h = ball.local_h;
    r.boundary_truncated = ball.boundary_truncated;
    r.error_estimate = 3.0 * ball.local_h / s;
    r.method = "exact-disk-clip";
    return r;
}

bool within_combined_error(const DensityReport& intrinsic, const DensityReport& extrinsic) {
    return intrinsic.value <= extrinsic.value + intrinsic.abs_error() + extrinsic.abs_error();
}

GraphicalityCertificate certify_graphical(const MeshedSurface& surface, const DistanceField& field, double s) {
    GraphicalityCertificate cert;
    if (surface.kind() == SurfaceKind::Plane) {
        cert.certified = true;
        cert.evidence = GraphEvidence::PlanarSurface;
        cert.detail = "planar surface is a graph over itself";
        return cert;
    }
    const TriMesh& mesh = surface.mesh();
    if (!(surface.is_helicoidal() && surface.multigraph_certified() && mesh.has_charts())) {
        cert.detail = "no generator metadata certifies graphicality";
        return cert;
    }
    double u_lo = std::numeric_limits<double>::infinity(), u_hi = -u_lo, v_lo = u_lo, v_hi = -u_lo;
    for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
        const Face& fc = mesh.face(f);
        double lo = std::numeric_limits<double>::infinity();
        for (int v : fc) lo = std::min(lo, field.dist[static_cast<std::size_t>(v)]);
        for (int e : mesh.face_edges(f)) lo = std::min(lo, field.edge_mid[static_cast<std::size_t>(e)]);
        if (lo > s) continue;
        for (int v : fc) {
            const ParamPoint& q = mesh.param(v);
            u_lo = std::min(u_lo, q.u);
            u_hi = std::max(u_hi, q.u);
            v_lo = std::min(v_lo, q.v);
            v_hi = std::max(v_hi, q.v);
        }
    }
    const bool one_sign = u_lo > 0.0 || u_hi < 0.0;
    const bool under_turn = v_hi - v_lo < 2.0 * kPi;
    cert.certified = one_sign && under_turn;
    cert.evidence = cert.certified ? GraphEvidence::HelicoidSheet : GraphEvidence::None;
    cert.detail = "u in [" + std::to_string(u_lo) + ", " + std::to_string(u_hi) + "], v span " +
                  std::to_string(v_hi - v_lo);
    return cert;
}

GraphDensityReport graph_density_check(const MeshedSurface& surface, int p, double s, bool assert_graphical,
                                       const GeodesicOptions& options) {
    if (!(s > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "density scale must be positive");
    const DistanceField field = distance_field_for_ball(surface.mesh(), p, s, options);
    GraphDensityReport out;
    out.graphicality = certify_graphical(surface, field, s);
    if (!out.graphicality.certified) {
        if (!assert_graphical)
            throw GeometryError(ErrorCode::GraphicalityNotCertified,
                                "ball of radius " + std::to_string(s) + " at vertex " + std::to_string(p) +
                                    " is not certified graphical (" + out.graphicality.detail + ")");
        out.graphicality.evidence = GraphEvidence::Asserted;
        out.graphicality.certified = true;
    }
    out.density = intrinsic_density(surface, field, s);
    out.threshold = 2.0 * (1.0 + out.density.error_estimate);
    out.pass = out.density.value <= out.threshold;
    return out;
}

} // namespace helidens
