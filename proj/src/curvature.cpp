#include "helidens/curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "helidens/error.hpp"

namespace helidens {

std::string_view to_string(CurvatureMethod method) {
    switch (method) {
    case CurvatureMethod::Auto: return "auto";
    case CurvatureMethod::Analytic: return "analytic";
    case CurvatureMethod::QuadricFit: return "quadric-fit";
    }
    return "unknown";
}

std::optional<CurvatureMethod> curvature_method_from_string(std::string_view name) {
    if (name == "auto") return CurvatureMethod::Auto;
    if (name == "analytic") return CurvatureMethod::Analytic;
    if (name == "quadric-fit") return CurvatureMethod::QuadricFit;
    return std::nullopt;
}

namespace {

std::vector<int> two_ring(const TriMesh& mesh, int v, std::vector<int>& mark, int stamp) {
    std::vector<int> ring;
    mark[static_cast<std::size_t>(v)] = stamp;
    for (int a : mesh.vertex_neighbors(v)) {
        if (mark[static_cast<std::size_t>(a)] != stamp) {
            mark[static_cast<std::size_t>(a)] = stamp;
            ring.push_back(a);
        }
    }
    const std::size_t first = ring.size();
    for (std::size_t i = 0; i < first; ++i) {
        for (int b : mesh.vertex_neighbors(ring[i])) {
            if (mark[static_cast<std::size_t>(b)] != stamp) {
                mark[static_cast<std::size_t>(b)] = stamp;
                ring.push_back(b);
            }
        }
    }
    return ring;
}

CurvatureField quadric_fit(const TriMesh& mesh) {
    const std::size_t n = mesh.num_vertices();
    CurvatureField out;
    out.method = CurvatureMethod::QuadricFit;
    out.norm2.assign(n, 0.0);
    out.mean.assign(n, 0.0);
    out.valid.assign(n, 0);
    std::vector<int> mark(n, -1);
    for (int v = 0; v < static_cast<int>(n); ++v) {
        if (mesh.is_boundary(v)) continue;
        const std::vector<int> ring = two_ring(mesh, v, mark, v);
        if (ring.size() < 6)
            throw GeometryError(ErrorCode::InsufficientNeighborhood,
                                "vertex " + std::to_string(v) + " has only " + std::to_string(ring.size()) +
                                    " 2-ring neighbors");
        Point3 normal = Point3::Zero();
        for (int f : mesh.vertex_faces(v)) {
            const Face& fc = mesh.face(f);
            normal += (mesh.vertex(fc[1]) - mesh.vertex(fc[0])).cross(mesh.vertex(fc[2]) - mesh.vertex(fc[0]));
        }
        normal.normalize();
        const Point3 helper = std::abs(normal.x()) < 0.9 ? Point3::UnitX() : Point3::UnitY();
        const Point3 t1 = normal.cross(helper).normalized();
        const Point3 t2 = normal.cross(t1);

        const Point3& p0 = mesh.vertex(v);
        double scale = 0.0;
        for (int a : mesh.vertex_neighbors(v)) scale += (mesh.vertex(a) - p0).norm();
        scale /= static_cast<double>(mesh.vertex_neighbors(v).size());

        Eigen::MatrixXd design(static_cast<Eigen::Index>(ring.size()), 5);
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(ring.size()));
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point3 d = (mesh.vertex(ring[i]) - p0) / scale;
            const double x = d.dot(t1), y = d.dot(t2);
            const auto row = static_cast<Eigen::Index>(i);
            design.row(row) << x * x, x * y, y * y, x, y;
            rhs(row) = d.dot(normal);
        }
        const Eigen::VectorXd q = design.colPivHouseholderQr().solve(rhs);
        const double a = q(0), b = q(1), c = q(2), dx = q(3), dy = q(4);
        Eigen::Matrix2d first, second;
        first << 1.0 + dx * dx, dx * dy, dx * dy, 1.0 + dy * dy;
        const double w = std::sqrt(1.0 + dx * dx + dy * dy);
        second << 2.0 * a / w, b / w, b / w, 2.0 * c / w;
        const Eigen::Matrix2d shape = first.inverse() * second / scale;
        const double tr = shape.trace(), det = shape.determinant();
        out.mean[static_cast<std::size_t>(v)] = 0.5 * tr;
        out.norm2[static_cast<std::size_t>(v)] = std::max(0.0, tr * tr - 2.0 * det);
        out.valid[static_cast<std::size_t>(v)] = 1;
    }
    return out;
}

CurvatureField analytic_field(const MeshedSurface& surface) {
    const TriMesh& mesh = surface.mesh();
    const std::size_t n = mesh.num_vertices();
    CurvatureField out;
    out.method = CurvatureMethod::Analytic;
    out.norm2.resize(n);
    out.mean.assign(n, 0.0);
    out.valid.assign(n, 1);
    for (std::size_t v = 0; v < n; ++v) out.norm2[v] = surface.analytic()->curvature_norm2(mesh.params()[v].u);
    return out;
}

} // namespace

CurvatureField estimate_curvature(const MeshedSurface& surface, CurvatureMethod method) {
    const bool closed_form = surface.analytic().has_value() &&
                             (surface.analytic()->model == AnalyticData::Model::Flat || surface.mesh().has_charts());
    if (method == CurvatureMethod::Auto) method = closed_form ? CurvatureMethod::Analytic : CurvatureMethod::QuadricFit;
    if (method == CurvatureMethod::Analytic) {
        if (!closed_form)
            throw GeometryError(ErrorCode::InvalidArgument, "surface carries no closed-form curvature metadata");
        return analytic_field(surface);
    }
    return quadric_fit(surface.mesh());
}

double mean_curvature_residual(const MeshedSurface& surface) {
    const CurvatureField field = quadric_fit(surface.mesh());
    double worst = 0.0;
    for (std::size_t v = 0; v < field.mean.size(); ++v)
        if (field.valid[v]) worst = std::max(worst, std::abs(field.mean[v]));
    return worst;
}

BlowUpPair check_blow_up_pair(const MeshedSurface& surface, const CurvatureField& field, int y, double s, double C,
                              double tol) {
    const TriMesh& mesh = surface.mesh();
    if (y < 0 || y >= static_cast<int>(mesh.num_vertices()))
        throw GeometryError(ErrorCode::InvalidArgument, "center vertex out of range");
    if (!(s > 0.0) || !(C > 0.0) || !(tol >= 0.0))
        throw GeometryError(ErrorCode::InvalidArgument, "blow-up check needs s > 0, C > 0, tol >= 0");

    BlowUpPair pair;
    pair.center = y;
    pair.scale = s;
    pair.constant = C;
    pair.tolerance = tol;
    pair.method = std::string(to_string(field.method));
    pair.bound = 4.0 * C * C / (s * s);
    const Point3& py = mesh.vertex(y);
    for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v) {
        if (!field.has(v) || (mesh.vertex(v) - py).norm() > s) continue;
        ++pair.vertices_in_ball;
        if (pair.sup_vertex < 0 || field.a2(v) > pair.sup_check) {
            pair.sup_check = field.a2(v);
            pair.sup_vertex = v;
        }
    }
    if (pair.vertices_in_ball == 0)
        throw GeometryError(ErrorCode::EmptyBall, "no vertex with a curvature estimate in B_s(y)");
    if (!field.has(y))
        throw GeometryError(ErrorCode::InvalidArgument, "no curvature estimate at vertex " + std::to_string(y));
    pair.center_value = field.a2(y);
    pair.sup_ok = pair.sup_check <= pair.bound * (1.0 + tol);
    pair.equality_ok = std::abs(pair.bound - 4.0 * pair.center_value) <= tol * 4.0 * pair.center_value;
    pair.accepted = pair.sup_ok && pair.equality_ok;
    return pair;
}

double blow_up_scale(const CurvatureField& field, int y, double C) {
    if (!(C > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "blow-up constant must be positive");
    if (!field.has(y) || !(field.a2(y) > 0.0))
        throw GeometryError(ErrorCode::ZeroCurvatureAtCenter,
                            "|A|^2 vanishes (or is unknown) at vertex " + std::to_string(y));
    return C / std::sqrt(field.a2(y));
}

CurvatureEnvelope curvature_envelope(const MeshedSurface& surface, const CurvatureField& field,
                                     const std::vector<double>& deltas, const Point3& center) {
    const TriMesh& mesh = surface.mesh();
    CurvatureEnvelope env;
    env.deltas = deltas;
    for (double delta : deltas) {
        if (!(delta > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "delta must be positive");
        double sup = 0.0;
        for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v)
            if (field.has(v) && (mesh.vertex(v) - center).norm() >= delta) sup = std::max(sup, field.a2(v));
        env.sups.push_back(sup);
        env.fitted_k = std::max(env.fitted_k, sup * std::pow(delta, 4));
    }
    return env;
}

} // namespace helidens
