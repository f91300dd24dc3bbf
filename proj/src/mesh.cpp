#include "helidens/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Geometry>

#include "helidens/error.hpp"

namespace helidens {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::RangeOutsideParent: return "RangeOutsideParent";
    case ErrorCode::SingularIntegrand: return "SingularIntegrand";
    case ErrorCode::PathDependenceDetected: return "PathDependenceDetected";
    case ErrorCode::InsufficientNeighborhood: return "InsufficientNeighborhood";
    case ErrorCode::EmptyBall: return "EmptyBall";
    case ErrorCode::ZeroCurvatureAtCenter: return "ZeroCurvatureAtCenter";
    case ErrorCode::DisconnectedMesh: return "DisconnectedMesh";
    case ErrorCode::GraphicalityNotCertified: return "GraphicalityNotCertified";
    case ErrorCode::CombinatoricsMismatch: return "CombinatoricsMismatch";
    case ErrorCode::NonInjectiveVertexMap: return "NonInjectiveVertexMap";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::TargetNotReached: return "TargetNotReached";
    case ErrorCode::BlowUpUnverified: return "BlowUpUnverified";
    case ErrorCode::SeparationTooSmall: return "SeparationTooSmall";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

namespace {

std::string face_name(int f, const Face& face) {
    return "face " + std::to_string(f) + " (" + std::to_string(face[0]) + ", " + std::to_string(face[1]) + ", " +
           std::to_string(face[2]) + ")";
}

void build_csr(std::size_t n, const std::vector<std::pair<int, int>>& pairs, std::vector<int>& offsets,
               std::vector<int>& items) {
    offsets.assign(n + 1, 0);
    for (const auto& [key, _] : pairs) ++offsets[static_cast<std::size_t>(key) + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    items.resize(pairs.size());
    std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [key, value] : pairs) items[static_cast<std::size_t>(cursor[static_cast<std::size_t>(key)]++)] = value;
}

} // namespace

bool TriMesh::has_charts() const {
    return std::all_of(params_.begin(), params_.end(), [](const ParamPoint& p) { return p.has_chart(); });
}

std::span<const int> TriMesh::vertex_faces(int v) const {
    const auto i = static_cast<std::size_t>(v);
    return {vf_items_.data() + vf_offsets_[i], static_cast<std::size_t>(vf_offsets_[i + 1] - vf_offsets_[i])};
}

std::span<const int> TriMesh::vertex_neighbors(int v) const {
    const auto i = static_cast<std::size_t>(v);
    return {vv_items_.data() + vv_offsets_[i], static_cast<std::size_t>(vv_offsets_[i + 1] - vv_offsets_[i])};
}

double TriMesh::edge_length(int e) const {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    return (vertex(ed[0]) - vertex(ed[1])).norm();
}

double TriMesh::face_area(int f) const {
    const Face& t = face(f);
    return 0.5 * (vertex(t[1]) - vertex(t[0])).cross(vertex(t[2]) - vertex(t[0])).norm();
}

Point3 TriMesh::face_normal(int f) const {
    const Face& t = face(f);
    return (vertex(t[1]) - vertex(t[0])).cross(vertex(t[2]) - vertex(t[0])).normalized();
}

TriMesh build_mesh(std::vector<Point3> vertices, std::vector<ParamPoint> params, std::vector<Face> faces) {
    const int nv = static_cast<int>(vertices.size());
    if (params.empty()) params.resize(vertices.size());
    if (params.size() != vertices.size())
        throw GeometryError(ErrorCode::InvalidArgument, "params must be parallel to vertices");
    for (int i = 0; i < nv; ++i) {
        if (!vertices[static_cast<std::size_t>(i)].allFinite())
            throw GeometryError(ErrorCode::InvalidArgument, "vertex " + std::to_string(i) + " is not finite");
    }

    struct HalfEdge {
        int lo, hi, from, face;
    };
    std::vector<HalfEdge> halfedges;
    halfedges.reserve(faces.size() * 3);
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        const Face& t = faces[static_cast<std::size_t>(f)];
        for (int k = 0; k < 3; ++k) {
            if (t[static_cast<std::size_t>(k)] < 0 || t[static_cast<std::size_t>(k)] >= nv)
                throw GeometryError(ErrorCode::InvalidArgument, face_name(f, t) + " references a missing vertex");
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw GeometryError(ErrorCode::DegenerateFace, face_name(f, t) + " repeats a vertex");
        const Point3& a = vertices[static_cast<std::size_t>(t[0])];
        const double area = 0.5 * (vertices[static_cast<std::size_t>(t[1])] - a)
                                      .cross(vertices[static_cast<std::size_t>(t[2])] - a)
                                      .norm();
        if (!(area >= kDegenerateArea))
            throw GeometryError(ErrorCode::DegenerateFace, face_name(f, t) + " has area " + std::to_string(area));
        for (int k = 0; k < 3; ++k) {
            const int a0 = t[static_cast<std::size_t>(k)];
            const int a1 = t[static_cast<std::size_t>((k + 1) % 3)];
            halfedges.push_back({std::min(a0, a1), std::max(a0, a1), a0, f});
        }
    }
    std::sort(halfedges.begin(), halfedges.end(), [](const HalfEdge& x, const HalfEdge& y) {
        return x.lo != y.lo ? x.lo < y.lo : (x.hi != y.hi ? x.hi < y.hi : x.face < y.face);
    });

    TriMesh mesh;
    mesh.face_edges_.assign(faces.size(), {-1, -1, -1});
    for (std::size_t i = 0; i < halfedges.size();) {
        std::size_t j = i;
        while (j < halfedges.size() && halfedges[j].lo == halfedges[i].lo && halfedges[j].hi == halfedges[i].hi) ++j;
        const std::string edge_name =
            "edge (" + std::to_string(halfedges[i].lo) + ", " + std::to_string(halfedges[i].hi) + ")";
        if (j - i > 2) {
            throw GeometryError(ErrorCode::NonManifoldEdge,
                                edge_name + " borders " + std::to_string(j - i) + " faces");
        }
        if (j - i == 2 && halfedges[i].from == halfedges[i + 1].from) {
            throw GeometryError(ErrorCode::InconsistentOrientation,
                                edge_name + " is traversed in the same direction by faces " +
                                    std::to_string(halfedges[i].face) + " and " + std::to_string(halfedges[i + 1].face));
        }
        const int e = static_cast<int>(mesh.edges_.size());
        mesh.edges_.push_back({halfedges[i].lo, halfedges[i].hi});
        mesh.edge_faces_.push_back({halfedges[i].face, j - i == 2 ? halfedges[i + 1].face : -1});
        for (std::size_t k = i; k < j; ++k) {
            const Face& t = faces[static_cast<std::size_t>(halfedges[k].face)];
            for (std::size_t c = 0; c < 3; ++c) {
                if (t[c] == halfedges[k].from) {
                    mesh.face_edges_[static_cast<std::size_t>(halfedges[k].face)][c] = e;
                    break;
                }
            }
        }
        i = j;
    }

    mesh.boundary_.assign(vertices.size(), 0);
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(mesh.edges_.size() * 2);
    for (std::size_t e = 0; e < mesh.edges_.size(); ++e) {
        const Edge& ed = mesh.edges_[e];
        if (mesh.edge_faces_[e][1] < 0) {
            mesh.boundary_[static_cast<std::size_t>(ed[0])] = 1;
            mesh.boundary_[static_cast<std::size_t>(ed[1])] = 1;
        }
        pairs.emplace_back(ed[0], ed[1]);
        pairs.emplace_back(ed[1], ed[0]);
    }
    build_csr(vertices.size(), pairs, mesh.vv_offsets_, mesh.vv_items_);
    pairs.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
        for (int c : faces[static_cast<std::size_t>(f)]) pairs.emplace_back(c, f);
    build_csr(vertices.size(), pairs, mesh.vf_offsets_, mesh.vf_items_);

    mesh.vertices_ = std::move(vertices);
    mesh.params_ = std::move(params);
    mesh.faces_ = std::move(faces);
    return mesh;
}

long euler_characteristic(const TriMesh& mesh) {
    return static_cast<long>(mesh.num_vertices()) - static_cast<long>(mesh.num_edges()) +
           static_cast<long>(mesh.num_faces());
}

std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh) {
    // Directed boundary half-edges keyed by their tail vertex.
    std::vector<std::pair<int, int>> directed;
    for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
        if (!mesh.is_boundary_edge(e)) continue;
        const int f = mesh.edge_faces(e)[0];
        const auto& fe = mesh.face_edges(f);
        for (std::size_t c = 0; c < 3; ++c) {
            if (fe[c] == e) {
                directed.emplace_back(mesh.face(f)[c], mesh.face(f)[(c + 1) % 3]);
                break;
            }
        }
    }
    std::sort(directed.begin(), directed.end());
    std::vector<char> used(directed.size(), 0);
    auto find_unused = [&](int tail) -> std::ptrdiff_t {
        auto it = std::lower_bound(directed.begin(), directed.end(), std::make_pair(tail, -1));
        for (; it != directed.end() && it->first == tail; ++it) {
            const auto idx = it - directed.begin();
            if (!used[static_cast<std::size_t>(idx)]) return idx;
        }
        return -1;
    };

    std::vector<std::vector<int>> loops;
    for (std::size_t start = 0; start < directed.size(); ++start) {
        if (used[start]) continue;
        std::vector<int> loop;
        std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(start);
        while (cur >= 0) {
            used[static_cast<std::size_t>(cur)] = 1;
            loop.push_back(directed[static_cast<std::size_t>(cur)].first);
            const int head = directed[static_cast<std::size_t>(cur)].second;
            if (head == directed[start].first) break;
            cur = find_unused(head);
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

bool is_disk(const TriMesh& mesh) {
    return euler_characteristic(mesh) == 1 && boundary_loops(mesh).size() == 1;
}

TriMesh subdivide_midpoint(const TriMesh& mesh) {
    const std::size_t nv = mesh.num_vertices();
    std::vector<Point3> vertices(mesh.vertices().begin(), mesh.vertices().end());
    std::vector<ParamPoint> params(mesh.params().begin(), mesh.params().end());
    vertices.reserve(nv + mesh.num_edges());
    params.reserve(nv + mesh.num_edges());
    for (const Edge& e : mesh.edges()) {
        vertices.push_back(0.5 * (mesh.vertex(e[0]) + mesh.vertex(e[1])));
        const ParamPoint& a = mesh.param(e[0]);
        const ParamPoint& b = mesh.param(e[1]);
        params.push_back({0.5 * (a.u + b.u), 0.5 * (a.v + b.v), a.chart == b.chart ? a.chart : -1});
    }
    std::vector<Face> faces;
    faces.reserve(mesh.num_faces() * 4);
    for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
        const Face& t = mesh.face(f);
        const auto& fe = mesh.face_edges(f);
        const int m01 = static_cast<int>(nv) + fe[0];
        const int m12 = static_cast<int>(nv) + fe[1];
        const int m20 = static_cast<int>(nv) + fe[2];
        faces.push_back({t[0], m01, m20});
        faces.push_back({m01, t[1], m12});
        faces.push_back({m20, m12, t[2]});
        faces.push_back({m01, m12, m20});
    }
    return build_mesh(std::move(vertices), std::move(params), std::move(faces));
}

double max_edge_length(const TriMesh& mesh) {
    double h = 0.0;
    for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) h = std::max(h, mesh.edge_length(e));
    return h;
}

std::string_view to_string(SurfaceKind kind) {
    switch (kind) {
    case SurfaceKind::Plane: return "plane";
    case SurfaceKind::Helicoid: return "helicoid";
    case SurfaceKind::MultigraphAnnulus: return "multigraph-annulus";
    case SurfaceKind::Weierstrass: return "weierstrass";
    case SurfaceKind::Imported: return "imported";
    }
    return "imported";
}

std::optional<SurfaceKind> surface_kind_from_string(std::string_view name) {
    for (auto kind : {SurfaceKind::Plane, SurfaceKind::Helicoid, SurfaceKind::MultigraphAnnulus,
                      SurfaceKind::Weierstrass, SurfaceKind::Imported}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

double AnalyticData::curvature_norm2(double u) const {
    if (model == Model::Flat) return 0.0;
    const double c2 = pitch * pitch;
    const double q = c2 + u * u;
    return 2.0 * c2 / (q * q);
}

MeshedSurface::MeshedSurface(TriMesh mesh, SurfaceKind kind, std::optional<AnalyticData> analytic,
                             bool multigraph_certified)
    : mesh_(std::move(mesh)), kind_(kind), analytic_(analytic), multigraph_certified_(multigraph_certified) {
    if (analytic_) {
        const bool flat_ok = kind_ == SurfaceKind::Plane && analytic_->model == AnalyticData::Model::Flat;
        const bool helicoid_ok = is_helicoidal() && analytic_->model == AnalyticData::Model::Helicoid &&
                                 analytic_->pitch > 0.0;
        if (!flat_ok && !helicoid_ok)
            throw GeometryError(ErrorCode::InvalidArgument,
                                "analytic metadata does not match surface kind " + std::string(to_string(kind_)));
    }
    if (analytic_ && analytic_->model == AnalyticData::Model::Helicoid && !mesh_.has_charts())
        throw GeometryError(ErrorCode::InvalidArgument, "helicoid metadata requires parametric charts");
    h_max_ = max_edge_length(mesh_);
}

double axis_distance(const MeshedSurface& surface, int vertex) {
    if (surface.is_helicoidal() && surface.mesh().param(vertex).has_chart())
        return std::abs(surface.mesh().param(vertex).u);
    const Point3& p = surface.mesh().vertex(vertex);
    return std::hypot(p.x(), p.y());
}

MeshedSurface scaled(const MeshedSurface& surface, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw GeometryError(ErrorCode::InvalidArgument, "scale factor must be positive");
    const TriMesh& m = surface.mesh();
    std::vector<Point3> vertices;
    vertices.reserve(m.num_vertices());
    for (const Point3& p : m.vertices()) vertices.push_back(lambda * p);
    std::vector<ParamPoint> params(m.params().begin(), m.params().end());
    auto analytic = surface.analytic();
    switch (surface.kind()) {
    case SurfaceKind::Plane:
        for (auto& p : params) {
            p.u *= lambda;
            p.v *= lambda;
        }
        break;
    case SurfaceKind::Helicoid:
    case SurfaceKind::MultigraphAnnulus:
        for (auto& p : params) p.u *= lambda;
        if (analytic) analytic->pitch *= lambda;
        break;
    default: break;
    }
    return MeshedSurface(build_mesh(std::move(vertices), std::move(params), {m.faces().begin(), m.faces().end()}),
                         surface.kind(), analytic, surface.multigraph_certified());
}

MeshedSurface with_positions(const MeshedSurface& surface, std::vector<Point3> positions) {
    const TriMesh& m = surface.mesh();
    if (positions.size() != m.num_vertices())
        throw GeometryError(ErrorCode::InvalidArgument, "position count does not match vertex count");
    return MeshedSurface(build_mesh(std::move(positions), {m.params().begin(), m.params().end()},
                                    {m.faces().begin(), m.faces().end()}),
                         SurfaceKind::Imported);
}

int nearest_vertex(const TriMesh& mesh, const Point3& target) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(mesh.num_vertices()); ++i) {
        const double d = (mesh.vertex(i) - target).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<std::uint8_t> connected_component(const TriMesh& mesh, int seed,
                                              const std::vector<std::uint8_t>& allowed) {
    std::vector<std::uint8_t> seen(mesh.num_vertices(), 0);
    if (!allowed[static_cast<std::size_t>(seed)]) return seen;
    std::vector<int> stack{seed};
    seen[static_cast<std::size_t>(seed)] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : mesh.vertex_neighbors(v)) {
            const auto i = static_cast<std::size_t>(w);
            if (!seen[i] && allowed[i]) {
                seen[i] = 1;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

SubSurface extract_submesh(const MeshedSurface& surface, const std::vector<std::uint8_t>& vertex_mask) {
    const TriMesh& m = surface.mesh();
    if (vertex_mask.size() != m.num_vertices())
        throw GeometryError(ErrorCode::InvalidArgument, "vertex mask size does not match the mesh");
    std::vector<int> to_parent, from_parent(m.num_vertices(), -1);
    std::vector<Point3> vertices;
    std::vector<ParamPoint> params;
    std::vector<Face> faces;
    for (const Face& f : m.faces()) {
        if (!vertex_mask[static_cast<std::size_t>(f[0])] || !vertex_mask[static_cast<std::size_t>(f[1])] ||
            !vertex_mask[static_cast<std::size_t>(f[2])])
            continue;
        Face g;
        for (std::size_t i = 0; i < 3; ++i) {
            int& slot = from_parent[static_cast<std::size_t>(f[i])];
            if (slot < 0) {
                slot = static_cast<int>(vertices.size());
                to_parent.push_back(f[i]);
                vertices.push_back(m.vertex(f[i]));
                if (!m.params().empty()) params.push_back(m.param(f[i]));
            }
            g[i] = slot;
        }
        faces.push_back(g);
    }
    if (faces.empty()) throw GeometryError(ErrorCode::InvalidArgument, "vertex mask selects no faces");
    return {MeshedSurface(build_mesh(std::move(vertices), std::move(params), std::move(faces)), surface.kind(),
                          surface.analytic(), surface.multigraph_certified()),
            std::move(to_parent), std::move(from_parent)};
}

} // namespace helidens
