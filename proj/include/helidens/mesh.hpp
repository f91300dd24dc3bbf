#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace helidens {

using Point3 = Eigen::Vector3d;

// Parametric coordinates of a vertex. chart < 0 means the vertex carries no
// chart (imported meshes).
struct ParamPoint {
    double u = 0.0;
    double v = 0.0;
    int chart = -1;

    bool has_chart() const { return chart >= 0; }
};

using Face = std::array<int, 3>;
using Edge = std::array<int, 2>; // sorted, front < back

// Faces below this area (model units squared) are rejected by build_mesh.
inline constexpr double kDegenerateArea = 1e-14;

// Immutable, validated triangle mesh. Construct through build_mesh.
class TriMesh {
public:
    TriMesh() = default;

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_faces() const { return faces_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    std::span<const Point3> vertices() const { return vertices_; }
    std::span<const ParamPoint> params() const { return params_; }
    std::span<const Face> faces() const { return faces_; }
    std::span<const Edge> edges() const { return edges_; }

    const Point3& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    const ParamPoint& param(int i) const { return params_[static_cast<std::size_t>(i)]; }
    const Face& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }
    bool is_boundary(int v) const { return boundary_[static_cast<std::size_t>(v)] != 0; }
    bool has_charts() const;

    // face_edges(f)[i] joins corners i and (i + 1) % 3 of face f.
    const std::array<int, 3>& face_edges(int f) const { return face_edges_[static_cast<std::size_t>(f)]; }
    // Second entry is -1 on boundary edges.
    const std::array<int, 2>& edge_faces(int e) const { return edge_faces_[static_cast<std::size_t>(e)]; }
    bool is_boundary_edge(int e) const { return edge_faces(e)[1] < 0; }

    std::span<const int> vertex_faces(int v) const;
    std::span<const int> vertex_neighbors(int v) const;

    double edge_length(int e) const;
    double face_area(int f) const;
    // Unit normal from the face winding.
    Point3 face_normal(int f) const;

private:
    friend TriMesh build_mesh(std::vector<Point3>, std::vector<ParamPoint>, std::vector<Face>);

    std::vector<Point3> vertices_;
    std::vector<ParamPoint> params_;
    std::vector<Face> faces_;
    std::vector<std::uint8_t> boundary_;

    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> face_edges_;
    std::vector<std::array<int, 2>> edge_faces_;
    std::vector<int> vf_offsets_, vf_items_;
    std::vector<int> vv_offsets_, vv_items_;
};

// Validates and indexes a triangle soup. params may be empty (no charts).
// Throws GeometryError with DegenerateFace, NonManifoldEdge,
// InconsistentOrientation or InvalidArgument.
TriMesh build_mesh(std::vector<Point3> vertices, std::vector<ParamPoint> params, std::vector<Face> faces);

long euler_characteristic(const TriMesh& mesh);

// Boundary cycles, each oriented along the face winding. Empty for closed meshes.
std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh);

bool is_disk(const TriMesh& mesh);

// 1-to-4 midpoint split. New vertices interpolate positions and parameters.
TriMesh subdivide_midpoint(const TriMesh& mesh);

double max_edge_length(const TriMesh& mesh);

enum class SurfaceKind { Plane, Helicoid, MultigraphAnnulus, Weierstrass, Imported };

std::string_view to_string(SurfaceKind kind);
std::optional<SurfaceKind> surface_kind_from_string(std::string_view name);

// Closed-form metadata for kinds with known curvature.
struct AnalyticData {
    enum class Model { Flat, Helicoid };
    Model model = Model::Flat;
    double pitch = 0.0; // helicoid pitch c, parametrization (u cos v, u sin v, c v)

    // |A|^2 at parameter u; zero for flat surfaces.
    double curvature_norm2(double u) const;
};

class MeshedSurface {
public:
    MeshedSurface(TriMesh mesh, SurfaceKind kind, std::optional<AnalyticData> analytic = std::nullopt,
                  bool multigraph_certified = false);

    const TriMesh& mesh() const { return mesh_; }
    SurfaceKind kind() const { return kind_; }
    const std::optional<AnalyticData>& analytic() const { return analytic_; }
    double h_max() const { return h_max_; }
    // Generator vouches that the surface minus the x3-axis splits into
    // multi-valued graphs.
    bool multigraph_certified() const { return multigraph_certified_; }

    bool is_helicoidal() const {
        return kind_ == SurfaceKind::Helicoid || kind_ == SurfaceKind::MultigraphAnnulus;
    }

private:
    TriMesh mesh_;
    SurfaceKind kind_;
    std::optional<AnalyticData> analytic_;
    double h_max_ = 0.0;
    bool multigraph_certified_ = false;
};

// Distance from the x3-axis; the ruling parameter |u| on helicoid kinds.
double axis_distance(const MeshedSurface& surface, int vertex);

// Uniform scaling by lambda > 0; helicoid metadata and parameters follow
// (pitch c -> lambda c, u -> lambda u).
MeshedSurface scaled(const MeshedSurface& surface, double lambda);

// Same combinatorics, new vertex positions. Result is an imported surface
// that keeps the source parameters.
MeshedSurface with_positions(const MeshedSurface& surface, std::vector<Point3> positions);

// Faces whose three vertices are all selected, with unused vertices dropped.
// Kind and metadata carry over.
struct SubSurface {
    MeshedSurface surface;
    std::vector<int> to_parent;   // sub vertex -> parent vertex
    std::vector<int> from_parent; // parent vertex -> sub vertex or -1
};

SubSurface extract_submesh(const MeshedSurface& surface, const std::vector<std::uint8_t>& vertex_mask);

// Vertices reachable from seed along edges whose endpoints are both allowed.
std::vector<std::uint8_t> connected_component(const TriMesh& mesh, int seed, const std::vector<std::uint8_t>& allowed);

// Vertex closest to the given ambient point.
int nearest_vertex(const TriMesh& mesh, const Point3& target);

} // namespace helidens
