#include "helidens/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "helidens/error.hpp"

namespace helidens {

void write_hdmesh(std::ostream& out, const MeshedSurface& surface) {
    const TriMesh& m = surface.mesh();
    out << "HDMESH 1\n";
    out << "# kind " << to_string(surface.kind()) << '\n';
    out << std::setprecision(17);
    if (const auto& a = surface.analytic(); a && a->model == AnalyticData::Model::Helicoid)
        out << "# pitch " << a->pitch << '\n';
    if (surface.multigraph_certified()) out << "# multigraph 1\n";
    for (int i = 0; i < static_cast<int>(m.num_vertices()); ++i) {
        const Point3& p = m.vertex(i);
        const ParamPoint& q = m.param(i);
        out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << ' ' << q.u << ' ' << q.v << ' ' << q.chart << '\n';
    }
    for (const Face& f : m.faces()) out << "f " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_hdmesh(const std::filesystem::path& path, const MeshedSurface& surface) {
    std::ofstream out(path);
    if (!out) throw GeometryError(ErrorCode::InvalidArgument, "cannot open " + path.string() + " for writing");
    write_hdmesh(out, surface);
}

MeshedSurface read_hdmesh(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("HDMESH 1", 0) != 0)
        throw GeometryError(ErrorCode::ParseError, "missing 'HDMESH 1' header");

    std::vector<Point3> vertices;
    std::vector<ParamPoint> params;
    std::vector<Face> faces;
    SurfaceKind kind = SurfaceKind::Imported;
    double pitch = 0.0;
    bool multigraph = false;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        auto fail = [&] { throw GeometryError(ErrorCode::ParseError, "malformed line " + std::to_string(line_no)); };
        if (tag == "v") {
            double x, y, z, u, v;
            int chart;
            if (!(ls >> x >> y >> z >> u >> v >> chart)) fail();
            vertices.emplace_back(x, y, z);
            params.push_back({u, v, chart < 0 ? -1 : chart});
        } else if (tag == "f") {
            Face f;
            if (!(ls >> f[0] >> f[1] >> f[2])) fail();
            faces.push_back(f);
        } else if (tag == "#") {
            std::string key;
            ls >> key;
            if (key == "kind") {
                std::string name;
                ls >> name;
                if (auto k = surface_kind_from_string(name)) kind = *k;
            } else if (key == "pitch") {
                ls >> pitch;
            } else if (key == "multigraph") {
                int flag = 0;
                ls >> flag;
                multigraph = flag != 0;
            }
        } else {
            fail();
        }
    }

    std::optional<AnalyticData> analytic;
    if (kind == SurfaceKind::Plane) {
        analytic = AnalyticData{AnalyticData::Model::Flat, 0.0};
    } else if ((kind == SurfaceKind::Helicoid || kind == SurfaceKind::MultigraphAnnulus) && pitch > 0.0) {
        analytic = AnalyticData{AnalyticData::Model::Helicoid, pitch};
    }
    TriMesh mesh = build_mesh(std::move(vertices), std::move(params), std::move(faces));
    if (analytic && analytic->model == AnalyticData::Model::Helicoid && !mesh.has_charts()) analytic.reset();
    return MeshedSurface(std::move(mesh), kind, analytic, multigraph);
}

MeshedSurface read_hdmesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GeometryError(ErrorCode::InvalidArgument, "cannot open " + path.string());
    return read_hdmesh(in);
}

} // namespace helidens
