#pragma once

#include <string>
#include <string_view>

#include "helidens/geodesic.hpp"
#include "helidens/mesh.hpp"

namespace helidens {

enum class DensityKind { Intrinsic, Extrinsic };

std::string_view to_string(DensityKind kind);

// Density ratio area / (pi s^2) at a vertex. error_estimate is relative to
// value; abs_error() is the additive budget used in comparisons.
struct DensityReport {
    int center = -1;
    double scale = 0.0;
    double value = 0.0;
    DensityKind kind = DensityKind::Intrinsic;
    double area = 0.0;
    double error_estimate = 0.0;
    bool boundary_truncated = false;
    double local_h = 0.0; // longest edge among the faces meeting the ball
    std::string method;

    double abs_error() const { return value * error_estimate; }
};

struct BallArea {
    double area = 0.0;
    bool boundary_truncated = false;
    double local_h = 0.0;
};

// Area where the piecewise-linear interpolant of the distance field is <= s.
// Each face is split 1-to-4 at its edge midpoints (which carry their own
// distances), and every sub-triangle is clipped exactly.
BallArea intrinsic_ball(const TriMesh& mesh, const DistanceField& field, double s);
inline double intrinsic_ball_area(const TriMesh& mesh, const DistanceField& field, double s) {
    return intrinsic_ball(mesh, field, s).area;
}

// Distance field from p with a cutoff large enough that every face meeting
// the ball of radius s has all of its nodes settled.
DistanceField distance_field_for_ball(const TriMesh& mesh, int p, double s, GeodesicOptions options = {});

// Error model: 2 (upper_bias_bound - 1) + 2 local_h / s.
DensityReport intrinsic_density(const MeshedSurface& surface, const DistanceField& field, double s);
// Computes a distance field cut off just beyond s.
DensityReport intrinsic_density(const MeshedSurface& surface, int p, double s, const GeodesicOptions& options = {});

// Exact area of B_s(center) meeting each flat triangle.
BallArea extrinsic_ball(const TriMesh& mesh, const Point3& center, double s);

// Error model: 3 local_h / s.
DensityReport extrinsic_density(const MeshedSurface& surface, int p, double s);

// Combined-error check of intrinsic <= extrinsic.
bool within_combined_error(const DensityReport& intrinsic, const DensityReport& extrinsic);

enum class GraphEvidence { None, PlanarSurface, HelicoidSheet, Asserted };

std::string_view to_string(GraphEvidence evidence);

struct GraphicalityCertificate {
    bool certified = false;
    GraphEvidence evidence = GraphEvidence::None;
    std::string detail;
};

// Certifies that the intrinsic ball {dist <= s} is a graph. Planes always
// qualify. On helicoid kinds the faces meeting the ball must keep a single
// sign of u (no axis) and span less than one turn in v, which makes the
// piece a graph over the horizontal plane.
GraphicalityCertificate certify_graphical(const MeshedSurface& surface, const DistanceField& field, double s);

struct GraphDensityReport {
    DensityReport density;
    GraphicalityCertificate graphicality;
    double threshold = 2.0; // 2 (1 + error_estimate)
    bool pass = false;
};

// theta_s(p) against the minimal-graph bound 2. With assert_graphical the
// caller vouches for graphicality (evidence Asserted). Throws
// GraphicalityNotCertified otherwise when no certificate is found.
GraphDensityReport graph_density_check(const MeshedSurface& surface, int p, double s, bool assert_graphical = false,
                                       const GeodesicOptions& options = {});

} // namespace helidens
