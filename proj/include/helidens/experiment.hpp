#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "helidens/curvature.hpp"
#include "helidens/density.hpp"
#include "helidens/error.hpp"
#include "helidens/generators.hpp"
#include "helidens/geodesic.hpp"
#include "helidens/mesh.hpp"

namespace helidens {

// Mesh sizing for generated helicoid balls, in units of the pitch, plus the
// geodesic resolution.
struct ResolutionConfig {
    double h_fine = 1.0;
    double grading = 0.25;
    double h_coarse = std::numeric_limits<double>::infinity();
    double max_angle_step = kMaxAngularStep;
    int steiner_points = kDefaultSteinerPoints;
    bool refine = false; // apply refined() once to the generated spec

    GeodesicOptions geodesic() const;
    void validate() const;
};

struct ExperimentConfig {
    double epsilon = 0.1;
    double omega = 0.9;
    double gamma = 0.0;
    double blow_up_constant = 1.0;       // C
    std::optional<double> density_target; // D; defaults to the inner threshold
    double inner_radius_factor = 0.0;     // r, required by run_density_gap
    ResolutionConfig resolution;
    double blow_up_tolerance = kDefaultBlowUpTolerance;
    int max_boundary_candidates = 16;
    std::optional<int> center_vertex; // defaults to the vertex nearest the origin
    // Boundary points of U are tried nearest this point first.
    std::optional<Point3> boundary_hint;

    double alpha() const { return 1.0 + epsilon; }
    double inner_threshold() const; // 4 alpha^8
    double outer_threshold() const { return 2.0; }
    double target() const { return density_target.value_or(inner_threshold()); }
    // Omega R^(1 - gamma) s^gamma
    double probe_radius(double outer_radius, double s) const;
    // Throws InvalidArgument.
    void validate() const;
};

struct LemmaRow {
    double R = 0.0;
    double theta = 0.0;
    double error_estimate = 0.0;
    double abs_error = 0.0;
    bool truncated = false;
};

struct LemmaSearchResult {
    double pitch = 0.0;
    double constant = 0.0; // C
    double target = 0.0;   // D
    double scale = 0.0;    // s at the axis
    std::vector<LemmaRow> table;
    bool monotone = true;
    int found = -1; // index into table, -1 when the target is not reached
    std::size_t mesh_vertices = 0;
    double mesh_radius = 0.0;

    double found_R() const { return found >= 0 ? table[static_cast<std::size_t>(found)].R : 0.0; }
};

// Thrown when no tabulated R reaches the target; carries the table.
class TargetNotReachedError : public GeometryError {
public:
    explicit TargetNotReachedError(LemmaSearchResult result);
    const LemmaSearchResult& result() const { return result_; }

private:
    LemmaSearchResult result_;
};

// First R of the increasing grid with theta_{R s}(axis) >= D on a helicoid of
// the given pitch, where s = C / |A|(axis). The mesh is a helicoid ball sized
// just beyond the largest probed intrinsic ball; one distance field serves the
// whole table.
LemmaSearchResult lemma_radius_search(double pitch, double C, double D, const std::vector<double>& R_grid,
                                      const ResolutionConfig& resolution = {});

struct SeparationReport {
    double distance = 0.0; // Euclidean lower bound on the intrinsic distance
    double required = 0.0; // 4 alpha^2 r s
    int u_vertex = -1;     // closest pair
    int sigma_vertex = -1;
    std::size_t u_boundary_vertices = 0;
    std::size_t sigma_boundary_vertices = 0;
    std::string method;
    bool ok = false;
};

// 2 alpha^4 >= alpha^4 theta_outer >= 4 alpha^4
struct ChainReport {
    double upper = 0.0;  // 2 alpha^4
    double middle = 0.0; // alpha^4 theta_outer
    double lower = 0.0;  // 4 alpha^4
    // What two applications of the density bounds force at the boundary
    // point: theta_inner / alpha^8.
    double implied_outer_lower_bound = 0.0;
    bool holds = false; // upper >= lower
    std::string text;
};

struct ObstructionCertificate {
    std::string surface_id;
    ExperimentConfig config;
    double alpha = 0.0;
    BlowUpPair blow_up;
    double outer_radius = 0.0; // R: max distance from the center to the surface
    double probe_radius = 0.0; // radius of the ball cutting out Sigma'
    double inner_region_radius = 0.0;
    std::size_t sigma_vertices = 0;
    std::size_t u_vertices = 0;
    SeparationReport separation;

    DensityReport inner; // theta_{r s}(center, Sigma')
    double inner_threshold = 0.0;
    bool inner_ok = false;

    int boundary_point = -1;
    double boundary_axis_distance = 0.0;
    int boundary_candidates_tried = 0;
    GraphicalityCertificate graphicality;
    DensityReport outer; // theta_{alpha^2 r s}(p, Sigma')
    double outer_threshold = 0.0;
    bool outer_ok = false;

    ChainReport chain;
    bool truncated = false;
    bool valid = false;
    std::vector<std::string> notes;
};

// Throws BlowUpUnverified, SeparationTooSmall or GraphicalityNotCertified.
ObstructionCertificate run_density_gap(const MeshedSurface& surface, const ExperimentConfig& config,
                                       const std::string& surface_id = "surface");

// theta_s at vertex v of the part of `surface` selected by `region`, computed
// on a local patch grown until no graph path shorter than the cutoff can
// leave it.
struct PatchDensity {
    DensityReport density;
    GraphicalityCertificate graphicality;
    std::size_t patch_vertices = 0;
    double patch_radius = 0.0;
};

PatchDensity region_density(const MeshedSurface& surface, const std::vector<std::uint8_t>& region, int v, double s,
                            const GeodesicOptions& options = {}, bool certify = false);

struct FamilyMember {
    const MeshedSurface* surface = nullptr;
    double a = 0.0;
    std::string id;
};

struct FamilyMemberReport {
    std::string id;
    double a = 0.0;
    int center = -1;
    double center_norm2 = 0.0;   // |A|^2 at the center
    double expected_center = 0.0; // 2 a^-4
    double sup_norm2 = 0.0;
    double sup_bound = 0.0; // 4 |A|^2(0) = 8 a^-4
    bool equality_ok = false;
    bool sup_ok = false;
    CurvatureEnvelope envelope;
    bool multigraph_certified = false;
};

struct FamilyReport {
    std::vector<FamilyMemberReport> members;
    bool growth_ok = false;     // (1)
    bool curvature_ok = false;  // (2)
    double fitted_k = 0.0;      // (3), over all members
    std::optional<double> k_probe;
    bool envelope_ok = false;
    bool multigraph_ok = false; // (4)
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// Checks the four family properties: center curvature growth, the curvature
// bound at the center with |A|^2(0) = 2 a^-4, the K delta^-4 envelope away
// from the origin, and certified multigraph decompositions.
FamilyReport validate_family_properties(const std::vector<FamilyMember>& family, double C,
                                        std::optional<double> k_probe, const std::vector<double>& delta_grid,
                                        double tol = kDefaultBlowUpTolerance);

} // namespace helidens
