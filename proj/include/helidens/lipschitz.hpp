#pragma once

#include <vector>

#include "helidens/density.hpp"
#include "helidens/mesh.hpp"

namespace helidens {

struct StretchBounds {
    double lo = 0.0; // min over edges of target length / source length
    double hi = 0.0;
    int argmin_edge = -1;
    int argmax_edge = -1;

    // Mesh-level acceptance as an alpha-bi-Lipschitz map.
    bool accepted(double alpha) const { return lo > 1.0 / alpha && hi < alpha; }
};

// Vertex i of the source maps to vertex i of the target. Both surfaces must
// outlive the correspondence.
class LipschitzCorrespondence {
public:
    // Throws CombinatoricsMismatch when the face lists differ and
    // NonInjectiveVertexMap when two source vertices land on one point.
    LipschitzCorrespondence(const MeshedSurface& source, const MeshedSurface& target);

    const MeshedSurface& source() const { return *source_; }
    const MeshedSurface& target() const { return *target_; }
    LipschitzCorrespondence inverse() const { return {*target_, *source_}; }

private:
    const MeshedSurface* source_;
    const MeshedSurface* target_;
};

StretchBounds estimate_bilipschitz(const LipschitzCorrespondence& corr);

struct TransportReport {
    int vertex = -1;
    double scale = 0.0;
    double alpha = 1.0;
    StretchBounds stretch;
    bool map_accepted = false;
    DensityReport source_small; // theta_{s/alpha}(p, source)
    DensityReport target;       // theta_s(f(p), target)
    DensityReport source_large; // theta_{alpha s}(p, source)
    double lower_slack = 0.0;   // theta_target - alpha^-4 theta_small + budget
    double upper_slack = 0.0;   // alpha^4 theta_large - theta_target + budget
    bool lower_holds = false;
    bool upper_holds = false;
    bool truncated = false;     // any of the three balls meets the boundary

    bool holds() const { return lower_holds && upper_holds; }
};

// alpha^-4 theta_{s/alpha}(p) <= theta_s(f(p)) <= alpha^4 theta_{alpha s}(p),
// each side relaxed by the density error budgets involved.
TransportReport check_density_transport(const LipschitzCorrespondence& corr, int p, double s, double alpha,
                                        const GeodesicOptions& options = {});

struct MatchResult {
    int vertex = -1;
    double achieved = 0.0;
    double residual = 0.0;
};

// Vertex of boundary_set whose axis distance is nearest target. Throws
// TargetOutOfRange when target lies outside the achieved range.
MatchResult helicoid_match_point(const MeshedSurface& piece, const std::vector<int>& boundary_set,
                                 double target_axis_distance);

} // namespace helidens
