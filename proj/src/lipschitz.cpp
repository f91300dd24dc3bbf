#include "helidens/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "helidens/error.hpp"

namespace helidens {

LipschitzCorrespondence::LipschitzCorrespondence(const MeshedSurface& source, const MeshedSurface& target)
    : source_(&source), target_(&target) {
    const TriMesh& a = source.mesh();
    const TriMesh& b = target.mesh();
    if (a.num_vertices() != b.num_vertices() || a.num_faces() != b.num_faces() ||
        !std::equal(a.faces().begin(), a.faces().end(), b.faces().begin()))
        throw GeometryError(ErrorCode::CombinatoricsMismatch, "source and target do not share a face list");

    std::vector<int> order(b.num_vertices());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int i) {
        const Point3& p = b.vertex(i);
        return std::tuple(p.x(), p.y(), p.z());
    };
    std::sort(order.begin(), order.end(), [&](int i, int j) { return key(i) < key(j); });
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (key(order[k - 1]) == key(order[k]))
            throw GeometryError(ErrorCode::NonInjectiveVertexMap,
                                "vertices " + std::to_string(order[k - 1]) + " and " + std::to_string(order[k]) +
                                    " map to the same point");
    }
}

StretchBounds estimate_bilipschitz(const LipschitzCorrespondence& corr) {
    const TriMesh& a = corr.source().mesh();
    const TriMesh& b = corr.target().mesh();
    StretchBounds out;
    for (int e = 0; e < static_cast<int>(a.num_edges()); ++e) {
        const double ratio = b.edge_length(e) / a.edge_length(e);
        if (out.argmin_edge < 0 || ratio < out.lo) {
            out.lo = ratio;
            out.argmin_edge = e;
        }
        if (out.argmax_edge < 0 || ratio > out.hi) {
            out.hi = ratio;
            out.argmax_edge = e;
        }
    }
    return out;
}

TransportReport check_density_transport(const LipschitzCorrespondence& corr, int p, double s, double alpha,
                                        const GeodesicOptions& options) {
    if (!(alpha >= 1.0)) throw GeometryError(ErrorCode::InvalidArgument, "alpha must be at least 1");
    if (!(s > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "scale must be positive");
    TransportReport r;
    r.vertex = p;
    r.scale = s;
    r.alpha = alpha;
    r.stretch = estimate_bilipschitz(corr);
    r.map_accepted = r.stretch.accepted(alpha) || (alpha == 1.0 && r.stretch.lo == 1.0 && r.stretch.hi == 1.0);
    r.source_small = intrinsic_density(corr.source(), p, s / alpha, options);
    r.target = intrinsic_density(corr.target(), p, s, options);
    r.source_large = intrinsic_density(corr.source(), p, alpha * s, options);
    const double a4 = std::pow(alpha, 4);
    const double lower_budget = r.source_small.abs_error() / a4 + r.target.abs_error();
    const double upper_budget = a4 * r.source_large.abs_error() + r.target.abs_error();
    r.lower_slack = r.target.value - r.source_small.value / a4 + lower_budget;
    r.upper_slack = a4 * r.source_large.value - r.target.value + upper_budget;
    r.lower_holds = r.lower_slack >= 0.0;
    r.upper_holds = r.upper_slack >= 0.0;
    r.truncated = r.source_small.boundary_truncated || r.target.boundary_truncated || r.source_large.boundary_truncated;
    return r;
}

MatchResult helicoid_match_point(const MeshedSurface& piece, const std::vector<int>& boundary_set,
                                 double target_axis_distance) {
    if (boundary_set.empty()) throw GeometryError(ErrorCode::InvalidArgument, "boundary set is empty");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int v : boundary_set) {
        const double d = axis_distance(piece, v);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    const double tol = 1e-12 * std::max(1.0, hi);
    if (target_axis_distance < lo - tol || target_axis_distance > hi + tol)
        throw GeometryError(ErrorCode::TargetOutOfRange, "target axis distance " + std::to_string(target_axis_distance) +
                                                             " outside [" + std::to_string(lo) + ", " +
                                                             std::to_string(hi) + "]");
    MatchResult best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int v : boundary_set) {
        const double d = axis_distance(piece, v);
        const double res = std::abs(d - target_axis_distance);
        if (res < best.residual) best = {v, d, res};
    }
    return best;
}

} // namespace helidens
