#pragma once

#include <limits>
#include <memory>
#include <string_view>
#include <vector>

#include "helidens/mesh.hpp"

namespace helidens {

enum class GeodesicMethod {
    // Dijkstra on the edge graph of the once midpoint-subdivided mesh.
    EdgeDijkstra,
    // Dijkstra over vertices plus evenly spaced Steiner points on every edge,
    // with straight segments between any two points of a common face.
    RefinedDijkstra,
};

std::string_view to_string(GeodesicMethod method);

inline constexpr int kDefaultSteinerPoints = 5;

// Worst observed ratio (graph distance / true distance) on the calibration
// plane, per method. See tests/test_geodesic.cpp.
inline constexpr double kEdgeDijkstraBias = 1.13;
inline constexpr double kRefinedDijkstraBias = 1.01;

struct GeodesicOptions {
    GeodesicMethod method = GeodesicMethod::RefinedDijkstra;
    int steiner_points = kDefaultSteinerPoints; // odd; only for RefinedDijkstra
    // Nodes farther than this are left at +infinity.
    double cutoff = std::numeric_limits<double>::infinity();
};

struct DistanceField {
    std::vector<int> sources;
    std::vector<double> dist;     // per vertex
    std::vector<double> edge_mid; // per edge, at the edge midpoint
    GeodesicMethod method = GeodesicMethod::RefinedDijkstra;
    double upper_bias_bound = 1.0;
    double cutoff = std::numeric_limits<double>::infinity();

    int source() const { return sources.front(); }
    bool reached(int v) const { return dist[static_cast<std::size_t>(v)] < std::numeric_limits<double>::infinity(); }
};

// Dijkstra state that can be advanced to growing cutoffs.
class GeodesicSolver {
public:
    GeodesicSolver(const TriMesh& mesh, const std::vector<int>& sources, const GeodesicOptions& options = {});
    ~GeodesicSolver();
    GeodesicSolver(GeodesicSolver&&) noexcept;

    // Settles every node within the cutoff.
    void advance(double cutoff);
    // Snapshot; nodes beyond the current cutoff read +infinity.
    DistanceField field() const;

private:
    struct State;
    const TriMesh* mesh_;
    std::vector<int> sources_;
    GeodesicOptions options_;
    double reached_ = 0.0;
    std::unique_ptr<State> state_;
};

// Distance to the nearest source. Without a cutoff, throws DisconnectedMesh
// when some vertex is unreachable.
DistanceField geodesic_distance_field(const TriMesh& mesh, const std::vector<int>& sources,
                                      const GeodesicOptions& options = {});

inline DistanceField geodesic_distance_field(const MeshedSurface& surface, int source,
                                             const GeodesicOptions& options = {}) {
    return geodesic_distance_field(surface.mesh(), std::vector<int>{source}, options);
}

} // namespace helidens
