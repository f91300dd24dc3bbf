#include "helidens/geodesic.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "helidens/error.hpp"

namespace helidens {

std::string_view to_string(GeodesicMethod method) {
    switch (method) {
    case GeodesicMethod::EdgeDijkstra: return "edge-dijkstra";
    case GeodesicMethod::RefinedDijkstra: return "refined-dijkstra";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Monotone priority queue (radix heap). Nonnegative doubles order like their
// bit patterns, so keys are the raw bits.
class RadixHeap {
public:
    bool empty() const { return size_ == 0; }

    void push(double key, int value) {
        const std::uint64_t bits = std::bit_cast<std::uint64_t>(key);
        buckets_[bucket(bits)].push_back({bits, value});
        ++size_;
    }

    std::pair<double, int> pop() {
        if (buckets_[0].empty()) {
            std::size_t b = 1;
            while (buckets_[b].empty()) ++b;
            std::uint64_t lo = buckets_[b].front().first;
            for (const auto& item : buckets_[b]) lo = std::min(lo, item.first);
            last_ = lo;
            for (const auto& item : buckets_[b]) buckets_[bucket(item.first)].push_back(item);
            buckets_[b].clear();
        }
        const auto item = buckets_[0].back();
        buckets_[0].pop_back();
        --size_;
        return {std::bit_cast<double>(item.first), item.second};
    }

private:
    std::size_t bucket(std::uint64_t bits) const {
        return bits == last_ ? 0 : 64 - static_cast<std::size_t>(std::countl_zero(bits ^ last_));
    }

    std::array<std::vector<std::pair<std::uint64_t, int>>, 65> buckets_;
    std::uint64_t last_ = 0;
    std::size_t size_ = 0;
};

class SteinerGraph {
public:
    SteinerGraph(const TriMesh& mesh, GeodesicMethod method, int k)
        : mesh_(mesh), method_(method), k_(k), nv_(static_cast<int>(mesh.num_vertices())),
          per_face_(3 + 3 * k) {
        positions_.reserve(size());
        positions_.insert(positions_.end(), mesh.vertices().begin(), mesh.vertices().end());
        for (const Edge& ed : mesh.edges()) {
            for (int j = 0; j < k_; ++j) {
                const double t = static_cast<double>(j + 1) / (k_ + 1);
                positions_.push_back((1.0 - t) * mesh.vertex(ed[0]) + t * mesh.vertex(ed[1]));
            }
        }
        face_nodes_.resize(mesh.num_faces() * static_cast<std::size_t>(per_face_));
        for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
            int* out = &face_nodes_[static_cast<std::size_t>(f) * static_cast<std::size_t>(per_face_)];
            const Face& fc = mesh.face(f);
            const auto& fe = mesh.face_edges(f);
            for (int i = 0; i < 3; ++i) *out++ = fc[static_cast<std::size_t>(i)];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < k_; ++j) *out++ = steiner(fe[static_cast<std::size_t>(i)], j);
        }
    }

    std::size_t size() const { return static_cast<std::size_t>(nv_) + mesh_.num_edges() * static_cast<std::size_t>(k_); }

    int steiner(int edge, int j) const { return nv_ + edge * k_ + j; }
    int midpoint(int edge) const { return steiner(edge, (k_ - 1) / 2); }

    template <class Visit>
    void for_each_neighbor(int node, Visit&& visit) const {
        if (node < nv_) {
            for (int f : mesh_.vertex_faces(node)) visit_face(node, f, visit);
        } else {
            for (int f : mesh_.edge_faces((node - nv_) / k_))
                if (f >= 0) visit_face(node, f, visit);
        }
    }

private:
    // Edge graph of the subdivided face (k = 1): corner i touches the
    // midpoints of face edges i and i + 2; the three midpoints form the inner
    // triangle.
    static bool subdivided_adjacent(int a, int b) {
        if (a > b) std::swap(a, b);
        if (b < 3) return false;
        if (a >= 3) return true;
        const int edge = b - 3;
        return edge == a || edge == (a + 2) % 3;
    }

    template <class Visit>
    void visit_face(int node, int f, Visit& visit) const {
        const int* nodes = &face_nodes_[static_cast<std::size_t>(f) * static_cast<std::size_t>(per_face_)];
        const Point3& p = positions_[static_cast<std::size_t>(node)];
        if (method_ == GeodesicMethod::EdgeDijkstra) {
            int self = 0;
            while (nodes[self] != node) ++self;
            for (int slot = 0; slot < per_face_; ++slot)
                if (slot != self && subdivided_adjacent(self, slot))
                    visit(nodes[slot], (positions_[static_cast<std::size_t>(nodes[slot])] - p).norm());
            return;
        }
        for (int slot = 0; slot < per_face_; ++slot) {
            const int other = nodes[slot];
            if (other != node) visit(other, (positions_[static_cast<std::size_t>(other)] - p).norm());
        }
    }

    const TriMesh& mesh_;
    GeodesicMethod method_;
    int k_;
    int nv_;
    int per_face_;
    std::vector<Point3> positions_;
    std::vector<int> face_nodes_;
};

} // namespace

struct GeodesicSolver::State {
    State(const TriMesh& m, GeodesicMethod method, int k) : graph(m, method, k) {}
    SteinerGraph graph;
    std::vector<double> dist;
    std::vector<std::uint8_t> settled;
    RadixHeap queue;
    std::optional<std::pair<double, int>> held; // popped beyond the last cutoff
};

GeodesicSolver::GeodesicSolver(const TriMesh& mesh, const std::vector<int>& sources, const GeodesicOptions& options)
    : mesh_(&mesh), sources_(sources), options_(options) {
    if (sources.empty()) throw GeometryError(ErrorCode::InvalidArgument, "distance field needs a source");
    for (int s : sources)
        if (s < 0 || s >= static_cast<int>(mesh.num_vertices()))
            throw GeometryError(ErrorCode::InvalidArgument, "source vertex " + std::to_string(s) + " out of range");
    int k = 1;
    if (options.method == GeodesicMethod::RefinedDijkstra) {
        k = options.steiner_points;
        if (k < 1 || k % 2 == 0)
            throw GeometryError(ErrorCode::InvalidArgument, "Steiner point count must be odd and positive");
    }
    state_ = std::make_unique<State>(mesh, options.method, k);
    state_->dist.assign(state_->graph.size(), kInf);
    state_->settled.assign(state_->graph.size(), 0);
    for (int s : sources) {
        state_->dist[static_cast<std::size_t>(s)] = 0.0;
        state_->queue.push(0.0, s);
    }
}

GeodesicSolver::~GeodesicSolver() = default;
GeodesicSolver::GeodesicSolver(GeodesicSolver&&) noexcept = default;

void GeodesicSolver::advance(double cutoff) {
    State& st = *state_;
    if (st.held) {
        st.queue.push(st.held->first, st.held->second);
        st.held.reset();
    }
    while (!st.queue.empty()) {
        const auto [d, n] = st.queue.pop();
        if (d > cutoff) {
            st.held = std::pair{d, n};
            break;
        }
        auto& done = st.settled[static_cast<std::size_t>(n)];
        if (done) continue;
        done = 1;
        st.graph.for_each_neighbor(n, [&](int m, double w) {
            if (st.settled[static_cast<std::size_t>(m)]) return;
            const double nd = d + w;
            double& slot = st.dist[static_cast<std::size_t>(m)];
            if (nd < slot) {
                slot = nd;
                st.queue.push(nd, m);
            }
        });
    }
    reached_ = std::max(reached_, cutoff);
}

DistanceField GeodesicSolver::field() const {
    const State& st = *state_;
    const TriMesh& mesh = *mesh_;
    auto value = [&](std::size_t node) { return st.settled[node] ? st.dist[node] : kInf; };
    DistanceField field;
    field.sources = sources_;
    field.method = options_.method;
    field.upper_bias_bound =
        options_.method == GeodesicMethod::RefinedDijkstra ? kRefinedDijkstraBias : kEdgeDijkstraBias;
    field.cutoff = reached_;
    field.dist.resize(mesh.num_vertices());
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) field.dist[v] = value(v);
    field.edge_mid.resize(mesh.num_edges());
    for (std::size_t e = 0; e < mesh.num_edges(); ++e)
        field.edge_mid[e] = value(static_cast<std::size_t>(st.graph.midpoint(static_cast<int>(e))));
    return field;
}

DistanceField geodesic_distance_field(const TriMesh& mesh, const std::vector<int>& sources,
                                      const GeodesicOptions& options) {
    GeodesicSolver solver(mesh, sources, options);
    solver.advance(options.cutoff);
    DistanceField field = solver.field();
    if (std::isinf(options.cutoff)) {
        for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
            if (std::isinf(field.dist[v]))
                throw GeometryError(ErrorCode::DisconnectedMesh,
                                    "vertex " + std::to_string(v) + " is unreachable from the source");
    }
    return field;
}

} // namespace helidens
