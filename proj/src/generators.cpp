#include "helidens/generators.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <Eigen/Core>

#include "helidens/error.hpp"

namespace helidens {

namespace {

constexpr double kPi = std::numbers::pi;

// One row of a row-structured grid: vertex ids ordered by increasing u.
struct Row {
    std::vector<int> ids;
    std::vector<double> us;
};

// Triangulates the strip between two consecutive rows (lower has smaller v).
// Faces are counter-clockwise in the (u, v) parameter plane.
void zip_rows(const Row& lower, const Row& upper, std::vector<Face>& faces) {
    std::size_t i = 0, k = 0;
    const std::size_t m = lower.ids.size() - 1;
    const std::size_t n = upper.ids.size() - 1;
    while (i < m || k < n) {
        const bool advance_lower = (k == n) || (i < m && lower.us[i + 1] <= upper.us[k + 1]);
        if (advance_lower) {
            faces.push_back({lower.ids[i], lower.ids[i + 1], upper.ids[k]});
            ++i;
        } else {
            faces.push_back({lower.ids[i], upper.ids[k + 1], upper.ids[k]});
            ++k;
        }
    }
}

void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) throw GeometryError(code, what);
}

} // namespace

Point3 helicoid_point(double pitch, double u, double v) {
    return {u * std::cos(v), u * std::sin(v), pitch * v};
}

MeshedSurface make_plane_disk(double radius, int rings) {
    require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidArgument, "plane radius must be positive");
    require(rings >= 1, ErrorCode::InvalidArgument, "plane disk needs at least one ring");

    std::vector<Point3> vertices{{0.0, 0.0, 0.0}};
    std::vector<ParamPoint> params{{0.0, 0.0, 0}};
    std::vector<int> ring_start{0};
    for (int k = 1; k <= rings; ++k) {
        ring_start.push_back(static_cast<int>(vertices.size()));
        const double r = radius * k / rings;
        for (int m = 0; m < 6 * k; ++m) {
            const double a = 2.0 * kPi * m / (6 * k);
            vertices.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
            params.push_back({r * std::cos(a), r * std::sin(a), 0});
        }
    }

    std::vector<Face> faces;
    for (int m = 0; m < 6; ++m) faces.push_back({0, 1 + m, 1 + (m + 1) % 6});
    for (int k = 2; k <= rings; ++k) {
        const int inner_n = 6 * (k - 1), outer_n = 6 * k;
        const int inner0 = ring_start[static_cast<std::size_t>(k - 1)];
        const int outer0 = ring_start[static_cast<std::size_t>(k)];
        int i = 0, j = 0;
        while (i < inner_n || j < outer_n) {
            const double next_inner = static_cast<double>(i + 1) / inner_n;
            const double next_outer = static_cast<double>(j + 1) / outer_n;
            const int a = inner0 + i % inner_n;
            const int b = outer0 + j % outer_n;
            if (j == outer_n || (i < inner_n && next_inner <= next_outer)) {
                faces.push_back({a, b, inner0 + (i + 1) % inner_n});
                ++i;
            } else {
                faces.push_back({a, b, outer0 + (j + 1) % outer_n});
                ++j;
            }
        }
    }
    return MeshedSurface(build_mesh(std::move(vertices), std::move(params), std::move(faces)), SurfaceKind::Plane,
                         AnalyticData{AnalyticData::Model::Flat, 0.0});
}

MeshedSurface make_helicoid(const HelicoidSpec& spec) {
    require(spec.pitch > 0.0 && spec.rho_max > 0.0, ErrorCode::InvalidArgument,
            "helicoid pitch and rho_max must be positive");
    require(spec.v_range.length() > 0.0, ErrorCode::InvalidArgument, "helicoid v-range must have positive length");
    require(spec.n_u >= 2 && spec.n_v >= 8, ErrorCode::InvalidArgument, "helicoid resolution must be at least (2, 8)");
    const double dv = spec.v_range.length() / (spec.n_v - 1);
    require(dv <= kMaxAngularStep * (1.0 + 1e-12), ErrorCode::ResolutionTooCoarse,
            "angular step " + std::to_string(dv) + " exceeds pi/8");

    std::vector<Point3> vertices;
    std::vector<ParamPoint> params;
    std::vector<Face> faces;
    Row previous;
    for (int j = 0; j < spec.n_v; ++j) {
        const double v = j + 1 == spec.n_v ? spec.v_range.hi : spec.v_range.lo + j * dv;
        Row row;
        for (int i = 0; i < spec.n_u; ++i) {
            double u = -spec.rho_max + 2.0 * spec.rho_max * i / (spec.n_u - 1);
            if (2 * i + 1 == spec.n_u) u = 0.0;
            row.ids.push_back(static_cast<int>(vertices.size()));
            row.us.push_back(u);
            vertices.push_back(helicoid_point(spec.pitch, u, v));
            params.push_back({u, v, 0});
        }
        if (j > 0) zip_rows(previous, row, faces);
        previous = std::move(row);
    }
    return MeshedSurface(build_mesh(std::move(vertices), std::move(params), std::move(faces)), SurfaceKind::Helicoid,
                         AnalyticData{AnalyticData::Model::Helicoid, spec.pitch}, true);
}

HelicoidSpec refined(const HelicoidSpec& spec) {
    HelicoidSpec r = spec;
    r.n_u = 2 * spec.n_u - 1;
    r.n_v = 2 * spec.n_v - 1;
    return r;
}

namespace {

// Rough intrinsic distance on the helicoid between parameter points, either
// around at the smaller radius or through the axis.
double zone_distance(const FocusZone& z, double u, double v, double c) {
    const double dv = std::abs(v - z.v);
    const double via_axis = std::abs(u) + std::abs(z.u) + c * dv;
    if (u * z.u < 0.0) return via_axis;
    const double around = std::abs(u - z.u) + std::hypot(std::min(std::abs(u), std::abs(z.u)), c) * dv;
    return std::min(via_axis, around);
}

struct CellKey {
    int level;
    std::int64_t i, j;
    bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.level) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(k.i) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::uint64_t>(k.j) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

struct GridPointHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
        return CellKeyHash{}(CellKey{0, p.first, p.second});
    }
};

constexpr int kMaxCellLevel = 24;

// Balanced quadtree over the isothermal coordinates t = c asinh(u / c),
// w = c v of the helicoid, where the metric is cosh^2(t / c)(dt^2 + dw^2).
// Root cells have side c * max_angle_step; a cell of side d near t spans
// roughly d cosh(t / c) on the surface and is split until that fits the
// sizing target.
class BallQuadtree {
public:
    explicit BallQuadtree(const HelicoidBallSpec& spec)
        : spec_(spec), c_(spec.pitch), delta0_(spec.pitch * spec.max_angle_step), r2_(spec.radius * spec.radius) {}

    MeshedSurface build() {
        const double t_max = c_ * std::asinh(spec_.radius / c_);
        const auto nt = static_cast<std::int64_t>(std::ceil(t_max / delta0_));
        const auto nw = static_cast<std::int64_t>(std::ceil(spec_.radius / delta0_));
        std::vector<CellKey> stack;
        for (std::int64_t j = -nw; j < nw; ++j)
            for (std::int64_t i = -nt; i < nt; ++i)
                if (meets_domain({0, i, j})) stack.push_back({0, i, j});
        while (!stack.empty()) {
            const CellKey k = stack.back();
            stack.pop_back();
            if (k.level < kMaxCellLevel && surface_size(k) > target(k)) {
                for (const CellKey& ch : children(k))
                    if (meets_domain(ch)) stack.push_back(ch);
            } else {
                leaves_.insert(k);
            }
        }
        balance();
        return emit();
    }

private:
    double side(int level) const { return std::ldexp(delta0_, -level); }
    double t0(const CellKey& k) const { return static_cast<double>(k.i) * side(k.level); }
    double w0(const CellKey& k) const { return static_cast<double>(k.j) * side(k.level); }

    double ball_value(double t, double w) const {
        const double u = c_ * std::sinh(t / c_);
        return u * u + w * w;
    }

    bool meets_domain(const CellKey& k) const {
        const double d = side(k.level);
        const double t = std::clamp(0.0, t0(k), t0(k) + d), w = std::clamp(0.0, w0(k), w0(k) + d);
        return ball_value(t, w) <= r2_;
    }

    bool inside(const CellKey& k) const {
        const double d = side(k.level);
        for (double t : {t0(k), t0(k) + d})
            for (double w : {w0(k), w0(k) + d})
                if (ball_value(t, w) > r2_ * (1.0 + 1e-12)) return false;
        return true;
    }

    double surface_size(const CellKey& k) const {
        const double d = side(k.level);
        return d * std::cosh(std::max(std::abs(t0(k)), std::abs(t0(k) + d)) / c_);
    }

    double sizing(double t, double w) const {
        const double u = c_ * std::sinh(t / c_), v = w / c_;
        double dist = spec_.zones.empty() ? 0.0 : std::numeric_limits<double>::infinity();
        for (const auto& z : spec_.zones) dist = std::min(dist, std::max(0.0, zone_distance(z, u, v, c_) - z.radius));
        return std::min(spec_.h_coarse, spec_.h_fine + spec_.grading * dist);
    }

    double target(const CellKey& k) const {
        const double d = side(k.level);
        double h = sizing(t0(k) + 0.5 * d, w0(k) + 0.5 * d);
        for (double t : {t0(k), t0(k) + d})
            for (double w : {w0(k), w0(k) + d}) h = std::min(h, sizing(t, w));
        return h;
    }

    static std::array<CellKey, 4> children(const CellKey& k) {
        const int l = k.level + 1;
        return {CellKey{l, 2 * k.i, 2 * k.j}, CellKey{l, 2 * k.i + 1, 2 * k.j}, CellKey{l, 2 * k.i, 2 * k.j + 1},
                CellKey{l, 2 * k.i + 1, 2 * k.j + 1}};
    }

    // Leaf covering cell position (i, j) at the given level, if the region is
    // not subdivided further.
    const CellKey* covering_leaf(int level, std::int64_t i, std::int64_t j) const {
        for (int l = level; l >= 0; --l) {
            const auto it = leaves_.find(CellKey{l, i >> (level - l), j >> (level - l)});
            if (it != leaves_.end()) return &*it;
        }
        return nullptr;
    }

    // 2:1 balance across cell sides.
    void balance() {
        std::vector<CellKey> work(leaves_.begin(), leaves_.end());
        while (!work.empty()) {
            const CellKey k = work.back();
            work.pop_back();
            if (k.level < 2 || !leaves_.count(k)) continue;
            for (const auto& [di, dj] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
                const CellKey* n = covering_leaf(k.level, k.i + di, k.j + dj);
                if (n == nullptr || n->level >= k.level - 1) continue;
                const CellKey coarse = *n;
                leaves_.erase(coarse);
                for (const CellKey& ch : children(coarse)) {
                    if (!meets_domain(ch)) continue;
                    leaves_.insert(ch);
                    work.push_back(ch);
                }
                work.push_back(k);
                break;
            }
        }
    }

    MeshedSurface emit() {
        std::vector<CellKey> kept;
        int finest = 0;
        for (const CellKey& k : leaves_) {
            if (!inside(k)) continue;
            kept.push_back(k);
            finest = std::max(finest, k.level);
        }
        require(!kept.empty(), ErrorCode::InvalidArgument, "helicoid ball sizing produced no cells");
        const int grid = finest + 1;
        auto scaled_corner = [&](const CellKey& k, std::int64_t di, std::int64_t dj) {
            return std::pair{(k.i + di) << (grid - k.level), (k.j + dj) << (grid - k.level)};
        };
        std::sort(kept.begin(), kept.end(), [&](const CellKey& a, const CellKey& b) {
            const auto pa = scaled_corner(a, 0, 0), pb = scaled_corner(b, 0, 0);
            return std::tie(pa.second, pa.first, a.level) < std::tie(pb.second, pb.first, b.level);
        });

        const double unit = std::ldexp(delta0_, -grid);
        std::vector<Point3> vertices;
        std::vector<ParamPoint> params;
        std::unordered_map<std::pair<std::int64_t, std::int64_t>, int, GridPointHash> index;
        auto vertex = [&](const std::pair<std::int64_t, std::int64_t>& g) {
            const auto [it, fresh] = index.try_emplace(g, static_cast<int>(vertices.size()));
            if (fresh) {
                const double u = c_ * std::sinh(static_cast<double>(g.first) * unit / c_);
                const double v = static_cast<double>(g.second) * unit / c_;
                vertices.push_back(helicoid_point(c_, u, v));
                params.push_back({u, v, 0});
            }
            return it->second;
        };
        for (const CellKey& k : kept)
            for (const auto& [di, dj] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{1, 1}, std::pair{0, 1}})
                vertex(scaled_corner(k, di, dj));

        std::vector<Face> faces;
        for (const CellKey& k : kept) {
            const std::int64_t s = std::int64_t{1} << (grid - k.level);
            const auto [x0, y0] = scaled_corner(k, 0, 0);
            const std::int64_t h = s / 2;
            // Perimeter in counter-clockwise order, with hanging side midpoints.
            const std::array<std::pair<std::int64_t, std::int64_t>, 8> ring{
                std::pair{x0, y0},         std::pair{x0 + h, y0},     std::pair{x0 + s, y0},
                std::pair{x0 + s, y0 + h}, std::pair{x0 + s, y0 + s}, std::pair{x0 + h, y0 + s},
                std::pair{x0, y0 + s},     std::pair{x0, y0 + h}};
            std::vector<int> nodes;
            for (std::size_t m = 0; m < ring.size(); ++m) {
                if (m % 2 == 0) {
                    nodes.push_back(index.at(ring[m]));
                } else if (const auto it = index.find(ring[m]); it != index.end()) {
                    nodes.push_back(it->second);
                }
            }
            if (nodes.size() == 4) {
                faces.push_back({nodes[0], nodes[1], nodes[2]});
                faces.push_back({nodes[0], nodes[2], nodes[3]});
                continue;
            }
            const int center = vertex({x0 + h, y0 + h});
            for (std::size_t m = 0; m < nodes.size(); ++m) faces.push_back({center, nodes[m], nodes[(m + 1) % nodes.size()]});
        }
        return MeshedSurface(build_mesh(std::move(vertices), std::move(params), std::move(faces)),
                             SurfaceKind::Helicoid, AnalyticData{AnalyticData::Model::Helicoid, c_}, true);
    }

    const HelicoidBallSpec& spec_;
    double c_;
    double delta0_;
    double r2_;
    std::unordered_set<CellKey, CellKeyHash> leaves_;
};

} // namespace

MeshedSurface make_helicoid_ball(const HelicoidBallSpec& spec) {
    require(spec.pitch > 0.0 && spec.radius > 0.0, ErrorCode::InvalidArgument,
            "helicoid ball pitch and radius must be positive");
    require(spec.h_fine > 0.0 && spec.h_coarse >= spec.h_fine && spec.grading >= 0.0, ErrorCode::InvalidArgument,
            "helicoid ball sizing must satisfy 0 < h_fine <= h_coarse and grading >= 0");
    require(spec.max_angle_step > 0.0 && spec.max_angle_step <= kMaxAngularStep * (1.0 + 1e-12),
            ErrorCode::ResolutionTooCoarse, "angular step cap exceeds pi/8");
    return BallQuadtree(spec).build();
}

HelicoidBallSpec refined(const HelicoidBallSpec& spec) {
    HelicoidBallSpec r = spec;
    r.h_fine *= 0.5;
    r.h_coarse *= 0.5;
    r.grading *= 0.5;
    r.max_angle_step *= 0.5;
    return r;
}

MeshedSurface extract_annular_multigraph(const MeshedSurface& helicoid, double rho_min, double rho_max,
                                         double turns) {
    require(helicoid.is_helicoidal() && helicoid.analytic().has_value(), ErrorCode::InvalidArgument,
            "parent must be a helicoid with analytic metadata");
    const TriMesh& m = helicoid.mesh();
    double u_max = 0.0, v_lo = std::numeric_limits<double>::infinity(), v_hi = -v_lo;
    for (const ParamPoint& p : m.params()) {
        u_max = std::max(u_max, p.u);
        v_lo = std::min(v_lo, p.v);
        v_hi = std::max(v_hi, p.v);
    }
    const double tol = 1e-9 * std::max({1.0, u_max, v_hi - v_lo});
    require(rho_min > 0.0, ErrorCode::RangeOutsideParent, "rho_min must be positive (the axis is excluded)");
    require(rho_min < rho_max, ErrorCode::RangeOutsideParent, "rho_min must be below rho_max");
    require(rho_max <= u_max + tol, ErrorCode::RangeOutsideParent,
            "rho_max " + std::to_string(rho_max) + " exceeds parent range " + std::to_string(u_max));
    require(turns > 0.0 && 2.0 * kPi * turns <= (v_hi - v_lo) + tol, ErrorCode::RangeOutsideParent,
            "requested turns do not fit inside the parent v-range");

    const double v_mid = 0.5 * (v_lo + v_hi);
    const double half = kPi * turns;
    std::vector<int> remap(m.num_vertices(), -1);
    std::vector<Point3> vertices;
    std::vector<ParamPoint> params;
    for (int i = 0; i < static_cast<int>(m.num_vertices()); ++i) {
        const ParamPoint& p = m.param(i);
        if (p.u >= rho_min - tol && p.u <= rho_max + tol && std::abs(p.v - v_mid) <= half + tol) {
            remap[static_cast<std::size_t>(i)] = static_cast<int>(vertices.size());
            vertices.push_back(m.vertex(i));
            params.push_back(p);
        }
    }
    std::vector<Face> faces;
    for (const Face& f : m.faces()) {
        const Face g{remap[static_cast<std::size_t>(f[0])], remap[static_cast<std::size_t>(f[1])],
                     remap[static_cast<std::size_t>(f[2])]};
        if (g[0] >= 0 && g[1] >= 0 && g[2] >= 0) faces.push_back(g);
    }
    require(!faces.empty(), ErrorCode::RangeOutsideParent, "requested band contains no parent faces");
    // Drop vertices no face uses (isolated grid points on the band edge).
    std::vector<int> used(vertices.size(), -1);
    std::vector<Point3> kept_v;
    std::vector<ParamPoint> kept_p;
    for (Face& f : faces) {
        for (int& c : f) {
            auto& slot = used[static_cast<std::size_t>(c)];
            if (slot < 0) {
                slot = static_cast<int>(kept_v.size());
                kept_v.push_back(vertices[static_cast<std::size_t>(c)]);
                kept_p.push_back(params[static_cast<std::size_t>(c)]);
            }
            c = slot;
        }
    }
    return MeshedSurface(build_mesh(std::move(kept_v), std::move(kept_p), std::move(faces)),
                         SurfaceKind::MultigraphAnnulus, helicoid.analytic(), true);
}

namespace {

using Vec3c = Eigen::Matrix<std::complex<double>, 3, 1>;

constexpr std::array<double, 5> kGl5Nodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                          0.9061798459386640};
constexpr std::array<double, 5> kGl5Weights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                            0.2369268850561891, 0.2369268850561891};
constexpr std::array<double, 3> kGl3Nodes{0.0, -0.7745966692414834, 0.7745966692414834};
constexpr std::array<double, 3> kGl3Weights{0.8888888888888888, 0.5555555555555556, 0.5555555555555556};

class WeierstrassIntegrand {
public:
    explicit WeierstrassIntegrand(const WeierstrassSpec& spec) : spec_(spec) {}

    Vec3c operator()(std::complex<double> z) const {
        const std::complex<double> g = spec_.gauss_map(z);
        const std::complex<double> f = spec_.height_differential(z);
        auto where = [&] { return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")"; };
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || std::abs(g) < 1e-12)
            throw GeometryError(ErrorCode::SingularIntegrand, "Gauss map vanishes or is not finite at " + where());
        Vec3c phi;
        phi << 0.5 * (1.0 / g - g) * f, std::complex<double>(0.0, 0.5) * (1.0 / g + g) * f, f;
        if (!phi.allFinite()) throw GeometryError(ErrorCode::SingularIntegrand, "integrand not finite at " + where());
        return phi;
    }

    struct Segment {
        Vec3c value;
        double error = 0.0;
    };

    Segment segment(std::complex<double> a, std::complex<double> b) const {
        const std::complex<double> mid = 0.5 * (a + b), half = 0.5 * (b - a);
        Vec3c q5 = Vec3c::Zero(), q3 = Vec3c::Zero();
        for (std::size_t k = 0; k < kGl5Nodes.size(); ++k) q5 += kGl5Weights[k] * (*this)(mid + half * kGl5Nodes[k]);
        for (std::size_t k = 0; k < kGl3Nodes.size(); ++k) q3 += kGl3Weights[k] * (*this)(mid + half * kGl3Nodes[k]);
        return {half * q5, std::abs(half) * (q5 - q3).norm()};
    }

private:
    const WeierstrassSpec& spec_;
};

} // namespace

WeierstrassResult weierstrass_evaluate(const WeierstrassSpec& spec) {
    require(static_cast<bool>(spec.gauss_map) && static_cast<bool>(spec.height_differential),
            ErrorCode::InvalidArgument, "Weierstrass data needs g and dh");
    require(spec.re1 > spec.re0 && spec.im1 > spec.im0, ErrorCode::InvalidArgument, "empty Weierstrass domain");
    require(spec.n_re >= 2 && spec.n_im >= 2, ErrorCode::InvalidArgument, "Weierstrass grid needs 2x2 nodes");

    const int nx = spec.n_re, ny = spec.n_im;
    const double hx = (spec.re1 - spec.re0) / (nx - 1), hy = (spec.im1 - spec.im0) / (ny - 1);
    auto node = [&](int i, int j) { return std::complex<double>(spec.re0 + i * hx, spec.im0 + j * hy); };
    const WeierstrassIntegrand phi(spec);
    // The integrand must be finite on the grid nodes as well, not only at the
    // quadrature points between them.
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) phi(node(i, j));

    // Prefix sums along rows (real direction) and columns (imaginary direction)
    // of the segment integrals, their error estimates and absolute sizes.
    const auto nxs = static_cast<std::size_t>(nx), nys = static_cast<std::size_t>(ny);
    std::vector<Vec3c> row_sum(nxs * nys, Vec3c::Zero()), col_sum(nxs * nys, Vec3c::Zero());
    std::vector<double> row_err(nxs * nys, 0.0), col_err(nxs * nys, 0.0);
    std::vector<double> row_abs(nxs * nys, 0.0), col_abs(nxs * nys, 0.0);
    auto at = [&](int i, int j) { return static_cast<std::size_t>(j) * nxs + static_cast<std::size_t>(i); };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const auto s = phi.segment(node(i, j), node(i + 1, j));
            row_sum[at(i + 1, j)] = row_sum[at(i, j)] + s.value;
            row_err[at(i + 1, j)] = row_err[at(i, j)] + s.error;
            row_abs[at(i + 1, j)] = row_abs[at(i, j)] + s.value.norm();
        }
    }
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j + 1 < ny; ++j) {
            const auto s = phi.segment(node(i, j), node(i, j + 1));
            col_sum[at(i, j + 1)] = col_sum[at(i, j)] + s.value;
            col_err[at(i, j + 1)] = col_err[at(i, j)] + s.error;
            col_abs[at(i, j + 1)] = col_abs[at(i, j)] + s.value.norm();
        }
    }

    const int i0 = std::clamp(static_cast<int>(std::lround((spec.basepoint.real() - spec.re0) / hx)), 0, nx - 1);
    const int j0 = std::clamp(static_cast<int>(std::lround((spec.basepoint.imag() - spec.im0) / hy)), 0, ny - 1);

    // Straight-segment correction from the base node to the true basepoint.
    Vec3c offset = Vec3c::Zero();
    if (std::abs(spec.basepoint - node(i0, j0)) > 0.0) {
        constexpr int pieces = 16;
        const std::complex<double> a = node(i0, j0), step = (spec.basepoint - a) / static_cast<double>(pieces);
        for (int k = 0; k < pieces; ++k) offset += phi.segment(a + step * static_cast<double>(k), a + step * (k + 1.0)).value;
    }

    WeierstrassDiagnostics diag;
    std::vector<Point3> vertices;
    std::vector<ParamPoint> params;
    vertices.reserve(nxs * nys);
    params.reserve(nxs * nys);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Vec3c row_first = (row_sum[at(i, j0)] - row_sum[at(i0, j0)]) + (col_sum[at(i, j)] - col_sum[at(i, j0)]);
            const Vec3c col_first = (col_sum[at(i0, j)] - col_sum[at(i0, j0)]) + (row_sum[at(i, j)] - row_sum[at(i0, j)]);
            const double err = std::abs(row_err[at(i, j0)] - row_err[at(i0, j0)]) +
                               std::abs(col_err[at(i, j)] - col_err[at(i, j0)]) +
                               std::abs(col_err[at(i0, j)] - col_err[at(i0, j0)]) +
                               std::abs(row_err[at(i, j)] - row_err[at(i0, j)]);
            const double size = row_abs[at(i, j0)] + row_abs[at(i0, j0)] + col_abs[at(i, j)] + col_abs[at(i, j0)] +
                                col_abs[at(i0, j)] + col_abs[at(i0, j0)] + row_abs[at(i, j)] + row_abs[at(i0, j)];
            const Point3 xa = (row_first - offset).real();
            const Point3 xb = (col_first - offset).real();
            diag.path_discrepancy = std::max(diag.path_discrepancy, (xa - xb).norm());
            diag.quadrature_tolerance = std::max(diag.quadrature_tolerance, err + 64.0 * eps * size);
            vertices.push_back(xa);
            params.push_back({node(i, j).real(), node(i, j).imag(), 0});
        }
    }
    if (diag.path_discrepancy > 10.0 * diag.quadrature_tolerance) {
        throw GeometryError(ErrorCode::PathDependenceDetected,
                            "staircase paths disagree by " + std::to_string(diag.path_discrepancy) +
                                " (tolerance " + std::to_string(diag.quadrature_tolerance) + ")");
    }

    std::vector<Face> faces;
    Row previous;
    for (int j = 0; j < ny; ++j) {
        Row row;
        for (int i = 0; i < nx; ++i) {
            row.ids.push_back(static_cast<int>(at(i, j)));
            row.us.push_back(node(i, j).real());
        }
        if (j > 0) zip_rows(previous, row, faces);
        previous = std::move(row);
    }
    return {MeshedSurface(build_mesh(std::move(vertices), std::move(params), std::move(faces)), SurfaceKind::Weierstrass),
            diag};
}

WeierstrassSpec weierstrass_preset(std::string_view name, int n_re, int n_im) {
    WeierstrassSpec spec;
    spec.n_re = n_re;
    spec.n_im = n_im;
    if (name == "ez" || name == "ez-conjugate") {
        spec.gauss_map = [](std::complex<double> z) { return std::exp(z); };
        if (name == "ez") spec.height_differential = [](std::complex<double>) { return std::complex<double>(1.0, 0.0); };
        else spec.height_differential = [](std::complex<double>) { return std::complex<double>(0.0, 1.0); };
        spec.re0 = -1.0;
        spec.re1 = 1.0;
        spec.im0 = -kPi;
        spec.im1 = kPi;
        return spec;
    }
    throw GeometryError(ErrorCode::InvalidArgument, "unknown Weierstrass preset '" + std::string(name) + "'");
}

} // namespace helidens
