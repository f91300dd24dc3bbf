#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <string_view>
#include <vector>

#include "helidens/mesh.hpp"

namespace helidens {

inline constexpr int kDefaultPlaneRings = 48;
inline constexpr double kMaxAngularStep = std::numbers::pi / 8.0;

// Flat disk in the x3 = 0 plane, triangulated by `rings` concentric rings
// (ring k carries 6k vertices). Parameters are (x, y).
MeshedSurface make_plane_disk(double radius, int rings = kDefaultPlaneRings);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

// Helicoid X(u, v) = (u cos v, u sin v, c v) sampled on a uniform grid over
// [-rho_max, rho_max] x v_range. An odd n_u puts the axis u = 0 on the grid.
struct HelicoidSpec {
    double pitch = 1.0;
    double rho_max = 1.0;
    Interval v_range{-std::numbers::pi, std::numbers::pi};
    int n_u = 21;
    int n_v = 41;
};

Point3 helicoid_point(double pitch, double u, double v);

// Throws ResolutionTooCoarse when the angular step exceeds pi/8.
MeshedSurface make_helicoid(const HelicoidSpec& spec);

// Halves both grid steps.
HelicoidSpec refined(const HelicoidSpec& spec);

// Region around a parameter point that the graded generator resolves at the
// fine edge length.
struct FocusZone {
    double u = 0.0;
    double v = 0.0;
    double radius = 0.0; // approximate intrinsic radius
};

// Helicoid piece cut by the ball B_R(0): the parameter region
// u^2 + c^2 v^2 <= R^2. Meshed by a balanced quadtree in the isothermal
// coordinates t = c asinh(u / c), w = c v, where the metric is conformal, so
// square cells give well-shaped triangles. Cells split until their ambient
// size drops below the local target: h_fine inside the focus zones, growing
// at rate `grading` with distance from them, capped by h_coarse. The root
// cell side is c * max_angle_step. The origin is a vertex.
struct HelicoidBallSpec {
    double pitch = 1.0;
    double radius = 10.0;
    double h_fine = 0.25;
    double h_coarse = 4.0;   // cap on steps along the rulings
    double grading = 0.25;   // edge-length growth per unit distance from the zones
    double max_angle_step = kMaxAngularStep;
    std::vector<FocusZone> zones{{0.0, 0.0, 1.0}};
};

MeshedSurface make_helicoid_ball(const HelicoidBallSpec& spec);

// Halves every length scale of the sizing (h_fine, h_coarse, grading and the
// angular cap), roughly halving all edges.
HelicoidBallSpec refined(const HelicoidBallSpec& spec);

// Sub-mesh of a helicoid with u in [rho_min, rho_max] (positive side) and v
// spanning `turns` rotations centered in the parent's v-range. The piece is a
// multi-valued graph over an annulus; as a mesh it is a disk.
// Throws RangeOutsideParent.
MeshedSurface extract_annular_multigraph(const MeshedSurface& helicoid, double rho_min, double rho_max,
                                         double turns);

using ComplexFunction = std::function<std::complex<double>(std::complex<double>)>;

// Weierstrass data on a rectangle of the complex plane. The height
// differential is dh = height_differential(z) dz.
struct WeierstrassSpec {
    ComplexFunction gauss_map;
    ComplexFunction height_differential;
    double re0 = -1.0, re1 = 1.0, im0 = -1.0, im1 = 1.0;
    std::complex<double> basepoint{0.0, 0.0};
    int n_re = 65;
    int n_im = 65;
};

struct WeierstrassDiagnostics {
    double path_discrepancy = 0.0;     // max over nodes of |X_rowfirst - X_columnfirst|
    double quadrature_tolerance = 0.0; // accumulated per-segment error estimate
};

struct WeierstrassResult {
    MeshedSurface surface;
    WeierstrassDiagnostics diagnostics;
};

// X(z) = Re int_{z0}^{z} (1/2 (1/g - g), i/2 (1/g + g), 1) dh along two
// grid-aligned staircase paths (row first and column first), with 5-point
// Gauss-Legendre quadrature on every grid segment. Throws SingularIntegrand,
// PathDependenceDetected or DegenerateFace.
WeierstrassResult weierstrass_evaluate(const WeierstrassSpec& spec);

// Named data sets. "ez": g = e^z, dh = dz on [-1, 1] x [-pi, pi].
WeierstrassSpec weierstrass_preset(std::string_view name, int n_re = 65, int n_im = 65);

} // namespace helidens
