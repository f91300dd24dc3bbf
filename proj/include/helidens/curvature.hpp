#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "helidens/mesh.hpp"

namespace helidens {

enum class CurvatureMethod { Auto, Analytic, QuadricFit };

std::string_view to_string(CurvatureMethod method);
std::optional<CurvatureMethod> curvature_method_from_string(std::string_view name);

struct CurvatureField {
    std::vector<double> norm2; // |A|^2 per vertex
    std::vector<double> mean;  // H per vertex
    std::vector<std::uint8_t> valid;
    CurvatureMethod method = CurvatureMethod::Analytic; // never Auto

    bool has(int v) const { return valid[static_cast<std::size_t>(v)] != 0; }
    double a2(int v) const { return norm2[static_cast<std::size_t>(v)]; }
    double h(int v) const { return mean[static_cast<std::size_t>(v)]; }
};

// Auto picks the closed form when the surface carries analytic metadata and
// the quadric fit otherwise. The fit is z = a x^2 + b xy + c y^2 + d x + e y
// over the 2-ring in the tangent frame of the area-weighted normal; boundary
// vertices get no estimate. Throws InsufficientNeighborhood when an interior
// vertex has fewer than 6 distinct 2-ring neighbors.
CurvatureField estimate_curvature(const MeshedSurface& surface, CurvatureMethod method = CurvatureMethod::Auto);

// max |H| over interior vertices, always from the quadric fit.
double mean_curvature_residual(const MeshedSurface& surface);

inline constexpr double kDefaultBlowUpTolerance = 0.05;

struct BlowUpPair {
    int center = -1;
    double scale = 0.0;
    double constant = 0.0;
    double sup_check = 0.0;    // max |A|^2 over vertices in the closed ball B_s(y)
    int sup_vertex = -1;
    int vertices_in_ball = 0;
    double center_value = 0.0; // |A|^2(y)
    double bound = 0.0;        // 4 C^2 / s^2
    double tolerance = kDefaultBlowUpTolerance;
    bool sup_ok = false;
    bool equality_ok = false;
    bool accepted = false;
    std::string method;
};

// Accepts iff sup_check <= 4C^2/s^2 (1 + tol) and
// |4C^2/s^2 - 4|A|^2(y)| <= tol 4|A|^2(y). Throws EmptyBall when no vertex
// with a curvature estimate lies in the ball.
BlowUpPair check_blow_up_pair(const MeshedSurface& surface, const CurvatureField& field, int y, double s, double C,
                              double tol = kDefaultBlowUpTolerance);

// s = C / |A|(y). Throws ZeroCurvatureAtCenter.
double blow_up_scale(const CurvatureField& field, int y, double C);

// For each delta, the sup of |A|^2 over vertices with |x - center| >= delta,
// and the smallest K with sup <= K delta^-4 on every sampled delta.
struct CurvatureEnvelope {
    std::vector<double> deltas;
    std::vector<double> sups;
    double fitted_k = 0.0;
};

CurvatureEnvelope curvature_envelope(const MeshedSurface& surface, const CurvatureField& field,
                                     const std::vector<double>& deltas, const Point3& center = Point3::Zero());

} // namespace helidens
