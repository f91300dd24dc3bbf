#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace helidens {

enum class ErrorCode {
    InvalidArgument,
    NonManifoldEdge,
    InconsistentOrientation,
    DegenerateFace,
    ResolutionTooCoarse,
    RangeOutsideParent,
    SingularIntegrand,
    PathDependenceDetected,
    InsufficientNeighborhood,
    EmptyBall,
    ZeroCurvatureAtCenter,
    DisconnectedMesh,
    GraphicalityNotCertified,
    CombinatoricsMismatch,
    NonInjectiveVertexMap,
    TargetOutOfRange,
    TargetNotReached,
    BlowUpUnverified,
    SeparationTooSmall,
    ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above; the
// message names the offending simplex or quantity.
class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace helidens
