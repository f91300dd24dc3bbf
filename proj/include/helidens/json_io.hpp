#pragma once

#include <json.hpp>

#include "helidens/curvature.hpp"
#include "helidens/density.hpp"
#include "helidens/experiment.hpp"
#include "helidens/generators.hpp"
#include "helidens/lipschitz.hpp"

namespace helidens {

using Json = nlohmann::ordered_json;

Json to_json(const DensityReport& r);
Json to_json(const GraphicalityCertificate& g);
Json to_json(const GraphDensityReport& r);
Json to_json(const BlowUpPair& b);
Json to_json(const StretchBounds& s);
Json to_json(const TransportReport& r);
Json to_json(const ExperimentConfig& c);
Json to_json(const LemmaSearchResult& r);
Json to_json(const ObstructionCertificate& c);
Json to_json(const FamilyReport& r);

// { "epsilon", "Omega", "gamma", "C", "D", "r", "resolution": {...} } plus the
// optional "center_vertex", "boundary_hint", "blow_up_tolerance" and
// "max_boundary_candidates". Unknown keys are rejected. Throws ParseError.
ExperimentConfig experiment_config_from_json(const Json& j);

// { "g": expr, "dh": expr, "domain": [re0, re1, im0, im1], "basepoint": [re, im],
//   "res": [n, m] }. dh is the coefficient of dz. Throws ParseError.
WeierstrassSpec weierstrass_spec_from_json(const Json& j);

Json read_json_file(const std::string& path);

} // namespace helidens
