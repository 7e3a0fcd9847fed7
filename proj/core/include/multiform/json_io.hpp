#pragma once

#include <string>

#include <json.hpp>

#include "multiform/decompose.hpp"
#include "multiform/gen.hpp"
#include "multiform/symmetrize.hpp"

namespace multiform {

/// JSON interchange. All numbers travel as strings (exact fractions or
/// full-precision decimals); omitted tensor entries are zero and writers
/// emit entries in lexicographic index order.

nlohmann::json form_to_json(const MultiForm& f);
MultiForm form_from_json(const nlohmann::json& j);

nlohmann::json map_to_json(const LinearMap& m);
LinearMap map_from_json(const nlohmann::json& j);

nlohmann::json maps_to_json(const std::vector<LinearMap>& maps);
std::vector<LinearMap> maps_from_json(const nlohmann::json& j);

nlohmann::json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const SignedCongruence& cert, double residual);
SignedCongruence certificate_from_json(const nlohmann::json& j, Kind kind, int dim);

nlohmann::json gen_spec_to_json(const GenSpec& spec, const std::string& type);
/// Returns the spec and its "type" field ("witness" or "decomposable").
std::pair<GenSpec, std::string> gen_spec_from_json(const nlohmann::json& j);

nlohmann::json violation_to_json(const WitnessViolation& v);

std::vector<std::vector<Scalar>> vectors_from_json(const nlohmann::json& j, Kind kind, int dim);

}  // namespace multiform
