#pragma once

#include <nlohmann/json.hpp>

#include "reconstruct.hpp"

namespace gqs {

using Json = nlohmann::json;

Json state_to_json(const GaussianState& state);
/// Parses {"n", "hbar", "mean", "cov"}; rejects matrices that fail the
/// symmetry or uncertainty-bound invariants.
GaussianState state_from_json(const Json& j);

Json generator_to_json(const GeneratorSpec& g);
GeneratorSpec generator_from_json(const Json& j);

Json evolution_to_json(const MetaplecticEvolution& evo);
MetaplecticEvolution evolution_from_json(const Json& j);

Json phase_sample_to_json(const PhaseSample& s);
PhaseSample phase_sample_from_json(const Json& j);

Json report_to_json(const ReconstructionReport& rep);

/// Flat per-entry table: block,row,col,estimate,truth,abs_error,sigma,provenance.
std::string report_to_csv(const ReconstructionReport& rep);

void write_text_file(const std::string& path, const std::string& body);
std::string read_text_file(const std::string& path);

}  // namespace gqs
