#pragma once

#include "gaussian_state.hpp"

namespace gqs {

/// Build a state from a compact spec string:
///   "vacuum:n=2"                      product vacuum
///   "tms:r=1.0"                       two-mode squeezed vacuum
///   "thermal:n=1,nu=1.5"              product thermal state
///   "random-pure:n=3"                 seeded random pure state
///   "random-mixed:n=2,numax=1.5"      seeded random mixed state
///   "file:path.json"                  load from a state JSON file
GaussianState state_from_spec(const std::string& spec, std::uint64_t seed, double hbar = 1.0);

}  // namespace gqs
