#pragma once

#include "phase.hpp"

namespace gqs {

std::uint64_t splitmix64(std::uint64_t x);

/// One qubit-ancilla measurement setting: an unconditional pre-evolution of
/// the field, the conditional evolution entangling it with the ancilla, the
/// equatorial-axis angle of the final pi/2 qubit rotation, and the shot
/// budget (0 = exact probabilities).
struct ProtocolSetting {
  MetaplecticEvolution pre;
  MetaplecticEvolution conditional;
  double vartheta = 0.0;
  long long shots = 0;

  ProtocolSetting(MetaplecticEvolution pre_, MetaplecticEvolution cond_, double vt = 0.0,
                  long long sh = 0)
      : pre(std::move(pre_)), conditional(std::move(cond_)), vartheta(vt), shots(sh) {}
};

/// P_-(vartheta) - P_+(vartheta) = Im[e^{i vartheta} Tr(rho U)], from the
/// analytic Gaussian trace.
double exact_population_difference(const GaussianState& state, const ProtocolSetting& setting);

/// Bernoulli sampling of the population difference at one vartheta.
struct QuadratureSample {
  double diff = 0.0;   // estimate of P_- - P_+
  double sigma = 0.0;  // binomial standard error (0 for exact)
  long long shots = 0;
};
QuadratureSample sample_population_difference(const GaussianState& state,
                                              const ProtocolSetting& setting, std::uint64_t seed);

struct PhaseEstimate {
  double re_hat = 0.0;
  double im_hat = 0.0;
  double phi_hat = 0.0;
  double sigma_phi = 0.0;
  double sigma_re = 0.0;
  double sigma_im = 0.0;
  double magnitude_hat = 0.0;
  long long shots = 0;
  bool reliable = true;  // false when magnitude_hat fell below the floor
};

/// Estimate arg Tr(rho U) by combining the vartheta = 0 run (imaginary part)
/// with the vartheta = pi/2 run (real part); the shot budget is split equally.
/// shots = 0 uses the exact analytic path. A magnitude below `magnitude_floor`
/// marks the estimate unreliable but still returns it.
PhaseEstimate estimate_phase(const GaussianState& state, const MetaplecticEvolution& pre,
                             const MetaplecticEvolution& conditional, long long shots,
                             std::uint64_t seed, double magnitude_floor = 0.05);

}  // namespace gqs
