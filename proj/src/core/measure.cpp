#include "measure.hpp"

#include <cmath>

namespace gqs {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

Complex protocol_trace(const GaussianState& state, const ProtocolSetting& setting) {
  require(state.zero_mean(), Errc::invalid_state,
          "measurement protocol: state must have zero mean");
  const GaussianState evolved =
      setting.pre.empty() ? state : evolve_cov(state, setting.pre.steps());
  return trace_rho_M(evolved, setting.conditional);
}

/// Deterministic uniform in [0, 1) from the raw generator stream.
double next_uniform(std::uint64_t& s) {
  s = splitmix64(s);
  return static_cast<double>(s >> 11) * 0x1p-53;
}

}  // namespace

double exact_population_difference(const GaussianState& state, const ProtocolSetting& setting) {
  const Complex t = protocol_trace(state, setting);
  return (std::exp(Complex(0, setting.vartheta)) * t).imag();
}

QuadratureSample sample_population_difference(const GaussianState& state,
                                              const ProtocolSetting& setting,
                                              std::uint64_t seed) {
  QuadratureSample out;
  out.shots = setting.shots;
  const double diff = exact_population_difference(state, setting);
  if (setting.shots <= 0) {
    out.diff = diff;
    return out;
  }
  // P_- as a Bernoulli parameter, clamped against float leakage.
  double p = std::min(1.0, std::max(0.0, 0.5 * (1.0 + diff)));
  std::uint64_t s = splitmix64(seed ^ 0x6a09e667f3bcc909ull);
  long long hits = 0;
  for (long long k = 0; k < setting.shots; ++k)
    if (next_uniform(s) < p) ++hits;
  const double phat = static_cast<double>(hits) / setting.shots;
  out.diff = 2.0 * phat - 1.0;
  // Shifted estimate keeps the reported error finite at the boundaries.
  const double ps = (hits + 0.5) / (setting.shots + 1.0);
  out.sigma = 2.0 * std::sqrt(ps * (1.0 - ps) / setting.shots);
  return out;
}

PhaseEstimate estimate_phase(const GaussianState& state, const MetaplecticEvolution& pre,
                             const MetaplecticEvolution& conditional, long long shots,
                             std::uint64_t seed, double magnitude_floor) {
  PhaseEstimate est;
  est.shots = shots;
  if (shots <= 0) {
    const Complex t = protocol_trace(state, ProtocolSetting(pre, conditional));
    est.re_hat = t.real();
    est.im_hat = t.imag();
  } else {
    const long long half = shots / 2;
    ProtocolSetting im_setting(pre, conditional, 0.0, half);
    ProtocolSetting re_setting(pre, conditional, M_PI / 2.0, shots - half);
    const QuadratureSample im_s =
        sample_population_difference(state, im_setting, splitmix64(seed ^ 0x01ull));
    const QuadratureSample re_s =
        sample_population_difference(state, re_setting, splitmix64(seed ^ 0x02ull));
    // vartheta = 0 reads Im, vartheta = pi/2 reads Im[i z] = Re.
    est.im_hat = im_s.diff;
    est.re_hat = re_s.diff;
    est.sigma_im = im_s.sigma;
    est.sigma_re = re_s.sigma;
  }
  est.magnitude_hat = std::hypot(est.re_hat, est.im_hat);
  if (est.magnitude_hat == 0.0) {
    est.phi_hat = 0.0;
    est.sigma_phi = std::numeric_limits<double>::infinity();
    est.reliable = false;
    return est;
  }
  est.phi_hat = principal_arg(Complex(est.re_hat, est.im_hat));
  const double m2 = est.magnitude_hat * est.magnitude_hat;
  est.sigma_phi = std::sqrt(est.im_hat * est.im_hat * est.sigma_re * est.sigma_re +
                            est.re_hat * est.re_hat * est.sigma_im * est.sigma_im) /
                  m2;
  est.reliable = est.magnitude_hat >= magnitude_floor;
  return est;
}

}  // namespace gqs
