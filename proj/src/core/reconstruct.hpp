#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "measure.hpp"

namespace gqs {

/// One consumed total-phase measurement, with enough provenance to audit the
/// reconstruction. `pre` is applied unconditionally before the conditional
/// evolution whose phase is recorded.
struct PhaseSample {
  MetaplecticEvolution pre;
  MetaplecticEvolution conditional;
  std::vector<int> target_modes;
  double phi = 0.0;
  double sigma_phi = 0.0;
  long long shots = 0;
  double re_hat = 0.0;
  double im_hat = 0.0;
  double magnitude = 0.0;
  std::string tag;  // role of the sample, e.g. "mode0/rot:theta1"
};

struct SingleModeEstimate {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int strategy = 0;
  bool ambiguous = false;  // unresolved a<->b exchange (strategy 2 without shear)
  double a_alt = 0.0;
  double b_alt = 0.0;
  std::vector<std::string> warnings;

  double tau() const { return a * b - c * c; }
  double beta() const { return a + b; }
  Mat matrix() const;
};

/// Two rotations + two squeezings (quadrature phase pi/2, then 0).
struct Strategy1Inputs {
  double theta1 = M_PI / 2.0;
  double theta2 = 2.0 * M_PI / 3.0;
  double zeta = 1.0;
  double phi_rot1 = 0.0;     // phi_R(theta1)
  double phi_rot2 = 0.0;     // phi_R(theta2)
  double phi_sq_quad = 0.0;  // phi_Z(pi/2; zeta)
  double phi_sq_axis = 0.0;  // phi_Z(0; zeta)
};
SingleModeEstimate strategy1(const Strategy1Inputs& in);

/// Two rotations on the state, a known squeeze, a third rotation on the
/// squeezed state; only rotation phases are consumed. The a<->b root
/// assignment is fixed by an optional momentum-shear phase.
struct Strategy2Inputs {
  double theta1 = M_PI / 2.0;
  double theta2 = 2.0 * M_PI / 3.0;
  double theta3 = M_PI / 2.0;
  double zeta = 1.0;  // squeeze applied between the second and third rotation
  double phi_rot1 = 0.0;
  double phi_rot2 = 0.0;
  double phi_rot3 = 0.0;  // phi_R(theta3) on the squeezed state
  std::optional<double> phi_shear_p;
  double shear_s = 1.0;
};
SingleModeEstimate strategy2(const Strategy2Inputs& in);

/// Two quadrature squeezings plus one or two shears. The squeeze pair yields
/// (c, tau); a position shear gives b, a momentum shear gives a. With only
/// one shear the missing entry comes from tau, which the squeeze pair cannot
/// determine when c = 0 (the system degenerates); supplying both shears keeps
/// the inversion well posed for every state.
struct Strategy3Inputs {
  double zeta1 = 0.5;
  double zeta2 = 1.0;
  double s = 1.0;
  double phi_sq1 = 0.0;  // phi_Z(pi/2; zeta1)
  double phi_sq2 = 0.0;  // phi_Z(pi/2; zeta2)
  std::optional<double> phi_shear_q;
  std::optional<double> phi_shear_p;
};
SingleModeEstimate strategy3(const Strategy3Inputs& in);

struct EntanglementEstimate {
  double value = 0.0;
  double tau = 0.0;
  std::optional<std::string> warning;
};
/// Renyi-2 entanglement of one mode against the rest of a pure state, from
/// the phases of two local rotations alone.
EntanglementEstimate entanglement_from_two_rotations(double phi_rot1, double phi_rot2,
                                                     double theta1, double theta2,
                                                     double hbar = 1.0);

/// Reconstructs the 2x2 covariance block of `mode` after the given
/// unconditional pre-evolution has been applied to the state.
using SingleModeReconstructor = std::function<Mat(int mode, const MetaplecticEvolution& pre)>;

struct IntermodalResult {
  Mat E;  // 2x2 block, entries (v w; y z)
  std::vector<std::string> warnings;
};
/// Intermodal correlation block E^{(j,k)} via a two-mode rotation pass
/// (yielding w, y) and a second pass with an extra rotation on mode j
/// (yielding v, z). Each pass also predicts a combination recovered by the
/// other; disagreements beyond cross_tol are reported as warnings.
IntermodalResult recover_intermodal(int n, int j, int k, const SingleModeReconstructor& singles,
                                    double cross_tol = 1e-6);

struct ReconstructionReport {
  int n = 0;
  double hbar = 1.0;
  Mat V_est;
  std::optional<Mat> V_true;
  Mat sigma;  // per-entry standard errors (zeros for exact runs)
  double bona_fide_slack_est = 0.0;
  std::vector<double> mode_entanglement;        // 1x(n-1) Renyi-2 figures
  std::vector<double> mode_entanglement_sigma;  // propagated errors
  std::vector<PhaseSample> samples;
  std::vector<std::string> warnings;

  double max_abs_error() const;
};

/// Symmetric assembly of single-mode and pair blocks into the full matrix.
ReconstructionReport assemble(int n, const std::vector<Mat>& singles,
                              const std::map<std::pair<int, int>, Mat>& pairs);

struct PipelineOptions {
  int strategy = 3;
  long long shots = 0;
  std::uint64_t seed = 1;
  double theta1 = M_PI / 2.0;
  double theta2 = 2.0 * M_PI / 3.0;
  double theta3 = M_PI / 2.0;
  double zeta = 1.0;
  double zeta1 = 0.5;
  double zeta2 = 1.0;
  double s = 1.0;
  bool strategy3_both_shears = true;
  double magnitude_floor = 0.05;
};

/// Full covariance-matrix determination of a known simulated state: measures
/// every required total phase (exactly or with sampled shots), inverts the
/// chosen strategy per mode, recovers every pair block, and assembles the
/// report with ground truth attached.
ReconstructionReport run_pipeline(const GaussianState& truth, const PipelineOptions& opt);

}  // namespace gqs
