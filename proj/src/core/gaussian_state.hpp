#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symplectic.hpp"

namespace gqs {

/// Minimum eigenvalue of the Hermitian matrix V + (i/2) J. Nonnegative (up to
/// tolerance) for a physical covariance matrix.
double bona_fide_slack(const Mat& V);

/// Williamson normal form V = S D S^T with S symplectic and
/// D = diag(nu_1, nu_1, ..., nu_n, nu_n), nu_k >= 1/2.
struct Williamson {
  Mat S;
  Vec nu;  // length n
};
Williamson williamson(const Mat& V);

/// An n-mode Gaussian state: mean vector, covariance matrix in the
/// dimensionless normalization where the vacuum has V = I/2, and the hbar
/// convention used by the phase-space functions.
class GaussianState {
 public:
  GaussianState(Vec mean, Mat cov, double hbar = 1.0);

  static GaussianState vacuum(int n, double hbar = 1.0);

  int modes() const { return n_; }
  double hbar() const { return hbar_; }
  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }

  bool zero_mean(double tol = 1e-12) const { return mean_.cwiseAbs().maxCoeff() <= tol; }

  /// Generator legs whose product maps a thermal normal form onto this state,
  /// when the state was built that way (random_state, presets, evolve_cov).
  /// The Fock oracle uses this to synthesize the metaplectic operator exactly.
  const std::optional<std::vector<GeneratorSpec>>& origin_legs() const { return origin_legs_; }
  const std::optional<Vec>& origin_nu() const { return origin_nu_; }
  void set_origin(std::vector<GeneratorSpec> legs, Vec nu);
  void clear_origin();

 private:
  int n_;
  double hbar_;
  Vec mean_;
  Mat cov_;
  std::optional<std::vector<GeneratorSpec>> origin_legs_;
  std::optional<Vec> origin_nu_;
};

/// Schroedinger update under a symplectic map: mean -> S mean, V -> S V S^T.
GaussianState evolve_cov(const GaussianState& state, const Mat& S);

/// Same, by a single generator leg (keeps the origin descriptor usable).
GaussianState evolve_cov(const GaussianState& state, const std::vector<GeneratorSpec>& legs);

/// Partial trace onto `modes` (ascending order of the given indices).
GaussianState reduce(const GaussianState& state, const std::vector<int>& modes);

/// Subtract a mean vector (translation to the origin of phase space).
GaussianState translate_to_zero(const GaussianState& state);

double wigner(const GaussianState& state, const Vec& x);
Complex char_fn(const GaussianState& state, const Vec& xi);

/// Purity of the reduced single-mode state, hbar / (2 sqrt(det V_mode)).
double purity(const GaussianState& state, int mode);

/// Renyi-2 entanglement of mode | rest for a globally pure state:
/// (1/2) ln det V_mode - ln(hbar/2). Throws not_applicable on mixed states.
double renyi2_entanglement(const GaussianState& state, int mode, double purity_tol = 1e-6);

enum class StateKind { pure, mixed };

/// Random zero-mean state: V = S (I/2) S^T (pure) or V = S D S^T with
/// symplectic eigenvalues nu_k uniform in [1/2, nu_max] (mixed). The generator
/// product for S is recorded as the state's origin.
GaussianState random_state(int n, StateKind kind, std::uint64_t seed, double nu_max = 2.0,
                           double hbar = 1.0, double zeta_max = 1.5, double s_max = 2.0);

/// Two-mode squeezed vacuum with parameter r (modes 0 and 1 of a 2-mode state).
GaussianState two_mode_squeezed_vacuum(double r, double hbar = 1.0);

/// View of the (j, k) two-mode sub-blocks of a covariance matrix.
struct ModeBlockView {
  int j, k;
  Mat Vj;   // 2x2
  Mat Vk;   // 2x2
  Mat Ejk;  // 2x2, entries (v w; y z)
  Mat assembled() const;
};
ModeBlockView two_mode_block(const GaussianState& state, int j, int k);

}  // namespace gqs
