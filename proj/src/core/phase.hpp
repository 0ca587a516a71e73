#pragma once

#include <functional>

#include "gaussian_state.hpp"

namespace gqs {

/// Ordered sequence of generator legs, applied left-to-right in time. The
/// composite symplectic matrix is legs.back() * ... * legs.front().
class MetaplecticEvolution {
 public:
  MetaplecticEvolution(int n, std::vector<GeneratorSpec> steps);

  static MetaplecticEvolution identity(int n) { return MetaplecticEvolution(n, {}); }
  static MetaplecticEvolution single(int n, const GeneratorSpec& g) {
    return MetaplecticEvolution(n, {g});
  }

  int modes() const { return n_; }
  const std::vector<GeneratorSpec>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

  Mat matrix() const;
  /// Matrix of the partial evolution: all legs before `leg` in full, leg
  /// `leg` at fraction u of its parameter. t = leg + u parametrizes the path.
  Mat partial_matrix(int leg, double u) const;

  MetaplecticEvolution then(const MetaplecticEvolution& later) const;
  MetaplecticEvolution then(const GeneratorSpec& later) const;

 private:
  int n_;
  std::vector<GeneratorSpec> steps_;
};

/// Principal argument in (-pi, pi], with arg(-1) = +pi (x < 0, y = +-0 maps
/// to +pi). Throws undefined_argument at the origin.
double principal_arg(Complex z);

/// Reduce an angle to the principal interval (-pi, pi].
double wrap_angle(double phi);

/// Conley-Zehnder indices of a metaplectic operator along its path. nu_plus
/// fixes the phase of the Wigner symbol, nu_minus that of the Weyl symbol;
/// each is meaningful only while its symbol is nonsingular.
struct CZIndices {
  int nu_minus = 0;
  int nu_plus = 0;
  bool valid_minus = false;
  bool valid_plus = false;
};

/// Closed-form index table for a single-mode rotation, theta in [0, 4pi]
/// (other values are reduced mod 4pi).
CZIndices cz_indices_rotation(double theta);

/// Indices of an arbitrary evolution, resolved by continuity along the
/// concatenated one-parameter legs (table lookups for elementary legs).
CZIndices cz_indices(const MetaplecticEvolution& evo);

/// Continuity tracking along an arbitrary matrix path [0,1] -> Sp(2n,R)
/// starting at a point with known indices.
CZIndices track_indices(const std::function<Mat(double)>& path, int n, CZIndices start,
                        int coarse_steps = 96);

enum class PhaseBranch { weyl, wigner, factorized };

struct TotalPhase {
  double phi = 0.0;        // principal value in (-pi, pi]
  double magnitude = 0.0;  // |Tr(rho M_S)|, <= 1
  PhaseBranch branch = PhaseBranch::wigner;
};

/// Tr(rho_G M_S) for a zero-mean Gaussian state. Picks the Weyl form when S
/// has no eigenvalue +1, the Wigner form when it has no eigenvalue -1, and the
/// factorized composition otherwise. Square roots take the branch with
/// positive real part (positive imaginary part on the cut).
Complex trace_rho_M(const GaussianState& state, const MetaplecticEvolution& evo);
Complex trace_rho_M(const GaussianState& state, const MetaplecticEvolution& evo,
                    PhaseBranch& branch_out);

/// Force a specific branch (testing the agreement of the three formulas).
Complex trace_rho_M_weyl(const GaussianState& state, const MetaplecticEvolution& evo);
Complex trace_rho_M_wigner(const GaussianState& state, const MetaplecticEvolution& evo);
Complex trace_rho_M_factorized(const GaussianState& state, const MetaplecticEvolution& evo);

TotalPhase total_phase(const GaussianState& state, const MetaplecticEvolution& evo);

/// Closed-form single-mode phases for a covariance block [[a, c], [c, b]].
double phi_rotation(double a, double b, double c, double theta);
double phi_squeeze(double a, double b, double c, double zeta, double phi);
double phi_shear_position(double b, double s);
double phi_shear_momentum(double a, double s);

}  // namespace gqs
