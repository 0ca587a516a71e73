#pragma once

#include "phase.hpp"

namespace gqs::fock {

/// Truncated Fock space for brute-force verification, n <= 2 modes with
/// `cutoff` levels per mode. Basis index is mode-0 major: |m0, m1> -> m0*c + m1.
///
/// All evolution legs are applied through structure-aware multiplications
/// (Kronecker factors for single-mode legs, total-photon-number sectors for
/// the two-mode rotation), so no dense dim^3 product is ever formed.
class FockSpace {
 public:
  FockSpace(int n, int cutoff, double hbar = 1.0);

  int modes() const { return n_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return dim_; }
  double hbar() const { return hbar_; }

  /// Annihilation operator of one mode (cutoff x cutoff block).
  const CMat& lower() const { return a_; }
  CMat position() const;  // sqrt(hbar/2) (a + a^dag)
  CMat momentum() const;  // -i sqrt(hbar/2) (a - a^dag)

  /// cutoff x cutoff unitary of a single-mode leg.
  CMat leg_unitary_single(const GeneratorSpec& g) const;

  /// A <- U_leg A.
  void apply_leg(const GeneratorSpec& g, CMat& A) const;

  /// A <- U A with U the ordered product of the legs (time order).
  void apply_legs(const std::vector<GeneratorSpec>& legs, CMat& A) const;

  /// rho <- U rho U^dag for Hermitian rho.
  void apply_conj(const std::vector<GeneratorSpec>& legs, CMat& rho) const;

  /// Dense matrix embedding of a single-mode operator on `mode`.
  CMat embed(const CMat& op, int mode) const;

  /// A <- (op on `mode`) A for an arbitrary cutoff x cutoff block.
  void apply_single(const CMat& u, int mode, CMat& A) const;

 private:
  struct Sector {
    std::vector<int> idx;  // flat basis indices, ordered by m0
    Mat vecs;
    Vec vals;
  };
  const std::vector<Sector>& sectors() const;
  void apply_two_mode_rotation(double wt, CMat& A) const;

  int n_;
  int cutoff_;
  int dim_;
  double hbar_;
  CMat a_;  // single-mode annihilation block
  mutable std::vector<Sector> sectors_;
};

/// Thermal product state with per-mode occupations nbar_k = nu_k - 1/2,
/// diagonal in the number basis. Not renormalized: the truncated-tail weight
/// is reported by the caller through trace defects.
CMat thermal_density(const FockSpace& space, const Vec& nu);

/// Fock-basis density matrix of a zero-mean Gaussian state. Uses the state's
/// generator-sequence origin when available; otherwise synthesizes the
/// metaplectic operator from the Williamson form via a principal matrix
/// logarithm (throws log_branch_failure when that branch does not exist).
CMat gaussian_to_fock(const GaussianState& state, int cutoff);

/// Dense unitary of an evolution. With check_unitarity, verifies
/// ||U^dag U - I|| restricted to the lowest half of the levels and throws
/// insufficient_cutoff above 1e-6.
CMat evolution_to_fock(const MetaplecticEvolution& evo, int cutoff, double hbar = 1.0,
                       bool check_unitarity = true);

/// Unitarity defect of U on the lowest-half-per-mode subspace.
double unitarity_defect_lower(const CMat& U, int n, int cutoff);

/// Ground truth for trace_rho_M: Tr(rho_fock U_fock).
Complex oracle_trace(const GaussianState& state, const MetaplecticEvolution& evo, int cutoff);

/// Quadrature second moments of a Fock density matrix, in the dimensionless
/// covariance normalization (vacuum -> I/2).
Mat covariance_from_fock(const FockSpace& space, const CMat& rho);

/// Full qubit (x) field simulation of the conditional-evolution measurement:
/// ancilla prepared along +x, conditional U on the |+z> branch, then a pi/2
/// rotation about the equatorial axis at angle vartheta, then population
/// readout.
struct ProtocolPopulations {
  double p_minus;
  double p_plus;
};
ProtocolPopulations oracle_protocol(const GaussianState& state, const MetaplecticEvolution& evo,
                                    int cutoff, double vartheta);

}  // namespace gqs::fock
