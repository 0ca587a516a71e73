#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gqs {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Tolerance on the symplectic defect ||S^T J S - J||_inf.
inline constexpr double kSympTol = 1e-10;
/// Band on |det(S +- I)| below which S is treated as having an eigenvalue -+1.
inline constexpr double kSingTol = 1e-8;
/// Window on min_k |eig_k(S) -+ 1| used alongside kSingTol.
inline constexpr double kEigWindow = 1e-6;

/// Block-diagonal symplectic form: n copies of [[0,1],[-1,0]].
Mat symplectic_form(int n);

/// Max-abs-entry test of S^T J S = J. Throws on odd dimension.
bool is_symplectic(const Mat& S, double tol = kSympTol);

/// Symplectic defect ||S^T J S - J||_inf (diagnostics).
double symplectic_defect(const Mat& S);

/// Cayley parametrization C = -J (S - I)(S + I)^{-1}.
/// Defined only when S has no eigenvalue -1; throws singular_cayley otherwise,
/// with |det(S+I)| in the message.
Mat cayley(const Mat& S, double sing_tol = kSingTol);

/// Inverse Cayley matrix computed directly as (S + I)(S - I)^{-1} J.
/// Defined only when S has no eigenvalue +1 (C itself may not exist).
Mat cayley_inverse(const Mat& S, double sing_tol = kSingTol);

/// True if S has an eigenvalue within the singular band around -1 (resp. +1).
bool has_eigenvalue_minus_one(const Mat& S, double sing_tol = kSingTol);
bool has_eigenvalue_plus_one(const Mat& S, double sing_tol = kSingTol);

enum class GeneratorKind : int {
  rotation = 0,        // R(theta), Hessian I_2
  squeeze = 1,         // Z_phi(zeta)
  shear_position = 2,  // F(s) = [[1, s], [0, 1]]
  shear_momentum = 3,  // M(s) = [[1, 0], [-s, 1]]
  two_mode_rotation = 4,
};

/// One elementary metaplectic leg. `parameter` is the full omega*t of the leg
/// (theta, zeta, or s). `phi` is the squeeze phase and is ignored otherwise.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::rotation;
  int mode = 0;    // first (or only) mode
  int mode_b = 0;  // second mode, two_mode_rotation only
  double parameter = 0.0;
  double phi = 0.0;

  static GeneratorSpec rotation(int mode, double theta);
  static GeneratorSpec squeeze(int mode, double zeta, double phi);
  static GeneratorSpec shear_position(int mode, double s);
  static GeneratorSpec shear_momentum(int mode, double s);
  static GeneratorSpec two_mode_rotation(int j, int k, double wt);

  /// Same leg with the flow parameter scaled by u in [0, 1].
  GeneratorSpec scaled(double u) const;

  void validate(int n_modes) const;
  bool is_two_mode() const { return kind == GeneratorKind::two_mode_rotation; }
};

/// The 2x2 (or 4x4, before embedding) matrix of an elementary generator.
Mat generator_block(const GeneratorSpec& g);

/// Full 2n x 2n symplectic matrix of a generator, identity on other modes.
Mat generator_matrix(const GeneratorSpec& g, int n);

/// Embed a 2x2 symplectic block on mode j of an n-mode system.
Mat embed_single_mode(const Mat& S2, int j, int n);

/// 2x2 rotation matrix R(theta).
Mat rotation2(double theta);

/// Factorization S = S' S'' with |det(S' + I)| and |det(S'' + I)| both above
/// sing_tol. S'' is a global rotation by theta0 on every mode, S' = S R(-theta0);
/// theta0 is scanned over a fixed list starting with 0 (so nonsingular S returns
/// (S, I)). Throws factorization_failed if the scan is exhausted.
struct Factorization {
  Mat s_prime;
  Mat s_second;
  double theta0 = 0.0;
};
Factorization factorize(const Mat& S, double sing_tol = kSingTol);

/// Deterministic sampler of random symplectic matrices built as products of
/// elementary generators (parameters in bounded, well-conditioned ranges).
struct RandomSymplectic {
  Mat S;
  std::vector<GeneratorSpec> legs;  // time order, S = legs.back() * ... * legs.front()
};
RandomSymplectic random_symplectic(int n, std::uint64_t seed, int n_legs = -1,
                                   double zeta_max = 1.5, double s_max = 2.0);

}  // namespace gqs
