#include "symplectic.hpp"

#include <cmath>
#include <random>

namespace gqs {

Mat symplectic_form(int n) {
  require(n >= 1, Errc::invalid_argument, "symplectic_form: mode count must be >= 1");
  Mat J = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    J(2 * k, 2 * k + 1) = 1.0;
    J(2 * k + 1, 2 * k) = -1.0;
  }
  return J;
}

bool is_symplectic(const Mat& S, double tol) {
  require(S.rows() == S.cols(), Errc::invalid_argument, "is_symplectic: matrix not square");
  require(S.rows() % 2 == 0 && S.rows() > 0, Errc::invalid_argument,
          "is_symplectic: dimension must be even and positive");
  return symplectic_defect(S) <= tol;
}

double symplectic_defect(const Mat& S) {
  const int n = static_cast<int>(S.rows()) / 2;
  const Mat J = symplectic_form(n);
  return (S.transpose() * J * S - J).cwiseAbs().maxCoeff();
}

Mat cayley(const Mat& S, double sing_tol) {
  const int n = static_cast<int>(S.rows()) / 2;
  const Mat J = symplectic_form(n);
  Eigen::PartialPivLU<Mat> lu(S + Mat::Identity(2 * n, 2 * n));
  const double det = lu.determinant();
  if (std::abs(det) <= sing_tol)
    fail(Errc::singular_cayley,
         "cayley: S has an eigenvalue -1 (|det(S+I)| = " + std::to_string(std::abs(det)) + ")");
  Mat C = -J * lu.solve(S - Mat::Identity(2 * n, 2 * n)).eval();
  // (S-I) and (S+I)^{-1} commute, so the two orderings agree; symmetrize away
  // the last-bit noise.
  return 0.5 * (C + C.transpose());
}

Mat cayley_inverse(const Mat& S, double sing_tol) {
  const int n = static_cast<int>(S.rows()) / 2;
  const Mat J = symplectic_form(n);
  const Mat I = Mat::Identity(2 * n, 2 * n);
  Eigen::PartialPivLU<Mat> lu(S - I);
  const double det = lu.determinant();
  if (std::abs(det) <= sing_tol)
    fail(Errc::singular_cayley,
         "cayley_inverse: S has an eigenvalue +1 (|det(S-I)| = " + std::to_string(std::abs(det)) +
             ")");
  Mat Ci = (S + I) * lu.solve(J);
  return 0.5 * (Ci + Ci.transpose());
}

namespace {

double min_eig_distance(const Mat& S, double center) {
  Eigen::EigenSolver<Mat> es(S, /*computeEigenvectors=*/false);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    best = std::min(best, std::abs(es.eigenvalues()(i) - center));
  return best;
}

}  // namespace

bool has_eigenvalue_minus_one(const Mat& S, double sing_tol) {
  const double det = (S + Mat::Identity(S.rows(), S.cols())).determinant();
  if (std::abs(det) <= sing_tol) return true;
  return min_eig_distance(S, -1.0) < kEigWindow;
}

bool has_eigenvalue_plus_one(const Mat& S, double sing_tol) {
  const double det = (S - Mat::Identity(S.rows(), S.cols())).determinant();
  if (std::abs(det) <= sing_tol) return true;
  return min_eig_distance(S, 1.0) < kEigWindow;
}

GeneratorSpec GeneratorSpec::rotation(int mode, double theta) {
  return GeneratorSpec{GeneratorKind::rotation, mode, 0, theta, 0.0};
}
GeneratorSpec GeneratorSpec::squeeze(int mode, double zeta, double phi) {
  return GeneratorSpec{GeneratorKind::squeeze, mode, 0, zeta, phi};
}
GeneratorSpec GeneratorSpec::shear_position(int mode, double s) {
  return GeneratorSpec{GeneratorKind::shear_position, mode, 0, s, 0.0};
}
GeneratorSpec GeneratorSpec::shear_momentum(int mode, double s) {
  return GeneratorSpec{GeneratorKind::shear_momentum, mode, 0, s, 0.0};
}
GeneratorSpec GeneratorSpec::two_mode_rotation(int j, int k, double wt) {
  return GeneratorSpec{GeneratorKind::two_mode_rotation, j, k, wt, 0.0};
}

GeneratorSpec GeneratorSpec::scaled(double u) const {
  GeneratorSpec g = *this;
  g.parameter = parameter * u;
  return g;
}

void GeneratorSpec::validate(int n_modes) const {
  require(mode >= 0 && mode < n_modes, Errc::invalid_argument, "generator: mode index out of range");
  switch (kind) {
    case GeneratorKind::rotation:
      break;
    case GeneratorKind::squeeze:
      require(phi >= 0.0 && phi < 2.0 * M_PI + 1e-12, Errc::invalid_argument,
              "generator: squeeze phase must lie in [0, 2pi)");
      break;
    case GeneratorKind::shear_position:
    case GeneratorKind::shear_momentum:
      require(parameter >= 0.0, Errc::invalid_argument, "generator: shear parameter must be >= 0");
      break;
    case GeneratorKind::two_mode_rotation:
      require(mode_b >= 0 && mode_b < n_modes, Errc::invalid_argument,
              "generator: second mode index out of range");
      require(mode != mode_b, Errc::invalid_argument, "generator: mode indices must be distinct");
      break;
  }
}

Mat rotation2(double theta) {
  Mat R(2, 2);
  R << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return R;
}

Mat generator_block(const GeneratorSpec& g) {
  switch (g.kind) {
    case GeneratorKind::rotation:
      return rotation2(g.parameter);
    case GeneratorKind::squeeze: {
      const double ch = std::cosh(g.parameter), sh = std::sinh(g.parameter);
      const double c = std::cos(g.phi), s = std::sin(g.phi);
      Mat Z(2, 2);
      Z << ch + s * sh, -c * sh, -c * sh, ch - s * sh;
      return Z;
    }
    case GeneratorKind::shear_position: {
      Mat F = Mat::Identity(2, 2);
      F(0, 1) = g.parameter;
      return F;
    }
    case GeneratorKind::shear_momentum: {
      Mat M = Mat::Identity(2, 2);
      M(1, 0) = -g.parameter;
      return M;
    }
    case GeneratorKind::two_mode_rotation: {
      // exp(J H wt) with Hessian coupling q_j q_k + p_j p_k; block form on the
      // two participating modes, before embedding.
      const double c = std::cos(g.parameter / 2.0), s = std::sin(g.parameter / 2.0);
      Mat S = Mat::Zero(4, 4);
      S.block<2, 2>(0, 0) = c * Mat::Identity(2, 2);
      S.block<2, 2>(2, 2) = c * Mat::Identity(2, 2);
      Mat J2(2, 2);
      J2 << 0, 1, -1, 0;
      S.block<2, 2>(0, 2) = s * J2;
      S.block<2, 2>(2, 0) = s * J2;
      return S;
    }
  }
  fail(Errc::internal, "generator_block: unreachable");
}

Mat generator_matrix(const GeneratorSpec& g, int n) {
  g.validate(n);
  const Mat block = generator_block(g);
  if (!g.is_two_mode()) return embed_single_mode(block, g.mode, n);

  // Two-mode block: rows/cols of modes (j, k), identity elsewhere.
  const int j = std::min(g.mode, g.mode_b);
  const int k = std::max(g.mode, g.mode_b);
  // The coupling is symmetric in (j, k), so ordering does not matter.
  Mat S = Mat::Identity(2 * n, 2 * n);
  const int idx[2] = {j, k};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      S.block<2, 2>(2 * idx[a], 2 * idx[b]) = block.block<2, 2>(2 * a, 2 * b);
  return S;
}

Mat embed_single_mode(const Mat& S2, int j, int n) {
  require(S2.rows() == 2 && S2.cols() == 2, Errc::invalid_argument,
          "embed_single_mode: block must be 2x2");
  require(j >= 0 && j < n, Errc::invalid_argument, "embed_single_mode: mode index out of range");
  Mat S = Mat::Identity(2 * n, 2 * n);
  S.block<2, 2>(2 * j, 2 * j) = S2;
  return S;
}

Factorization factorize(const Mat& S, double sing_tol) {
  const int n = static_cast<int>(S.rows()) / 2;
  require(is_symplectic(S, 1e-8), Errc::invalid_argument, "factorize: input is not symplectic");

  // Candidate global-rotation angles; 0 first so a nonsingular S factors
  // trivially as (S, I).
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  std::vector<double> candidates = {0.0, M_PI / 2.0, M_PI / 3.0, M_PI / 5.0};
  for (int k = 1; k <= 24; ++k) candidates.push_back(std::fmod(k * golden, 2.0 * M_PI));

  for (double theta0 : candidates) {
    Mat second = Mat::Identity(2 * n, 2 * n);
    for (int m = 0; m < n; ++m) second.block<2, 2>(2 * m, 2 * m) = rotation2(theta0);
    Mat prime = S * second.transpose();  // R(theta0)^{-1} = R(theta0)^T
    const double dp = std::abs((prime + Mat::Identity(2 * n, 2 * n)).determinant());
    const double ds = std::abs((second + Mat::Identity(2 * n, 2 * n)).determinant());
    if (dp > sing_tol && ds > sing_tol && !has_eigenvalue_minus_one(prime, sing_tol) &&
        !has_eigenvalue_minus_one(second, sing_tol))
      return Factorization{prime, second, theta0};
  }
  fail(Errc::factorization_failed, "factorize: no admissible global rotation found");
}

RandomSymplectic random_symplectic(int n, std::uint64_t seed, int n_legs, double zeta_max,
                                   double s_max) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    return lo + (hi - lo) * u;
  };
  if (n_legs < 0) n_legs = 2 * n;

  RandomSymplectic out;
  out.S = Mat::Identity(2 * n, 2 * n);
  for (int i = 0; i < n_legs; ++i) {
    const int kind_max = (n >= 2) ? 5 : 4;
    const int kind = static_cast<int>(rng() % kind_max);
    const int mode = static_cast<int>(rng() % n);
    GeneratorSpec g;
    switch (kind) {
      case 0:
        g = GeneratorSpec::rotation(mode, uniform(0.0, 2.0 * M_PI));
        break;
      case 1:
        g = GeneratorSpec::squeeze(mode, uniform(0.0, zeta_max), uniform(0.0, 2.0 * M_PI));
        break;
      case 2:
        g = GeneratorSpec::shear_position(mode, uniform(0.0, s_max));
        break;
      case 3:
        g = GeneratorSpec::shear_momentum(mode, uniform(0.0, s_max));
        break;
      default: {
        int other = static_cast<int>(rng() % (n - 1));
        if (other >= mode) ++other;
        g = GeneratorSpec::two_mode_rotation(mode, other, uniform(0.0, 2.0 * M_PI));
        break;
      }
    }
    out.legs.push_back(g);
    out.S = generator_matrix(g, n) * out.S;  // later legs act on the left
  }
  return out;
}

}  // namespace gqs
