#include "phase.hpp"

#include <cmath>

namespace gqs {

MetaplecticEvolution::MetaplecticEvolution(int n, std::vector<GeneratorSpec> steps)
    : n_(n), steps_(std::move(steps)) {
  require(n_ >= 1, Errc::invalid_argument, "MetaplecticEvolution: mode count must be >= 1");
  for (const auto& g : steps_) g.validate(n_);
}

Mat MetaplecticEvolution::matrix() const {
  Mat S = Mat::Identity(2 * n_, 2 * n_);
  for (const auto& g : steps_) S = generator_matrix(g, n_) * S;
  return S;
}

Mat MetaplecticEvolution::partial_matrix(int leg, double u) const {
  Mat S = Mat::Identity(2 * n_, 2 * n_);
  for (int i = 0; i < leg && i < static_cast<int>(steps_.size()); ++i)
    S = generator_matrix(steps_[i], n_) * S;
  if (leg < static_cast<int>(steps_.size()) && u > 0.0)
    S = generator_matrix(steps_[leg].scaled(u), n_) * S;
  return S;
}

MetaplecticEvolution MetaplecticEvolution::then(const MetaplecticEvolution& later) const {
  require(later.n_ == n_, Errc::dimension_mismatch, "then: mode counts differ");
  std::vector<GeneratorSpec> steps = steps_;
  steps.insert(steps.end(), later.steps_.begin(), later.steps_.end());
  return MetaplecticEvolution(n_, std::move(steps));
}

MetaplecticEvolution MetaplecticEvolution::then(const GeneratorSpec& later) const {
  std::vector<GeneratorSpec> steps = steps_;
  steps.push_back(later);
  return MetaplecticEvolution(n_, std::move(steps));
}

double principal_arg(Complex z) {
  const double x = z.real(), y = z.imag();
  require(x != 0.0 || y != 0.0, Errc::undefined_argument, "principal_arg: argument of zero");
  if (y == 0.0) return (x > 0.0) ? 0.0 : M_PI;  // covers signed zero, arg(-1) = +pi
  if (x == 0.0) return (y > 0.0) ? M_PI / 2.0 : -M_PI / 2.0;
  return std::atan2(y, x);
}

double wrap_angle(double phi) {
  phi = std::fmod(phi, 2.0 * M_PI);
  if (phi > M_PI) phi -= 2.0 * M_PI;
  if (phi <= -M_PI) phi += 2.0 * M_PI;
  return phi;
}

namespace {

/// Square root with positive real part; on the cut (purely imaginary result)
/// the positive imaginary branch is taken.
Complex sqrt_pos_re(Complex z) {
  Complex w = std::sqrt(z);
  if (w.real() < 0.0) w = -w;
  if (std::abs(w.real()) <= 1e-12 * std::abs(w) && w.imag() < 0.0) w = -w;
  return w;
}

Complex ipow(int nu) {
  static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[((nu % 4) + 4) % 4];
}

/// Wigner-symbol base value 1 / sqrt(|det(S+I)| det(I/2 + i V C_S)); the
/// physical trace is i^{nu+} times this.
Complex wigner_base(const Mat& V, const Mat& S) {
  const int two_n = static_cast<int>(S.rows());
  const double dp = std::abs((S + Mat::Identity(two_n, two_n)).determinant());
  const Mat C = cayley(S);
  CMat A = 0.5 * CMat::Identity(two_n, two_n) + Complex(0, 1) * (V * C).cast<Complex>();
  const Complex det = Eigen::PartialPivLU<CMat>(A).determinant();
  return 1.0 / sqrt_pos_re(dp * det);
}

/// Weyl-symbol base value 1 / sqrt(|det(S-I)| det(V - (i/2) C_S^{-1})).
Complex weyl_base(const Mat& V, const Mat& S) {
  const int two_n = static_cast<int>(S.rows());
  const double dm = std::abs((S - Mat::Identity(two_n, two_n)).determinant());
  const Mat Ci = cayley_inverse(S);
  CMat A = V.cast<Complex>() - Complex(0, 0.5) * Ci.cast<Complex>();
  const Complex det = Eigen::PartialPivLU<CMat>(A).determinant();
  return 1.0 / sqrt_pos_re(dm * det);
}

struct RepValue {
  Complex base;
  bool is_wigner;
};

/// Evaluate whichever symbol is better conditioned at S, for the tracker.
bool eval_rep(const Mat& V, const Mat& S, RepValue& out) {
  const int two_n = static_cast<int>(S.rows());
  const Mat I = Mat::Identity(two_n, two_n);
  const double dp = std::abs((S + I).determinant());
  const double dm = std::abs((S - I).determinant());
  const double floor = 1e-9;
  if (dp < floor && dm < floor) return false;
  out.is_wigner = dp >= dm;
  out.base = out.is_wigner ? wigner_base(V, S) : weyl_base(V, S);
  return true;
}

/// Choose the power of i that keeps the tracked trace continuous. Returns -1
/// when no candidate is close enough (step too coarse).
int pick_branch(Complex base, Complex f_prev) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const double d = std::abs(ipow(k) * base - f_prev);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  // Candidates are spaced |base| sqrt(2) apart; accept only well inside.
  if (best_d > 0.45 * std::abs(base)) return -1;
  return best;
}

}  // namespace

CZIndices cz_indices_rotation(double theta) {
  theta = std::fmod(theta, 4.0 * M_PI);
  if (theta < 0.0) theta += 4.0 * M_PI;
  const double w = 1e-9;
  CZIndices idx;
  auto near = [&](double x) { return std::abs(theta - x) < w; };

  idx.valid_plus = !(near(M_PI) || near(3.0 * M_PI));
  if (idx.valid_plus) idx.nu_plus = (theta > M_PI && theta < 3.0 * M_PI) ? 2 : 0;

  idx.valid_minus = !(near(0.0) || near(2.0 * M_PI) || near(4.0 * M_PI));
  if (idx.valid_minus) idx.nu_minus = (theta < 2.0 * M_PI) ? 3 : 1;
  return idx;
}

CZIndices track_indices(const std::function<Mat(double)>& path, int n, CZIndices start,
                        int coarse_steps) {
  const Mat V0 = 0.5 * Mat::Identity(2 * n, 2 * n);  // vacuum reference state
  Complex f = start.valid_plus ? ipow(start.nu_plus) * wigner_base(V0, path(0.0))
                               : ipow(start.nu_minus) * weyl_base(V0, path(0.0));

  double t = 0.0;
  double step = 1.0 / coarse_steps;
  const double min_step = 1e-7;
  while (t < 1.0 - 1e-15) {
    double tn = std::min(1.0, t + step);
    RepValue rep;
    Mat S = path(tn);
    bool ok = eval_rep(V0, S, rep);
    if (!ok && tn < 1.0) {
      // Both symbols singular at this sample; nudge the sample point.
      tn = std::min(1.0, tn + 0.37 * step);
      S = path(tn);
      ok = eval_rep(V0, S, rep);
    }
    int k = ok ? pick_branch(rep.base, f) : -1;
    if (k < 0) {
      require(step > min_step, Errc::internal, "track_indices: continuity tracking failed");
      step *= 0.5;
      continue;
    }
    f = ipow(k) * rep.base;
    t = tn;
    if (step < 1.0 / coarse_steps) step = std::min(step * 2.0, 1.0 / coarse_steps);
  }

  // Resolve both indices at the endpoint against the tracked value.
  const Mat S_end = path(1.0);
  const int two_n = 2 * n;
  const Mat I = Mat::Identity(two_n, two_n);
  CZIndices out;
  if (std::abs((S_end + I).determinant()) > 1e-9) {
    const int k = pick_branch(wigner_base(V0, S_end), f);
    if (k >= 0) {
      out.nu_plus = k;
      out.valid_plus = true;
    }
  }
  if (std::abs((S_end - I).determinant()) > 1e-9) {
    const int k = pick_branch(weyl_base(V0, S_end), f);
    if (k >= 0) {
      out.nu_minus = k;
      out.valid_minus = true;
    }
  }
  require(out.valid_plus || out.valid_minus, Errc::internal,
          "track_indices: endpoint has no nonsingular symbol");
  return out;
}

namespace {

CZIndices track_evolution(const MetaplecticEvolution& evo) {
  const int legs = static_cast<int>(evo.steps().size());
  auto path = [&evo, legs](double t) {
    const double s = t * legs;
    int leg = std::min(legs - 1, static_cast<int>(std::floor(s)));
    return evo.partial_matrix(leg, s - leg);
  };
  CZIndices start;
  start.nu_plus = 0;
  start.valid_plus = true;
  return track_indices(path, evo.modes(), start, 96 * std::max(1, legs));
}

}  // namespace

CZIndices cz_indices(const MetaplecticEvolution& evo) {
  if (evo.empty()) {
    CZIndices idx;
    idx.nu_plus = 0;
    idx.valid_plus = true;
    return idx;
  }
  if (evo.steps().size() == 1) {
    const GeneratorSpec& g = evo.steps().front();
    switch (g.kind) {
      case GeneratorKind::rotation:
        return cz_indices_rotation(g.parameter);
      case GeneratorKind::squeeze: {
        CZIndices idx;
        idx.nu_plus = idx.nu_minus = 0;
        idx.valid_plus = true;
        idx.valid_minus = std::abs(g.parameter) > 1e-9;
        return idx;
      }
      case GeneratorKind::shear_position:
      case GeneratorKind::shear_momentum: {
        CZIndices idx;
        idx.nu_plus = 0;
        idx.valid_plus = true;
        idx.valid_minus = false;  // det(S - I) = 0 for every shear
        return idx;
      }
      case GeneratorKind::two_mode_rotation:
        if (std::abs(g.parameter) < 2.0 * M_PI - 1e-9 && std::abs(g.parameter) > 1e-9) {
          CZIndices idx;
          idx.nu_plus = 0;
          idx.valid_plus = true;
          // The Weyl index is rarely needed here; fall through to tracking
          // when a caller requires it.
          idx.valid_minus = false;
          return idx;
        }
        break;
    }
  }
  return track_evolution(evo);
}

namespace {

void check_trace_inputs(const GaussianState& state, const MetaplecticEvolution& evo) {
  require(evo.modes() == state.modes(), Errc::dimension_mismatch,
          "trace_rho_M: evolution and state mode counts differ");
  require(state.zero_mean(), Errc::invalid_state,
          "trace_rho_M: state must have zero mean (translate first)");
}

Complex wigner_trace(const GaussianState& state, const MetaplecticEvolution& evo, const Mat& S) {
  CZIndices idx = cz_indices(evo);
  if (!idx.valid_plus) idx = track_evolution(evo);
  require(idx.valid_plus, Errc::internal, "trace_rho_M: Wigner index unavailable");
  return ipow(idx.nu_plus) * wigner_base(state.cov(), S);
}

Complex weyl_trace(const GaussianState& state, const MetaplecticEvolution& evo, const Mat& S) {
  CZIndices idx = cz_indices(evo);
  if (!idx.valid_minus) idx = track_evolution(evo);
  require(idx.valid_minus, Errc::internal, "trace_rho_M: Weyl index unavailable");
  return ipow(idx.nu_minus) * weyl_base(state.cov(), S);
}

Complex factorized_trace(const GaussianState& state, const MetaplecticEvolution& evo,
                         const Mat& S) {
  const int n = state.modes();
  const int two_n = 2 * n;
  const Factorization fac = factorize(S);

  // Index of the global-rotation factor: one table entry per mode.
  const CZIndices rot = cz_indices_rotation(fac.theta0);
  require(rot.valid_plus, Errc::internal, "factorized_trace: singular rotation factor");
  const int nu_second = (rot.nu_plus * n) % 4;

  // Index of S' along the path that traverses the evolution and then peels
  // off the global rotation; the product of the two factor operators then
  // matches the operator fixed by the evolution's own path.
  const int legs = static_cast<int>(evo.steps().size());
  auto path = [&](double t) {
    if (t <= 0.5 && legs > 0) {
      const double s = 2.0 * t * legs;
      int leg = std::min(legs - 1, static_cast<int>(std::floor(s)));
      return evo.partial_matrix(leg, s - leg);
    }
    const double u = (legs > 0) ? (2.0 * t - 1.0) : t;
    Mat rot_u = Mat::Identity(two_n, two_n);
    for (int m = 0; m < n; ++m) rot_u.block<2, 2>(2 * m, 2 * m) = rotation2(-fac.theta0 * u);
    return (S * rot_u).eval();
  };
  CZIndices start;
  start.nu_plus = 0;
  start.valid_plus = true;
  const CZIndices prime = track_indices(path, n, start, 96 * std::max(2, legs + 1));
  require(prime.valid_plus, Errc::internal, "factorized_trace: S' index unavailable");

  const CMat V = state.cov().cast<Complex>();
  const CMat iJ2 = Complex(0, 0.5) * symplectic_form(n).cast<Complex>();
  const CMat Cp = Complex(0, 0.5) * cayley(fac.s_prime).cast<Complex>();
  const CMat Cs = Complex(0, 0.5) * cayley(fac.s_second).cast<Complex>();

  // Schur-complement form of the composed-symbol Gaussian integral, assembled
  // as one block determinant so pure states (singular V + iJ/2) are regular.
  CMat block(2 * two_n, 2 * two_n);
  block.topLeftCorner(two_n, two_n) = V + iJ2;
  block.topRightCorner(two_n, two_n) = V + Cs;
  block.bottomLeftCorner(two_n, two_n) = V + Cp;
  block.bottomRightCorner(two_n, two_n) = V - iJ2;
  const Complex det = Eigen::PartialPivLU<CMat>(block).determinant();

  const Mat I = Mat::Identity(two_n, two_n);
  const double dp = std::abs((fac.s_prime + I).determinant());
  const double ds = std::abs((fac.s_second + I).determinant());
  return ipow(prime.nu_plus + nu_second) / sqrt_pos_re(dp * ds * det);
}

}  // namespace

Complex trace_rho_M(const GaussianState& state, const MetaplecticEvolution& evo) {
  PhaseBranch branch;
  return trace_rho_M(state, evo, branch);
}

Complex trace_rho_M(const GaussianState& state, const MetaplecticEvolution& evo,
                    PhaseBranch& branch_out) {
  check_trace_inputs(state, evo);
  const Mat S = evo.matrix();
  const bool minus_one = has_eigenvalue_minus_one(S);
  const bool plus_one = has_eigenvalue_plus_one(S);
  if (!minus_one) {
    branch_out = PhaseBranch::wigner;
    return wigner_trace(state, evo, S);
  }
  if (!plus_one) {
    branch_out = PhaseBranch::weyl;
    return weyl_trace(state, evo, S);
  }
  branch_out = PhaseBranch::factorized;
  return factorized_trace(state, evo, S);
}

Complex trace_rho_M_weyl(const GaussianState& state, const MetaplecticEvolution& evo) {
  check_trace_inputs(state, evo);
  return weyl_trace(state, evo, evo.matrix());
}

Complex trace_rho_M_wigner(const GaussianState& state, const MetaplecticEvolution& evo) {
  check_trace_inputs(state, evo);
  return wigner_trace(state, evo, evo.matrix());
}

Complex trace_rho_M_factorized(const GaussianState& state, const MetaplecticEvolution& evo) {
  check_trace_inputs(state, evo);
  return factorized_trace(state, evo, evo.matrix());
}

TotalPhase total_phase(const GaussianState& state, const MetaplecticEvolution& evo) {
  TotalPhase out;
  const Complex t = trace_rho_M(state, evo, out.branch);
  out.phi = principal_arg(t);
  out.magnitude = std::abs(t);
  return out;
}

double phi_rotation(double a, double b, double c, double theta) {
  const double tau = a * b - c * c;
  require(tau >= 0.25 - 1e-9, Errc::invalid_argument, "phi_rotation: block violates det >= 1/4");
  double th = std::fmod(theta, 4.0 * M_PI);
  if (th < 0.0) th += 4.0 * M_PI;
  require(std::abs(th - M_PI) > 1e-9 && std::abs(th - 3.0 * M_PI) > 1e-9, Errc::invalid_argument,
          "phi_rotation: theta = pi, 3pi requires the Weyl branch of trace_rho_M");
  const CZIndices idx = cz_indices_rotation(th);
  const double t = std::tan(th / 2.0);
  const Complex z(0.25 - tau * t * t, 0.5 * (a + b) * t);
  return wrap_angle(M_PI / 2.0 * idx.nu_plus - 0.5 * principal_arg(z));
}

double phi_squeeze(double a, double b, double c, double zeta, double phi) {
  const double u = std::tanh(zeta / 2.0);
  const double tau = a * b - c * c;
  const Complex z(0.25 + tau * u * u, (0.5 * (a - b) * std::cos(phi) + c * std::sin(phi)) * u);
  return -0.5 * principal_arg(z);
}

double phi_shear_position(double b, double s) {
  require(s >= 0.0, Errc::invalid_argument, "phi_shear_position: s must be >= 0");
  return -0.5 * principal_arg(Complex(1.0, b * s));
}

double phi_shear_momentum(double a, double s) {
  require(s >= 0.0, Errc::invalid_argument, "phi_shear_momentum: s must be >= 0");
  return -0.5 * principal_arg(Complex(1.0, a * s));
}

}  // namespace gqs
