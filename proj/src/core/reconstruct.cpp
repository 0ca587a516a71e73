#include "reconstruct.hpp"

#include <cmath>

namespace gqs {

namespace {

constexpr double kDenGuard = 1e-12;

void check_rotation_window(double theta, const char* who) {
  require(theta >= M_PI / 2.0 - 1e-9 && theta < M_PI - 1e-9, Errc::invalid_argument,
          std::string(who) + ": rotation angle must lie in [pi/2, pi)");
}

double guarded_tan2phi(double phi, const char* who) {
  const double c = std::cos(2.0 * phi);
  require(std::abs(c) > kDenGuard, Errc::ill_conditioned,
          std::string(who) + ": cos(2 phi) vanishes; change the evolution parameters");
  return std::sin(2.0 * phi) / c;
}

/// Solve the two-rotation linear system for (tau, beta). Each measured phase
/// contributes the row  4 t^2 sin(2phi) tau - 2 t cos(2phi) beta = sin(2phi)
/// with t = tan(theta/2); the row stays finite when tan(2phi) diverges.
struct TauBeta {
  double tau;
  double beta;
};
TauBeta solve_rotation_pair(double theta1, double phi1, double theta2, double phi2,
                            const char* who) {
  const double t1 = std::tan(theta1 / 2.0), t2 = std::tan(theta2 / 2.0);
  const double s1 = std::sin(2.0 * phi1), c1 = std::cos(2.0 * phi1);
  const double s2 = std::sin(2.0 * phi2), c2 = std::cos(2.0 * phi2);
  Eigen::Matrix2d A;
  A << 4.0 * t1 * t1 * s1, -2.0 * t1 * c1, 4.0 * t2 * t2 * s2, -2.0 * t2 * c2;
  const double det = A.determinant();
  const double scale = std::max({1.0, A.cwiseAbs().maxCoeff()});
  require(std::abs(det) > 1e-10 * scale * scale, Errc::degenerate_system,
          std::string(who) + ": rotation pair does not determine (tau, beta); "
                             "use distinct angles");
  const Eigen::Vector2d rhs(s1, s2);
  const Eigen::Vector2d x = A.inverse() * rhs;
  return TauBeta{x(0), x(1)};
}

void flag_block(SingleModeEstimate& est) {
  if (est.a <= 0.0 || est.b <= 0.0)
    est.warnings.push_back("diagonal entry <= 0 (phase noise beyond the valid window)");
  if (est.tau() < 0.25 - 1e-6)
    est.warnings.push_back("det V = " + std::to_string(est.tau()) +
                           " below the 1/4 uncertainty bound");
}

}  // namespace

Mat SingleModeEstimate::matrix() const {
  Mat V(2, 2);
  V << a, c, c, b;
  return V;
}

SingleModeEstimate strategy1(const Strategy1Inputs& in) {
  check_rotation_window(in.theta1, "strategy1");
  check_rotation_window(in.theta2, "strategy1");
  require(std::abs(in.theta1 - in.theta2) > 1e-9, Errc::degenerate_system,
          "strategy1: rotation angles must be distinct");
  require(in.zeta > 0.0, Errc::invalid_argument, "strategy1: squeeze parameter must be > 0");

  const TauBeta tb =
      solve_rotation_pair(in.theta1, in.phi_rot1, in.theta2, in.phi_rot2, "strategy1");
  const double u = std::tanh(in.zeta / 2.0);
  require(u > kDenGuard, Errc::ill_conditioned, "strategy1: tanh(zeta/2) too small");
  const double common = (1.0 + 4.0 * tb.tau * u * u);

  SingleModeEstimate est;
  est.strategy = 1;
  est.c = -common / (4.0 * u) * guarded_tan2phi(in.phi_sq_quad, "strategy1");
  const double gamma = common / (2.0 * u) * guarded_tan2phi(in.phi_sq_axis, "strategy1");
  est.a = (tb.beta - gamma) / 2.0;
  est.b = (tb.beta + gamma) / 2.0;
  flag_block(est);
  return est;
}

SingleModeEstimate strategy2(const Strategy2Inputs& in) {
  check_rotation_window(in.theta1, "strategy2");
  check_rotation_window(in.theta2, "strategy2");
  check_rotation_window(in.theta3, "strategy2");
  require(in.zeta > 0.0, Errc::invalid_argument, "strategy2: squeeze parameter must be > 0");

  const TauBeta tb =
      solve_rotation_pair(in.theta1, in.phi_rot1, in.theta2, in.phi_rot2, "strategy2");

  // Trace of the squeezed state from the third rotation: the real part of the
  // phase argument is fixed by tau, its imaginary part carries beta'.
  const double t3 = std::tan(in.theta3 / 2.0);
  const double re3 = 0.25 - tb.tau * t3 * t3;
  const double beta_prime = -2.0 * re3 * guarded_tan2phi(in.phi_rot3, "strategy2") / t3;

  const double sh = std::sinh(2.0 * in.zeta);
  require(std::abs(sh) > kDenGuard, Errc::ill_conditioned, "strategy2: sinh(2 zeta) too small");

  SingleModeEstimate est;
  est.strategy = 2;
  est.c = (tb.beta * std::cosh(2.0 * in.zeta) - beta_prime) / (2.0 * sh);

  // a and b are the roots of x^2 - beta x + (tau + c^2) = 0.
  double disc = tb.beta * tb.beta - 4.0 * (tb.tau + est.c * est.c);
  if (disc < -1e-9 * std::max(1.0, tb.beta * tb.beta))
    fail(Errc::inconsistent_phases,
         "strategy2: negative discriminant " + std::to_string(disc) +
             "; measured phases are mutually inconsistent");
  disc = std::max(disc, 0.0);
  const double root_hi = (tb.beta + std::sqrt(disc)) / 2.0;
  const double root_lo = (tb.beta - std::sqrt(disc)) / 2.0;

  if (in.phi_shear_p) {
    require(in.shear_s > 0.0, Errc::invalid_argument, "strategy2: shear parameter must be > 0");
    const double a_ref = -guarded_tan2phi(*in.phi_shear_p, "strategy2") / in.shear_s;
    const bool hi_first = std::abs(root_hi - a_ref) <= std::abs(root_lo - a_ref);
    est.a = hi_first ? root_hi : root_lo;
    est.b = hi_first ? root_lo : root_hi;
  } else {
    est.a = root_hi;
    est.b = root_lo;
    est.a_alt = root_lo;
    est.b_alt = root_hi;
    est.ambiguous = std::abs(root_hi - root_lo) > 1e-9;
    if (est.ambiguous)
      est.warnings.push_back(
          "a<->b assignment ambiguous; supply a momentum-shear phase to resolve it");
  }
  flag_block(est);
  return est;
}

SingleModeEstimate strategy3(const Strategy3Inputs& in) {
  require(in.zeta1 > 0.0 && in.zeta2 > 0.0, Errc::invalid_argument,
          "strategy3: squeeze parameters must be > 0");
  require(in.s > 0.0, Errc::invalid_argument, "strategy3: shear parameter must be > 0");
  require(in.phi_shear_q || in.phi_shear_p, Errc::invalid_argument,
          "strategy3: at least one shear phase is required");
  const double u1 = std::tanh(in.zeta1 / 2.0), u2 = std::tanh(in.zeta2 / 2.0);
  require(u1 > kDenGuard && u2 > kDenGuard, Errc::ill_conditioned,
          "strategy3: tanh(zeta/2) too small");
  require(std::abs(u1 - u2) > kDenGuard, Errc::degenerate_system,
          "strategy3: squeeze parameters must be distinct");

  SingleModeEstimate est;
  est.strategy = 3;

  // Quadrature-squeeze pair: rows 4 u^2 sin(2phi) tau + 4 u cos(2phi) c = -sin(2phi).
  const double s1 = std::sin(2.0 * in.phi_sq1), c1 = std::cos(2.0 * in.phi_sq1);
  const double s2 = std::sin(2.0 * in.phi_sq2), c2 = std::cos(2.0 * in.phi_sq2);
  double tau_sys = std::numeric_limits<double>::quiet_NaN();
  if (std::abs(s1) < 1e-9 && std::abs(s2) < 1e-9) {
    // Both phases vanish: c = 0 and the pair carries no information on tau.
    est.c = 0.0;
    est.warnings.push_back(
        "squeeze phases are zero (c = 0); tau is undetermined by the squeeze pair");
  } else {
    Eigen::Matrix2d A;
    A << 4.0 * u1 * u1 * s1, 4.0 * u1 * c1, 4.0 * u2 * u2 * s2, 4.0 * u2 * c2;
    const double det = A.determinant();
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    require(std::abs(det) > 1e-10 * scale * scale, Errc::ill_conditioned,
            "strategy3: squeeze pair nearly degenerate; change zeta values");
    const Eigen::Vector2d rhs(-s1, -s2);
    const Eigen::Vector2d x = A.inverse() * rhs;
    tau_sys = x(0);
    est.c = x(1);
  }

  std::optional<double> a_direct, b_direct;
  if (in.phi_shear_q) {
    const double b = -guarded_tan2phi(*in.phi_shear_q, "strategy3") / in.s;
    if (b <= 0.0)
      fail(Errc::invalid_estimate,
           "strategy3: position-shear phase gives b = " + std::to_string(b) + " <= 0");
    b_direct = b;
  }
  if (in.phi_shear_p) {
    const double a = -guarded_tan2phi(*in.phi_shear_p, "strategy3") / in.s;
    if (a <= 0.0)
      fail(Errc::invalid_estimate,
           "strategy3: momentum-shear phase gives a = " + std::to_string(a) + " <= 0");
    a_direct = a;
  }

  if (a_direct && b_direct) {
    est.a = *a_direct;
    est.b = *b_direct;
    if (std::isfinite(tau_sys) &&
        std::abs(est.tau() - tau_sys) > 1e-6 * std::max(1.0, std::abs(tau_sys)))
      est.warnings.push_back("tau from the squeeze pair (" + std::to_string(tau_sys) +
                             ") disagrees with ab - c^2 (" + std::to_string(est.tau()) + ")");
  } else {
    require(std::isfinite(tau_sys), Errc::ill_conditioned,
            "strategy3: tau undetermined and only one shear supplied; add the "
            "complementary shear phase");
    if (b_direct) {
      est.b = *b_direct;
      est.a = (tau_sys + est.c * est.c) / est.b;
    } else {
      est.a = *a_direct;
      est.b = (tau_sys + est.c * est.c) / est.a;
    }
  }
  flag_block(est);
  return est;
}

EntanglementEstimate entanglement_from_two_rotations(double phi_rot1, double phi_rot2,
                                                     double theta1, double theta2, double hbar) {
  check_rotation_window(theta1, "entanglement_from_two_rotations");
  check_rotation_window(theta2, "entanglement_from_two_rotations");
  const TauBeta tb =
      solve_rotation_pair(theta1, phi_rot1, theta2, phi_rot2, "entanglement_from_two_rotations");
  EntanglementEstimate out;
  out.tau = tb.tau;
  if (tb.tau <= 0.0)
    fail(Errc::invalid_estimate, "entanglement_from_two_rotations: nonpositive tau");
  if (tb.tau < 0.25 - 1e-6)
    out.warning = "tau below 1/4: phase noise or nonpure global state";
  out.value = 0.5 * std::log(tb.tau) - std::log(hbar / 2.0);
  return out;
}

IntermodalResult recover_intermodal(int n, int j, int k, const SingleModeReconstructor& singles,
                                    double cross_tol) {
  require(j != k, Errc::invalid_argument, "recover_intermodal: modes must differ");
  require(j >= 0 && j < n && k >= 0 && k < n, Errc::invalid_argument,
          "recover_intermodal: mode index out of range");
  Mat J2(2, 2);
  J2 << 0, 1, -1, 0;

  // Pass 1: two-mode rotation alone; its reduced blocks fix w, y and predict v - z.
  const MetaplecticEvolution pre1 =
      MetaplecticEvolution::single(n, GeneratorSpec::two_mode_rotation(j, k, M_PI / 2.0));
  const Mat Vpj = singles(j, pre1);
  const Mat Vpk = singles(k, pre1);
  const Mat G = Vpj * J2 - J2 * Vpk;

  // Pass 2: rotation by pi/2 on mode j first, then the two-mode rotation.
  const MetaplecticEvolution pre2(
      n, {GeneratorSpec::rotation(j, M_PI / 2.0), GeneratorSpec::two_mode_rotation(j, k, M_PI / 2.0)});
  const Mat Vsj = singles(j, pre2);
  const Mat Vsk = singles(k, pre2);
  const Mat H = J2 * Vsj * J2 + Vsk;

  IntermodalResult out;
  out.E = Mat(2, 2);
  const double w = 0.5 * G(0, 1);
  const double y = 0.5 * G(1, 0);
  const double v = -0.5 * H(0, 0);
  const double z = -0.5 * H(1, 1);
  out.E << v, w, y, z;

  const double vz_gap = std::abs(G(0, 0) - (v - z));
  if (vz_gap > cross_tol)
    out.warnings.push_back("pass disagreement on v - z: " + std::to_string(G(0, 0)) + " vs " +
                           std::to_string(v - z));
  const double wy_gap = std::abs(-H(0, 1) - (w + y));
  if (wy_gap > cross_tol)
    out.warnings.push_back("pass disagreement on w + y: " + std::to_string(-H(0, 1)) + " vs " +
                           std::to_string(w + y));
  return out;
}

double ReconstructionReport::max_abs_error() const {
  if (!V_true) return std::numeric_limits<double>::quiet_NaN();
  return (V_est - *V_true).cwiseAbs().maxCoeff();
}

ReconstructionReport assemble(int n, const std::vector<Mat>& singles,
                              const std::map<std::pair<int, int>, Mat>& pairs) {
  require(n >= 1, Errc::invalid_argument, "assemble: mode count must be >= 1");
  std::string gaps;
  if (static_cast<int>(singles.size()) != n)
    gaps += "expected " + std::to_string(n) + " single-mode blocks, got " +
            std::to_string(singles.size()) + "; ";
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      if (!pairs.count({j, k})) gaps += "missing pair (" + std::to_string(j) + "," + std::to_string(k) + "); ";
  require(gaps.empty(), Errc::incomplete_input, "assemble: " + gaps);

  ReconstructionReport rep;
  rep.n = n;
  rep.V_est = Mat::Zero(2 * n, 2 * n);
  rep.sigma = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    require(singles[j].rows() == 2 && singles[j].cols() == 2, Errc::invalid_argument,
            "assemble: single-mode block must be 2x2");
    rep.V_est.block<2, 2>(2 * j, 2 * j) = 0.5 * (singles[j] + singles[j].transpose());
  }
  for (const auto& [jk, E] : pairs) {
    rep.V_est.block<2, 2>(2 * jk.first, 2 * jk.second) = E;
    rep.V_est.block<2, 2>(2 * jk.second, 2 * jk.first) = E.transpose();
  }
  rep.bona_fide_slack_est = bona_fide_slack(rep.V_est);
  if (rep.bona_fide_slack_est < -1e-7)
    rep.warnings.push_back("assembled matrix violates the uncertainty bound by " +
                           std::to_string(-rep.bona_fide_slack_est));
  return rep;
}

namespace {

/// Phase measurement bookkeeping for the pipeline.
class PhaseMeter {
 public:
  PhaseMeter(const GaussianState& state, const PipelineOptions& opt)
      : state_(state), opt_(opt) {}

  /// Measure arg Tr(rho' M) with rho' the state after `pre`; records a sample.
  PhaseEstimate measure(const MetaplecticEvolution& pre, const GeneratorSpec& cond,
                        const std::string& tag) {
    const MetaplecticEvolution cond_evo = MetaplecticEvolution::single(state_.modes(), cond);
    const PhaseEstimate est = estimate_phase(state_, pre, cond_evo, opt_.shots,
                                             splitmix64(opt_.seed + 0x100 * (++counter_)),
                                             opt_.magnitude_floor);
    PhaseSample sample{pre,
                       cond_evo,
                       cond.is_two_mode() ? std::vector<int>{cond.mode, cond.mode_b}
                                          : std::vector<int>{cond.mode},
                       est.phi_hat,
                       est.sigma_phi,
                       est.shots,
                       est.re_hat,
                       est.im_hat,
                       est.magnitude_hat,
                       tag};
    samples_.push_back(std::move(sample));
    if (!est.reliable)
      warnings_.push_back(tag + ": trace magnitude " + std::to_string(est.magnitude_hat) +
                          " below the reliability floor");
    return est;
  }

  std::vector<PhaseSample>& samples() { return samples_; }
  std::vector<std::string>& warnings() { return warnings_; }

 private:
  const GaussianState& state_;
  const PipelineOptions& opt_;
  long long counter_ = 0;
  std::vector<PhaseSample> samples_;
  std::vector<std::string> warnings_;
};

struct BlockEstimate {
  SingleModeEstimate est;
  Eigen::Vector3d sigma_abc = Eigen::Vector3d::Zero();  // standard errors of (a, b, c)
  std::vector<double> rot_phis;                         // rotation phases (strategies 1, 2)
  std::vector<double> rot_sigmas;
};

/// Invert one strategy from measured phases; the estimator Jacobian is taken
/// by central differences to propagate the per-phase errors.
BlockEstimate reconstruct_block(PhaseMeter& meter, int mode, const MetaplecticEvolution& pre,
                                const PipelineOptions& opt, const std::string& prefix) {
  std::vector<double> phis, sigmas;
  std::function<SingleModeEstimate(const std::vector<double>&)> invert;

  if (opt.strategy == 1) {
    const auto r1 = meter.measure(pre, GeneratorSpec::rotation(mode, opt.theta1), prefix + "/rot1");
    const auto r2 = meter.measure(pre, GeneratorSpec::rotation(mode, opt.theta2), prefix + "/rot2");
    const auto zq =
        meter.measure(pre, GeneratorSpec::squeeze(mode, opt.zeta, M_PI / 2.0), prefix + "/sq_quad");
    const auto z0 = meter.measure(pre, GeneratorSpec::squeeze(mode, opt.zeta, 0.0), prefix + "/sq_axis");
    phis = {r1.phi_hat, r2.phi_hat, zq.phi_hat, z0.phi_hat};
    sigmas = {r1.sigma_phi, r2.sigma_phi, zq.sigma_phi, z0.sigma_phi};
    invert = [opt](const std::vector<double>& p) {
      Strategy1Inputs in;
      in.theta1 = opt.theta1;
      in.theta2 = opt.theta2;
      in.zeta = opt.zeta;
      in.phi_rot1 = p[0];
      in.phi_rot2 = p[1];
      in.phi_sq_quad = p[2];
      in.phi_sq_axis = p[3];
      return strategy1(in);
    };
  } else if (opt.strategy == 2) {
    const auto r1 = meter.measure(pre, GeneratorSpec::rotation(mode, opt.theta1), prefix + "/rot1");
    const auto r2 = meter.measure(pre, GeneratorSpec::rotation(mode, opt.theta2), prefix + "/rot2");
    const MetaplecticEvolution pre_sq = pre.then(GeneratorSpec::squeeze(mode, opt.zeta, 0.0));
    const auto r3 =
        meter.measure(pre_sq, GeneratorSpec::rotation(mode, opt.theta3), prefix + "/rot3_squeezed");
    const auto pm =
        meter.measure(pre, GeneratorSpec::shear_momentum(mode, opt.s), prefix + "/shear_p");
    phis = {r1.phi_hat, r2.phi_hat, r3.phi_hat, pm.phi_hat};
    sigmas = {r1.sigma_phi, r2.sigma_phi, r3.sigma_phi, pm.sigma_phi};
    invert = [opt](const std::vector<double>& p) {
      Strategy2Inputs in;
      in.theta1 = opt.theta1;
      in.theta2 = opt.theta2;
      in.theta3 = opt.theta3;
      in.zeta = opt.zeta;
      in.shear_s = opt.s;
      in.phi_rot1 = p[0];
      in.phi_rot2 = p[1];
      in.phi_rot3 = p[2];
      in.phi_shear_p = p[3];
      return strategy2(in);
    };
  } else if (opt.strategy == 3) {
    const auto z1 =
        meter.measure(pre, GeneratorSpec::squeeze(mode, opt.zeta1, M_PI / 2.0), prefix + "/sq1");
    const auto z2 =
        meter.measure(pre, GeneratorSpec::squeeze(mode, opt.zeta2, M_PI / 2.0), prefix + "/sq2");
    const auto pf =
        meter.measure(pre, GeneratorSpec::shear_position(mode, opt.s), prefix + "/shear_q");
    phis = {z1.phi_hat, z2.phi_hat, pf.phi_hat};
    sigmas = {z1.sigma_phi, z2.sigma_phi, pf.sigma_phi};
    const bool both = opt.strategy3_both_shears;
    if (both) {
      const auto pm =
          meter.measure(pre, GeneratorSpec::shear_momentum(mode, opt.s), prefix + "/shear_p");
      phis.push_back(pm.phi_hat);
      sigmas.push_back(pm.sigma_phi);
    }
    invert = [opt, both](const std::vector<double>& p) {
      Strategy3Inputs in;
      in.zeta1 = opt.zeta1;
      in.zeta2 = opt.zeta2;
      in.s = opt.s;
      in.phi_sq1 = p[0];
      in.phi_sq2 = p[1];
      in.phi_shear_q = p[2];
      if (both) in.phi_shear_p = p[3];
      return strategy3(in);
    };
  } else {
    fail(Errc::invalid_argument, "run_pipeline: strategy must be 1, 2 or 3");
  }

  BlockEstimate out;
  out.est = invert(phis);
  if (opt.strategy != 3) {
    out.rot_phis = {phis[0], phis[1]};
    out.rot_sigmas = {sigmas[0], sigmas[1]};
  }
  for (auto& w : out.est.warnings) w = prefix + ": " + w;

  if (opt.shots > 0) {
    // First-order error propagation through the inversion.
    Eigen::Vector3d var = Eigen::Vector3d::Zero();
    for (size_t k = 0; k < phis.size(); ++k) {
      if (sigmas[k] <= 0.0) continue;
      const double h = std::max(1e-7, 0.05 * sigmas[k]);
      auto eval = [&](double delta) {
        std::vector<double> p = phis;
        p[k] += delta;
        const SingleModeEstimate e = invert(p);
        return Eigen::Vector3d(e.a, e.b, e.c);
      };
      Eigen::Vector3d grad;
      try {
        grad = (eval(h) - eval(-h)) / (2.0 * h);
      } catch (const Error&) {
        grad.setZero();  // perturbed inversion left the valid window
      }
      var += (grad.array().square() * sigmas[k] * sigmas[k]).matrix();
    }
    out.sigma_abc = var.cwiseSqrt();
  }
  return out;
}

}  // namespace

ReconstructionReport run_pipeline(const GaussianState& truth, const PipelineOptions& opt) {
  const int n = truth.modes();
  std::vector<std::string> pre_warnings;
  GaussianState state = truth;
  if (!truth.zero_mean()) {
    state = translate_to_zero(truth);
    pre_warnings.push_back("input state translated to zero mean before reconstruction");
  }

  PhaseMeter meter(state, opt);
  const MetaplecticEvolution no_pre = MetaplecticEvolution::identity(n);

  std::vector<Mat> singles(n);
  std::vector<Eigen::Vector3d> single_sigmas(n, Eigen::Vector3d::Zero());
  std::vector<BlockEstimate> blocks;
  for (int i = 0; i < n; ++i) {
    BlockEstimate blk = reconstruct_block(meter, i, no_pre, opt, "mode" + std::to_string(i));
    singles[i] = blk.est.matrix();
    single_sigmas[i] = blk.sigma_abc;
    blocks.push_back(std::move(blk));
  }

  std::map<std::pair<int, int>, Mat> pairs;
  std::map<std::pair<int, int>, Eigen::Matrix2d> pair_sigmas;
  std::vector<std::string> pair_warnings;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      std::map<std::pair<int, const MetaplecticEvolution*>, BlockEstimate> cache;
      std::vector<BlockEstimate> pass_blocks;
      auto singles_fn = [&](int mode, const MetaplecticEvolution& pre) {
        BlockEstimate blk = reconstruct_block(
            meter, mode, pre, opt,
            "pair" + std::to_string(j) + std::to_string(k) + "/mode" + std::to_string(mode));
        pass_blocks.push_back(blk);
        return blk.est.matrix();
      };
      IntermodalResult res = recover_intermodal(n, j, k, singles_fn,
                                                opt.shots > 0 ? 1e2 : 1e-6);
      pairs[{j, k}] = res.E;
      for (auto& w : res.warnings)
        pair_warnings.push_back("pair(" + std::to_string(j) + "," + std::to_string(k) + "): " + w);

      // w = (a'_j - b'_k)/2, y = (a'_k - b'_j)/2, v = (b''_j - a''_k)/2,
      // z = (a''_j - b''_k)/2: propagate the block errors linearly.
      if (opt.shots > 0 && pass_blocks.size() == 4) {
        const auto& s1j = pass_blocks[0].sigma_abc;  // pass 1, mode j
        const auto& s1k = pass_blocks[1].sigma_abc;
        const auto& s2j = pass_blocks[2].sigma_abc;
        const auto& s2k = pass_blocks[3].sigma_abc;
        Eigen::Matrix2d sg;
        sg(0, 0) = 0.5 * std::hypot(s2j(1), s2k(0));  // v
        sg(0, 1) = 0.5 * std::hypot(s1j(0), s1k(1));  // w
        sg(1, 0) = 0.5 * std::hypot(s1k(0), s1j(1));  // y
        sg(1, 1) = 0.5 * std::hypot(s2j(0), s2k(1));  // z
        pair_sigmas[{j, k}] = sg;
      }
    }
  }

  ReconstructionReport rep = assemble(n, singles, pairs);
  rep.hbar = truth.hbar();
  rep.V_true = truth.cov();
  for (int i = 0; i < n; ++i) {
    rep.sigma(2 * i, 2 * i) = single_sigmas[i](0);
    rep.sigma(2 * i + 1, 2 * i + 1) = single_sigmas[i](1);
    rep.sigma(2 * i, 2 * i + 1) = rep.sigma(2 * i + 1, 2 * i) = single_sigmas[i](2);
  }
  for (const auto& [jk, sg] : pair_sigmas) {
    rep.sigma.block<2, 2>(2 * jk.first, 2 * jk.second) = sg;
    rep.sigma.block<2, 2>(2 * jk.second, 2 * jk.first) = sg.transpose();
  }

  // Per-mode Renyi-2 figures: from the two-rotation phases when the strategy
  // measured rotations, otherwise from the reconstructed block determinant.
  for (int i = 0; i < n; ++i) {
    double E = std::numeric_limits<double>::quiet_NaN(), sigE = 0.0;
    try {
      if (!blocks[i].rot_phis.empty()) {
        const auto ent = entanglement_from_two_rotations(blocks[i].rot_phis[0],
                                                         blocks[i].rot_phis[1], opt.theta1,
                                                         opt.theta2, truth.hbar());
        E = ent.value;
        if (ent.warning) rep.warnings.push_back("mode" + std::to_string(i) + ": " + *ent.warning);
        if (opt.shots > 0) {
          const double h = 1e-6;
          for (int q = 0; q < 2; ++q) {
            auto at = [&](double d0, double d1) {
              return entanglement_from_two_rotations(blocks[i].rot_phis[0] + d0,
                                                     blocks[i].rot_phis[1] + d1, opt.theta1,
                                                     opt.theta2, truth.hbar())
                  .value;
            };
            const double g = (q == 0) ? (at(h, 0) - at(-h, 0)) / (2 * h)
                                      : (at(0, h) - at(0, -h)) / (2 * h);
            sigE += g * g * blocks[i].rot_sigmas[q] * blocks[i].rot_sigmas[q];
          }
          sigE = std::sqrt(sigE);
        }
      } else {
        const double tau = blocks[i].est.tau();
        if (tau > 0.0) E = 0.5 * std::log(tau) - std::log(truth.hbar() / 2.0);
      }
    } catch (const Error& e) {
      rep.warnings.push_back("mode" + std::to_string(i) + " entanglement: " + e.what());
    }
    rep.mode_entanglement.push_back(E);
    rep.mode_entanglement_sigma.push_back(sigE);
  }

  rep.samples = std::move(meter.samples());
  rep.warnings.insert(rep.warnings.begin(), pre_warnings.begin(), pre_warnings.end());
  for (const auto& b : blocks)
    rep.warnings.insert(rep.warnings.end(), b.est.warnings.begin(), b.est.warnings.end());
  rep.warnings.insert(rep.warnings.end(), pair_warnings.begin(), pair_warnings.end());
  rep.warnings.insert(rep.warnings.end(), meter.warnings().begin(), meter.warnings().end());
  return rep;
}

}  // namespace gqs
