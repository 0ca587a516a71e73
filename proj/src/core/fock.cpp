#include "fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace gqs::fock {

FockSpace::FockSpace(int n, int cutoff, double hbar) : n_(n), cutoff_(cutoff), hbar_(hbar) {
  require(n >= 1 && n <= 2, Errc::unsupported, "FockSpace: only 1 or 2 modes supported");
  require(cutoff >= 2, Errc::invalid_argument, "FockSpace: cutoff must be >= 2");
  require(hbar > 0.0, Errc::invalid_argument, "FockSpace: hbar must be positive");
  dim_ = (n == 1) ? cutoff : cutoff * cutoff;
  a_ = CMat::Zero(cutoff, cutoff);
  for (int m = 1; m < cutoff; ++m) a_(m - 1, m) = std::sqrt(static_cast<double>(m));
}

CMat FockSpace::position() const {
  return std::sqrt(hbar_ / 2.0) * (a_ + a_.adjoint());
}

CMat FockSpace::momentum() const {
  return Complex(0, -1) * std::sqrt(hbar_ / 2.0) * (a_ - a_.adjoint());
}

CMat FockSpace::leg_unitary_single(const GeneratorSpec& g) const {
  const int c = cutoff_;
  switch (g.kind) {
    case GeneratorKind::rotation: {
      CMat u = CMat::Zero(c, c);
      for (int m = 0; m < c; ++m) u(m, m) = std::exp(Complex(0, -g.parameter * (m + 0.5)));
      return u;
    }
    case GeneratorKind::squeeze: {
      const CMat ad2 = (a_.adjoint() * a_.adjoint()).eval();
      CMat K = std::exp(Complex(0, g.phi)) * ad2 + std::exp(Complex(0, -g.phi)) * a_ * a_;
      Eigen::SelfAdjointEigenSolver<CMat> es(K);
      CVec ph(c);
      for (int m = 0; m < c; ++m)
        ph(m) = std::exp(Complex(0, -0.5 * g.parameter * es.eigenvalues()(m)));
      return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    }
    case GeneratorKind::shear_position: {
      // exp(+i (s/4) (a^dag - a)^2), i.e. exp(-i (s/2hbar) p^2).
      const CMat d = (a_.adjoint() - a_).eval();
      CMat K = -(d * d).eval();  // Hermitian, equals -(ad - a)^2 = (p^2)*2/hbar
      Eigen::SelfAdjointEigenSolver<CMat> es(K);
      CVec ph(c);
      for (int m = 0; m < c; ++m)
        ph(m) = std::exp(Complex(0, -0.25 * g.parameter * es.eigenvalues()(m)));
      return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    }
    case GeneratorKind::shear_momentum: {
      const CMat d = (a_.adjoint() + a_).eval();
      CMat K = (d * d).eval();
      Eigen::SelfAdjointEigenSolver<CMat> es(K);
      CVec ph(c);
      for (int m = 0; m < c; ++m)
        ph(m) = std::exp(Complex(0, -0.25 * g.parameter * es.eigenvalues()(m)));
      return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    }
    case GeneratorKind::two_mode_rotation:
      break;
  }
  fail(Errc::invalid_argument, "leg_unitary_single: not a single-mode leg");
}

const std::vector<FockSpace::Sector>& FockSpace::sectors() const {
  if (!sectors_.empty() || n_ == 1) return sectors_;
  const int c = cutoff_;
  for (int N = 0; N <= 2 * (c - 1); ++N) {
    Sector sec;
    const int lo = std::max(0, N - (c - 1));
    const int hi = std::min(N, c - 1);
    for (int m0 = lo; m0 <= hi; ++m0) sec.idx.push_back(m0 * c + (N - m0));
    const int d = static_cast<int>(sec.idx.size());
    // a_1^dag a_0 + a_0^dag a_1 restricted to the sector: real tridiagonal.
    Mat T = Mat::Zero(d, d);
    for (int r = 1; r < d; ++r) {
      const int m0 = lo + r;
      const double v = std::sqrt(static_cast<double>(m0) * (N - m0 + 1));
      T(r, r - 1) = T(r - 1, r) = v;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(T);
    sec.vecs = es.eigenvectors();
    sec.vals = es.eigenvalues();
    sectors_.push_back(std::move(sec));
  }
  return sectors_;
}

namespace {

using StridedMap = Eigen::Map<CMat, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;

}  // namespace

void FockSpace::apply_two_mode_rotation(double wt, CMat& A) const {
  require(n_ == 2, Errc::unsupported, "two-mode rotation needs a 2-mode space");
  const int c = cutoff_;
  const Eigen::Index cols = A.cols(), ld = A.outerStride();
  for (const Sector& sec : sectors()) {
    const int d = static_cast<int>(sec.idx.size());
    CVec ph(d);
    for (int r = 0; r < d; ++r) ph(r) = std::exp(Complex(0, -0.5 * wt * sec.vals(r)));
    // Sector rows sit at a fixed stride c-1 in the flat basis.
    StridedMap rows(A.data() + sec.idx.front(), d, cols,
                    Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(ld, c - 1));
    const CMat mixed = sec.vecs.cast<Complex>() *
                       (ph.asDiagonal() * (sec.vecs.transpose().cast<Complex>() * rows));
    rows = mixed;
  }
}

void FockSpace::apply_single(const CMat& u, int mode, CMat& A) const {
  const int c = cutoff_;
  if (n_ == 1) {
    A = (u * A).eval();
    return;
  }
  const Eigen::Index cols = A.cols(), ld = A.outerStride();
  if (mode == 0) {
    // Contract over the major index: for each minor value the slice over
    // (m0, col) is a strided c x cols matrix.
    for (int m1 = 0; m1 < c; ++m1) {
      StridedMap slice(A.data() + m1, c, cols,
                       Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(ld, c));
      const CMat mixed = u * slice;
      slice = mixed;
    }
  } else {
    for (int i = 0; i < c; ++i) {
      CMat mixed = u * A.middleRows(i * c, c);
      A.middleRows(i * c, c) = mixed;
    }
  }
}

void FockSpace::apply_leg(const GeneratorSpec& g, CMat& A) const {
  g.validate(n_);
  if (g.is_two_mode()) {
    apply_two_mode_rotation(g.parameter, A);
    return;
  }
  apply_single(leg_unitary_single(g), g.mode, A);
}

void FockSpace::apply_legs(const std::vector<GeneratorSpec>& legs, CMat& A) const {
  for (const auto& g : legs) apply_leg(g, A);
}

void FockSpace::apply_conj(const std::vector<GeneratorSpec>& legs, CMat& rho) const {
  // U rho U^dag = (U (U rho)^dag)^dag, so only left-applications are needed.
  apply_legs(legs, rho);
  rho = rho.adjoint().eval();
  apply_legs(legs, rho);
  rho = rho.adjoint().eval();
}

CMat FockSpace::embed(const CMat& op, int mode) const {
  if (n_ == 1) return op;
  CMat full = CMat::Identity(dim_, dim_);
  apply_single(op, mode, full);
  return full;
}

CMat thermal_density(const FockSpace& space, const Vec& nu) {
  require(nu.size() == space.modes(), Errc::dimension_mismatch,
          "thermal_density: one symplectic eigenvalue per mode");
  const int c = space.cutoff();
  auto weights = [&](double v) {
    const double nbar = v - 0.5;
    require(nbar >= -1e-9, Errc::invalid_state, "thermal_density: nu < 1/2");
    Vec w(c);
    const double r = (nbar <= 0.0) ? 0.0 : nbar / (1.0 + nbar);
    double cur = 1.0 / (1.0 + std::max(0.0, nbar));
    for (int m = 0; m < c; ++m) {
      w(m) = cur;
      cur *= r;
    }
    return w;
  };
  CMat rho = CMat::Zero(space.dim(), space.dim());
  if (space.modes() == 1) {
    const Vec w = weights(nu(0));
    for (int m = 0; m < c; ++m) rho(m, m) = w(m);
  } else {
    const Vec w0 = weights(nu(0)), w1 = weights(nu(1));
    for (int m0 = 0; m0 < c; ++m0)
      for (int m1 = 0; m1 < c; ++m1) rho(m0 * c + m1, m0 * c + m1) = w0(m0) * w1(m1);
  }
  return rho;
}

namespace {

/// Generic metaplectic synthesis: U = exp(-(i/2hbar) x^T H x) with
/// J H = log(S). Dense; used only when a state has no generator origin.
CMat metaplectic_from_symplectic(const FockSpace& space, const Mat& S) {
  const int n = space.modes();
  const int two_n = 2 * n;
  CMat logS = S.cast<Complex>().log();
  require(logS.imag().cwiseAbs().maxCoeff() < 1e-8, Errc::log_branch_failure,
          "metaplectic_from_symplectic: principal logarithm is not real "
          "(negative real eigenvalues); rebuild the state from generators");
  const Mat H = (-symplectic_form(n) * logS.real()).eval();
  require((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-8, Errc::log_branch_failure,
          "metaplectic_from_symplectic: Hessian not symmetric");

  std::vector<CMat> X(two_n);
  for (int m = 0; m < n; ++m) {
    X[2 * m] = space.embed(space.position(), m);
    X[2 * m + 1] = space.embed(space.momentum(), m);
  }
  CMat E = CMat::Zero(space.dim(), space.dim());
  for (int i = 0; i < two_n; ++i)
    for (int j = 0; j < two_n; ++j)
      if (H(i, j) != 0.0) E += (0.5 * H(i, j) / space.hbar()) * (X[i] * X[j]);
  E = 0.5 * (E + E.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMat> es(E);
  CVec ph(space.dim());
  for (int m = 0; m < space.dim(); ++m) ph(m) = std::exp(Complex(0, -es.eigenvalues()(m)));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

CMat gaussian_to_fock(const GaussianState& state, int cutoff) {
  require(state.modes() <= 2, Errc::unsupported, "gaussian_to_fock: n <= 2 only");
  require(state.zero_mean(), Errc::invalid_state, "gaussian_to_fock: state must have zero mean");
  FockSpace space(state.modes(), cutoff, state.hbar());

  if (state.origin_legs() && state.origin_nu()) {
    // Check the recorded origin still reproduces the covariance matrix.
    Mat S = Mat::Identity(2 * state.modes(), 2 * state.modes());
    for (const auto& g : *state.origin_legs()) S = generator_matrix(g, state.modes()) * S;
    Mat D = Mat::Zero(S.rows(), S.cols());
    for (int k = 0; k < state.modes(); ++k)
      D(2 * k, 2 * k) = D(2 * k + 1, 2 * k + 1) = (*state.origin_nu())(k);
    if ((S * D * S.transpose() - state.cov()).cwiseAbs().maxCoeff() < 1e-8) {
      CMat rho = thermal_density(space, *state.origin_nu());
      space.apply_conj(*state.origin_legs(), rho);
      return rho;
    }
  }

  const Williamson w = williamson(state.cov());
  CMat rho = thermal_density(space, w.nu);
  const CMat U = metaplectic_from_symplectic(space, w.S);
  return U * rho * U.adjoint();
}

CMat evolution_to_fock(const MetaplecticEvolution& evo, int cutoff, double hbar,
                       bool check_unitarity) {
  FockSpace space(evo.modes(), cutoff, hbar);
  CMat U = CMat::Identity(space.dim(), space.dim());
  space.apply_legs(evo.steps(), U);
  if (check_unitarity) {
    const double defect = unitarity_defect_lower(U, evo.modes(), cutoff);
    if (defect > 1e-6)
      fail(Errc::insufficient_cutoff, "evolution_to_fock: unitarity defect " +
                                          std::to_string(defect) +
                                          " on the retained subspace; increase the cutoff");
  }
  return U;
}

double unitarity_defect_lower(const CMat& U, int n, int cutoff) {
  const int half = std::max(1, cutoff / 2);
  std::vector<int> keep;
  if (n == 1) {
    for (int m = 0; m < half; ++m) keep.push_back(m);
  } else {
    for (int m0 = 0; m0 < half; ++m0)
      for (int m1 = 0; m1 < half; ++m1) keep.push_back(m0 * cutoff + m1);
  }
  CMat G(U.rows(), keep.size());
  for (size_t j = 0; j < keep.size(); ++j) G.col(j) = U.col(keep[j]);
  CMat gram = G.adjoint() * G;
  return (gram - CMat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Complex oracle_trace(const GaussianState& state, const MetaplecticEvolution& evo, int cutoff) {
  require(evo.modes() == state.modes(), Errc::dimension_mismatch,
          "oracle_trace: mode counts differ");
  require(state.zero_mean(), Errc::invalid_state, "oracle_trace: state must have zero mean");
  FockSpace space(state.modes(), cutoff, state.hbar());

  // Pure states with a generator origin: Tr(rho U) = <psi| U |psi> with
  // |psi> the origin legs applied to the vacuum column.
  if (state.origin_legs() && state.origin_nu() &&
      (state.origin_nu()->array() - 0.5).abs().maxCoeff() < 1e-12) {
    Mat S = Mat::Identity(2 * state.modes(), 2 * state.modes());
    for (const auto& g : *state.origin_legs()) S = generator_matrix(g, state.modes()) * S;
    if ((0.5 * S * S.transpose() - state.cov()).cwiseAbs().maxCoeff() < 1e-8) {
      CMat psi = CMat::Zero(space.dim(), 1);
      psi(0, 0) = 1.0;
      space.apply_legs(*state.origin_legs(), psi);
      CMat upsi = psi;
      space.apply_legs(evo.steps(), upsi);
      return (psi.adjoint() * upsi)(0, 0);
    }
  }

  CMat rho = gaussian_to_fock(state, cutoff);
  // Tr(rho U) = Tr(U rho): apply the legs to rho and take the trace.
  space.apply_legs(evo.steps(), rho);
  return rho.trace();
}

Mat covariance_from_fock(const FockSpace& space, const CMat& rho) {
  const int n = space.modes();
  std::vector<CMat> Xrho(2 * n);
  for (int m = 0; m < n; ++m) {
    CMat q = rho, p = rho;
    space.apply_single(space.position(), m, q);
    Xrho[2 * m] = q;  // x_i rho
    space.apply_single(space.momentum(), m, p);
    Xrho[2 * m + 1] = p;
  }
  Mat V(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j) {
      // Tr(x_i x_j rho): left-apply x_i to (x_j rho) and trace.
      CMat t = Xrho[j];
      space.apply_single((i % 2 == 0) ? space.position() : space.momentum(), i / 2, t);
      CMat t2 = Xrho[i];
      space.apply_single((j % 2 == 0) ? space.position() : space.momentum(), j / 2, t2);
      V(i, j) = ((t.trace() + t2.trace()) / (2.0 * space.hbar())).real();
    }
  return 0.5 * (V + V.transpose().eval());
}

ProtocolPopulations oracle_protocol(const GaussianState& state, const MetaplecticEvolution& evo,
                                    int cutoff, double vartheta) {
  FockSpace space(state.modes(), cutoff, state.hbar());
  const CMat rho = gaussian_to_fock(state, cutoff);

  // Conditional evolution on the +z ancilla branch:
  //   rho_tot = 1/2 [[U rho U^dag, U rho], [rho U^dag, rho]].
  CMat Urho = rho;
  space.apply_legs(evo.steps(), Urho);
  CMat UrhoUd = Urho.adjoint().eval();
  space.apply_legs(evo.steps(), UrhoUd);
  UrhoUd = UrhoUd.adjoint().eval();

  // pi/2 rotation about the equatorial Bloch axis at angle vartheta.
  const Complex q01 = Complex(0, -1) * std::exp(Complex(0, -vartheta)) / std::sqrt(2.0);
  const Complex q10 = Complex(0, -1) * std::exp(Complex(0, vartheta)) / std::sqrt(2.0);
  const Complex q00 = 1.0 / std::sqrt(2.0), q11 = 1.0 / std::sqrt(2.0);

  const CMat& B00 = UrhoUd;
  const CMat& B01 = Urho;
  const CMat B10 = Urho.adjoint();
  const CMat& B11 = rho;

  CMat blk00 = 0.5 * (q00 * std::conj(q00) * B00 + q00 * std::conj(q01) * B01 +
                      q01 * std::conj(q00) * B10 + q01 * std::conj(q01) * B11);
  CMat blk11 = 0.5 * (q10 * std::conj(q10) * B00 + q10 * std::conj(q11) * B01 +
                      q11 * std::conj(q10) * B10 + q11 * std::conj(q11) * B11);
  return ProtocolPopulations{blk11.trace().real(), blk00.trace().real()};
}

}  // namespace gqs::fock
