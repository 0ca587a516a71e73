#include "gaussian_state.hpp"

#include <cmath>
#include <random>

namespace gqs {

double bona_fide_slack(const Mat& V) {
  const int n = static_cast<int>(V.rows()) / 2;
  CMat H = V.cast<Complex>() + Complex(0.0, 0.5) * symplectic_form(n).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  return es.eigenvalues().minCoeff();
}

Williamson williamson(const Mat& V) {
  const int two_n = static_cast<int>(V.rows());
  const int n = two_n / 2;
  require(two_n == V.cols() && two_n % 2 == 0 && n >= 1, Errc::invalid_argument,
          "williamson: matrix must be square with even dimension");

  Eigen::SelfAdjointEigenSolver<Mat> es(V);
  require(es.eigenvalues().minCoeff() > 0.0, Errc::invalid_state,
          "williamson: covariance matrix must be positive definite");
  const Mat sqrtV = es.operatorSqrt();

  // sqrtV J sqrtV is antisymmetric and normal; its real Schur form is block
  // diagonal with blocks [[0, nu], [-nu, 0]].
  const Mat M = sqrtV * symplectic_form(n) * sqrtV;
  Eigen::RealSchur<Mat> schur(M);
  Mat T = schur.matrixT();
  Mat Q = schur.matrixU();
  Vec nu(n);
  Mat Dinvsqrt = Mat::Zero(two_n, two_n);
  for (int k = 0; k < n; ++k) {
    double v = T(2 * k, 2 * k + 1);
    if (v < 0.0) {  // flip block orientation by swapping the two Schur vectors
      Q.col(2 * k).swap(Q.col(2 * k + 1));
      v = -v;
    }
    require(v > 0.0, Errc::invalid_state, "williamson: degenerate symplectic spectrum");
    nu(k) = v;
    Dinvsqrt(2 * k, 2 * k) = Dinvsqrt(2 * k + 1, 2 * k + 1) = 1.0 / std::sqrt(v);
  }
  Williamson w;
  w.S = sqrtV * Q * Dinvsqrt;
  w.nu = nu;
  return w;
}

GaussianState::GaussianState(Vec mean, Mat cov, double hbar)
    : n_(static_cast<int>(cov.rows()) / 2), hbar_(hbar), mean_(std::move(mean)), cov_(std::move(cov)) {
  require(cov_.rows() == cov_.cols() && cov_.rows() % 2 == 0 && n_ >= 1, Errc::invalid_argument,
          "GaussianState: covariance must be 2n x 2n");
  require(mean_.size() == cov_.rows(), Errc::dimension_mismatch,
          "GaussianState: mean length must match covariance dimension");
  require(hbar_ > 0.0, Errc::invalid_argument, "GaussianState: hbar must be positive");
  require((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() <= 1e-9, Errc::invalid_state,
          "GaussianState: covariance matrix not symmetric");
  cov_ = 0.5 * (cov_ + cov_.transpose().eval());
  require(bona_fide_slack(cov_) >= -1e-8, Errc::invalid_state,
          "GaussianState: covariance violates the uncertainty bound");
}

GaussianState GaussianState::vacuum(int n, double hbar) {
  GaussianState st(Vec::Zero(2 * n), 0.5 * Mat::Identity(2 * n, 2 * n), hbar);
  st.set_origin({}, Vec::Constant(n, 0.5));
  return st;
}

void GaussianState::set_origin(std::vector<GeneratorSpec> legs, Vec nu) {
  origin_legs_ = std::move(legs);
  origin_nu_ = std::move(nu);
}

void GaussianState::clear_origin() {
  origin_legs_.reset();
  origin_nu_.reset();
}

GaussianState evolve_cov(const GaussianState& state, const Mat& S) {
  require(S.rows() == 2 * state.modes() && S.cols() == S.rows(), Errc::dimension_mismatch,
          "evolve_cov: symplectic matrix dimension mismatch");
  GaussianState out(S * state.mean(), S * state.cov() * S.transpose(), state.hbar());
  out.clear_origin();
  return out;
}

GaussianState evolve_cov(const GaussianState& state, const std::vector<GeneratorSpec>& legs) {
  Mat S = Mat::Identity(2 * state.modes(), 2 * state.modes());
  for (const auto& g : legs) S = generator_matrix(g, state.modes()) * S;
  GaussianState out = evolve_cov(state, S);
  if (state.origin_legs()) {
    auto seq = *state.origin_legs();
    seq.insert(seq.end(), legs.begin(), legs.end());
    out.set_origin(std::move(seq), *state.origin_nu());
  }
  return out;
}

GaussianState reduce(const GaussianState& state, const std::vector<int>& modes) {
  require(!modes.empty(), Errc::invalid_argument, "reduce: empty mode set");
  std::vector<int> sorted = modes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  require(sorted.size() == modes.size(), Errc::invalid_argument, "reduce: repeated mode index");
  for (int m : sorted)
    require(m >= 0 && m < state.modes(), Errc::invalid_argument, "reduce: mode index out of range");

  const int m = static_cast<int>(sorted.size());
  Vec mean(2 * m);
  Mat cov(2 * m, 2 * m);
  for (int a = 0; a < m; ++a) {
    mean.segment<2>(2 * a) = state.mean().segment<2>(2 * sorted[a]);
    for (int b = 0; b < m; ++b)
      cov.block<2, 2>(2 * a, 2 * b) = state.cov().block<2, 2>(2 * sorted[a], 2 * sorted[b]);
  }
  GaussianState out(std::move(mean), std::move(cov), state.hbar());
  out.clear_origin();
  return out;
}

GaussianState translate_to_zero(const GaussianState& state) {
  GaussianState out(Vec::Zero(2 * state.modes()), state.cov(), state.hbar());
  if (state.origin_legs()) out.set_origin(*state.origin_legs(), *state.origin_nu());
  return out;
}

double wigner(const GaussianState& state, const Vec& x) {
  require(x.size() == 2 * state.modes(), Errc::dimension_mismatch, "wigner: argument dimension");
  const double det = state.cov().determinant();
  require(det > 0.0, Errc::invalid_state, "wigner: singular covariance matrix");
  const Vec d = x - state.mean();
  const double quad = d.dot(state.cov().ldlt().solve(d));
  const double norm = std::pow(2.0 * M_PI * state.hbar(), -state.modes());
  return norm * std::exp(-quad / (2.0 * state.hbar())) / std::sqrt(det);
}

Complex char_fn(const GaussianState& state, const Vec& xi) {
  require(xi.size() == 2 * state.modes(), Errc::dimension_mismatch, "char_fn: argument dimension");
  const Mat J = symplectic_form(state.modes());
  const Vec Jxi = J * xi;
  const double quad = Jxi.dot(state.cov() * Jxi);  // xi^T J^T V J xi
  const double norm = std::pow(2.0 * M_PI * state.hbar(), -state.modes());
  Complex phase(0.0, 0.0);
  if (!state.zero_mean()) phase = Complex(0.0, -state.mean().dot(Jxi) / state.hbar());
  return norm * std::exp(Complex(-quad / (2.0 * state.hbar()), 0.0) + phase);
}

double purity(const GaussianState& state, int mode) {
  require(mode >= 0 && mode < state.modes(), Errc::invalid_argument, "purity: mode out of range");
  const double tau = state.cov().block<2, 2>(2 * mode, 2 * mode).determinant();
  return state.hbar() / (2.0 * std::sqrt(tau));
}

double renyi2_entanglement(const GaussianState& state, int mode, double purity_tol) {
  require(mode >= 0 && mode < state.modes(), Errc::invalid_argument,
          "renyi2_entanglement: mode out of range");
  const Williamson w = williamson(state.cov());
  require((w.nu.array() - 0.5).abs().maxCoeff() <= purity_tol, Errc::not_applicable,
          "renyi2_entanglement: global state is not pure");
  const double tau = state.cov().block<2, 2>(2 * mode, 2 * mode).determinant();
  return 0.5 * std::log(tau) - std::log(state.hbar() / 2.0);
}

GaussianState random_state(int n, StateKind kind, std::uint64_t seed, double nu_max, double hbar,
                           double zeta_max, double s_max) {
  RandomSymplectic rs = random_symplectic(n, seed, -1, zeta_max, s_max);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  Vec nu = Vec::Constant(n, 0.5);
  if (kind == StateKind::mixed) {
    for (int k = 0; k < n; ++k) {
      const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
      nu(k) = 0.5 + (nu_max - 0.5) * u;
    }
  }
  Mat D = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) D(2 * k, 2 * k) = D(2 * k + 1, 2 * k + 1) = nu(k);
  GaussianState st(Vec::Zero(2 * n), rs.S * D * rs.S.transpose(), hbar);
  st.set_origin(rs.legs, nu);
  return st;
}

GaussianState two_mode_squeezed_vacuum(double r, double hbar) {
  // Beam-splitter conjugation of two equal phi=0 squeezers; the composite
  // matrix is [[cosh r I, sinh r Z], [sinh r Z, cosh r I]] with Z = diag(1,-1).
  std::vector<GeneratorSpec> legs = {
      GeneratorSpec::two_mode_rotation(0, 1, M_PI / 2.0),
      GeneratorSpec::squeeze(0, r, 0.0),
      GeneratorSpec::squeeze(1, r, 0.0),
      GeneratorSpec::two_mode_rotation(0, 1, -M_PI / 2.0),
  };
  Mat S = Mat::Identity(4, 4);
  for (const auto& g : legs) S = generator_matrix(g, 2) * S;
  GaussianState st(Vec::Zero(4), 0.5 * S * S.transpose(), hbar);
  st.set_origin(legs, Vec::Constant(2, 0.5));
  return st;
}

Mat ModeBlockView::assembled() const {
  Mat V(4, 4);
  V.block<2, 2>(0, 0) = Vj;
  V.block<2, 2>(2, 2) = Vk;
  V.block<2, 2>(0, 2) = Ejk;
  V.block<2, 2>(2, 0) = Ejk.transpose();
  return V;
}

ModeBlockView two_mode_block(const GaussianState& state, int j, int k) {
  require(j != k, Errc::invalid_argument, "two_mode_block: indices must differ");
  require(j >= 0 && j < state.modes() && k >= 0 && k < state.modes(), Errc::invalid_argument,
          "two_mode_block: mode index out of range");
  ModeBlockView view;
  view.j = j;
  view.k = k;
  view.Vj = state.cov().block<2, 2>(2 * j, 2 * j);
  view.Vk = state.cov().block<2, 2>(2 * k, 2 * k);
  view.Ejk = state.cov().block<2, 2>(2 * j, 2 * k);
  return view;
}

}  // namespace gqs
