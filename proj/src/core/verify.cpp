#include "verify.hpp"
#include <random>

#include <iomanip>
#include <sstream>

namespace gqs {

namespace {

std::string describe(const GeneratorSpec& g) {
  std::ostringstream ss;
  ss << std::setprecision(4);
  switch (g.kind) {
    case GeneratorKind::rotation: ss << "R(" << g.parameter << ") m" << g.mode; break;
    case GeneratorKind::squeeze:
      ss << "Z(" << g.parameter << "," << g.phi << ") m" << g.mode;
      break;
    case GeneratorKind::shear_position: ss << "F(" << g.parameter << ") m" << g.mode; break;
    case GeneratorKind::shear_momentum: ss << "M(" << g.parameter << ") m" << g.mode; break;
    case GeneratorKind::two_mode_rotation:
      ss << "BS(" << g.parameter << ") m" << g.mode << g.mode_b;
      break;
  }
  return ss.str();
}

GeneratorSpec random_leg(int n, std::mt19937_64& rng, double zeta_cap, double s_cap) {
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
  };
  const int kind_max = (n >= 2) ? 5 : 4;
  const int kind = static_cast<int>(rng() % kind_max);
  const int mode = static_cast<int>(rng() % n);
  switch (kind) {
    case 0: return GeneratorSpec::rotation(mode, uniform(0.05, 2.0 * M_PI - 0.05));
    case 1: return GeneratorSpec::squeeze(mode, uniform(0.05, zeta_cap), uniform(0.0, 2.0 * M_PI));
    case 2: return GeneratorSpec::shear_position(mode, uniform(0.05, s_cap));
    case 3: return GeneratorSpec::shear_momentum(mode, uniform(0.05, s_cap));
    default: {
      int other = static_cast<int>(rng() % (n - 1));
      if (other >= mode) ++other;
      return GeneratorSpec::two_mode_rotation(mode, other, uniform(0.1, 2.0 * M_PI - 0.1));
    }
  }
}

}  // namespace

VerifyResult verify_against_oracle(const VerifyOptions& opt) {
  require(opt.n >= 1 && opt.n <= 2, Errc::unsupported,
          "verify: the Fock oracle supports only n <= 2");
  require(opt.cases >= 1, Errc::invalid_argument, "verify: cases must be >= 1");

  // Bounded ranges keep the truncation error of the oracle below the
  // comparison tolerance at the given cutoff.
  const double zeta_state = (opt.n == 1) ? 1.2 : 0.5;
  const double s_state = (opt.n == 1) ? 2.0 : 1.0;
  const double zeta_evo = (opt.n == 1) ? 1.5 : 0.6;
  const double s_evo = (opt.n == 1) ? 2.0 : 1.0;
  const double nu_max = 1.2;

  std::mt19937_64 rng(opt.seed);
  VerifyResult out;
  bool cutoff_checked = false;
  for (int i = 0; i < opt.cases; ++i) {
    const StateKind kind = (i % 2 == 0) ? StateKind::pure : StateKind::mixed;
    const GaussianState state =
        random_state(opt.n, kind, rng(), nu_max, 1.0, zeta_state, s_state);
    const GeneratorSpec leg = random_leg(opt.n, rng, zeta_evo, s_evo);
    const MetaplecticEvolution evo = MetaplecticEvolution::single(opt.n, leg);

    if (opt.check_cutoff && !cutoff_checked) {
      fock::evolution_to_fock(evo, opt.cutoff, 1.0, /*check_unitarity=*/true);
      cutoff_checked = true;  // one explicit defect check per run is enough
    }

    VerifyRow row;
    row.state_desc = (kind == StateKind::pure ? "pure#" : "mixed#") + std::to_string(i);
    row.evo_desc = describe(leg);
    row.closed_form = trace_rho_M(state, evo);
    row.oracle = fock::oracle_trace(state, evo, opt.cutoff);
    row.abs_err = std::abs(row.closed_form - row.oracle);
    out.max_err = std::max(out.max_err, row.abs_err);
    out.rows.push_back(std::move(row));
  }
  out.pass = out.max_err <= opt.tol;
  return out;
}

std::string VerifyResult::table() const {
  std::ostringstream ss;
  ss << std::left << std::setw(10) << "state" << std::setw(22) << "evolution" << std::setw(24)
     << "closed form" << std::setw(24) << "oracle" << "abs_err\n";
  ss << std::scientific << std::setprecision(3);
  for (const auto& r : rows) {
    std::ostringstream cf, oc;
    cf << std::fixed << std::setprecision(9) << r.closed_form.real() << (r.closed_form.imag() < 0 ? "-" : "+")
       << std::abs(r.closed_form.imag()) << "i";
    oc << std::fixed << std::setprecision(9) << r.oracle.real() << (r.oracle.imag() < 0 ? "-" : "+")
       << std::abs(r.oracle.imag()) << "i";
    ss << std::left << std::setw(10) << r.state_desc << std::setw(22) << r.evo_desc
       << std::setw(24) << cf.str() << std::setw(24) << oc.str() << r.abs_err << "\n";
  }
  ss << "max |closed - oracle| = " << std::scientific << max_err << (pass ? "  [ok]" : "  [FAIL]")
     << "\n";
  return ss.str();
}

}  // namespace gqs
