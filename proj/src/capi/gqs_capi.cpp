#include "gqs.h"

#include <cstring>
#include <string>

#include "json_io.hpp"
#include "presets.hpp"
#include "verify.hpp"

using namespace gqs;

struct gqs_state {
  GaussianState impl;
};

struct gqs_evolution {
  int n;
  std::vector<GeneratorSpec> steps;
  MetaplecticEvolution build() const { return MetaplecticEvolution(n, steps); }
};

struct gqs_report {
  ReconstructionReport impl;
};

namespace {

thread_local std::string g_last_error;

gqs_status set_error(const Error& e) {
  g_last_error = e.what();
  return static_cast<gqs_status>(e.code());
}

gqs_status set_error(const std::exception& e) {
  g_last_error = e.what();
  return GQS_ERR_INTERNAL;
}

template <typename Fn>
gqs_status guarded(Fn&& fn) {
  try {
    fn();
    return GQS_OK;
  } catch (const Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error(e);
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gqs_status require_c(bool cond, const char* msg) {
  if (cond) return GQS_OK;
  g_last_error = msg;
  return GQS_ERR_INVALID_ARGUMENT;
}

MetaplecticEvolution evo_or_identity(const gqs_evolution* evo, int n) {
  return evo ? evo->build() : MetaplecticEvolution::identity(n);
}

}  // namespace

extern "C" {

const char* gqs_last_error(void) { return g_last_error.c_str(); }

void gqs_string_free(char* s) { std::free(s); }

/* ---- states ---- */

gqs_status gqs_state_vacuum(int n, double hbar, gqs_state** out) {
  if (auto rc = require_c(out != nullptr, "out is null")) return rc;
  return guarded([&] { *out = new gqs_state{GaussianState::vacuum(n, hbar)}; });
}

gqs_status gqs_state_from_spec(const char* spec, uint64_t seed, double hbar, gqs_state** out) {
  if (auto rc = require_c(out && spec, "null argument")) return rc;
  return guarded([&] { *out = new gqs_state{state_from_spec(spec, seed, hbar)}; });
}

gqs_status gqs_state_from_json(const char* json_text, gqs_state** out) {
  if (auto rc = require_c(out && json_text, "null argument")) return rc;
  return guarded([&] {
    Json j = Json::parse(json_text, nullptr, false);
    require(!j.is_discarded(), Errc::parse_error, "state JSON: malformed document");
    *out = new gqs_state{state_from_json(j)};
  });
}

gqs_status gqs_state_to_json(const gqs_state* state, char** json_out) {
  if (auto rc = require_c(state && json_out, "null argument")) return rc;
  return guarded([&] { *json_out = dup_string(state_to_json(state->impl).dump(2)); });
}

void gqs_state_free(gqs_state* state) { delete state; }

int gqs_state_modes(const gqs_state* state) { return state ? state->impl.modes() : 0; }

double gqs_state_hbar(const gqs_state* state) { return state ? state->impl.hbar() : 0.0; }

gqs_status gqs_state_cov(const gqs_state* state, double* buf, size_t len) {
  if (auto rc = require_c(state && buf, "null argument")) return rc;
  const int d = 2 * state->impl.modes();
  if (auto rc = require_c(len >= static_cast<size_t>(d) * d, "buffer too small")) return rc;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) buf[r * d + c] = state->impl.cov()(r, c);
  return GQS_OK;
}

gqs_status gqs_state_purity(const gqs_state* state, int mode, double* out) {
  if (auto rc = require_c(state && out, "null argument")) return rc;
  return guarded([&] { *out = purity(state->impl, mode); });
}

gqs_status gqs_state_renyi2(const gqs_state* state, int mode, double* out) {
  if (auto rc = require_c(state && out, "null argument")) return rc;
  return guarded([&] { *out = renyi2_entanglement(state->impl, mode); });
}

gqs_status gqs_state_reduce(const gqs_state* state, const int* modes, int n_modes,
                            gqs_state** out) {
  if (auto rc = require_c(state && modes && out, "null argument")) return rc;
  return guarded([&] {
    std::vector<int> m(modes, modes + n_modes);
    *out = new gqs_state{reduce(state->impl, m)};
  });
}

gqs_status gqs_state_evolve(const gqs_state* state, const gqs_evolution* evo, gqs_state** out) {
  if (auto rc = require_c(state && evo && out, "null argument")) return rc;
  return guarded([&] { *out = new gqs_state{evolve_cov(state->impl, evo->steps)}; });
}

/* ---- evolutions ---- */

gqs_status gqs_evolution_new(int n, gqs_evolution** out) {
  if (auto rc = require_c(out != nullptr, "out is null")) return rc;
  if (auto rc = require_c(n >= 1, "mode count must be >= 1")) return rc;
  *out = new gqs_evolution{n, {}};
  return GQS_OK;
}

void gqs_evolution_free(gqs_evolution* evo) { delete evo; }

static gqs_status push_leg(gqs_evolution* evo, GeneratorSpec g) {
  if (auto rc = require_c(evo != nullptr, "evolution is null")) return rc;
  return guarded([&] {
    g.validate(evo->n);
    evo->steps.push_back(g);
  });
}

gqs_status gqs_evolution_rotation(gqs_evolution* evo, int mode, double theta) {
  return push_leg(evo, GeneratorSpec::rotation(mode, theta));
}
gqs_status gqs_evolution_squeeze(gqs_evolution* evo, int mode, double zeta, double phi) {
  return push_leg(evo, GeneratorSpec::squeeze(mode, zeta, phi));
}
gqs_status gqs_evolution_shear_position(gqs_evolution* evo, int mode, double s) {
  return push_leg(evo, GeneratorSpec::shear_position(mode, s));
}
gqs_status gqs_evolution_shear_momentum(gqs_evolution* evo, int mode, double s) {
  return push_leg(evo, GeneratorSpec::shear_momentum(mode, s));
}
gqs_status gqs_evolution_two_mode_rotation(gqs_evolution* evo, int j, int k, double wt) {
  return push_leg(evo, GeneratorSpec::two_mode_rotation(j, k, wt));
}

/* ---- phases ---- */

gqs_status gqs_trace(const gqs_state* state, const gqs_evolution* evo, double* re, double* im) {
  if (auto rc = require_c(state && evo && re && im, "null argument")) return rc;
  return guarded([&] {
    const Complex t = trace_rho_M(state->impl, evo->build());
    *re = t.real();
    *im = t.imag();
  });
}

gqs_status gqs_total_phase(const gqs_state* state, const gqs_evolution* evo, double* phi,
                           double* magnitude) {
  if (auto rc = require_c(state && evo && phi, "null argument")) return rc;
  return guarded([&] {
    const TotalPhase tp = total_phase(state->impl, evo->build());
    *phi = tp.phi;
    if (magnitude) *magnitude = tp.magnitude;
  });
}

gqs_status gqs_population_difference(const gqs_state* state, const gqs_evolution* pre,
                                     const gqs_evolution* conditional, double vartheta,
                                     double* out) {
  if (auto rc = require_c(state && conditional && out, "null argument")) return rc;
  return guarded([&] {
    ProtocolSetting setting(evo_or_identity(pre, state->impl.modes()), conditional->build(),
                            vartheta);
    *out = exact_population_difference(state->impl, setting);
  });
}

gqs_status gqs_estimate_phase(const gqs_state* state, const gqs_evolution* pre,
                              const gqs_evolution* conditional, long long shots, uint64_t seed,
                              gqs_phase_estimate* out) {
  if (auto rc = require_c(state && conditional && out, "null argument")) return rc;
  PhaseEstimate est;
  const gqs_status rc = guarded([&] {
    est = estimate_phase(state->impl, evo_or_identity(pre, state->impl.modes()),
                         conditional->build(), shots, seed);
  });
  if (rc != GQS_OK) return rc;
  out->re_hat = est.re_hat;
  out->im_hat = est.im_hat;
  out->phi_hat = est.phi_hat;
  out->sigma_phi = est.sigma_phi;
  out->magnitude_hat = est.magnitude_hat;
  out->shots = est.shots;
  out->reliable = est.reliable ? 1 : 0;
  if (!est.reliable) {
    g_last_error = "phase estimate magnitude below the reliability floor";
    return GQS_ERR_UNRELIABLE_PHASE;
  }
  return GQS_OK;
}

/* ---- reconstruction ---- */

void gqs_pipeline_options_default(gqs_pipeline_options* opt) {
  if (!opt) return;
  const PipelineOptions d;
  opt->strategy = d.strategy;
  opt->shots = d.shots;
  opt->seed = d.seed;
  opt->theta1 = d.theta1;
  opt->theta2 = d.theta2;
  opt->theta3 = d.theta3;
  opt->zeta = d.zeta;
  opt->zeta1 = d.zeta1;
  opt->zeta2 = d.zeta2;
  opt->s = d.s;
  opt->strategy3_both_shears = d.strategy3_both_shears ? 1 : 0;
  opt->magnitude_floor = d.magnitude_floor;
}

gqs_status gqs_reconstruct(const gqs_state* state, const gqs_pipeline_options* opt,
                           gqs_report** out) {
  if (auto rc = require_c(state && out, "null argument")) return rc;
  return guarded([&] {
    PipelineOptions po;
    if (opt) {
      po.strategy = opt->strategy;
      po.shots = opt->shots;
      po.seed = opt->seed;
      po.theta1 = opt->theta1;
      po.theta2 = opt->theta2;
      po.theta3 = opt->theta3;
      po.zeta = opt->zeta;
      po.zeta1 = opt->zeta1;
      po.zeta2 = opt->zeta2;
      po.s = opt->s;
      po.strategy3_both_shears = opt->strategy3_both_shears != 0;
      po.magnitude_floor = opt->magnitude_floor;
    }
    *out = new gqs_report{run_pipeline(state->impl, po)};
  });
}

void gqs_report_free(gqs_report* rep) { delete rep; }

gqs_status gqs_report_json(const gqs_report* rep, char** json_out) {
  if (auto rc = require_c(rep && json_out, "null argument")) return rc;
  return guarded([&] { *json_out = dup_string(report_to_json(rep->impl).dump(2)); });
}

gqs_status gqs_report_csv(const gqs_report* rep, char** csv_out) {
  if (auto rc = require_c(rep && csv_out, "null argument")) return rc;
  return guarded([&] { *csv_out = dup_string(report_to_csv(rep->impl)); });
}

gqs_status gqs_report_max_abs_error(const gqs_report* rep, double* out) {
  if (auto rc = require_c(rep && out, "null argument")) return rc;
  *out = rep->impl.max_abs_error();
  return GQS_OK;
}

int gqs_report_warning_count(const gqs_report* rep) {
  return rep ? static_cast<int>(rep->impl.warnings.size()) : 0;
}

/* ---- verification ---- */

void gqs_verify_options_default(gqs_verify_options* opt) {
  if (!opt) return;
  const VerifyOptions d;
  opt->n = d.n;
  opt->cases = d.cases;
  opt->cutoff = d.cutoff;
  opt->seed = d.seed;
  opt->tol = d.tol;
}

gqs_status gqs_verify(const gqs_verify_options* opt, char** table_out, double* max_err) {
  VerifyResult res;
  const gqs_status rc = guarded([&] {
    VerifyOptions vo;
    if (opt) {
      vo.n = opt->n;
      vo.cases = opt->cases;
      vo.cutoff = opt->cutoff;
      vo.seed = opt->seed;
      vo.tol = opt->tol;
    }
    res = verify_against_oracle(vo);
  });
  if (rc != GQS_OK) return rc;
  if (table_out) *table_out = dup_string(res.table());
  if (max_err) *max_err = res.max_err;
  if (!res.pass) {
    g_last_error = "oracle deviation exceeds tolerance";
    return GQS_ERR_INVALID_ESTIMATE;
  }
  return GQS_OK;
}

}  // extern "C"
