/* gqs: Gaussian-state covariance determination from metaplectic total phases.
 *
 * C interface over the C++ core. All objects are opaque handles created and
 * destroyed through this API; every function that can fail returns a
 * gqs_status and leaves a human-readable message in gqs_last_error()
 * (thread-local). Output parameters are written only on GQS_OK unless noted.
 */
#ifndef GQS_H
#define GQS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int gqs_status;

enum {
  GQS_OK = 0,
  GQS_ERR_INVALID_ARGUMENT = 1,
  GQS_ERR_DIMENSION_MISMATCH = 2,
  GQS_ERR_SINGULAR_CAYLEY = 3,
  GQS_ERR_FACTORIZATION_FAILED = 4,
  GQS_ERR_INVALID_STATE = 5,
  GQS_ERR_UNDEFINED_ARGUMENT = 6,
  GQS_ERR_NOT_APPLICABLE = 7,
  GQS_ERR_DEGENERATE_SYSTEM = 8,
  GQS_ERR_ILL_CONDITIONED = 9,
  GQS_ERR_INCONSISTENT_PHASES = 10,
  GQS_ERR_INVALID_ESTIMATE = 11,
  GQS_ERR_INCOMPLETE_INPUT = 12,
  GQS_ERR_INSUFFICIENT_CUTOFF = 13,
  GQS_ERR_UNRELIABLE_PHASE = 14,
  GQS_ERR_LOG_BRANCH_FAILURE = 15,
  GQS_ERR_UNSUPPORTED = 16,
  GQS_ERR_IO = 17,
  GQS_ERR_PARSE = 18,
  GQS_ERR_INTERNAL = 19
};

/* Message describing the most recent failure on this thread. */
const char* gqs_last_error(void);

/* Strings returned through char** outputs are released with this. */
void gqs_string_free(char* s);

/* ---- Gaussian states ---------------------------------------------------- */

typedef struct gqs_state gqs_state;

gqs_status gqs_state_vacuum(int n, double hbar, gqs_state** out);

/* Spec strings: "vacuum:n=2", "tms:r=1.0", "thermal:n=1,nu=1.5",
 * "random-pure:n=3", "random-mixed:n=2,numax=1.5", "file:path.json". */
gqs_status gqs_state_from_spec(const char* spec, uint64_t seed, double hbar, gqs_state** out);

gqs_status gqs_state_from_json(const char* json_text, gqs_state** out);
gqs_status gqs_state_to_json(const gqs_state* state, char** json_out);
void gqs_state_free(gqs_state* state);

int gqs_state_modes(const gqs_state* state);
double gqs_state_hbar(const gqs_state* state);

/* Row-major 2n x 2n covariance copy; len must be >= (2n)^2. */
gqs_status gqs_state_cov(const gqs_state* state, double* buf, size_t len);

gqs_status gqs_state_purity(const gqs_state* state, int mode, double* out);
gqs_status gqs_state_renyi2(const gqs_state* state, int mode, double* out);
gqs_status gqs_state_reduce(const gqs_state* state, const int* modes, int n_modes,
                            gqs_state** out);
gqs_status gqs_state_evolve(const gqs_state* state, const struct gqs_evolution* evo,
                            gqs_state** out);

/* ---- Metaplectic evolutions --------------------------------------------- */

typedef struct gqs_evolution gqs_evolution;

gqs_status gqs_evolution_new(int n, gqs_evolution** out);
void gqs_evolution_free(gqs_evolution* evo);

/* Legs are appended in time order. */
gqs_status gqs_evolution_rotation(gqs_evolution* evo, int mode, double theta);
gqs_status gqs_evolution_squeeze(gqs_evolution* evo, int mode, double zeta, double phi);
gqs_status gqs_evolution_shear_position(gqs_evolution* evo, int mode, double s);
gqs_status gqs_evolution_shear_momentum(gqs_evolution* evo, int mode, double s);
gqs_status gqs_evolution_two_mode_rotation(gqs_evolution* evo, int j, int k, double wt);

/* ---- Total phases -------------------------------------------------------- */

/* Tr(rho M_S) of a zero-mean state. */
gqs_status gqs_trace(const gqs_state* state, const gqs_evolution* evo, double* re, double* im);

/* phi = arg Tr(rho M_S) in (-pi, pi] and |Tr(rho M_S)|. */
gqs_status gqs_total_phase(const gqs_state* state, const gqs_evolution* evo, double* phi,
                           double* magnitude);

/* P_-(vartheta) - P_+(vartheta) of the qubit-ancilla readout. */
gqs_status gqs_population_difference(const gqs_state* state, const gqs_evolution* pre,
                                     const gqs_evolution* conditional, double vartheta,
                                     double* out);

typedef struct {
  double re_hat;
  double im_hat;
  double phi_hat;
  double sigma_phi;
  double magnitude_hat;
  long long shots;
  int reliable;
} gqs_phase_estimate;

/* Combined two-quadrature estimate; shots = 0 is exact. Returns
 * GQS_ERR_UNRELIABLE_PHASE (with the estimate still filled in) when the
 * trace magnitude falls below the reliability floor. */
gqs_status gqs_estimate_phase(const gqs_state* state, const gqs_evolution* pre,
                              const gqs_evolution* conditional, long long shots, uint64_t seed,
                              gqs_phase_estimate* out);

/* ---- Covariance reconstruction ------------------------------------------ */

typedef struct {
  int strategy;        /* 1, 2 or 3 */
  long long shots;     /* 0 = exact phases */
  uint64_t seed;
  double theta1, theta2, theta3; /* rotation angles, [pi/2, pi) */
  double zeta;                   /* strategy 1/2 squeeze parameter */
  double zeta1, zeta2;           /* strategy 3 squeeze parameters */
  double s;                      /* shear parameter */
  int strategy3_both_shears;
  double magnitude_floor;
} gqs_pipeline_options;

void gqs_pipeline_options_default(gqs_pipeline_options* opt);

typedef struct gqs_report gqs_report;

gqs_status gqs_reconstruct(const gqs_state* state, const gqs_pipeline_options* opt,
                           gqs_report** out);
void gqs_report_free(gqs_report* rep);

gqs_status gqs_report_json(const gqs_report* rep, char** json_out);
gqs_status gqs_report_csv(const gqs_report* rep, char** csv_out);
gqs_status gqs_report_max_abs_error(const gqs_report* rep, double* out);
int gqs_report_warning_count(const gqs_report* rep);

/* ---- Oracle verification ------------------------------------------------- */

typedef struct {
  int n;       /* 1 or 2 */
  int cases;
  int cutoff;  /* Fock levels per mode */
  uint64_t seed;
  double tol;
} gqs_verify_options;

void gqs_verify_options_default(gqs_verify_options* opt);

/* Runs the closed-form vs truncated-Fock comparison; writes the table and
 * the maximum deviation. Fails with GQS_ERR_INVALID_ESTIMATE when the
 * deviation exceeds opt->tol. */
gqs_status gqs_verify(const gqs_verify_options* opt, char** table_out, double* max_err);

#ifdef __cplusplus
}
#endif

#endif /* GQS_H */
