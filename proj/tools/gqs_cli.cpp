// Command-line driver for the gqs shared library: state generation,
// covariance reconstruction from simulated phase measurements, oracle
// verification, and report rendering.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gqs.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWarnings = 2;

std::string resolve_output(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("GQS_OUTPUT_DIR")) return (std::filesystem::path(dir) / p).string();
  return path;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f.good()) throw CLI::RuntimeError("cannot write " + path, kExitError);
  f << body;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) throw CLI::RuntimeError("cannot read " + path, kExitError);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

[[noreturn]] void die(const std::string& what) {
  std::cerr << "error: " << what << " (" << gqs_last_error() << ")\n";
  std::exit(kExitError);
}

struct StateHandle {
  gqs_state* p = nullptr;
  ~StateHandle() { gqs_state_free(p); }
};

struct ReportHandle {
  gqs_report* p = nullptr;
  ~ReportHandle() { gqs_report_free(p); }
};

/// Shared config document: flags override file fields.
struct Config {
  Json doc = Json::object();
  void load(const std::string& path) {
    if (path.empty()) return;
    doc = Json::parse(read_file(path));
  }
  template <typename T>
  void fill(const CLI::Option* opt, const std::string& key, T& value) const {
    if (opt->count() > 0) return;  // explicit flag wins
    if (doc.contains(key)) value = doc.at(key).get<T>();
  }
};

int render_report(const Json& rep) {
  std::cout << "modes: " << rep.at("n").get<int>() << "\n";
  std::cout << "bona-fide slack: " << rep.at("bona_fide_slack").get<double>() << "\n";
  if (!rep.at("max_abs_error").is_null())
    std::cout << "max |V_est - V_true|: " << rep.at("max_abs_error").get<double>() << "\n";
  const auto& ent = rep.at("mode_entanglement");
  for (size_t i = 0; i < ent.size(); ++i) {
    std::cout << "renyi2 entanglement, mode " << i << ": ";
    if (ent.at(i).is_null())
      std::cout << "n/a";
    else
      std::cout << ent.at(i).get<double>() << " +- "
                << rep.at("mode_entanglement_sigma").at(i).get<double>();
    std::cout << "\n";
  }
  std::cout << "phase samples consumed: " << rep.at("samples").size() << "\n";
  const auto& warnings = rep.at("warnings");
  for (const auto& w : warnings) std::cout << "warning: " << w.get<std::string>() << "\n";
  return warnings.empty() ? kExitOk : kExitWarnings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-state covariance determination from metaplectic total phases"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its fields")
      ->expected(1);

  // ---- gen-state ----
  auto* gen = app.add_subcommand("gen-state", "generate a Gaussian state JSON file");
  std::string gen_spec = "vacuum:n=1";
  std::uint64_t gen_seed = 1;
  double gen_hbar = 1.0;
  std::string gen_out = "state.json";
  auto* gen_spec_opt = gen->add_option("--spec", gen_spec, "state spec, e.g. tms:r=1.0");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "RNG seed for random specs");
  auto* gen_hbar_opt = gen->add_option("--hbar", gen_hbar, "hbar convention");
  auto* gen_out_opt = gen->add_option("--out", gen_out, "output path");

  // ---- reconstruct ----
  auto* rec = app.add_subcommand("reconstruct", "run the full phase-measurement pipeline");
  std::string rec_spec = "random-pure:n=2";
  std::string rec_state_file;
  int rec_strategy = 3;
  long long rec_shots = 0;
  std::uint64_t rec_seed = 1;
  std::string rec_json = "report.json", rec_csv = "report.csv";
  gqs_pipeline_options popt;
  gqs_pipeline_options_default(&popt);
  auto* rec_spec_opt = rec->add_option("--spec", rec_spec, "state spec to reconstruct");
  auto* rec_state_opt = rec->add_option("--state", rec_state_file, "state JSON file (overrides --spec)");
  auto* rec_strategy_opt = rec->add_option("--strategy", rec_strategy, "1, 2 or 3")
                               ->check(CLI::Range(1, 3));
  auto* rec_shots_opt = rec->add_option("--shots", rec_shots, "shots per phase (0 = exact)");
  auto* rec_seed_opt = rec->add_option("--seed", rec_seed, "RNG seed (mandatory for sampled runs)");
  auto* rec_json_opt = rec->add_option("--out-json", rec_json, "report JSON path");
  auto* rec_csv_opt = rec->add_option("--out-csv", rec_csv, "report CSV path");
  rec->add_option("--theta1", popt.theta1, "first rotation angle");
  rec->add_option("--theta2", popt.theta2, "second rotation angle");
  rec->add_option("--theta3", popt.theta3, "third rotation angle (strategy 2)");
  rec->add_option("--zeta", popt.zeta, "squeeze parameter (strategies 1, 2)");
  rec->add_option("--zeta1", popt.zeta1, "first squeeze parameter (strategy 3)");
  rec->add_option("--zeta2", popt.zeta2, "second squeeze parameter (strategy 3)");
  rec->add_option("--s", popt.s, "shear parameter");
  rec->add_flag("--single-shear", [&popt](int64_t) { popt.strategy3_both_shears = 0; },
                "strategy 3: use only the position shear");

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "compare closed forms against the Fock oracle");
  gqs_verify_options vopt;
  gqs_verify_options_default(&vopt);
  auto* ver_n_opt = ver->add_option("--n", vopt.n, "mode count (1 or 2)");
  auto* ver_cases_opt = ver->add_option("--cases", vopt.cases, "number of random cases");
  auto* ver_cutoff_opt = ver->add_option("--cutoff", vopt.cutoff, "Fock levels per mode");
  std::uint64_t ver_seed = vopt.seed;
  auto* ver_seed_opt = ver->add_option("--seed", ver_seed, "RNG seed");
  auto* ver_tol_opt = ver->add_option("--tol", vopt.tol, "maximum allowed deviation");

  // ---- report ----
  auto* repcmd = app.add_subcommand("report", "summarize a reconstruction report JSON");
  std::string rep_in = "report.json";
  repcmd->add_option("--in", rep_in, "report JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  Config cfg;
  try {
    cfg.load(config_path);
  } catch (const Json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitError;
  }

  if (gen->parsed()) {
    cfg.fill(gen_spec_opt, "spec", gen_spec);
    cfg.fill(gen_seed_opt, "seed", gen_seed);
    cfg.fill(gen_hbar_opt, "hbar", gen_hbar);
    cfg.fill(gen_out_opt, "out", gen_out);
    StateHandle st;
    if (gqs_state_from_spec(gen_spec.c_str(), gen_seed, gen_hbar, &st.p)) die("gen-state");
    char* json = nullptr;
    if (gqs_state_to_json(st.p, &json)) die("gen-state: serialize");
    write_file(resolve_output(gen_out), std::string(json) + "\n");
    gqs_string_free(json);
    std::cout << "wrote " << resolve_output(gen_out) << "\n";
    return kExitOk;
  }

  if (rec->parsed()) {
    cfg.fill(rec_spec_opt, "spec", rec_spec);
    cfg.fill(rec_state_opt, "state", rec_state_file);
    cfg.fill(rec_strategy_opt, "strategy", rec_strategy);
    cfg.fill(rec_shots_opt, "shots", rec_shots);
    cfg.fill(rec_seed_opt, "seed", rec_seed);
    cfg.fill(rec_json_opt, "out_json", rec_json);
    cfg.fill(rec_csv_opt, "out_csv", rec_csv);
    if (rec_shots > 0 && rec_seed_opt->count() == 0 && !cfg.doc.contains("seed")) {
      std::cerr << "error: sampled runs require an explicit --seed\n";
      return kExitError;
    }
    popt.strategy = rec_strategy;
    popt.shots = rec_shots;
    popt.seed = rec_seed;

    StateHandle st;
    if (!rec_state_file.empty()) {
      if (gqs_state_from_json(read_file(rec_state_file).c_str(), &st.p)) die("reconstruct: load state");
    } else {
      if (gqs_state_from_spec(rec_spec.c_str(), rec_seed, 1.0, &st.p)) die("reconstruct: build state");
    }

    ReportHandle rep;
    if (gqs_reconstruct(st.p, &popt, &rep.p)) die("reconstruct");
    char* json = nullptr;
    char* csv = nullptr;
    if (gqs_report_json(rep.p, &json) || gqs_report_csv(rep.p, &csv)) die("reconstruct: render");
    write_file(resolve_output(rec_json), std::string(json) + "\n");
    write_file(resolve_output(rec_csv), csv);
    double err = 0.0;
    gqs_report_max_abs_error(rep.p, &err);
    std::cout << "wrote " << resolve_output(rec_json) << " and " << resolve_output(rec_csv)
              << "; max |V_est - V_true| = " << err << "\n";
    const int warnings = gqs_report_warning_count(rep.p);
    gqs_string_free(json);
    gqs_string_free(csv);
    if (warnings > 0) {
      std::cout << warnings << " warning(s); see the report\n";
      return kExitWarnings;
    }
    return kExitOk;
  }

  if (ver->parsed()) {
    cfg.fill(ver_n_opt, "n", vopt.n);
    cfg.fill(ver_cases_opt, "cases", vopt.cases);
    cfg.fill(ver_cutoff_opt, "cutoff", vopt.cutoff);
    cfg.fill(ver_seed_opt, "seed", ver_seed);
    cfg.fill(ver_tol_opt, "tol", vopt.tol);
    vopt.seed = ver_seed;
    char* table = nullptr;
    double max_err = 0.0;
    const gqs_status rc = gqs_verify(&vopt, &table, &max_err);
    if (table) {
      std::cout << table;
      gqs_string_free(table);
    }
    if (rc == GQS_OK) return kExitOk;
    std::cerr << "verify failed: " << gqs_last_error() << "\n";
    return kExitError;
  }

  if (repcmd->parsed()) {
    try {
      return render_report(Json::parse(read_file(rep_in)));
    } catch (const Json::exception& e) {
      std::cerr << "error: report: " << e.what() << "\n";
      return kExitError;
    }
  }
  return kExitError;
}
