#include "json_io.hpp"

#include <fstream>
#include <sstream>

namespace gqs {

namespace {

Json matrix_to_json(const Mat& M) {
  Json rows = Json::array();
  for (int r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), Errc::parse_error, "matrix: expected a nonempty array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  Mat M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    require(static_cast<int>(j.at(r).size()) == cols, Errc::parse_error, "matrix: ragged rows");
    for (int c = 0; c < cols; ++c) M(r, c) = j.at(r).at(c).get<double>();
  }
  return M;
}

const char* kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::rotation: return "rotation";
    case GeneratorKind::squeeze: return "squeeze";
    case GeneratorKind::shear_position: return "shear_position";
    case GeneratorKind::shear_momentum: return "shear_momentum";
    case GeneratorKind::two_mode_rotation: return "two_mode_rotation";
  }
  return "?";
}

GeneratorKind kind_from_name(const std::string& s) {
  if (s == "rotation") return GeneratorKind::rotation;
  if (s == "squeeze") return GeneratorKind::squeeze;
  if (s == "shear_position") return GeneratorKind::shear_position;
  if (s == "shear_momentum") return GeneratorKind::shear_momentum;
  if (s == "two_mode_rotation") return GeneratorKind::two_mode_rotation;
  fail(Errc::parse_error, "unknown generator kind: " + s);
}

}  // namespace

Json state_to_json(const GaussianState& state) {
  Json j;
  j["n"] = state.modes();
  j["hbar"] = state.hbar();
  Json mean = Json::array();
  for (int i = 0; i < state.mean().size(); ++i) mean.push_back(state.mean()(i));
  j["mean"] = std::move(mean);
  j["cov"] = matrix_to_json(state.cov());
  return j;
}

GaussianState state_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    const double hbar = j.value("hbar", 1.0);
    const Json& mj = j.at("mean");
    Vec mean(static_cast<int>(mj.size()));
    for (int i = 0; i < mean.size(); ++i) mean(i) = mj.at(i).get<double>();
    const Mat cov = matrix_from_json(j.at("cov"));
    require(cov.rows() == 2 * n, Errc::parse_error, "state: cov dimension does not match n");
    return GaussianState(mean, cov, hbar);  // constructor enforces the invariants
  } catch (const Json::exception& e) {
    fail(Errc::parse_error, std::string("state: ") + e.what());
  }
}

Json generator_to_json(const GeneratorSpec& g) {
  Json j;
  j["kind"] = kind_name(g.kind);
  j["mode"] = g.mode;
  j["param"] = g.parameter;
  if (g.kind == GeneratorKind::squeeze) j["phi"] = g.phi;
  if (g.is_two_mode()) j["mode_b"] = g.mode_b;
  return j;
}

GeneratorSpec generator_from_json(const Json& j) {
  GeneratorSpec g;
  g.kind = kind_from_name(j.at("kind").get<std::string>());
  g.mode = j.at("mode").get<int>();
  g.parameter = j.at("param").get<double>();
  g.phi = j.value("phi", 0.0);
  g.mode_b = j.value("mode_b", 0);
  return g;
}

Json evolution_to_json(const MetaplecticEvolution& evo) {
  Json j;
  j["n"] = evo.modes();
  Json steps = Json::array();
  for (const auto& g : evo.steps()) steps.push_back(generator_to_json(g));
  j["steps"] = std::move(steps);
  return j;
}

MetaplecticEvolution evolution_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  std::vector<GeneratorSpec> steps;
  for (const auto& gj : j.at("steps")) steps.push_back(generator_from_json(gj));
  return MetaplecticEvolution(n, std::move(steps));
}

Json phase_sample_to_json(const PhaseSample& s) {
  Json j;
  j["tag"] = s.tag;
  j["pre"] = evolution_to_json(s.pre);
  j["conditional"] = evolution_to_json(s.conditional);
  j["target_modes"] = s.target_modes;
  j["vartheta_pair"] = Json::array({0.0, M_PI / 2.0});
  j["phi"] = s.phi;
  j["sigma_phi"] = s.sigma_phi;
  j["shots"] = s.shots;
  j["re_hat"] = s.re_hat;
  j["im_hat"] = s.im_hat;
  j["magnitude"] = s.magnitude;
  return j;
}

PhaseSample phase_sample_from_json(const Json& j) {
  PhaseSample s{evolution_from_json(j.at("pre")),
                evolution_from_json(j.at("conditional")),
                j.at("target_modes").get<std::vector<int>>(),
                j.at("phi").get<double>(),
                j.value("sigma_phi", 0.0),
                j.value("shots", static_cast<long long>(0)),
                j.value("re_hat", 0.0),
                j.value("im_hat", 0.0),
                j.value("magnitude", 0.0),
                j.value("tag", std::string())};
  return s;
}

Json report_to_json(const ReconstructionReport& rep) {
  Json j;
  j["n"] = rep.n;
  j["hbar"] = rep.hbar;
  j["V_est"] = matrix_to_json(rep.V_est);
  j["sigma"] = matrix_to_json(rep.sigma);
  j["bona_fide_slack"] = rep.bona_fide_slack_est;
  if (rep.V_true) {
    j["V_true"] = matrix_to_json(*rep.V_true);
    j["max_abs_error"] = rep.max_abs_error();
  } else {
    j["V_true"] = nullptr;
    j["max_abs_error"] = nullptr;
  }
  j["mode_entanglement"] = rep.mode_entanglement;
  j["mode_entanglement_sigma"] = rep.mode_entanglement_sigma;
  j["warnings"] = rep.warnings;
  Json samples = Json::array();
  for (const auto& s : rep.samples) samples.push_back(phase_sample_to_json(s));
  j["samples"] = std::move(samples);
  return j;
}

namespace {

std::string block_provenance(const ReconstructionReport& rep, int j, int k) {
  // Samples are tagged mode{i}/... or pair{j}{k}/...; name the data source.
  const std::string mode_tag = "mode" + std::to_string(j);
  const std::string pair_tag = "pair" + std::to_string(std::min(j, k)) + std::to_string(std::max(j, k));
  const std::string& want = (j == k) ? mode_tag : pair_tag;
  for (const auto& s : rep.samples)
    if (s.tag.rfind(want, 0) == 0) return want + "/*";
  return "exact-formula";
}

}  // namespace

std::string report_to_csv(const ReconstructionReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "block,row,col,estimate,truth,abs_error,sigma,provenance\n";
  auto emit = [&](const std::string& name, int j, int k, int r, int c) {
    const double est = rep.V_est(2 * j + r, 2 * k + c);
    out << name << ',' << r << ',' << c << ',' << est << ',';
    if (rep.V_true) {
      const double truth = (*rep.V_true)(2 * j + r, 2 * k + c);
      out << truth << ',' << std::abs(est - truth) << ',';
    } else {
      out << ",,";
    }
    out << rep.sigma(2 * j + r, 2 * k + c) << ',' << block_provenance(rep, j, k) << '\n';
  };
  for (int j = 0; j < rep.n; ++j)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) emit("V" + std::to_string(j), j, j, r, c);
  for (int j = 0; j < rep.n; ++j)
    for (int k = j + 1; k < rep.n; ++k)
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          emit("E" + std::to_string(j) + std::to_string(k), j, k, r, c);
  return out.str();
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), Errc::io_error, "cannot open for writing: " + path);
  f << body;
  require(f.good(), Errc::io_error, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), Errc::io_error, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace gqs
