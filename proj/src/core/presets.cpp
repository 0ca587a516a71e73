#include "presets.hpp"

#include <map>
#include <sstream>

#include "json_io.hpp"

namespace gqs {

namespace {

std::map<std::string, std::string> parse_kv(const std::string& args) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    require(eq != std::string::npos, Errc::parse_error, "state spec: expected key=value, got " + item);
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

double get_num(const std::map<std::string, std::string>& kv, const std::string& key,
               std::optional<double> fallback = std::nullopt) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    require(fallback.has_value(), Errc::parse_error, "state spec: missing " + key);
    return *fallback;
  }
  return std::stod(it->second);
}

}  // namespace

GaussianState state_from_spec(const std::string& spec, std::uint64_t seed, double hbar) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args = (colon == std::string::npos) ? "" : spec.substr(colon + 1);

  if (head == "file") {
    require(!args.empty(), Errc::parse_error, "state spec: file: needs a path");
    return state_from_json(Json::parse(read_text_file(args)));
  }
  if (head == "vacuum") {
    const auto kv = parse_kv(args);
    return GaussianState::vacuum(static_cast<int>(get_num(kv, "n", 1.0)), hbar);
  }
  if (head == "tms") {
    const auto kv = parse_kv(args);
    return two_mode_squeezed_vacuum(get_num(kv, "r"), hbar);
  }
  if (head == "thermal") {
    const auto kv = parse_kv(args);
    const int n = static_cast<int>(get_num(kv, "n", 1.0));
    const double nu = get_num(kv, "nu");
    require(nu >= 0.5, Errc::invalid_argument, "thermal preset: nu must be >= 1/2");
    GaussianState st(Vec::Zero(2 * n), nu * Mat::Identity(2 * n, 2 * n), hbar);
    st.set_origin({}, Vec::Constant(n, nu));
    return st;
  }
  if (head == "random-pure" || head == "random-mixed") {
    const auto kv = parse_kv(args);
    const int n = static_cast<int>(get_num(kv, "n"));
    const double numax = get_num(kv, "numax", 2.0);
    const double zeta_max = get_num(kv, "zetamax", 1.5);
    const double s_max = get_num(kv, "smax", 2.0);
    return random_state(n, head == "random-pure" ? StateKind::pure : StateKind::mixed, seed,
                        numax, hbar, zeta_max, s_max);
  }
  fail(Errc::parse_error, "unknown state spec: " + spec);
}

}  // namespace gqs
