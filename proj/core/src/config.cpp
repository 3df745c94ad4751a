#include "yinyang/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "yinyang/error.hpp"

namespace yy {

const char* problem_name(ProblemKind p) {
  switch (p) {
    case ProblemKind::Manufactured: return "manufactured";
    case ProblemKind::Landau: return "landau";
    case ProblemKind::HeatOnly: return "heat_only";
    case ProblemKind::Custom: return "custom";
  }
  return "?";
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(ErrorKind::Config, "config key '" + key + "': " + why);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) bad(key, "expected a number, got '" + v + "'");
  return x;
}

long to_int(const std::string& key, const std::string& v) {
  long x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  bad(key, "expected a boolean, got '" + v + "'");
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Key {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define YY_DOUBLE(name, field)                                                            \
  {name, {[](RunConfig& c, const std::string& v) { c.field = to_double(name, v); },       \
          [](const RunConfig& c) { return fmt(c.field); }}}
#define YY_INT(name, field)                                                               \
  {name, {[](RunConfig& c, const std::string& v) { c.field = to_int(name, v); },          \
          [](const RunConfig& c) { return std::to_string(c.field); }}}
#define YY_BOOL(name, field)                                                              \
  {name, {[](RunConfig& c, const std::string& v) { c.field = to_bool(name, v); },         \
          [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }}}
#define YY_STRING(name, field)                                                            \
  {name, {[](RunConfig& c, const std::string& v) { c.field = v; },                        \
          [](const RunConfig& c) { return c.field; }}}

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> k = {
      YY_DOUBLE("r_inner", extents.r_inner),
      YY_DOUBLE("r_outer", extents.r_outer),
      YY_DOUBLE("epsilon", extents.epsilon),
      YY_INT("n_r", grid.n_r),
      YY_INT("n_theta", grid.n_theta),
      YY_INT("n_phi", grid.n_phi),
      YY_DOUBLE("Ra", Ra),
      YY_DOUBLE("Pr", Pr),
      YY_DOUBLE("Re", Re),
      YY_DOUBLE("nu", nu),
      YY_DOUBLE("chi", chi),
      YY_DOUBLE("kappa", kappa),
      YY_STRING("gravity", gravity),
      YY_STRING("correction", correction),
      YY_DOUBLE("landau_a", landau_a),
      YY_DOUBLE("dt", dt),
      YY_DOUBLE("t_final", t_final),
      {"schwarz_mode",
       {[](RunConfig& c, const std::string& v) {
          if (v == "additive") c.schwarz.mode = SchwarzMode::Additive;
          else if (v == "multiplicative") c.schwarz.mode = SchwarzMode::Multiplicative;
          else bad("schwarz_mode", "expected additive or multiplicative, got '" + v + "'");
        },
        [](const RunConfig& c) {
          return std::string(c.schwarz.mode == SchwarzMode::Additive ? "additive" : "multiplicative");
        }}},
      YY_DOUBLE("tol", schwarz.tol),
      YY_INT("max_iters", schwarz.max_iters),
      YY_BOOL("flux_fix", schwarz.flux_fix),
      YY_BOOL("error_reduction", schwarz.error_reduction),
      YY_INT("interp_order", schwarz.interp_order),
      YY_BOOL("pressure_exchange", schwarz.pressure_exchange),
      YY_DOUBLE("flux_penalty", schwarz.flux_penalty),
      {"problem",
       {[](RunConfig& c, const std::string& v) {
          if (v == "manufactured") c.problem = ProblemKind::Manufactured;
          else if (v == "landau") c.problem = ProblemKind::Landau;
          else if (v == "heat_only") c.problem = ProblemKind::HeatOnly;
          else if (v == "custom") c.problem = ProblemKind::Custom;
          else bad("problem", "expected manufactured, landau, heat_only or custom, got '" + v + "'");
        },
        [](const RunConfig& c) { return std::string(problem_name(c.problem)); }}},
      YY_STRING("initial", initial),
      YY_DOUBLE("amplitude", amplitude),
      YY_INT("seed", seed),
      YY_STRING("csv", csv),
      YY_INT("dump_every", dump_every),
      YY_STRING("dump_path", dump_path),
      YY_BOOL("vtk", vtk),
      YY_INT("threads", threads),
      YY_INT("levels", levels),
      YY_BOOL("remove_pressure_mean", remove_pressure_mean),
  };
  return k;
}

}  // namespace

double RunConfig::viscosity() const {
  if (Re > 0) return 1.0 / Re;
  if (nu > 0) return nu;
  return Pr;
}

void RunConfig::validate() const {
  auto positive = [](const char* key, double v) {
    if (!(v > 0) || !std::isfinite(v)) bad(key, "must be positive");
  };
  positive("r_inner", extents.r_inner);
  positive("r_outer", extents.r_outer);
  if (!(extents.r_outer > extents.r_inner)) bad("r_outer", "must exceed r_inner");
  positive("epsilon", extents.epsilon);
  if (extents.epsilon >= 0.7) bad("epsilon", "must be below 0.7");
  if (grid.n_r < 2) bad("n_r", "must be >= 2");
  if (grid.n_theta < 4) bad("n_theta", "must be >= 4");
  if (grid.n_phi < 4) bad("n_phi", "must be >= 4");
  if (Ra < 0) bad("Ra", "must be non-negative");
  positive("Pr", Pr);
  if (Re < 0) bad("Re", "must be positive");
  if (nu < 0) bad("nu", "must be positive");
  if (Re > 0 && nu > 0) bad("nu", "give either Re or nu, not both");
  positive("chi", chi);
  positive("kappa", kappa);
  if (gravity != "radial_in" && gravity != "radial_out" && gravity != "none")
    bad("gravity", "expected radial_in, radial_out or none");
  if (correction != "consistent" && correction != "literal") bad("correction", "expected consistent or literal");
  if (!(landau_a > 1)) bad("landau_a", "must exceed 1");
  positive("dt", dt);
  positive("t_final", t_final);
  positive("tol", schwarz.tol);
  if (schwarz.max_iters < 1) bad("max_iters", "must be >= 1");
  if (schwarz.interp_order < 2 || schwarz.interp_order > 4) bad("interp_order", "must be 2, 3 or 4");
  positive("flux_penalty", schwarz.flux_penalty);
  if (initial != "zero" && initial != "random" && initial != "exact") bad("initial", "expected zero, random or exact");
  if (dump_every < 0) bad("dump_every", "must be >= 0");
  if (threads < 0) bad("threads", "must be >= 0");
  if (levels < 1) bad("levels", "must be >= 1");
  if (problem == ProblemKind::Landau && Re <= 0 && nu <= 0)
    bad("Re", "landau problem needs Re (or nu)");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  const auto& k = keys();
  auto it = k.find(key);
  if (it == k.end()) fail(ErrorKind::Config, "unknown config key '" + key + "'");
  it->second.set(c, value);
}

RunConfig parse_config(const std::string& text, RunConfig c) {
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::Config, "config line " + std::to_string(no) + ": expected key = value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void apply_override(RunConfig& c, const std::string& a) {
  const auto eq = a.find('=');
  if (eq == std::string::npos) fail(ErrorKind::Config, "override '" + a + "' is not key=value");
  apply_setting(c, trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  for (const auto& [name, k] : keys()) os << name << " = " << k.get(c) << "\n";
  return os.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& kv : keys()) out.push_back(kv.first);
  return out;
}

}  // namespace yy
