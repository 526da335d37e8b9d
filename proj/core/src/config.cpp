#include "ipm/config.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "ipm/error.hpp"

namespace ipm {
namespace {

struct Key {
  const char* section;
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string trim(std::string_view v) {
  const auto b = v.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(" \t\r");
  return std::string(v.substr(b, e - b + 1));
}

std::string qualified(const Key& k) { return std::string(k.section) + "." + k.name; }

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw ValidationError(fmt::format("{}: expected a number, got '{}'", key, v));
  }
  if (!std::isfinite(out)) throw ValidationError(fmt::format("{}: value must be finite", key));
  return out;
}

long to_int(const std::string& key, const std::string& v) {
  long out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw ValidationError(fmt::format("{}: expected an integer, got '{}'", key, v));
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValidationError(fmt::format("{}: expected true or false, got '{}'", key, v));
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

const char* kind_name(DatumKind k) {
  switch (k) {
    case DatumKind::gaussian: return "gaussian";
    case DatumKind::bump: return "bump";
    case DatumKind::stratified: return "stratified";
    case DatumKind::random: return "random";
  }
  return "?";
}

#define IPM_REAL(sec, nm, field)                                                          \
  Key {                                                                                   \
    sec, nm, [](RunConfig& c, const std::string& v) { c.field = to_double(nm, v); },      \
        [](const RunConfig& c) { return num(c.field); }                                   \
  }
#define IPM_INT(sec, nm, field)                                                           \
  Key {                                                                                   \
    sec, nm,                                                                              \
        [](RunConfig& c, const std::string& v) {                                          \
          c.field = static_cast<decltype(c.field)>(to_int(nm, v));                        \
        },                                                                                \
        [](const RunConfig& c) { return std::to_string(c.field); }                        \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      IPM_INT("grid", "n", n),
      IPM_REAL("grid", "box", box),
      IPM_REAL("grid", "s", s),
      IPM_REAL("solver", "dt", solver.dt),
      IPM_REAL("solver", "T", solver.T),
      Key{"solver", "dealias",
          [](RunConfig& c, const std::string& v) { c.solver.dealias = to_bool("dealias", v); },
          [](const RunConfig& c) { return std::string(c.solver.dealias ? "true" : "false"); }},
      IPM_REAL("solver", "cfl_guard", solver.cfl_guard),
      IPM_REAL("solver", "blowup_factor", solver.blowup_factor),
      Key{"datum", "kind",
          [](RunConfig& c, const std::string& v) {
            if (v == "gaussian") c.datum.kind = DatumKind::gaussian;
            else if (v == "bump") c.datum.kind = DatumKind::bump;
            else if (v == "stratified") c.datum.kind = DatumKind::stratified;
            else if (v == "random") c.datum.kind = DatumKind::random;
            else throw ValidationError(fmt::format("kind: unknown datum kind '{}'", v));
          },
          [](const RunConfig& c) { return std::string(kind_name(c.datum.kind)); }},
      IPM_REAL("datum", "x1", datum.center.x1),
      IPM_REAL("datum", "x2", datum.center.x2),
      IPM_REAL("datum", "radius", datum.radius),
      IPM_REAL("datum", "amplitude", datum.amplitude),
      IPM_INT("datum", "modes", datum.modes),
      IPM_INT("datum", "seed", datum.seed),
      IPM_REAL("prop3", "R", prop3.R),
      IPM_INT("prop3", "N", prop3.N),
      IPM_REAL("prop3", "eps", prop3.eps),
      IPM_REAL("prop3", "bullet_x1", prop3.rho_bullet.center.x1),
      IPM_REAL("prop3", "bullet_x2", prop3.rho_bullet.center.x2),
      IPM_REAL("prop3", "bullet_radius", prop3.rho_bullet.radius),
      IPM_REAL("prop3", "bullet_norm", prop3.rho_bullet.target_norm),
      IPM_REAL("prop3", "xstar_x1", prop3.xstar.x1),
      IPM_REAL("prop3", "xstar_x2", prop3.xstar.x2),
      IPM_REAL("prop3", "bar_x1", prop3.rho_bar.center.x1),
      IPM_REAL("prop3", "bar_x2", prop3.rho_bar.center.x2),
      IPM_REAL("prop3", "bar_radius", prop3.rho_bar.radius),
      IPM_REAL("prop3", "bar_norm", prop3.rho_bar.target_norm),
      IPM_INT("trajectory", "count", trajectory.count),
      IPM_REAL("trajectory", "ring_radius", trajectory.ring_radius),
      IPM_INT("trajectory", "stride", trajectory.stride),
      IPM_REAL("scaling", "lambda", scaling.lambda),
      IPM_REAL("scaling", "horizon", scaling.T),
  };
  return table;
}

#undef IPM_REAL
#undef IPM_INT

const Key* lookup(const std::string& section, const std::string& name) {
  if (!section.empty()) {
    for (const Key& k : keys()) {
      if (section == k.section && name == k.name) return &k;
    }
    return nullptr;
  }
  const Key* found = nullptr;
  for (const Key& k : keys()) {
    if (name == k.name) {
      if (found) throw ValidationError(fmt::format("{}: ambiguous key, qualify it with a section", name));
      found = &k;
    }
  }
  return found;
}

void check(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ValidationError(fmt::format("{}: {}", key, what));
}

}  // namespace

Grid RunConfig::grid() const { return Grid(n, n, box, s); }

Prop3Config RunConfig::prop3_config(int threads) const {
  Prop3Config c;
  c.grid = grid();
  c.solver = solver;
  c.R = prop3.R;
  c.N = prop3.N;
  c.eps = prop3.eps;
  c.rho_bullet = prop3.rho_bullet;
  c.rho_bullet.s = s;
  c.xstar = prop3.xstar;
  c.rho_bar = prop3.rho_bar;
  c.rho_bar.s = s;
  c.threads = threads;
  return c;
}

void RunConfig::validate() const {
  check(n >= 8 && n % 2 == 0, "n", "grid size must be even and at least 8");
  check(box > 0.0, "box", "must be positive");
  check(s > 2.0, "s", "must exceed 2");
  check(solver.dt > 0.0, "dt", "must be positive");
  check(solver.T >= 0.0, "T", "must be nonnegative");
  check(solver.T == 0.0 || solver.dt <= solver.T, "dt", "must not exceed T");
  check(solver.cfl_guard > 0.0, "cfl_guard", "must be positive");
  check(solver.blowup_factor > 1.0, "blowup_factor", "must exceed 1");
  check(datum.radius > 0.0, "radius", "must be positive");
  check(datum.modes >= 1 && 3 * datum.modes <= n, "modes", "must lie in [1, n/3]");
  check(prop3.R > 0.0, "R", "must be positive");
  check(prop3.N >= 4, "N", "must be at least 4");
  check(prop3.rho_bullet.radius > 0.0, "bullet_radius", "must be positive");
  check(prop3.rho_bullet.target_norm >= 0.0, "bullet_norm", "must be nonnegative");
  check(prop3.rho_bar.radius > 0.0, "bar_radius", "must be positive");
  check(prop3.rho_bar.target_norm > 0.0, "bar_norm", "must be positive");
  check(trajectory.count >= 1, "count", "must be at least 1");
  check(trajectory.ring_radius >= 0.0, "ring_radius", "must be nonnegative");
  check(trajectory.stride >= 1, "stride", "must be at least 1");
  check(scaling.lambda > 0.0, "lambda", "must be positive");
  check(scaling.T > 0.0, "horizon", "must be positive");
}

bool operator==(const RunConfig& a, const RunConfig& b) { return echo_config(a) == echo_config(b); }

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError(fmt::format("line {}: malformed section header", line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const Key& k : keys()) known = known || section == k.section;
      if (!known) throw ValidationError(fmt::format("{}: unknown section", section));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(fmt::format("line {}: expected key = value", line_no));
    }
    std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::string sec = section;
    if (const auto dot = name.find('.'); dot != std::string::npos) {
      sec = name.substr(0, dot);
      name = name.substr(dot + 1);
    }
    const Key* key = lookup(sec, name);
    if (!key) {
      throw ValidationError(fmt::format("{}: unknown key", sec.empty() ? name : sec + "." + name));
    }
    if (!seen.insert(qualified(*key)).second) {
      throw ValidationError(fmt::format("{}: duplicate key", name));
    }
    key->set(cfg, value);
  }
  cfg.validate();
  return cfg;
}

std::string echo_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const Key& k : keys()) {
    if (section != k.section) {
      section = k.section;
      out += fmt::format("{}[{}]\n", out.empty() ? "" : "\n", section);
    }
    out += fmt::format("{} = {}\n", k.name, k.get(cfg));
  }
  return out;
}

}  // namespace ipm
