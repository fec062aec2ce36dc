#include "spin2d/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spin2d/error.hpp"

namespace spin2d {

namespace {

struct Entry {
  std::string value;
  bool quoted = false;
  int line = 0;
};

const std::map<std::string, double>& tolerances() {
  static const std::map<std::string, double> t{
      {"gamma-check", 1e-12},     {"ricci-identities", 1e-7}, {"appendix-identities", 1e-7},
      {"spin-covariance", 1e-8},  {"killing-vector", 1e-9},   {"killing-tensor", 1e-9},
      {"integrability", 1e-6},    {"commutator", 1e-8},       {"d5-form", 1e-9},
      {"separate-solve", 1e-10},  {"minkowski-complex", 1e-10}, {"hj-identities", 1e-13},
  };
  return t;
}

const std::map<std::string, std::set<std::string>>& task_params() {
  static const std::map<std::string, std::set<std::string>> p{
      {"gamma-check", {"samples"}},
      {"ricci-identities", {"points", "jets"}},
      {"appendix-identities", {"points", "jets"}},
      {"spin-covariance", {"points", "jets", "a", "b"}},
      {"killing-vector", {"points"}},
      {"killing-tensor", {"points"}},
      {"integrability", {}},
      {"commutator", {"points", "jets", "order"}},
      {"d5-form", {"points", "jets"}},
      {"separate-solve", {"lambda", "kappa", "c_ratio", "h", "y_start", "y_end", "x", "convergence"}},
      {"minkowski-complex", {"jets", "p", "lambda"}},
      {"hj-identities", {"samples"}},
  };
  return p;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

Expr parse_expr(const std::string& key, const Entry& e) {
  try {
    return Expr::parse(e.value);
  } catch (const ParseError& err) {
    fail(e.line, key + ": " + err.what() + " in \"" + e.value + "\"");
  }
}

Complex constant_of(const std::string& key, const Entry& e) {
  const Expr x = parse_expr(key, e);
  if (x.depends_on(Axis::X) || x.depends_on(Axis::Y)) fail(e.line, key + " must be a constant");
  try {
    return x.eval(0.0, 0.0);
  } catch (const DomainError& err) {
    fail(e.line, key + ": " + err.what());
  }
}

double number_of(const std::string& key, const Entry& e) {
  const Complex c = constant_of(key, e);
  if (c.imag() != 0.0) fail(e.line, key + " must be real");
  return c.real();
}

int integer_of(const std::string& key, const Entry& e) {
  const double v = number_of(key, e);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(e.line, key + " must be an integer");
  return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{
      "gamma-check",    "ricci-identities", "appendix-identities", "spin-covariance",
      "killing-vector", "killing-tensor",   "integrability",       "commutator",
      "d5-form",        "separate-solve",   "minkowski-complex",   "hj-identities",
  };
  return names;
}

double default_tolerance(const std::string& task) {
  const auto it = tolerances().find(task);
  if (it == tolerances().end()) throw ConfigError("unknown task '" + task + "'");
  return it->second;
}

double TaskSpec::number(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  return number_of("task." + name + "." + key, {it->second, false, 0});
}

int TaskSpec::integer(const std::string& key, int fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  return integer_of("task." + name + "." + key, {it->second, false, 0});
}

Complex TaskSpec::complex(const std::string& key, Complex fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  return constant_of("task." + name + "." + key, {it->second, false, 0});
}

Expr TaskSpec::expr(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return parse_expr("task." + name + "." + key, {it == params.end() ? fallback : it->second, true, 0});
}

bool TaskSpec::flag(const std::string& key, bool fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("task." + name + "." + key + " must be true or false");
}

FrameField VerificationConfig::frame_field() const {
  if (geometry == GeometryKind::Liouville) return liouville_frame(liouville, frame_kind);
  return FrameField(signature, frame, complex_frame);
}

VerificationConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    // strip comment outside quotes
    bool in_quote = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') in_quote = !in_quote;
      if (raw[i] == '#' && !in_quote) {
        cut = i;
        break;
      }
    }
    if (in_quote) fail(line_no, "unterminated quote");
    const std::string line = trim(raw.substr(0, cut));
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) fail(line_no, "missing key");
    Entry e{value, false, line_no};
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') fail(line_no, key + ": stray text after quoted value");
      e.value = value.substr(1, value.size() - 2);
      e.quoted = true;
    }
    if (e.value.empty()) fail(line_no, key + ": empty value");
    if (!kv.emplace(key, e).second) fail(line_no, "duplicate key '" + key + "'");
  }

  VerificationConfig cfg;
  std::set<std::string> used;
  auto take = [&](const std::string& key) -> const Entry* {
    const auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };

  if (const Entry* e = take("signature")) {
    if (e->value == "euclidean")
      cfg.signature = Signature::euclidean();
    else if (e->value == "lorentzian")
      cfg.signature = Signature::lorentzian();
    else
      fail(e->line, "signature must be euclidean or lorentzian");
  } else {
    throw ConfigError("config: missing 'signature'");
  }

  const Entry* la = take("geometry.liouville.A");
  const Entry* lb = take("geometry.liouville.B");
  const char* frame_keys[2][2] = {{"geometry.e11", "geometry.e12"}, {"geometry.e21", "geometry.e22"}};
  int frame_found = 0;
  for (int mu = 0; mu < 2; ++mu)
    for (int a = 0; a < 2; ++a)
      if (const Entry* e = take(frame_keys[mu][a])) {
        cfg.frame[mu][a] = parse_expr(frame_keys[mu][a], *e);
        ++frame_found;
      }
  if ((la || lb) && frame_found) throw ConfigError("config: give either geometry.liouville.* or geometry.e11..e22, not both");
  if (la || lb) {
    if (!la || !lb) throw ConfigError("config: geometry.liouville needs both A and B");
    cfg.geometry = GeometryKind::Liouville;
    cfg.liouville = {cfg.signature, parse_expr("geometry.liouville.A", *la), parse_expr("geometry.liouville.B", *lb)};
    try {
      cfg.liouville.validate();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& err) {
      fail(la->line, err.what());
    }
  } else if (frame_found == 4) {
    cfg.geometry = GeometryKind::Frame;
  } else {
    throw ConfigError("config: geometry needs geometry.e11, e12, e21, e22 or geometry.liouville.A/B");
  }
  if (const Entry* e = take("geometry.frame_kind")) {
    if (cfg.geometry != GeometryKind::Liouville) fail(e->line, "frame_kind only applies to Liouville geometry");
    if (e->value == "d5")
      cfg.frame_kind = LiouvilleFrameKind::D5;
    else if (e->value == "diagonal")
      cfg.frame_kind = LiouvilleFrameKind::Diagonal;
    else
      fail(e->line, "frame_kind must be d5 or diagonal");
  }
  if (const Entry* e = take("geometry.complex")) {
    if (e->value != "true" && e->value != "false") fail(e->line, "geometry.complex must be true or false");
    cfg.complex_frame = e->value == "true";
  }

  static const char* kKilling[] = {"killing.e11",    "killing.e12",    "killing.e22", "killing.alpha1",
                                   "killing.alpha2", "killing.zeta1",  "killing.zeta2", "killing.A",
                                   "killing.g"};
  for (const char* k : kKilling)
    if (kv.count(k)) cfg.has_killing = true;
  if (cfg.has_killing) {
    cfg.killing = KillingData::zero();
    cfg.killing.g.reset();  // synthesize unless given
    Expr* slots[] = {&cfg.killing.e11,      &cfg.killing.e12,      &cfg.killing.e22,
                     &cfg.killing.alpha[0], &cfg.killing.alpha[1], &cfg.killing.zeta[0],
                     &cfg.killing.zeta[1]};
    for (int i = 0; i < 7; ++i)
      if (const Entry* e = take(kKilling[i])) *slots[i] = parse_expr(kKilling[i], *e);
    if (const Entry* e = take("killing.A")) cfg.killing.A = constant_of("killing.A", *e);
    if (const Entry* e = take("killing.g")) {
      if (!e->quoted && e->value == "synthesize")
        cfg.killing.g.reset();
      else
        cfg.killing.g = parse_expr("killing.g", *e);
    }
  }

  static const char* kRegion[] = {"region.x_min", "region.x_max", "region.y_min", "region.y_max"};
  double* rslots[] = {&cfg.region.x_min, &cfg.region.x_max, &cfg.region.y_min, &cfg.region.y_max};
  for (int i = 0; i < 4; ++i)
    if (const Entry* e = take(kRegion[i])) *rslots[i] = number_of(kRegion[i], *e);
  if (!(cfg.region.x_max > cfg.region.x_min) || !(cfg.region.y_max > cfg.region.y_min))
    throw ConfigError("config: region is degenerate");
  if (const Entry* e = take("grid.nx")) cfg.grid.nx = integer_of("grid.nx", *e);
  if (const Entry* e = take("grid.ny")) cfg.grid.ny = integer_of("grid.ny", *e);
  if (cfg.grid.nx < 2 || cfg.grid.ny < 2) throw ConfigError("config: grid must be at least 2x2");
  if (const Entry* e = take("jet_order")) {
    cfg.jet_order = integer_of("jet_order", *e);
    if (cfg.jet_order < 4 || cfg.jet_order > 12) fail(e->line, "jet_order must lie in [4, 12]");
  }
  if (const Entry* e = take("seed")) {
    const double s = number_of("seed", *e);
    if (s < 0 || s != std::floor(s) || s > 9.007199254740992e15) fail(e->line, "seed must be a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (const Entry* e = take("mass")) cfg.mass = constant_of("mass", *e);

  const Entry* te = take("tasks");
  if (!te) throw ConfigError("config: missing 'tasks'");
  std::set<std::string> requested;
  for (const std::string& t : split_list(te->value)) {
    if (!tolerances().count(t)) fail(te->line, "unknown task '" + t + "'");
    if (!requested.insert(t).second) fail(te->line, "task '" + t + "' listed twice");
  }
  if (requested.empty()) fail(te->line, "no tasks listed");

  for (const std::string& name : task_names()) {
    if (!requested.count(name)) continue;
    TaskSpec spec{name, default_tolerance(name), {}};
    const std::string prefix = "task." + name + ".";
    for (auto& [key, e] : kv) {
      if (key.rfind(prefix, 0) != 0) continue;
      const std::string param = key.substr(prefix.size());
      used.insert(key);
      if (param == "tolerance") {
        spec.tolerance = number_of(key, e);
        if (!(spec.tolerance >= 0.0)) fail(e.line, key + " must be non-negative");
      } else if (task_params().at(name).count(param)) {
        spec.params[param] = e.value;
      } else {
        fail(e.line, "unknown parameter '" + param + "' for task " + name);
      }
    }
    cfg.tasks.push_back(std::move(spec));
  }

  for (const auto& [key, e] : kv)
    if (!used.count(key)) fail(e.line, "unknown key '" + key + "'");
  return cfg;
}

VerificationConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace spin2d
