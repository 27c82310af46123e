#include "ufd/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ufd/errors.hpp"

namespace ufd {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_text(const std::string& text) {
  KeyValueConfig kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (kv.values_.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key: " + key);
    kv.values_[key] = value;
    kv.order_.push_back(key);
  }
  return kv;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key: " + key);
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw ConfigError("key " + key + ": not a number: '" + s + "'");
  return v;
}

long long KeyValueConfig::get_int(const std::string& key) const {
  const std::string s = get_string(key);
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty())
    throw ConfigError("key " + key + ": not an integer: '" + s + "'");
  return v;
}

bool KeyValueConfig::get_bool(const std::string& key) const {
  const std::string s = get_string(key);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ConfigError("key " + key + ": not a boolean: '" + s + "'");
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  const std::string s = get_string(key);
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string cell =
        trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (cell.empty())
      throw ConfigError("key " + key + ": empty list entry");
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size())
      throw ConfigError("key " + key + ": not a number: '" + cell + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("key " + key + ": empty list");
  return out;
}

std::string KeyValueConfig::get_string_or(const std::string& key,
                                          const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueConfig::get_int_or(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::string KeyValueConfig::render() const {
  std::string out;
  for (const std::string& key : order_) {
    out += key;
    out += " = ";
    out += values_.at(key);
    out += '\n';
  }
  return out;
}

void KeyValueConfig::restrict_keys(const std::vector<std::string>& allowed) const {
  for (const std::string& key : order_)
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key: " + key);
}

namespace {

GridKind parse_grid_kind(const std::string& s) {
  if (s == "periodic1d") return GridKind::periodic_1d;
  if (s == "truncated1d") return GridKind::truncated_1d;
  if (s == "tensor2d") return GridKind::tensor_2d;
  throw ConfigError("unknown grid kind: " + s);
}

PotentialSpec parse_weight(const KeyValueConfig& kv) {
  const std::string kind = kv.get_string_or("weight.kind", "uniform");
  if (kind == "uniform") return PotentialSpec::uniform();
  if (kind == "quadratic") return PotentialSpec::quadratic(kv.get_double_or("weight.sigma", 1.0));
  if (kind == "power") return PotentialSpec::power(kv.get_double_or("weight.alpha", 1.5));
  throw ConfigError("unknown weight kind: " + kind);
}

InitialSpec parse_initial(const KeyValueConfig& kv) {
  const std::string kind = kv.get_string_or("initial.kind", "cosine");
  if (kind == "cosine")
    return InitialSpec::cosine(kv.get_double_or("initial.epsilon", 0.3),
                               static_cast<int>(kv.get_int_or("initial.mode", 1)));
  if (kind == "step")
    return InitialSpec::ratio_step(kv.get_double_or("initial.u_lo", 1.5),
                                   kv.get_double_or("initial.u_hi", 0.5));
  if (kind == "tilt")
    return InitialSpec::tilt(static_cast<int>(kv.get_int_or("initial.shift", 1)),
                             kv.get_double_or("initial.clip_lo", 0.2),
                             kv.get_double_or("initial.clip_hi", 5.0));
  throw ConfigError("unknown initial kind: " + kind);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_kv(const KeyValueConfig& kv) {
  kv.restrict_keys({
      "grid.kind", "grid.n", "grid.half_width",
      "weight.kind", "weight.sigma", "weight.alpha",
      "r",
      "initial.kind", "initial.epsilon", "initial.mode", "initial.u_lo",
      "initial.u_hi", "initial.shift", "initial.clip_lo", "initial.clip_hi",
      "solver.t_end", "solver.cfl", "solver.record_every", "solver.dt_max",
      "solver.positivity_floor", "solver.max_halvings",
      "poincare.tol", "poincare.ladder",
      "ladder.ks", "ladder.radius", "ladder.t_end",
      "verify.samples",
      "seed",
  });

  ExperimentConfig cfg;
  cfg.weight = parse_weight(kv);
  cfg.grid_kind = kv.has("grid.kind")
                      ? parse_grid_kind(kv.get_string("grid.kind"))
                      : (cfg.weight.kind == PotentialSpec::Kind::uniform
                             ? GridKind::periodic_1d
                             : GridKind::truncated_1d);
  cfg.n_cells = static_cast<int>(kv.get_int_or("grid.n", 400));
  if (kv.has("grid.half_width")) cfg.half_width = kv.get_double("grid.half_width");
  cfg.r = kv.get_double_or("r", 2.0);
  cfg.initial = parse_initial(kv);

  cfg.solver.t_end = kv.get_double_or("solver.t_end", 0.1);
  cfg.solver.cfl_safety = kv.get_double_or("solver.cfl", 0.4);
  cfg.solver.record_every = kv.get_double_or("solver.record_every", 0.0);
  if (kv.has("solver.dt_max")) cfg.solver.dt_max = kv.get_double("solver.dt_max");
  cfg.solver.positivity_floor = kv.get_double_or("solver.positivity_floor", 1e-14);
  cfg.solver.max_halvings = static_cast<int>(kv.get_int_or("solver.max_halvings", 20));

  cfg.poincare_tol = kv.get_double_or("poincare.tol", 1e-10);
  if (kv.has("poincare.ladder")) {
    for (double v : kv.get_double_list("poincare.ladder")) {
      if (v < 4 || v != std::floor(v))
        throw ConfigError("poincare.ladder entries must be integers >= 4");
      cfg.poincare_ladder.push_back(static_cast<long long>(v));
    }
  }

  if (kv.has("ladder.ks")) cfg.ladder.ks = kv.get_double_list("ladder.ks");
  cfg.ladder.compare_radius = kv.get_double_or("ladder.radius", 3.0);
  cfg.ladder.t_end = kv.get_double_or("ladder.t_end", 0.0);
  cfg.ladder.solver = cfg.solver;

  cfg.verify_samples = kv.get_int_or("verify.samples", 500);
  if (cfg.verify_samples < 1) throw ConfigError("verify.samples must be >= 1");
  const long long seed = kv.get_int_or("seed", 12345);
  if (seed < 0) throw ConfigError("seed must be >= 0");
  cfg.seed = static_cast<unsigned long long>(seed);
  return cfg;
}

double default_half_width(const PotentialSpec& weight, double r) {
  if (!(r > 1.0)) throw ParameterError("the exponent r must exceed 1");
  switch (weight.kind) {
    case PotentialSpec::Kind::uniform:
      throw ConfigError("the periodic domain has no half-width to choose");
    case PotentialSpec::Kind::quadratic:
      return 6.0 * weight.sigma * std::sqrt(r + 1.0);
    case PotentialSpec::Kind::power: {
      // Standard deviation of e^{-|x/lam|^a / a}:
      // lam a^{1/a} sqrt(Gamma(3/a) / Gamma(1/a)).
      const double a = weight.alpha;
      const double lam = weight.scale * std::pow(r + 1.0, 1.0 / a);
      const double std_m =
          lam * std::pow(a, 1.0 / a) * std::sqrt(std::tgamma(3.0 / a) / std::tgamma(1.0 / a));
      return 6.0 * std_m;
    }
  }
  throw ConfigError("unknown weight kind");
}

}  // namespace ufd
