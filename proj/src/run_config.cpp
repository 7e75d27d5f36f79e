#include "frontprop/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "frontprop/experiments.hpp"

namespace frontprop {

namespace {

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  return v;
}

std::vector<double> doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& x : split(s, ',')) out.push_back(to_double(x));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<long> longs(const std::string& s) {
  std::vector<long> out;
  for (const auto& x : split(s, ',')) out.push_back(to_long(x));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

double positive(double v) {
  if (!(v > 0)) throw std::invalid_argument("must be positive");
  return v;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment",
       [](RunConfig& c, const std::string& v) {
         static const std::vector<std::string> names = {"validate", "simulate", "speed",    "ldp",      "slowdown",
                                                         "renewal",  "decouple", "appendixA", "all"};
         if (std::find(names.begin(), names.end(), v) == names.end())
           throw std::invalid_argument("unknown experiment '" + v + "'");
         c.experiment = v;
       }},
      {"profile",
       [](RunConfig& c, const std::string& v) {
         parse_profile(v);
         c.profile = v;
       }},
      {"a",
       [](RunConfig& c, const std::string& v) {
         const long a = to_long(v);
         if (a < 1 || a > 64) throw std::invalid_argument("must lie in [1, 64]");
         c.a = static_cast<int>(a);
       }},
      {"eps",
       [](RunConfig& c, const std::string& v) {
         c.eps = doubles(v);
         for (double e : c.eps)
           if (!(e >= 0 && e < 0.5)) throw std::invalid_argument("bias must lie in [0, 1/2)");
         if (!std::is_sorted(c.eps.begin(), c.eps.end())) throw std::invalid_argument("list must be ascending");
       }},
      {"t_grid",
       [](RunConfig& c, const std::string& v) {
         c.t_grid = doubles(v);
         for (double t : c.t_grid) positive(t);
       }},
      {"n_grid",
       [](RunConfig& c, const std::string& v) {
         c.n_grid = longs(v);
         for (long n : c.n_grid)
           if (n < 1) throw std::invalid_argument("entries must be >= 1");
       }},
      {"m_grid",
       [](RunConfig& c, const std::string& v) {
         c.m_grid = longs(v);
         for (long m : c.m_grid)
           if (m < 1) throw std::invalid_argument("entries must be >= 1");
       }},
      {"b_grid",
       [](RunConfig& c, const std::string& v) {
         c.b_grid = doubles(v);
         for (double b : c.b_grid) positive(b);
       }},
      {"replicas",
       [](RunConfig& c, const std::string& v) {
         const long r = to_long(v);
         if (r < 2) throw std::invalid_argument("must be >= 2");
         c.replicas = static_cast<int>(r);
       }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); }},
      {"tol",
       [](RunConfig& c, const std::string& v) {
         const double t = to_double(v);
         if (!(t > 0 && t < 1)) throw std::invalid_argument("must lie in (0, 1)");
         c.tol = t;
       }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = v; }},
      {"mode", [](RunConfig& c, const std::string& v) { c.mode = renewal_mode_from_string(v); }},
      {"theta", [](RunConfig& c, const std::string& v) { c.theta = positive(to_double(v)); }},
      {"alpha1", [](RunConfig& c, const std::string& v) { c.alpha1 = to_double(v); }},
      {"alpha2", [](RunConfig& c, const std::string& v) { c.alpha2 = to_double(v); }},
      {"eps0", [](RunConfig& c, const std::string& v) { c.eps0 = to_double(v); }},
      {"p", [](RunConfig& c, const std::string& v) { c.p = positive(to_double(v)); }},
      {"L", [](RunConfig& c, const std::string& v) { c.L = to_long(v); }},
      {"M", [](RunConfig& c, const std::string& v) { c.M = to_long(v); }},
      {"alpha_hat0", [](RunConfig& c, const std::string& v) { c.alpha_hat0 = to_double(v); }},
      {"horizon", [](RunConfig& c, const std::string& v) { c.horizon = positive(to_double(v)); }},
      {"censor_T", [](RunConfig& c, const std::string& v) { c.censor_T = positive(to_double(v)); }},
      {"count",
       [](RunConfig& c, const std::string& v) {
         const long n = to_long(v);
         if (n < 1) throw std::invalid_argument("must be >= 1");
         c.count = static_cast<int>(n);
       }},
      {"window_c",
       [](RunConfig& c, const std::string& v) {
         c.window_c = to_double(v);
         if (c.window_c < 0) throw std::invalid_argument("must be >= 0");
       }},
      {"window_b", [](RunConfig& c, const std::string& v) { c.window_b = positive(to_double(v)); }},
      {"tail_A", [](RunConfig& c, const std::string& v) { c.tail_A = positive(to_double(v)); }},
      {"tail_c", [](RunConfig& c, const std::string& v) { c.tail_c = positive(to_double(v)); }},
      {"tail_excess", [](RunConfig& c, const std::string& v) { c.tail_excess = to_double(v); }},
      {"block_m",
       [](RunConfig& c, const std::string& v) {
         c.block_m = to_long(v);
         if (c.block_m < 1) throw std::invalid_argument("must be >= 1");
       }},
      {"block_ell",
       [](RunConfig& c, const std::string& v) {
         c.block_ell = to_long(v);
         if (c.block_ell < 1) throw std::invalid_argument("must be >= 1");
       }},
      {"block_alpha",
       [](RunConfig& c, const std::string& v) {
         c.block_alpha = to_double(v);
         if (!(c.block_alpha > 0 && c.block_alpha < 1)) throw std::invalid_argument("must lie in (0, 1)");
       }},
      {"family",
       [](RunConfig& c, const std::string& v) {
         const long n = to_long(v);
         if (n < 2) throw std::invalid_argument("must be >= 2");
         c.family = static_cast<int>(n);
       }},
  };
  return table;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error("invalid configuration: " + join(messages, "; ")), messages_(std::move(messages)) {}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

EtaProfile parse_profile(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty() || parts[0].empty()) throw std::invalid_argument("empty profile");
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i) {
    if (parts.size() <= i) throw std::invalid_argument("profile '" + spec + "' is missing a parameter");
    return parts[i];
  };
  if (kind == "delta") return EtaProfile::finite({1});
  if (kind == "finite") {
    std::vector<long> table = longs(arg(1));
    for (long x : table)
      if (x < 0) throw std::invalid_argument("profile counts must be >= 0");
    return EtaProfile::finite(table);
  }
  if (kind == "constant") {
    const long a = to_long(arg(1));
    if (a < 1) throw std::invalid_argument("constant profile needs a >= 1");
    return EtaProfile::constant(a);
  }
  if (kind == "polynomial") {
    const double beta = positive(to_double(arg(1)));
    const double c = parts.size() > 2 ? positive(to_double(parts[2])) : 1.0;
    return EtaProfile::polynomial(beta, c);
  }
  if (kind == "exponential") return EtaProfile::exponential(positive(to_double(arg(1))));
  throw std::invalid_argument("unknown profile kind '" + kind + "'");
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError({"unknown key '" + key + "'"});
  try {
    it->second(cfg, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError({key + ": " + e.what()});
  }
  cfg.entries[key] = value;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const auto& table = setters();
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key=value");
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) {
      errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      continue;
    }
    if (cfg.entries.count(key)) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      continue;
    }
    try {
      it->second(cfg, value);
      cfg.entries[key] = value;
    } catch (const std::invalid_argument& e) {
      errors.push_back("line " + std::to_string(lineno) + ": " + key + ": " + e.what());
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : entries) {
    if (k == "out") continue;  // where results go does not change them
    out += k + "=" + v + "\n";
  }
  return out;
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

EtaProfile RunConfig::eta_profile() const { return parse_profile(profile); }

ParticleConfiguration RunConfig::start() const { return ParticleConfiguration::from_profile(eta_profile(), a); }

RenewalCandidate RunConfig::renewal_candidate() const {
  RenewalCandidate c;
  c.a = a;
  c.theta = theta;
  c.alpha1 = alpha1;
  c.alpha2 = alpha2;
  c.eps0 = eps0;
  c.p = p;
  c.L = L;
  c.M = M;
  c.mode = mode;
  c.alpha_hat0 = alpha_hat0;
  return c;
}

}  // namespace frontprop
