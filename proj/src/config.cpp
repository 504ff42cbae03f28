#include "spinfreeze/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "spinfreeze/error.hpp"

namespace spinfreeze {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(bool b) { return b ? "true" : "false"; }
std::string fmt(std::size_t n) { return std::to_string(n); }
std::string fmt_u64(std::uint64_t n) { return std::to_string(n); }
std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : "auto"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE) throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  if (v.empty() || v[0] == '-') throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::optional<double> parse_auto(const std::string& key, const std::string& v) {
  if (v == "auto") return std::nullopt;
  return parse_double(key, v);
}

const char* to_string(LogBase b) { return b == LogBase::natural ? "natural" : "two"; }
const char* to_string(Subsystem s) { return s == Subsystem::first ? "first" : "second"; }

template <typename E>
E parse_enum(const std::string& key, const std::string& v, std::initializer_list<E> options) {
  std::string valid;
  for (E e : options) {
    if (v == to_string(e)) return e;
    valid += (valid.empty() ? "" : ", ") + std::string(to_string(e));
  }
  throw ConfigError(key, "expected one of " + valid + ", got '" + v + "'");
}

struct Field {
  std::string key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

#define SF_DOUBLE(KEY, MEMBER)                                                                      \
  Field {                                                                                           \
    KEY, [](const ScenarioConfig& c) { return fmt(c.MEMBER); },                                     \
        [](ScenarioConfig& c, const std::string& v) { c.MEMBER = parse_double(KEY, v); }            \
  }
#define SF_AUTO(KEY, MEMBER)                                                                        \
  Field {                                                                                           \
    KEY, [](const ScenarioConfig& c) { return fmt(c.MEMBER); },                                     \
        [](ScenarioConfig& c, const std::string& v) { c.MEMBER = parse_auto(KEY, v); }              \
  }
#define SF_SIZE(KEY, MEMBER)                                                                        \
  Field {                                                                                           \
    KEY, [](const ScenarioConfig& c) { return fmt(c.MEMBER); },                                     \
        [](ScenarioConfig& c, const std::string& v) { c.MEMBER = parse_u64(KEY, v); }               \
  }
#define SF_BOOL(KEY, MEMBER)                                                                        \
  Field {                                                                                           \
    KEY, [](const ScenarioConfig& c) { return fmt(c.MEMBER); },                                     \
        [](ScenarioConfig& c, const std::string& v) { c.MEMBER = parse_bool(KEY, v); }              \
  }
#define SF_ENUM(KEY, MEMBER, ...)                                                                   \
  Field {                                                                                           \
    KEY, [](const ScenarioConfig& c) { return std::string(to_string(c.MEMBER)); },                  \
        [](ScenarioConfig& c, const std::string& v) { c.MEMBER = parse_enum(KEY, v, {__VA_ARGS__}); } \
  }

std::string fmt_amplitude(cplx a) { return fmt(a.real()) + " " + fmt(a.imag()); }

cplx parse_amplitude(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  std::string re, im, extra;
  if (!(in >> re >> im) || (in >> extra)) throw ConfigError(key, "expected '<re> <im>', got '" + v + "'");
  return {parse_double(key, re), parse_double(key, im)};
}

Field amplitude_field(std::size_t k) {
  const std::string key = "initial.amplitude[" + std::to_string(k) + "]";
  return {key, [k](const ScenarioConfig& c) { return fmt_amplitude(c.initial.amplitudes[k]); },
          [k, key](ScenarioConfig& c, const std::string& v) { c.initial.amplitudes[k] = parse_amplitude(key, v); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v = {
        {"name", [](const ScenarioConfig& c) { return c.name; }, [](ScenarioConfig& c, const std::string& s) { c.name = s; }},
        {"description", [](const ScenarioConfig& c) { return c.description; },
         [](ScenarioConfig& c, const std::string& s) { c.description = s; }},
        SF_ENUM("model", model, ModelKind::two_spin, ModelKind::nv_reduced, ModelKind::nv_full),
        SF_ENUM("frame", frame, Frame::rotating, Frame::lab),
        {"seed", [](const ScenarioConfig& c) { return fmt_u64(c.seed); },
         [](ScenarioConfig& c, const std::string& s) { c.seed = parse_u64("seed", s); }},
        SF_ENUM("metric", metric, MetricMode::ground, MetricMode::superposition),

        SF_DOUBLE("two_spin.delta_1", two_spin.delta_1),
        SF_DOUBLE("two_spin.delta_2", two_spin.delta_2),
        SF_DOUBLE("two_spin.omega_1", two_spin.omega_1),
        SF_DOUBLE("two_spin.omega_2", two_spin.omega_2),
        SF_DOUBLE("two_spin.v0", two_spin.v0),

        SF_DOUBLE("nv.d", nv.d),
        SF_DOUBLE("nv.ge_mub", nv.ge_mub),
        SF_DOUBLE("nv.gn_mun", nv.gn_mun),
        SF_DOUBLE("nv.a_par", nv.a_par),
        SF_DOUBLE("nv.a_perp", nv.a_perp),
        SF_DOUBLE("nv.q", nv.q),
        SF_DOUBLE("nv.b_z", nv.b_z),

        SF_ENUM("initial.kind", initial.kind, InitialKind::basis, InitialKind::nuclear_superposition,
                InitialKind::equal_superposition, InitialKind::amplitudes),
        {"initial.label", [](const ScenarioConfig& c) { return c.initial.label; },
         [](ScenarioConfig& c, const std::string& s) { c.initial.label = s; }},
    };
    for (std::size_t k = 0; k < 4; ++k) v.push_back(amplitude_field(k));
    const std::vector<Field> rest = {
        SF_DOUBLE("mw.rabi", mw.rabi),
        SF_AUTO("mw.carrier", mw.carrier),
        SF_DOUBLE("mw.phase", mw.phase),
        SF_DOUBLE("rf.rabi", rf.rabi),
        SF_AUTO("rf.carrier", rf.carrier),
        SF_DOUBLE("rf.phase", rf.phase),

        {"noise.profile",
         [](const ScenarioConfig& c) { return std::string(c.noise.profile ? to_string(*c.noise.profile) : "none"); },
         [](ScenarioConfig& c, const std::string& s) {
           if (s == "none") {
             c.noise.profile.reset();
           } else {
             c.noise.profile = parse_enum("noise.profile", s,
                                          {NoiseProfile::single_tone, NoiseProfile::gaussian, NoiseProfile::uniform_band});
           }
         }},
        SF_DOUBLE("noise.amplitude", noise.amplitude),
        SF_DOUBLE("noise.sigma", noise.sigma),
        SF_DOUBLE("noise.half_width", noise.half_width),
        SF_AUTO("noise.center", noise.center),
        SF_SIZE("noise.n_tones", noise.n_tones),
        SF_ENUM("noise.normalization", noise.normalization, NoiseNormalization::sqrt_n, NoiseNormalization::per_tone),
        SF_SIZE("noise.realizations", noise.realizations),
        SF_DOUBLE("noise.phase", noise.phase),

        SF_DOUBLE("dephasing.t2_us", t2_us),

        SF_DOUBLE("grid.t_end", grid.t_end),
        SF_DOUBLE("grid.dt", grid.dt),
        SF_SIZE("grid.record_stride", grid.record_stride),
        SF_ENUM("grid.method", grid.method, Method::rk4_fixed, Method::rk45_adaptive, Method::expm_piecewise_oracle),
        SF_DOUBLE("grid.rtol", grid.rtol),
        SF_DOUBLE("grid.atol", grid.atol),

        SF_BOOL("outputs.nuclear_marginal", outputs.nuclear_marginal),
        SF_BOOL("outputs.discord", outputs.discord),
        SF_DOUBLE("outputs.discord_stride", outputs.discord_stride),
        SF_SIZE("discord.n_theta", outputs.discord_options.n_theta),
        SF_SIZE("discord.n_phi", outputs.discord_options.n_phi),
        SF_BOOL("discord.refine", outputs.discord_options.refine),
        SF_ENUM("discord.log_base", outputs.discord_options.log_base, LogBase::natural, LogBase::two),
        SF_ENUM("discord.measured", outputs.discord_options.measured, Subsystem::first, Subsystem::second),
    };
    v.insert(v.end(), rest.begin(), rest.end());
    return v;
  }();
  return f;
}

}  // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
  std::string out = "# spinfreeze scenario\n";
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string sec = dot == std::string::npos ? "" : f.key.substr(0, dot);
    if (sec != section && !sec.empty()) out += "\n";
    section = sec;
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

ScenarioConfig parse_config(const std::string& text) {
  static const std::map<std::string, const Field*> index = [] {
    std::map<std::string, const Field*> m;
    for (const auto& f : fields()) m[f.key] = &f;
    return m;
  }();

  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value', got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError(key, "unknown key (line " + std::to_string(lineno) + ")");
    if (const auto [pos, fresh] = seen.emplace(key, lineno); !fresh)
      throw ConfigError(key, "duplicate key (lines " + std::to_string(pos->second) + " and " + std::to_string(lineno) +
                                 ")");
    it->second->set(cfg, value);
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return parse_config(ss.str());
}

}  // namespace spinfreeze
