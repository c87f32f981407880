#include "ymlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ymlab/error.hpp"

namespace ymlab {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::HeatFlow: return "heatflow";
    case Scenario::Variational: return "variational";
    case Scenario::Recover: return "recover";
    case Scenario::Checks: return "checks";
    case Scenario::Oracle: return "oracle";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(const std::string& s) {
  for (Scenario x : {Scenario::HeatFlow, Scenario::Variational, Scenario::Recover,
                     Scenario::Checks, Scenario::Oracle})
    if (to_string(x) == s) return x;
  return std::nullopt;
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::Configuration, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    bad(key + ": expected a real number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    bad(key + ": expected an integer, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long i = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    bad(key + ": expected an unsigned 64-bit integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<Mode> parse_modes(const std::string& key, const std::string& v) {
  std::vector<Mode> modes;
  for (const auto& item : split(v, ';')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    Mode m;
    if (!(is >> m.component >> m.basis >> m.k[0] >> m.k[1] >> m.k[2] >> m.amplitude >> m.phase))
      bad(key + ": mode needs 'component basis kx ky kz amplitude phase', got '" + item + "'");
    std::string extra;
    if (is >> extra) bad(key + ": trailing text in mode '" + item + "'");
    modes.push_back(m);
  }
  return modes;
}

std::string fmt(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

void set_data(InitialData& d, const std::string& field, const std::string& key,
              const std::string& v) {
  if (field == "kind") {
    if (v == "zero") d.kind = InitialData::Kind::Zero;
    else if (v == "modes") d.kind = InitialData::Kind::Modes;
    else if (v == "spectral") d.kind = InitialData::Kind::Spectral;
    else bad(key + ": expected zero, modes or spectral, got '" + v + "'");
  } else if (field == "modes") {
    d.modes = parse_modes(key, v);
  } else if (field == "roughness") {
    d.spectral.roughness = to_double(key, v);
  } else if (field == "rms") {
    d.spectral.rms = to_double(key, v);
    if (d.spectral.rms < 0.0) bad(key + ": must be >= 0");
  } else if (field == "kmax") {
    d.spectral.kmax = static_cast<int>(to_int(key, v));
    if (d.spectral.kmax < 0) bad(key + ": must be >= 0");
  } else if (field == "coulomb") {
    d.spectral.coulomb = to_bool(key, v);
  }
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["scenario"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.scenario = parse_scenario(v);
      if (!c.scenario) bad(k + ": unknown scenario '" + v + "'");
    };
    t["group"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      if (v == "U1") c.group = GroupName::U1;
      else if (v == "SU2") c.group = GroupName::SU2;
      else bad(k + ": expected U1 or SU2, got '" + v + "'");
    };
    t["grid.n"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.n = static_cast<int>(to_int(k, v));
    };
    t["grid.L"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.L = to_double(k, v);
    };
    t["time.T"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.T = to_double(k, v);
    };
    t["time.nodes"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.nodes = static_cast<int>(to_int(k, v));
    };
    t["time.gamma"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.gamma = to_double(k, v);
    };
    t["time.cfl_safety"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.cfl_safety = to_double(k, v);
    };
    t["exponent.a"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.a = to_double(k, v);
    };
    t["exponent.b"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.b = to_double(k, v);
    };
    t["recover.tau"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.tau.clear();
      for (const auto& s : split(v, ','))
        if (!s.empty()) c.tau.push_back(to_double(k, s));
    };
    t["recover.direct"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.recover_direct = to_bool(k, v);
    };
    t["variational.balance_tolerance"] = [](ExperimentConfig& c, const std::string& k,
                                            const std::string& v) {
      c.balance_tolerance = to_double(k, v);
    };
    t["seed"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.seed = to_u64(k, v);
    };
    t["output.snapshot_every"] = [](ExperimentConfig& c, const std::string& k,
                                    const std::string& v) {
      c.snapshot_every = static_cast<int>(to_int(k, v));
    };
    for (const char* f : {"kind", "modes", "roughness", "rms", "kmax", "coulomb"}) {
      const std::string field = f;
      t["init." + field] = [field](ExperimentConfig& c, const std::string& k,
                                   const std::string& v) { set_data(c.connection, field, k, v); };
      t["variation." + field] = [field](ExperimentConfig& c, const std::string& k,
                                        const std::string& v) { set_data(c.variation, field, k, v); };
    }
    t["checks.gfs_calibration"] = [](ExperimentConfig& c, const std::string&,
                                     const std::string& v) { c.gfs_calibration = v; };
    t["checks.gfs_gamma"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.gfs_gamma = to_double(k, v);
    };
    t["checks.calibration_samples"] = [](ExperimentConfig& c, const std::string& k,
                                         const std::string& v) {
      c.calibration_samples = static_cast<int>(to_int(k, v));
    };
    t["checks.hardy_samples"] = [](ExperimentConfig& c, const std::string& k,
                                   const std::string& v) {
      c.hardy_samples = static_cast<int>(to_int(k, v));
    };
    t["checks.gfs_samples"] = [](ExperimentConfig& c, const std::string& k,
                                 const std::string& v) {
      c.gfs_samples = static_cast<int>(to_int(k, v));
    };
    t["checks.identities"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.identities = to_bool(k, v);
    };
    return t;
  }();
  return table;
}

std::string data_canonical(const std::string& prefix, const InitialData& d) {
  std::ostringstream os;
  const char* kinds[] = {"zero", "modes", "spectral"};
  os << prefix << ".kind = " << kinds[static_cast<int>(d.kind)] << "\n";
  os << prefix << ".modes = ";
  for (std::size_t i = 0; i < d.modes.size(); ++i) {
    const Mode& m = d.modes[i];
    os << (i ? "; " : "") << m.component << ' ' << m.basis << ' ' << m.k[0] << ' ' << m.k[1]
       << ' ' << m.k[2] << ' ' << fmt(m.amplitude) << ' ' << fmt(m.phase);
  }
  os << "\n";
  os << prefix << ".roughness = " << fmt(d.spectral.roughness) << "\n";
  os << prefix << ".rms = " << fmt(d.spectral.rms) << "\n";
  os << prefix << ".kmax = " << d.spectral.kmax << "\n";
  os << prefix << ".coulomb = " << (d.spectral.coulomb ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& t = setters();
  const auto it = t.find(key);
  if (it == t.end()) bad("unknown key '" + key + "'");
  it->second(cfg, key, value);
}

void validate_config(const ExperimentConfig& c) {
  if (c.n < 4 || (c.n & (c.n - 1)) != 0) bad("grid.n must be a power of two >= 4");
  if (!(c.L > 0.0)) bad("grid.L must be > 0");
  if (!(c.T > 0.0)) bad("time.T must be > 0");
  if (c.nodes < 2) bad("time.nodes must be >= 2");
  if (!(c.gamma >= 1.0)) bad("time.gamma must be >= 1");
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) bad("time.cfl_safety must lie in (0, 1]");
  if (!(c.a >= 0.5 && c.a < 1.0)) bad("exponent.a must lie in [1/2, 1)");
  if (!(c.b >= 0.5 && c.b < 1.0)) bad("exponent.b must lie in [1/2, 1)");
  for (double t : c.tau)
    if (!(t > 0.0 && t <= c.T)) bad("recover.tau values must lie in (0, time.T]");
  if (c.snapshot_every < 0) bad("output.snapshot_every must be >= 0");
  if (c.calibration_samples < 1 || c.hardy_samples < 0 || c.gfs_samples < 0)
    bad("checks sample counts must be positive");
  if (c.gfs_gamma && !(*c.gfs_gamma >= 0.0)) bad("checks.gfs_gamma must be >= 0");
  const int dim = GroupSpec::get(c.group).dim();
  for (const InitialData* d : {&c.connection, &c.variation})
    for (const Mode& m : d->modes)
      if (m.component < 0 || m.component > 2 || m.basis < 0 || m.basis >= dim)
        bad("mode component/basis index out of range for the group");
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_version = false;
  std::set<std::string> seen;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string::npos) bad(where + "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (!have_version) {
      if (key != "schema_version") bad(where + "first entry must be schema_version");
      if (value != std::to_string(kConfigSchemaVersion))
        bad(where + "unsupported schema_version '" + value + "' (expected " +
            std::to_string(kConfigSchemaVersion) + ")");
      have_version = true;
      continue;
    }
    if (!seen.insert(key).second) bad(where + "duplicate key '" + key + "'");
    try {
      set_config_value(cfg, key, value);
    } catch (const Error& e) {
      std::string msg = e.what();
      const std::string prefix = std::string(to_string(ErrorCode::Configuration)) + ": ";
      if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
      bad(where + msg);
    }
  }
  if (!have_version) bad(source + ": missing schema_version");
  try {
    validate_config(cfg);
  } catch (const Error& e) {
    std::string msg = e.what();
    const std::string prefix = std::string(to_string(ErrorCode::Configuration)) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    bad(source + ": " + msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) bad("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "schema_version = " << kConfigSchemaVersion << "\n";
  os << "checks.calibration_samples = " << calibration_samples << "\n";
  if (!gfs_calibration.empty()) os << "checks.gfs_calibration = " << gfs_calibration << "\n";
  if (gfs_gamma) os << "checks.gfs_gamma = " << fmt(*gfs_gamma) << "\n";
  os << "checks.gfs_samples = " << gfs_samples << "\n";
  os << "checks.hardy_samples = " << hardy_samples << "\n";
  os << "checks.identities = " << (identities ? "true" : "false") << "\n";
  os << "exponent.a = " << fmt(a) << "\n";
  os << "exponent.b = " << fmt(b) << "\n";
  os << "grid.L = " << fmt(L) << "\n";
  os << "grid.n = " << n << "\n";
  os << "group = " << to_string(group) << "\n";
  os << data_canonical("init", connection);
  os << "output.snapshot_every = " << snapshot_every << "\n";
  os << "recover.direct = " << (recover_direct ? "true" : "false") << "\n";
  if (!tau.empty()) {
    os << "recover.tau = ";
    for (std::size_t i = 0; i < tau.size(); ++i) os << (i ? ", " : "") << fmt(tau[i]);
    os << "\n";
  }
  if (scenario) os << "scenario = " << to_string(*scenario) << "\n";
  os << "seed = " << seed << "\n";
  os << "time.T = " << fmt(T) << "\n";
  os << "time.cfl_safety = " << fmt(cfl_safety) << "\n";
  os << "time.gamma = " << fmt(gamma) << "\n";
  os << "time.nodes = " << nodes << "\n";
  os << data_canonical("variation", variation);
  os << "variational.balance_tolerance = " << fmt(balance_tolerance) << "\n";
  return os.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ymlab
