#include "vpfv/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vpfv/error.hpp"

namespace vpfv {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Ctx {
  const std::string& source;
  int line;
  std::string section;
  std::string key;
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::parse,
                source + ":" + std::to_string(line) + ": [" + section + "] " + key + ": " + what);
  }
};

double to_double(const std::string& s, const Ctx& c) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) c.fail("expected a number, got '" + s + "'");
  return v;
}

long to_long(const std::string& s, const Ctx& c) {
  long v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) c.fail("expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s, const Ctx& c) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  c.fail("expected true or false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& s, const Ctx& c) {
  std::vector<double> v;
  for (const auto& it : split_list(s)) v.push_back(to_double(it, c));
  return v;
}

std::vector<int> to_ints(const std::string& s, const Ctx& c) {
  std::vector<int> v;
  for (const auto& it : split_list(s)) v.push_back(static_cast<int>(to_long(it, c)));
  return v;
}

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, double>)
      s += fmt(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

double RunConfig::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  Ctx c{problem, 0, "problem", key};
  return to_double(it->second, c);
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  Ctx c{source, 0, "", ""};
  bool any = false;
  while (std::getline(in, raw)) {
    ++c.line;
    c.key.clear();
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') c.fail("unterminated section header");
      c.section = trim(line.substr(1, line.size() - 2));
      if (c.section == "species") cfg.species.emplace_back();
      else if (c.section != "domain" && c.section != "problem" && c.section != "time" && c.section != "partition" &&
               c.section != "output")
        c.fail("unknown section");
      any = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) c.fail("expected key = value");
    c.key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (c.section.empty()) c.fail("key outside a section");
    if (val.empty()) c.fail("empty value");
    any = true;
    const auto& k = c.key;
    if (c.section == "domain") {
      if (k == "d") cfg.d = static_cast<int>(to_long(val, c));
      else if (k == "v") cfg.v = static_cast<int>(to_long(val, c));
      else if (k == "cells") cfg.cells = to_ints(val, c);
      else if (k == "length") cfg.length = to_doubles(val, c);
      else if (k == "v_max") cfg.v_max = to_doubles(val, c);
      else if (k == "omega_p") cfg.omega_p = to_double(val, c);
      else if (k == "omega_c") cfg.omega_c = to_double(val, c);
      else if (k == "b_z") cfg.b_z = to_double(val, c);
      else if (k == "g") {
        const auto g = to_doubles(val, c);
        if (g.empty() || g.size() > 2) c.fail("expected one or two components");
        cfg.g = {g[0], g.size() > 1 ? g[1] : 0.0};
      } else if (k == "velocity_boundary") {
        if (val != "frozen" && val != "periodic") c.fail("expected frozen or periodic");
        cfg.velocity_boundary = val;
      } else c.fail("unknown key");
    } else if (c.section == "species") {
      auto& s = cfg.species.back();
      if (k == "name") s.name = val;
      else if (k == "charge") s.charge = to_double(val, c);
      else if (k == "mass") s.mass = to_double(val, c);
      else if (k == "v_lo") s.v_lo = to_doubles(val, c);
      else if (k == "v_hi") s.v_hi = to_doubles(val, c);
      else if (k == "alpha") s.alpha = to_double(val, c);
      else if (k == "cells") s.cells = to_ints(val, c);
      else if (k == "partition") s.partition = to_ints(val, c);
      else c.fail("unknown key");
    } else if (c.section == "problem") {
      if (k == "type") cfg.problem = val;
      else cfg.params[k] = val;
    } else if (c.section == "time") {
      if (k == "t_end") cfg.t_end = to_double(val, c);
      else if (k == "dt") cfg.dt = to_double(val, c);
      else if (k == "cfl_fraction") cfg.cfl_fraction = to_double(val, c);
      else if (k == "integrator") {
        if (val != "low_storage" && val != "butcher") c.fail("expected low_storage or butcher");
        cfg.integrator = val;
      } else if (k == "max_steps") cfg.max_steps = to_long(val, c);
      else c.fail("unknown key");
    } else if (c.section == "partition") {
      if (k == "x") cfg.partition_x = to_ints(val, c);
      else if (k == "v") cfg.partition_v = to_ints(val, c);
      else if (k == "species_per_rank") cfg.species_per_rank = static_cast<int>(to_long(val, c));
      else if (k == "deterministic") cfg.deterministic = to_bool(val, c);
      else if (k == "strategy") {
        if (val != "all" && val != "fvm" && val != "vp") c.fail("expected all, fvm or vp");
        cfg.strategy = val;
      } else if (k == "moments") {
        if (val != "velocity_major" && val != "position_major") c.fail("expected velocity_major or position_major");
        cfg.moments = val;
      } else c.fail("unknown key");
    } else if (c.section == "output") {
      if (k == "directory") cfg.directory = val;
      else if (k == "cadence") cfg.cadence = static_cast<int>(to_long(val, c));
      else if (k == "snapshot") cfg.snapshot = to_bool(val, c);
      else c.fail("unknown key");
    }
  }
  c.section.clear();
  c.key.clear();
  if (!any) c.fail("empty configuration");
  if (cfg.problem.empty()) {
    c.section = "problem";
    c.key = "type";
    c.fail("missing problem type");
  }
  if (cfg.cadence < 1) {
    c.section = "output";
    c.key = "cadence";
    c.fail("must be positive");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[domain]\n";
  o << "d = " << c.d << "\nv = " << c.v << "\n";
  if (!c.cells.empty()) o << "cells = " << join(c.cells) << "\n";
  if (!c.length.empty()) o << "length = " << join(c.length) << "\n";
  if (!c.v_max.empty()) o << "v_max = " << join(c.v_max) << "\n";
  o << "omega_p = " << fmt(c.omega_p) << "\nomega_c = " << fmt(c.omega_c) << "\nb_z = " << fmt(c.b_z) << "\n";
  o << "g = " << fmt(c.g[0]) << ", " << fmt(c.g[1]) << "\n";
  o << "velocity_boundary = " << c.velocity_boundary << "\n";
  for (const auto& s : c.species) {
    o << "\n[species]\n";
    if (!s.name.empty()) o << "name = " << s.name << "\n";
    if (s.charge) o << "charge = " << fmt(*s.charge) << "\n";
    if (s.mass) o << "mass = " << fmt(*s.mass) << "\n";
    if (!s.v_lo.empty()) o << "v_lo = " << join(s.v_lo) << "\n";
    if (!s.v_hi.empty()) o << "v_hi = " << join(s.v_hi) << "\n";
    if (s.alpha) o << "alpha = " << fmt(*s.alpha) << "\n";
    if (!s.cells.empty()) o << "cells = " << join(s.cells) << "\n";
    if (!s.partition.empty()) o << "partition = " << join(s.partition) << "\n";
  }
  o << "\n[problem]\ntype = " << c.problem << "\n";
  for (const auto& [k, v] : c.params) o << k << " = " << v << "\n";
  o << "\n[time]\nt_end = " << fmt(c.t_end) << "\n";
  if (c.dt) o << "dt = " << fmt(*c.dt) << "\n";
  o << "cfl_fraction = " << fmt(c.cfl_fraction) << "\nintegrator = " << c.integrator << "\n";
  o << "max_steps = " << c.max_steps << "\n";
  o << "\n[partition]\n";
  if (!c.partition_x.empty()) o << "x = " << join(c.partition_x) << "\n";
  if (!c.partition_v.empty()) o << "v = " << join(c.partition_v) << "\n";
  o << "species_per_rank = " << c.species_per_rank << "\ndeterministic = " << (c.deterministic ? "true" : "false")
    << "\nstrategy = " << c.strategy << "\nmoments = " << c.moments << "\n";
  o << "\n[output]\ndirectory = " << c.directory << "\ncadence = " << c.cadence
    << "\nsnapshot = " << (c.snapshot ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace vpfv
