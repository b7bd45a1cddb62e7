#include "config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nlperim/types.h"

namespace nlperim::cli {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run", {"command", "d", "seed", "threads", "samples"}},
      {"set",
       {"kind", "d", "a", "b", "intervals", "n_max", "radius", "center", "lo", "hi", "side", "vertices",
        "boxes", "path", "h", "steps"}},
      {"measure",
       {"kind", "d", "alpha", "prefactor", "kernel", "beta", "amplitude", "scale", "cone_axis",
        "cone_half_angle", "sphere", "atoms", "directions"}},
      {"body", {"kind", "d", "semi_axes", "half_widths", "p", "radius", "vertices"}},
      {"sweep",
       {"rule", "normalization", "lambda_mode", "R", "regime", "grid", "start", "stop", "points",
        "target_factor", "h0", "direction", "tolerance", "lambda_radii"}},
      {"quadrature",
       {"rel_tol", "panels_per_decade", "circle_points", "polar_points", "azimuth_points", "r_min", "r_max"}},
      {"output", {"dir"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return HUGE_VAL;
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key " + key + ": '" + text + "' is not a number");
  }
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) throw ValidationError("config key '" + key + "' needs a section");
  const std::string section = key.substr(0, dot);
  const std::string name = key.substr(dot + 1);
  const auto it = schema().find(section);
  if (it == schema().end()) throw ValidationError("unknown config section [" + section + "]");
  if (!it->second.count(name)) {
    throw ValidationError("unknown config key '" + name + "' in section [" + section + "]");
  }
  values_[key] = trim(value);
}

Config Config::parse_string(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(std::string("config syntax: ") + e.what());
  }
  Config c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ValidationError("config key '" + section + "' is outside any section");
    }
    if (!schema().count(section)) throw ValidationError("unknown config section [" + section + "]");
    c.values_["@" + section] = "";
    for (const auto& [key, value] : body) c.set(section + "." + key, value.data());
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("override '" + assignment + "' needs key=value");
  const std::string key = trim(assignment.substr(0, eq));
  set(key, assignment.substr(eq + 1));
  values_["@" + key.substr(0, key.find('.'))] = "";
}

bool Config::has_section(const std::string& section) const { return values_.count("@" + section) != 0; }

void Config::require_section(const std::string& section, const std::string& command) const {
  if (!has_section(section)) {
    throw ValidationError("command '" + command + "' needs a [" + section + "] section");
  }
}

std::string Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("missing config key " + key);
  return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::number(const std::string& key) const { return parse_number(key, get(key)); }

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int Config::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ValidationError("config key " + key + " must be an integer");
  }
  return static_cast<int>(v);
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::istringstream in(get(key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number(key, tok));
  return out;
}

std::vector<std::vector<double>> Config::rows(const std::string& key) const {
  std::vector<std::vector<double>> out;
  std::istringstream in(get(key));
  std::string row;
  while (std::getline(in, row, ';')) {
    std::istringstream r(row);
    std::vector<double> v;
    std::string tok;
    while (r >> tok) v.push_back(parse_number(key, tok));
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

std::string Config::canonical() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) {
    if (k[0] == '@') continue;
    os << k << '=' << v << '\n';
  }
  return os.str();
}

}  // namespace nlperim::cli
