#include "growthlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace growthlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(cfg.section_order_.begin(), cfg.section_order_.end(),
                    section) == cfg.section_order_.end()) {
        cfg.section_order_.push_back(section);
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    }
    cfg.entries_.push_back(
        {{section, trim(line.substr(0, eq))}, trim(line.substr(eq + 1))});
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.first.first == section && e.first.second == key) return true;
  }
  return false;
}

std::string Config::get(const std::string& section,
                        const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.first.first == section && e.first.second == key) return e.second;
  }
  throw std::runtime_error("config: missing [" + section + "] " + key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? std::stod(get(section, key)) : fallback;
}

std::vector<std::string> Config::sections() const { return section_order_; }

Rational parse_rational(const std::string& text) {
  const std::string t = trim(text);
  const std::size_t slash = t.find('/');
  Rational r;
  if (slash == std::string::npos) {
    r.num = std::stoll(t);
    r.den = 1;
  } else {
    r.num = std::stoll(t.substr(0, slash));
    r.den = std::stoll(t.substr(slash + 1));
  }
  if (r.num < 1 || r.den < 1) {
    throw std::runtime_error("periods must be positive rationals: " + text);
  }
  return r;
}

Neighborhood parse_neighborhood(const std::string& text) {
  const std::vector<std::string> tok = split_ws(text);
  if (tok.empty()) throw std::runtime_error("empty neighborhood spec");
  if (tok[0] == "line") {
    if (tok.size() != 4) {
      throw std::runtime_error("line neighborhood: expected `line <x|y> <range> <directed|undirected>`");
    }
    const Axis axis = tok[1] == "x" ? Axis::X
                      : tok[1] == "y" ? Axis::Y
                      : throw std::runtime_error("line axis must be x or y");
    return line_neighborhood(std::stoi(tok[2]), axis, tok[3] == "directed");
  }
  if (tok[0] == "l1_ball") {
    if (tok.size() != 2) throw std::runtime_error("l1_ball: expected radius");
    return l1_ball(std::stoi(tok[1]));
  }
  if (tok[0] == "offsets") {
    std::vector<Offset> offs;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      const std::string& t = tok[i];
      if (t.size() < 5 || t.front() != '(' || t.back() != ')') {
        throw std::runtime_error("offset must look like (dx,dy): " + t);
      }
      const std::size_t comma = t.find(',');
      offs.push_back({std::stoi(t.substr(1, comma - 1)),
                      std::stoi(t.substr(comma + 1, t.size() - comma - 2))});
    }
    return Neighborhood(std::move(offs));
  }
  throw std::runtime_error("unknown neighborhood constructor: " + tok[0]);
}

namespace {

Rgb default_rgb(const std::string& label, int position) {
  if (label == "blue") return {0, 0, 255};
  if (label == "red") return {255, 0, 0};
  if (label == "green") return {0, 160, 0};
  const std::uint8_t v = static_cast<std::uint8_t>(40 * (position + 1));
  return {v, v, v};
}

Rgb parse_rgb(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  const std::vector<std::string> tok = split_ws(t);
  if (tok.size() != 3) throw std::runtime_error("rgb must be r,g,b");
  return {static_cast<std::uint8_t>(std::stoi(tok[0])),
          static_cast<std::uint8_t>(std::stoi(tok[1])),
          static_cast<std::uint8_t>(std::stoi(tok[2]))};
}

}  // namespace

ModelSpec model_from_config(const Config& config) {
  ModelSpec model;
  model.width = std::stoi(config.get_or("model", "width", "128"));
  model.height = std::stoi(config.get_or("model", "height", "128"));
  const std::string topo = config.get_or("model", "topology", "torus");
  if (topo == "torus") {
    model.topology = Topology::Torus;
  } else if (topo == "dead" || topo == "dead_boundary") {
    model.topology = Topology::DeadBoundary;
  } else {
    throw std::runtime_error("topology must be torus or dead_boundary");
  }
  model.seed = std::stoull(config.get_or("model", "seed", "1"));

  int id = 0;
  for (const std::string& section : config.sections()) {
    if (section.rfind("species.", 0) != 0) continue;
    ++id;
    Species sp{id, section.substr(8),
               parse_neighborhood(config.get(section, "neighborhood")),
               parse_rational(config.get_or(section, "period", "1")),
               Rgb{}};
    sp.rgb = config.has(section, "rgb") ? parse_rgb(config.get(section, "rgb"))
                                        : default_rgb(sp.label, id - 1);
    model.species.push_back(std::move(sp));
    model.densities.push_back(std::stod(config.get_or(section, "density", "0")));
  }
  model.validate();
  return model;
}

ExperimentParams experiment_from_config(const Config& config,
                                        ExperimentParams defaults) {
  ExperimentParams out = std::move(defaults);
  const auto grid = [&](const std::string& key, std::vector<double>& target) {
    if (!config.has("experiment", key)) return;
    target.clear();
    for (const std::string& t : split_ws(config.get("experiment", key))) {
      target.push_back(std::stod(t));
    }
  };
  grid("p_grid", out.p_grid);
  grid("a_grid", out.a_grid);
  out.gamma = config.get_double_or("experiment", "gamma", out.gamma);
  out.L = static_cast<int>(config.get_double_or("experiment", "L", out.L));
  out.replicates = static_cast<int>(
      config.get_double_or("experiment", "replicates", out.replicates));
  if (config.has("experiment", "seed")) {
    out.seed = std::stoull(config.get("experiment", "seed"));
  }
  if (config.has("experiment", "r")) {
    out.r = parse_rational(config.get("experiment", "r"));
  }
  out.rho = static_cast<int>(config.get_double_or("experiment", "rho", out.rho));
  out.tau = static_cast<int>(config.get_double_or("experiment", "tau", out.tau));
  out.epsilon = config.get_double_or("experiment", "epsilon", out.epsilon);
  out.C = config.get_double_or("experiment", "C", out.C);
  out.B = config.get_double_or("experiment", "B", out.B);
  return out;
}

int render_scale_from_config(const Config& config) {
  const int scale = static_cast<int>(config.get_double_or("render", "scale", 1));
  if (scale < 1) throw std::runtime_error("render scale must be >= 1");
  return scale;
}

}  // namespace growthlab
