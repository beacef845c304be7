#pragma once

#include <string>
#include <utility>
#include <vector>

#include "growthlab/experiment.hpp"
#include "growthlab/model.hpp"

namespace growthlab {

/// Flat sectioned key/value text: `[section]` headers, `key = value` lines,
/// `#` comments. Section and key order is preserved (species order matters).
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  std::vector<std::string> sections() const;

 private:
  // (section, key) -> value, in file order
  std::vector<std::pair<std::pair<std::string, std::string>, std::string>>
      entries_;
  std::vector<std::string> section_order_;
};

Rational parse_rational(const std::string& text);

/// `line <x|y> <range> <directed|undirected>`, `l1_ball <radius>`, or
/// `offsets (dx,dy) (dx,dy) ...`.
Neighborhood parse_neighborhood(const std::string& text);

/// Builds the model from [model] and the [species.*] sections (file order
/// fixes species ids 1, 2, ...).
ModelSpec model_from_config(const Config& config);

/// Reads [experiment]; absent keys keep the given defaults.
ExperimentParams experiment_from_config(const Config& config,
                                        ExperimentParams defaults = {});

int render_scale_from_config(const Config& config);

}  // namespace growthlab
