#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growthlab/geometry.hpp"

namespace growthlab {

/// Positive rational update period. Time is handled in integer "ticks" of
/// 1/lcm(denominators), so exact tie detection needs no floating point.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;
  bool operator==(const Rational&) const = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

/// One growth rule: neighborhood, update period and display color.
/// Species ids start at 1; 0 is reserved for Empty.
struct Species {
  int id = 1;
  std::string label;
  Neighborhood neighborhood;
  Rational period;
  Rgb rgb;
};

enum class Topology { Torus, DeadBoundary };

struct ModelSpec {
  std::vector<Species> species;
  std::vector<double> densities;  // per species, same order
  Topology topology = Topology::Torus;
  int width = 1;
  int height = 1;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  const Species* find_species(int id) const;
};

inline constexpr std::int64_t kNever = -1;

/// Color plus coloring tick of one site. color == 0 iff colored_at == kNever.
struct CellState {
  int color = 0;
  std::int64_t colored_at = kNever;
  bool operator==(const CellState&) const = default;
};

/// Finite rectangular domain with a packed state array. Sites are indexed
/// row-major; (x, y) with x in [0, width), y in [0, height). A site's color
/// is written at most once.
class Lattice {
 public:
  explicit Lattice(ModelSpec model);

  const ModelSpec& model() const { return model_; }
  int width() const { return model_.width; }
  int height() const { return model_.height; }
  std::size_t site_count() const { return color_.size(); }

  /// lcm of all species period denominators; every event time is an
  /// integer multiple of 1/tick_scale.
  std::int64_t tick_scale() const { return tick_scale_; }

  /// Period of species index s (0-based position in model().species), in ticks.
  std::int64_t period_ticks(std::size_t s) const { return period_ticks_[s]; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(model_.width) +
           static_cast<std::size_t>(x);
  }

  int color_at(std::size_t i) const { return color_[i]; }
  int color_at(int x, int y) const { return color_[index(x, y)]; }
  std::int64_t colored_tick(std::size_t i) const { return colored_at_[i]; }
  CellState state(int x, int y) const {
    const std::size_t i = index(x, y);
    return {color_[i], colored_at_[i]};
  }

  /// Colors an empty site; asserts write-once in debug builds.
  void color_site(std::size_t i, int color, std::int64_t tick);

  const std::vector<std::uint8_t>& colors() const { return color_; }
  const std::vector<std::int64_t>& colored_ticks() const { return colored_at_; }

  bool operator==(const Lattice& other) const {
    return color_ == other.color_ && colored_at_ == other.colored_at_;
  }

 private:
  ModelSpec model_;
  std::vector<std::uint8_t> color_;
  std::vector<std::int64_t> colored_at_;
  std::int64_t tick_scale_ = 1;
  std::vector<std::int64_t> period_ticks_;
};

/// Standard blue/red two-species model: blue id 1 (period 1), red id 2
/// (period r). Density order: (blue, red).
ModelSpec two_species_model(const Neighborhood& blue, const Neighborhood& red,
                            Rational red_period, double p_blue, double q_red,
                            Topology topology, int width, int height,
                            std::uint64_t seed);

}  // namespace growthlab
