#include "growthlab/model.hpp"

#include <cassert>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace growthlab {

void ModelSpec::validate() const {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("lattice dimensions must be >= 1");
  }
  if (species.empty()) {
    throw std::invalid_argument("model needs at least one species");
  }
  if (densities.size() != species.size()) {
    throw std::invalid_argument("densities must match species count");
  }
  std::set<int> ids;
  for (const Species& s : species) {
    if (s.id < 1) throw std::invalid_argument("species ids start at 1");
    if (s.id > 31) throw std::invalid_argument("species ids must be <= 31");
    if (!ids.insert(s.id).second) {
      throw std::invalid_argument("species ids must be unique");
    }
    if (s.period.num < 1 || s.period.den < 1) {
      throw std::invalid_argument("periods must be positive rationals");
    }
  }
  double total = 0.0;
  for (double d : densities) {
    if (d < 0.0) throw std::invalid_argument("densities must be >= 0");
    total += d;
  }
  if (total > 1.0 + 1e-12) {
    throw std::invalid_argument("densities must sum to <= 1");
  }
}

const Species* ModelSpec::find_species(int id) const {
  for (const Species& s : species) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

Lattice::Lattice(ModelSpec model) : model_(std::move(model)) {
  model_.validate();
  const std::size_t n = static_cast<std::size_t>(model_.width) *
                        static_cast<std::size_t>(model_.height);
  color_.assign(n, 0);
  colored_at_.assign(n, kNever);

  tick_scale_ = 1;
  for (const Species& s : model_.species) {
    tick_scale_ = std::lcm(tick_scale_, s.period.den);
    if (tick_scale_ > (std::int64_t{1} << 40)) {
      throw std::invalid_argument("period denominators produce an oversized tick scale");
    }
  }
  period_ticks_.reserve(model_.species.size());
  for (const Species& s : model_.species) {
    period_ticks_.push_back(s.period.num * (tick_scale_ / s.period.den));
  }
}

void Lattice::color_site(std::size_t i, int color, std::int64_t tick) {
  assert(color_[i] == 0 && colored_at_[i] == kNever && "site colored twice");
  assert(color >= 1);
  color_[i] = static_cast<std::uint8_t>(color);
  colored_at_[i] = tick;
}

ModelSpec two_species_model(const Neighborhood& blue, const Neighborhood& red,
                            Rational red_period, double p_blue, double q_red,
                            Topology topology, int width, int height,
                            std::uint64_t seed) {
  ModelSpec m;
  m.species.push_back({1, "blue", blue, Rational{1, 1}, Rgb{0, 0, 255}});
  m.species.push_back({2, "red", red, red_period, Rgb{255, 0, 0}});
  m.densities = {p_blue, q_red};
  m.topology = topology;
  m.width = width;
  m.height = height;
  m.seed = seed;
  m.validate();
  return m;
}

}  // namespace growthlab
