#include "growthlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace growthlab {

Neighborhood::Neighborhood(std::vector<Offset> offsets)
    : offsets_(std::move(offsets)) {
  std::sort(offsets_.begin(), offsets_.end());
  offsets_.erase(std::unique(offsets_.begin(), offsets_.end()), offsets_.end());
  if (offsets_.empty()) {
    throw std::invalid_argument("neighborhood must be nonempty");
  }
}

bool Neighborhood::contains(Offset o) const {
  return std::binary_search(offsets_.begin(), offsets_.end(), o);
}

int Neighborhood::max_norm() const {
  int r = 0;
  for (const Offset& o : offsets_) {
    r = std::max({r, std::abs(o.dx), std::abs(o.dy)});
  }
  return r;
}

Neighborhood line_neighborhood(int range, Axis axis, bool directed) {
  if (range < 1) {
    throw std::invalid_argument("line_neighborhood: range must be >= 1");
  }
  std::vector<Offset> offs;
  for (int s = directed ? 1 : -range; s <= range; ++s) {
    if (s == 0) continue;
    offs.push_back(axis == Axis::X ? Offset{s, 0} : Offset{0, s});
  }
  return Neighborhood(std::move(offs));
}

Neighborhood l1_ball(int radius) {
  if (radius < 1) {
    throw std::invalid_argument("l1_ball: radius must be >= 1");
  }
  std::vector<Offset> offs;
  for (int dx = -radius; dx <= radius; ++dx) {
    for (int dy = -radius; dy <= radius; ++dy) {
      if (dx == 0 && dy == 0) continue;
      if (std::abs(dx) + std::abs(dy) <= radius) offs.push_back({dx, dy});
    }
  }
  return Neighborhood(std::move(offs));
}

}  // namespace growthlab
