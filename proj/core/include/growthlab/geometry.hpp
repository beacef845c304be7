#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace growthlab {

/// A lattice step. (0,0) is permitted inside a neighborhood but has no
/// effect on the dynamics: only empty cells adopt a color, so a cell can
/// never be its own growth source.
struct Offset {
  int dx = 0;
  int dy = 0;
  auto operator<=>(const Offset&) const = default;
};

enum class Axis { X, Y };

/// A finite, deduplicated offset set stored in sorted order so iteration
/// is deterministic regardless of how it was constructed.
class Neighborhood {
 public:
  explicit Neighborhood(std::vector<Offset> offsets);

  const std::vector<Offset>& offsets() const { return offsets_; }
  std::size_t size() const { return offsets_.size(); }
  bool contains(Offset o) const;

  /// L-infinity radius: the farthest coordinate any offset reaches.
  int max_norm() const;

  bool operator==(const Neighborhood&) const = default;

 private:
  std::vector<Offset> offsets_;
};

/// Offsets along one axis. Undirected: both signs of the chosen coordinate
/// in [-range, range] \ {0}. Directed: positive steps [1, range] only, so
/// (1, X, directed) is the single offset (1,0).
Neighborhood line_neighborhood(int range, Axis axis, bool directed);

/// All nonzero offsets with |dx| + |dy| <= radius.
Neighborhood l1_ball(int radius);

}  // namespace growthlab
