#pragma once

#include <span>
#include <vector>

namespace growthlab {

/// Continuum comparison state: red interval length f, blue interval length g,
/// overhang/overlap h. Attached to a layer count m they satisfy
/// m(g - h) = f + h.
struct Triple {
  double f = 0;
  double g = 0;
  double h = 0;
};

/// Growth eigenvalue (m + alpha*m - 1) / (m + 1).
double lambda_of(int m, double alpha);

/// Total-height constant 2 m sqrt(lambda) / (sqrt(lambda) - 1).
double sigma_of(int m, double alpha);

struct ContinuumConfig {
  double alpha = 1.0;      // red inverse speed
  double alpha_bar = 1.0;  // slowed inverse speed, > alpha
  int m = 3;               // blue intervals per block, > 2/alpha

  double lambda() const { return lambda_of(m, alpha); }
  void validate() const;  // throws on m <= 2/alpha or alpha_bar <= alpha
};

/// (1, alpha/2, (m*alpha/2 - 1)/(m+1)); rejects m <= 2/alpha where h <= 0.
Triple initial_triple(const ContinuumConfig& config);

/// One block step: f' = f + 2h, g' = g + alpha*h, h' from m(g'-h') = f'+h'.
/// Equal to lambda * (f, g, h) on the eigendirection g = alpha*f/2.
/// Rejects inputs violating the constraint beyond 1e-9 relative error.
Triple advance_triple(const Triple& t, const ContinuumConfig& config);

/// Horizontal blue segment [left, right] at height `level`.
struct Segment {
  double level = 0;
  double left = 0;
  double right = 0;
};

/// The canonical m-interval blue block for a triple:
/// [(k-1)g - kh, kg - kh] at level k for k = 1..m.
std::vector<Segment> canonical_blue_block(const Triple& t, int m);

struct BreakthroughResult {
  double time = 0;          // min path length to exceed the top obstacle level
  double extent_left = 0;   // horizontal extent reached at that time
  double extent_right = 0;
};

/// Minimum cost for red, started on the level-0 segment red0, to exceed the
/// top obstacle level. Vertical motion is free; horizontal motion costs
/// alpha per unit; paths may not cross obstacle segment interiors (grazing
/// an endpoint is the infimum and is allowed). Obstacles must sit at
/// distinct positive levels per (level, x) location; multiple segments per
/// level are fine.
BreakthroughResult breakthrough(std::span<const Segment> obstacles,
                                const Segment& red0, double alpha);

}  // namespace growthlab
