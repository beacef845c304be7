#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/engine.hpp"
#include "growthlab/model.hpp"
#include "growthlab/sample.hpp"

namespace growthlab {

struct ExperimentParams {
  std::vector<double> p_grid;
  std::vector<double> a_grid;   // q = a * p^gamma
  double gamma = 1.5;           // exponent of the scan parameterization
  int L = 0;                    // torus side; 0 = auto (max(200, 2/p))
  int replicates = 100;
  std::uint64_t seed = 1;
  Rational r{1, 1};
  int rho = 1;
  int tau = 1;
  double epsilon = 0.5;
  double C = 2.0;
  double B = 1.0;

  void validate() const;
  int side_for(double p) const;
};

struct Interval {
  double lo = 0;
  double hi = 1;
};

/// Wilson score interval at 95%.
Interval wilson_interval(std::int64_t successes, std::int64_t trials);

/// Origin-fate estimate over replicate runs to fixation.
struct FateEstimate {
  std::int64_t replicates = 0;
  std::int64_t blue_wins = 0;
  std::int64_t red_wins = 0;
  std::int64_t empty_outcomes = 0;
  Interval blue_ci, red_ci, empty_ci;
  double mean_frac_blue = 0;
  double mean_frac_red = 0;
  double mean_frac_empty = 0;
  double sd_frac_blue = 0;
  double sd_frac_red = 0;
  double sd_frac_empty = 0;
  double mean_fixation_time = 0;
  std::int64_t horizon_hits = 0;

  double p_blue() const { return static_cast<double>(blue_wins) / replicates; }
  double p_red() const { return static_cast<double>(red_wins) / replicates; }
  double p_empty() const {
    return static_cast<double>(empty_outcomes) / replicates;
  }
};

/// Runs `replicates` independent simulations of `model` (its width/height
/// overridden to L x L torus) and records the origin's final state plus
/// lattice-wide color fractions. Replicate seeds derive from model.seed via
/// the counter-based scheme, so results are independent of execution order.
FateEstimate estimate_origin_fate(const ModelSpec& model, int L,
                                  int replicates);

struct ScanCell {
  double p = 0;
  double a = 0;
  double q = 0;
  int L = 0;
  FateEstimate fate;
};

/// Full (p, a) sweep with q = a * p^gamma in the two-species rho/tau line
/// model. Cells present in `done` (matched by p and a) are skipped and
/// copied through, which makes reruns resumable.
std::vector<ScanCell> phase_scan(const ExperimentParams& params,
                                 const std::vector<ScanCell>& done = {});

struct ExponentFit {
  double gamma_hat = 0;
  double stderr_ = 0;
  int points_used = 0;
  std::vector<std::string> warnings;
  std::vector<double> crossing_p;  // per usable p
  std::vector<double> crossing_q;  // q*(p) at the P(blue) = 1/2 crossing
  bool nonmonotone_flagged = false;
};

/// Per p: isotonic (nonincreasing in a) smoothing of P(blue), bisection of
/// the smoothed curve at 1/2 with log-a interpolation, then an OLS fit of
/// log q* against log p. Raw cells deviating from the smoothed curve beyond
/// their own 95% CI raise the non-monotonicity flag. Fewer than 3 usable p
/// values is an error.
ExponentFit fit_exponent(const std::vector<ScanCell>& cells, double gamma_ref);

struct RedWinsCertificate {
  bool g_holds = false;
  bool h_holds = false;
  bool engine_checked = false;  // only when G and H both hold
  bool origin_red = false;
  bool within_bound = false;    // origin colored by the proof's time bound
  std::int64_t red_x = 0, red_y = 0;  // witness site when H holds
  int window_radius = 0;
  double time_bound = 0;
};

/// Samples one configuration by the two-stage construction on a window
/// sized by the speed-of-light radius, tests the events G (no potentially
/// blue site on the axis interval) and H (a red site low in the quadrant
/// with no rho-line blue blocker nearby), and, when both hold, runs the
/// engine and checks that the origin's final color is red.
RedWinsCertificate red_wins_certificate(double p, double q, double epsilon,
                                        Rational r, int tau, int rho,
                                        std::uint64_t seed);

struct ThreeColorResult {
  FateEstimate fate;                  // blue/red as usual
  std::int64_t green_wins = 0;
  Interval green_ci;
  double mean_frac_green = 0;
};

/// Fate estimation with three species: blue and red at density p, green at
/// density q, all with period 1.
ThreeColorResult three_color_experiment(double p, double q,
                                        const Neighborhood& blue,
                                        const Neighborhood& red,
                                        const Neighborhood& green, int L,
                                        int replicates, std::uint64_t seed);

/// True when every connected component (4-adjacency, torus wrap) of empty
/// sites is a filled axis-aligned rectangle. Components that wrap around
/// the torus in either direction count as non-rectangular.
bool empty_components_rectangular(const SimResult& result);

}  // namespace growthlab
