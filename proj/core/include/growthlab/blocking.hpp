#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "growthlab/continuum.hpp"
#include "growthlab/engine.hpp"
#include "growthlab/model.hpp"

namespace growthlab {

/// Continuum-to-lattice magnification: rescaled u = ceil(u * p^(-rho/(rho+1))).
/// A 1e-9 snap keeps exact products from ceiling up through float fuzz.
struct RescaleRule {
  double p = 0.01;
  int rho = 1;

  double scale() const;
  std::int64_t rescale(double u) const;
};

/// Half-open integer rectangle [x0, x0+w) x [y0, y0+h).
struct IRect {
  std::int64_t x0 = 0;
  std::int64_t y0 = 0;
  std::int64_t w = 0;
  std::int64_t h = 0;

  std::int64_t x1() const { return x0 + w; }
  std::int64_t y1() const { return y0 + h; }
  bool contains(std::int64_t x, std::int64_t y) const {
    return x >= x0 && x < x1() && y >= y0 && y < y1();
  }
  bool operator==(const IRect&) const = default;
};

/// One box of the construction plus the activation region abutting its
/// right edge at the same height.
struct ScaffoldRow {
  int layer = 0;
  int k = 1;  // 1-based index within the layer
  IRect box;
  IRect activation;
};

struct ScaffoldParams {
  double p = 0.01;
  double alpha = 0.5;
  double alpha_bar = 0.75;
  int m = 5;
  int rho = 1;
  std::optional<int> ell_max;  // default: ceil(log(1/p) / log(lambda))

  void validate() const;
  int resolved_ell_max() const;
};

struct LayerInfo {
  Triple triple;        // (f_l, g_l, h_l)
  double shift_s = 0;   // S_l
  double act_width = 0; // activation width in continuum units
  std::int64_t box_w = 0;
  std::int64_t box_h = 0;
};

/// The layered box/activation geometry in lattice coordinates. Boxes within
/// a layer sit on m consecutive sublayers (a staircase); layers stack
/// adjacently. A transposed scaffold is the reflection of the centered
/// construction over the x-axis, then shifted.
class BlockingScaffold {
 public:
  static BlockingScaffold build(std::int64_t center_x, std::int64_t center_y,
                                const ScaffoldParams& params, bool transposed);

  const ScaffoldParams& params() const { return params_; }
  const std::vector<ScaffoldRow>& rows() const { return rows_; }
  const std::vector<LayerInfo>& layers() const { return layers_; }
  std::int64_t center_x() const { return center_x_; }
  std::int64_t center_y() const { return center_y_; }
  bool transposed() const { return transposed_; }
  double sigma() const { return sigma_; }
  double lambda() const { return lambda_; }
  int ell_max() const { return static_cast<int>(layers_.size()) - 1; }

  /// Total height of the stacked layers in lattice units.
  std::int64_t total_height() const;

  /// Bounding rectangle over all boxes and activation regions.
  IRect bounds() const;

 private:
  ScaffoldParams params_;
  std::int64_t center_x_ = 0;
  std::int64_t center_y_ = 0;
  bool transposed_ = false;
  double sigma_ = 0;
  double lambda_ = 1;
  std::vector<LayerInfo> layers_;
  std::vector<ScaffoldRow> rows_;  // layer-major, k ascending
};

/// Membership test for initially blue sites, in world coordinates.
class BlueField {
 public:
  virtual ~BlueField() = default;
  virtual bool contains(std::int64_t x, std::int64_t y) const = 0;
};

class BluePointSet final : public BlueField {
 public:
  BluePointSet() = default;
  void insert(std::int64_t x, std::int64_t y);
  void erase(std::int64_t x, std::int64_t y);
  std::size_t size() const { return points_.size(); }
  bool contains(std::int64_t x, std::int64_t y) const override;

 private:
  static std::uint64_t key(std::int64_t x, std::int64_t y);
  std::unordered_set<std::uint64_t> points_;
};

/// Site-keyed Bernoulli field of density `density` (used for gap statistics
/// at blue density B*p).
class SampledBlueField final : public BlueField {
 public:
  SampledBlueField(std::uint64_t seed, double density)
      : seed_(seed), density_(density) {}
  bool contains(std::int64_t x, std::int64_t y) const override;

 private:
  std::uint64_t seed_;
  double density_;
};

struct SuccessCheck {
  bool successful = true;
  int fail_layer = -1;
  int fail_k = -1;
};

/// A row is successful when its activation region holds rho neighboring
/// lattice rows, each with at least one blue site (>= 1 site anywhere for
/// rho = 1). Checks rows layer-major and reports the first failure.
/// `shift_x`/`shift_y` translate the scaffold before testing.
SuccessCheck is_successful(const BlockingScaffold& scaffold,
                           const BlueField& blue, int rho,
                           std::int64_t shift_x = 0, std::int64_t shift_y = 0);

struct GapStats {
  std::vector<std::int64_t> ks;     // window indices
  std::vector<std::uint8_t> indicators;
  std::vector<std::int64_t> gaps;   // Z_k; -1 when censored by the window
  double depth_d = 0;               // sigma + g_1/alpha (continuum units)
  double unprotected_area = 0;      // continuum units^2, see gap_stats docs
  std::int64_t success_count = 0;
  std::int64_t censored = 0;
};

/// Computes I_k for k in [k_min, k_max] by testing the scaffold centered at
/// rescaled (k, -sigma), the forward gaps Z_k, and the unprotected area of
/// the cone-envelope region below the axis. Each inter-success span s
/// contributes depth_d * s, plus s^2/4 when s > 1 (cones of slope one from
/// apexes at depth d close the notch); window edges and all-failure windows
/// count the base strip (plus the full notch when no success exists).
GapStats gap_stats(const BlueField& blue, std::int64_t k_min,
                   std::int64_t k_max, const ScaffoldParams& params);

enum class CertMode { Dynamic, Static };

/// Downward 45-degree cone with the given apex: {(x, y) : y - ay <= -|x - ax|}.
/// A transposed cone opens upward.
struct Cone {
  std::int64_t apex_x = 0;
  std::int64_t apex_y = 0;
  bool transposed = false;

  bool contains(std::int64_t x, std::int64_t y) const {
    const std::int64_t dx = x >= apex_x ? x - apex_x : apex_x - x;
    return transposed ? (y - apex_y >= dx) : (y - apex_y <= -dx);
  }
};

/// Thrown when a certificate is requested for a scaffold that is not
/// successful under the given blue field; carries the first failing row.
class UnsuccessfulScaffold : public std::exception {
 public:
  UnsuccessfulScaffold(int scaffold_index, int layer, int k);
  const char* what() const noexcept override { return message_.c_str(); }
  int scaffold_index() const { return scaffold_index_; }
  int layer() const { return layer_; }
  int k() const { return k_; }

 private:
  int scaffold_index_;
  int layer_;
  int k_;
  std::string message_;
};

struct BoxCheck {
  int scaffold_index = 0;
  int layer = 0;
  int k = 1;
  std::int64_t crossing_tick = kNever;   // first tick a blue line spans the box
  std::int64_t red_entry_tick = kNever;  // first red in the box's full strip
  bool ok = true;
};

struct LayerTimeCheck {
  int scaffold_index = 0;
  int layer = 0;
  double red_entry_time = -1;  // -1: never within horizon
  double required_time = 0;    // rescaled g_l + (ab-a) h_{l-1}, in time units
  bool ok = true;
};

struct CertificateReport {
  CertMode mode = CertMode::Dynamic;
  bool pass = false;
  bool axis_clear = false;
  int fail_scaffold = -1;
  int fail_layer = -1;
  int fail_k = -1;
  std::int64_t fail_tick = kNever;
  std::int64_t horizon_ticks = 0;
  std::vector<BoxCheck> box_checks;          // dynamic mode
  std::vector<LayerTimeCheck> layer_checks;  // static mode
  std::int64_t window_x0 = 0;  // world coordinate of lattice site (0,0)
  std::int64_t window_y0 = 0;
  std::int64_t axis_x_lo = 0;  // certified x-axis segment, world coords
  std::int64_t axis_x_hi = 0;
  SimResult result;  // final configuration, for rendering and inspection
};

/// Runs the engine (blue = {e1} directed, red = L1 ball of radius rho with
/// period r) from solidly red cones plus the blue field, through time C/p,
/// and checks the protection conditions. Dynamic mode: every box is crossed
/// by a blue line strictly before red enters its full-width horizontal
/// strip. Static mode: blue is frozen as one crossing segment per box and
/// red must need at least the rescaled per-layer time to enter each layer
/// strip. Both modes additionally require the certified x-axis segment to
/// stay free of red. Throws UnsuccessfulScaffold when a scaffold fails
/// is_successful under `blue`.
CertificateReport protection_certificate(
    std::span<const BlockingScaffold> scaffolds, std::span<const Cone> cones,
    const BlueField& blue, double C, CertMode mode, Rational red_period,
    std::uint64_t seed);

}  // namespace growthlab
