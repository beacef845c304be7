#include "growthlab/blocking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "growthlab/geometry.hpp"
#include "growthlab/rng.hpp"

namespace growthlab {

double RescaleRule::scale() const {
  return std::pow(p, -static_cast<double>(rho) / (rho + 1.0));
}

std::int64_t RescaleRule::rescale(double u) const {
  return static_cast<std::int64_t>(std::ceil(u * scale() - 1e-9));
}

void ScaffoldParams::validate() const {
  if (p <= 0.0 || p > 1.0) throw std::invalid_argument("p must be in (0, 1]");
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
  if (m <= 2.0 / alpha) throw std::invalid_argument("m must exceed 2/alpha");
  if (alpha_bar <= alpha) throw std::invalid_argument("alpha_bar must exceed alpha");
  if (rho < 1) throw std::invalid_argument("rho must be >= 1");
  if (ell_max && *ell_max < 0) throw std::invalid_argument("ell_max must be >= 0");
}

int ScaffoldParams::resolved_ell_max() const {
  if (ell_max) return *ell_max;
  const double lam = lambda_of(m, alpha);
  return static_cast<int>(std::ceil(std::log(1.0 / p) / std::log(lam) - 1e-9));
}

namespace {

IRect place(const IRect& local, std::int64_t cx, std::int64_t cy,
            bool transposed) {
  if (!transposed) {
    return {local.x0 + cx, local.y0 + cy, local.w, local.h};
  }
  // Reflect the cell set over the x-axis, then shift: rows
  // [y0, y0+h) map to [-y0-h+1, -y0+1).
  return {local.x0 + cx, cy - local.y0 - local.h + 1, local.w, local.h};
}

}  // namespace

BlockingScaffold BlockingScaffold::build(std::int64_t center_x,
                                         std::int64_t center_y,
                                         const ScaffoldParams& params,
                                         bool transposed) {
  params.validate();
  BlockingScaffold sc;
  sc.params_ = params;
  sc.center_x_ = center_x;
  sc.center_y_ = center_y;
  sc.transposed_ = transposed;
  sc.lambda_ = lambda_of(params.m, params.alpha);
  sc.sigma_ = sigma_of(params.m, params.alpha);

  const RescaleRule rule{params.p, params.rho};
  const int ell_max = params.resolved_ell_max();
  const ContinuumConfig cfg{params.alpha, params.alpha_bar, params.m};
  Triple t = initial_triple(cfg);
  double shift_s = 0.0;  // S_0 = 0, S_{l+1} = S_l - h_l
  double prev_h = 0.0;
  std::int64_t base_y = 0;

  for (int ell = 0; ell <= ell_max; ++ell) {
    LayerInfo info;
    info.triple = t;
    info.shift_s = shift_s;
    info.act_width = ell == 0 ? 0.5 * (params.alpha_bar - params.alpha)
                              : (params.alpha_bar - params.alpha) * prev_h;
    info.box_w = rule.rescale(t.g);
    info.box_h = rule.rescale(std::pow(sc.lambda_, -ell / 2.0));
    sc.layers_.push_back(info);

    const std::int64_t act_w = rule.rescale(info.act_width);
    for (int k = 1; k <= params.m; ++k) {
      const double x_cont = (k - 1) * t.g - k * t.h + shift_s;
      IRect box{rule.rescale(x_cont), base_y + (k - 1) * info.box_h,
                info.box_w, info.box_h};
      IRect act{box.x1(), box.y0, act_w, info.box_h};
      sc.rows_.push_back({ell, k, place(box, center_x, center_y, transposed),
                          place(act, center_x, center_y, transposed)});
    }
    base_y += params.m * info.box_h;
    shift_s -= t.h;
    prev_h = t.h;
    t = Triple{sc.lambda_ * t.f, sc.lambda_ * t.g, sc.lambda_ * t.h};
  }
  return sc;
}

std::int64_t BlockingScaffold::total_height() const {
  std::int64_t h = 0;
  for (const LayerInfo& l : layers_) h += params_.m * l.box_h;
  return h;
}

IRect BlockingScaffold::bounds() const {
  std::int64_t x0 = std::numeric_limits<std::int64_t>::max();
  std::int64_t y0 = std::numeric_limits<std::int64_t>::max();
  std::int64_t x1 = std::numeric_limits<std::int64_t>::min();
  std::int64_t y1 = std::numeric_limits<std::int64_t>::min();
  for (const ScaffoldRow& r : rows_) {
    for (const IRect* rect : {&r.box, &r.activation}) {
      x0 = std::min(x0, rect->x0);
      y0 = std::min(y0, rect->y0);
      x1 = std::max(x1, rect->x1());
      y1 = std::max(y1, rect->y1());
    }
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

void BluePointSet::insert(std::int64_t x, std::int64_t y) {
  points_.insert(key(x, y));
}

void BluePointSet::erase(std::int64_t x, std::int64_t y) {
  points_.erase(key(x, y));
}

bool BluePointSet::contains(std::int64_t x, std::int64_t y) const {
  return points_.count(key(x, y)) != 0;
}

std::uint64_t BluePointSet::key(std::int64_t x, std::int64_t y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
}

bool SampledBlueField::contains(std::int64_t x, std::int64_t y) const {
  return uniform01(seed_, stream::kInitialDraw, x, y, 0) < density_;
}

SuccessCheck is_successful(const BlockingScaffold& scaffold,
                           const BlueField& blue, int rho,
                           std::int64_t shift_x, std::int64_t shift_y) {
  for (const ScaffoldRow& row : scaffold.rows()) {
    const IRect r{row.activation.x0 + shift_x, row.activation.y0 + shift_y,
                  row.activation.w, row.activation.h};
    int run = 0;
    bool ok = false;
    for (std::int64_t y = r.y0; y < r.y1(); ++y) {
      bool has = false;
      for (std::int64_t x = r.x0; x < r.x1(); ++x) {
        if (blue.contains(x, y)) {
          has = true;
          break;
        }
      }
      run = has ? run + 1 : 0;
      if (run >= rho) {
        ok = true;
        break;
      }
    }
    if (!ok) return {false, row.layer, row.k};
  }
  return {true, -1, -1};
}

GapStats gap_stats(const BlueField& blue, std::int64_t k_min,
                   std::int64_t k_max, const ScaffoldParams& params) {
  params.validate();
  if (k_max < k_min) throw std::invalid_argument("gap_stats: empty window");
  const RescaleRule rule{params.p, params.rho};
  const double sigma = sigma_of(params.m, params.alpha);
  const BlockingScaffold base =
      BlockingScaffold::build(0, rule.rescale(-sigma), params, false);

  GapStats out;
  out.depth_d = sigma + base.layers()[1 < base.layers().size() ? 1 : 0].triple.g /
                            params.alpha;
  const std::int64_t n = k_max - k_min + 1;
  out.ks.reserve(n);
  out.indicators.reserve(n);
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    out.ks.push_back(k);
    const bool ok =
        is_successful(base, blue, params.rho, rule.rescale(static_cast<double>(k)), 0)
            .successful;
    out.indicators.push_back(ok ? 1 : 0);
    if (ok) ++out.success_count;
  }

  // Z_k: distance to the next success at or after k, right-to-left pass.
  out.gaps.assign(n, -1);
  std::int64_t next = -1;
  for (std::int64_t i = n - 1; i >= 0; --i) {
    if (out.indicators[i]) next = i;
    if (next >= 0) {
      out.gaps[i] = next - i;
    } else {
      ++out.censored;
    }
  }

  // Unprotected area between the x-axis and the cone envelope hung from the
  // successful indices: base strip of depth d everywhere, plus a s^2/4 notch
  // for every inter-success span s > 1 (and the full notch when the window
  // has no success at all).
  const double d = out.depth_d;
  const double len = static_cast<double>(k_max - k_min);
  double area = 0.0;
  std::vector<std::int64_t> succ;
  for (std::int64_t i = 0; i < n; ++i) {
    if (out.indicators[i]) succ.push_back(out.ks[i]);
  }
  if (succ.empty()) {
    area = d * len + len * len / 4.0;
  } else {
    area = d * len;
    for (std::size_t i = 0; i + 1 < succ.size(); ++i) {
      const double span = static_cast<double>(succ[i + 1] - succ[i]);
      if (span > 1.0) area += span * span / 4.0;
    }
  }
  out.unprotected_area = area;
  return out;
}

UnsuccessfulScaffold::UnsuccessfulScaffold(int scaffold_index, int layer, int k)
    : scaffold_index_(scaffold_index), layer_(layer), k_(k) {
  message_ = "scaffold " + std::to_string(scaffold_index) +
             " is not successful: first failing box (layer " +
             std::to_string(layer) + ", k " + std::to_string(k) + ")";
}

namespace {

struct Frame {
  std::int64_t x0, y0;  // world coordinate of lattice index (0,0)
  int w, h;
  bool contains_world(std::int64_t x, std::int64_t y) const {
    return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
  }
};

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

}  // namespace

CertificateReport protection_certificate(
    std::span<const BlockingScaffold> scaffolds, std::span<const Cone> cones,
    const BlueField& blue, double C, CertMode mode, Rational red_period,
    std::uint64_t seed) {
  if (scaffolds.empty()) {
    throw std::invalid_argument("protection_certificate: no scaffolds");
  }
  if (C <= 0) throw std::invalid_argument("protection_certificate: C must be > 0");
  const ScaffoldParams& params = scaffolds[0].params();
  const double r_value = static_cast<double>(red_period.num) / red_period.den;
  if (params.alpha_bar > r_value + 1e-12) {
    throw std::invalid_argument("protection_certificate: requires alpha_bar <= r");
  }
  for (std::size_t i = 0; i < scaffolds.size(); ++i) {
    const SuccessCheck chk = is_successful(scaffolds[i], blue, params.rho);
    if (!chk.successful) {
      throw UnsuccessfulScaffold(static_cast<int>(i), chk.fail_layer, chk.fail_k);
    }
  }

  // Window geometry: certified axis segment spans the boxes with slack; the
  // lattice adds the dependence margin horizontally and red's reachable
  // range vertically, so the dead boundary cannot influence any check.
  std::int64_t bx0 = std::numeric_limits<std::int64_t>::max(), bx1 = std::numeric_limits<std::int64_t>::min();
  std::int64_t by0 = 0, by1 = 0;
  for (const BlockingScaffold& sc : scaffolds) {
    const IRect b = sc.bounds();
    bx0 = std::min(bx0, b.x0);
    bx1 = std::max(bx1, b.x1());
    by0 = std::min(by0, b.y0);
    by1 = std::max(by1, b.y1());
  }
  for (const Cone& c : cones) {
    bx0 = std::min(bx0, c.apex_x - 4);
    bx1 = std::max(bx1, c.apex_x + 4);
    by0 = std::min(by0, c.apex_y - 2);
    by1 = std::max(by1, c.apex_y + 2);
  }

  const double horizon_time = C / params.p;
  const std::int64_t tick_scale = red_period.den;  // blue period has den 1
  const std::int64_t horizon_ticks =
      static_cast<std::int64_t>(std::ceil(horizon_time * tick_scale));

  const Neighborhood blue_nb = line_neighborhood(1, Axis::X, true);
  const Neighborhood red_nb = l1_ball(params.rho);
  const Rational blue_period =
      mode == CertMode::Static
          ? Rational{2 * ceil_div(horizon_ticks, tick_scale) + 2, 1}
          : Rational{1, 1};

  ModelSpec probe;
  probe.species.push_back({1, "blue", blue_nb, blue_period, Rgb{0, 0, 255}});
  probe.species.push_back({2, "red", red_nb, red_period, Rgb{255, 0, 0}});
  probe.densities = {0.0, 0.0};
  probe.topology = Topology::DeadBoundary;
  probe.width = 1;
  probe.height = 1;
  probe.seed = seed;
  const std::int64_t margin_x = window_dependence_radius(probe, horizon_ticks) + 2;
  const std::int64_t reach_y =
      ceil_div(static_cast<std::int64_t>(std::ceil(horizon_time)) *
                   params.rho * red_period.den,
               red_period.num) + 2;

  const std::int64_t axis_lo = bx0 - 40;
  const std::int64_t axis_hi = bx1 + 40;
  Frame frame;
  frame.x0 = axis_lo - margin_x;
  frame.y0 = std::min(by0, std::int64_t{0}) - reach_y;
  const std::int64_t fx1 = axis_hi + margin_x;
  const std::int64_t fy1 = std::max(by1, std::int64_t{0}) + reach_y;
  if (fx1 - frame.x0 > 1 << 16 || fy1 - frame.y0 > 1 << 16 ||
      (fx1 - frame.x0) * (fy1 - frame.y0) > (std::int64_t{1} << 27)) {
    throw std::overflow_error("protection_certificate: window too large");
  }
  frame.w = static_cast<int>(fx1 - frame.x0);
  frame.h = static_cast<int>(fy1 - frame.y0);

  ModelSpec model = probe;
  model.width = frame.w;
  model.height = frame.h;

  // Static mode freezes blue as one crossing segment per box: the row of
  // the box nearest the red approach side.
  BluePointSet static_lines;
  if (mode == CertMode::Static) {
    for (const BlockingScaffold& sc : scaffolds) {
      for (const ScaffoldRow& row : sc.rows()) {
        const std::int64_t y = sc.transposed() ? row.box.y1() - 1 : row.box.y0;
        for (std::int64_t x = row.box.x0; x < row.box.x1(); ++x) {
          static_lines.insert(x, y);
        }
      }
    }
  }
  const BlueField& blue_init =
      mode == CertMode::Static ? static_cast<const BlueField&>(static_lines) : blue;

  Lattice lat(model);
  for (std::int64_t wy = frame.y0; wy < frame.y0 + frame.h; ++wy) {
    for (std::int64_t wx = frame.x0; wx < frame.x0 + frame.w; ++wx) {
      bool red = false;
      for (const Cone& c : cones) {
        if (c.contains(wx, wy)) {
          red = true;
          break;
        }
      }
      const std::size_t i = lat.index(static_cast<int>(wx - frame.x0),
                                      static_cast<int>(wy - frame.y0));
      if (red) {
        lat.color_site(i, 2, 0);  // solid red cones take precedence
      } else if (blue_init.contains(wx, wy)) {
        lat.color_site(i, 1, 0);
      }
    }
  }

  FrontierEngine engine(std::move(lat));
  CertificateReport rep;
  rep.mode = mode;
  rep.horizon_ticks = horizon_ticks;
  rep.window_x0 = frame.x0;
  rep.window_y0 = frame.y0;
  rep.axis_x_lo = axis_lo;
  rep.axis_x_hi = axis_hi;
  rep.result = engine.run(horizon_ticks);
  const Lattice& fin = rep.result.lattice;

  // Earliest red arrival per lattice row.
  std::vector<std::int64_t> row_red_min(static_cast<std::size_t>(frame.h), kNever);
  for (int iy = 0; iy < frame.h; ++iy) {
    std::int64_t best = kNever;
    for (int ix = 0; ix < frame.w; ++ix) {
      const std::size_t i = fin.index(ix, iy);
      if (fin.color_at(i) == 2) {
        const std::int64_t t = fin.colored_tick(i);
        if (best == kNever || t < best) best = t;
      }
    }
    row_red_min[static_cast<std::size_t>(iy)] = best;
  }
  const auto strip_entry = [&](std::int64_t wy0, std::int64_t wy1) {
    std::int64_t best = kNever;
    for (std::int64_t wy = wy0; wy < wy1; ++wy) {
      if (wy < frame.y0 || wy >= frame.y0 + frame.h) continue;
      const std::int64_t t = row_red_min[static_cast<std::size_t>(wy - frame.y0)];
      if (t != kNever && (best == kNever || t < best)) best = t;
    }
    return best;
  };

  rep.pass = true;
  const auto record_failure = [&](int si, int layer, int k, std::int64_t tick) {
    if (rep.pass) {
      rep.fail_scaffold = si;
      rep.fail_layer = layer;
      rep.fail_k = k;
      rep.fail_tick = tick;
      rep.pass = false;
    }
  };

  if (mode == CertMode::Dynamic) {
    for (std::size_t si = 0; si < scaffolds.size(); ++si) {
      for (const ScaffoldRow& row : scaffolds[si].rows()) {
        BoxCheck bc;
        bc.scaffold_index = static_cast<int>(si);
        bc.layer = row.layer;
        bc.k = row.k;
        // First tick at which some row of the box is entirely blue.
        std::int64_t crossing = kNever;
        for (std::int64_t wy = row.box.y0; wy < row.box.y1(); ++wy) {
          std::int64_t row_done = 0;
          bool full = true;
          for (std::int64_t wx = row.box.x0; wx < row.box.x1(); ++wx) {
            if (!frame.contains_world(wx, wy)) { full = false; break; }
            const std::size_t i = fin.index(static_cast<int>(wx - frame.x0),
                                            static_cast<int>(wy - frame.y0));
            if (fin.color_at(i) != 1) {
              full = false;
              break;
            }
            row_done = std::max(row_done, fin.colored_tick(i));
          }
          if (full && (crossing == kNever || row_done < crossing)) {
            crossing = row_done;
          }
        }
        bc.crossing_tick = crossing;
        bc.red_entry_tick = strip_entry(row.box.y0, row.box.y1());
        bc.ok = bc.red_entry_tick == kNever ||
                (crossing != kNever && crossing < bc.red_entry_tick);
        if (!bc.ok) {
          record_failure(static_cast<int>(si), row.layer, row.k,
                         bc.red_entry_tick);
        }
        rep.box_checks.push_back(bc);
      }
    }
  } else {
    const RescaleRule rule{params.p, params.rho};
    for (std::size_t si = 0; si < scaffolds.size(); ++si) {
      const BlockingScaffold& sc = scaffolds[si];
      for (int ell = 0; ell <= sc.ell_max(); ++ell) {
        std::int64_t y0 = std::numeric_limits<std::int64_t>::max();
        std::int64_t y1 = std::numeric_limits<std::int64_t>::min();
        for (const ScaffoldRow& row : sc.rows()) {
          if (row.layer != ell) continue;
          y0 = std::min(y0, row.box.y0);
          y1 = std::max(y1, row.box.y1());
        }
        LayerTimeCheck lc;
        lc.scaffold_index = static_cast<int>(si);
        lc.layer = ell;
        const LayerInfo& info = sc.layers()[static_cast<std::size_t>(ell)];
        lc.required_time = (info.triple.g + info.act_width) * rule.scale();
        const std::int64_t entry = strip_entry(y0, y1);
        lc.red_entry_time =
            entry == kNever ? -1.0
                            : static_cast<double>(entry) / tick_scale;
        lc.ok = entry == kNever || lc.red_entry_time >= lc.required_time - 1e-9;
        if (!lc.ok) record_failure(static_cast<int>(si), ell, -1, entry);
        rep.layer_checks.push_back(lc);
      }
    }
  }

  // Certified axis segment must stay red-free through the horizon.
  rep.axis_clear = true;
  if (0 >= frame.y0 && 0 < frame.y0 + frame.h) {
    const int iy = static_cast<int>(-frame.y0);
    for (std::int64_t wx = axis_lo; wx <= axis_hi; ++wx) {
      if (wx < frame.x0 || wx >= frame.x0 + frame.w) continue;
      const std::size_t i = fin.index(static_cast<int>(wx - frame.x0), iy);
      if (fin.color_at(i) == 2) {
        rep.axis_clear = false;
        record_failure(-1, -1, -1, fin.colored_tick(i));
        break;
      }
    }
  }
  rep.pass = rep.pass && rep.axis_clear;
  return rep;
}

}  // namespace growthlab
