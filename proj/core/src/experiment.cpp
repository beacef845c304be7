#include "growthlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "growthlab/parallel.hpp"
#include "growthlab/rng.hpp"

namespace growthlab {

void ExperimentParams::validate() const {
  if (p_grid.empty()) throw std::invalid_argument("p grid must be nonempty");
  if (a_grid.empty()) throw std::invalid_argument("a grid must be nonempty");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  for (double p : p_grid) {
    if (p <= 0 || p >= 1) throw std::invalid_argument("p values must be in (0,1)");
  }
  for (double a : a_grid) {
    if (a <= 0) throw std::invalid_argument("a values must be > 0");
  }
  if (rho < 1 || tau < 1) throw std::invalid_argument("rho, tau must be >= 1");
}

int ExperimentParams::side_for(double p) const {
  if (L > 0) return L;
  return std::max(200, static_cast<int>(std::ceil(2.0 / p)));
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 95%
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct ReplicateRecord {
  int origin_color = 0;
  double frac[4] = {0, 0, 0, 0};  // by species position + empty in [3]
  double fixation_time = 0;
  bool capped = false;
};

std::vector<ReplicateRecord> run_replicates(const ModelSpec& base, int L,
                                            int replicates) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  std::vector<ReplicateRecord> records(static_cast<std::size_t>(replicates));
  parallel_for_index(static_cast<std::size_t>(replicates), [&](std::size_t i) {
    ModelSpec model = base;
    model.width = L;
    model.height = L;
    model.seed = seed_for_replicate(base.seed, i);
    SimResult res = run_to_fixation(sample_initial(model));
    ReplicateRecord& rec = records[i];
    rec.origin_color = res.lattice.color_at(0, 0);
    const double n = static_cast<double>(res.lattice.site_count());
    for (std::size_t s = 0; s < model.species.size() && s < 3; ++s) {
      rec.frac[s] = static_cast<double>(res.species_counts[s]) / n;
    }
    rec.frac[3] = static_cast<double>(res.empty_count) / n;
    rec.fixation_time = res.fixation_time();
    rec.capped = res.horizon_capped;
  });
  return records;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

FateEstimate aggregate_two_species(const ModelSpec& model,
                                   const std::vector<ReplicateRecord>& recs) {
  FateEstimate est;
  est.replicates = static_cast<std::int64_t>(recs.size());
  const int blue_id = model.species[0].id;
  const int red_id = model.species.size() > 1 ? model.species[1].id : -1;
  std::vector<double> fb, fr, fe, ft;
  for (const ReplicateRecord& rec : recs) {
    if (rec.origin_color == blue_id) {
      ++est.blue_wins;
    } else if (rec.origin_color == red_id) {
      ++est.red_wins;
    } else if (rec.origin_color == 0) {
      ++est.empty_outcomes;
    }
    fb.push_back(rec.frac[0]);
    fr.push_back(model.species.size() > 1 ? rec.frac[1] : 0.0);
    fe.push_back(rec.frac[3]);
    ft.push_back(rec.fixation_time);
    if (rec.capped) ++est.horizon_hits;
  }
  est.blue_ci = wilson_interval(est.blue_wins, est.replicates);
  est.red_ci = wilson_interval(est.red_wins, est.replicates);
  est.empty_ci = wilson_interval(est.empty_outcomes, est.replicates);
  est.mean_frac_blue = mean_of(fb);
  est.mean_frac_red = mean_of(fr);
  est.mean_frac_empty = mean_of(fe);
  est.sd_frac_blue = sd_of(fb);
  est.sd_frac_red = sd_of(fr);
  est.sd_frac_empty = sd_of(fe);
  est.mean_fixation_time = mean_of(ft);
  return est;
}

}  // namespace

FateEstimate estimate_origin_fate(const ModelSpec& model, int L,
                                  int replicates) {
  if (L < 8) throw std::invalid_argument("estimate_origin_fate: L must be >= 8");
  return aggregate_two_species(model, run_replicates(model, L, replicates));
}

std::vector<ScanCell> phase_scan(const ExperimentParams& params,
                                 const std::vector<ScanCell>& done) {
  params.validate();
  const auto matches = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({std::abs(x), std::abs(y), 1e-300});
  };
  std::vector<ScanCell> out;
  for (double p : params.p_grid) {
    for (double a : params.a_grid) {
      const double q = a * std::pow(p, params.gamma);
      const auto prior = std::find_if(done.begin(), done.end(), [&](const ScanCell& c) {
        return matches(c.p, p) && matches(c.a, a);
      });
      if (prior != done.end()) {
        out.push_back(*prior);
        continue;
      }
      if (p + q > 1.0) {
        throw std::invalid_argument("phase_scan: p + q exceeds 1 for a grid cell");
      }
      ScanCell cell;
      cell.p = p;
      cell.a = a;
      cell.q = q;
      cell.L = params.side_for(p);
      const ModelSpec model = two_species_model(
          line_neighborhood(params.tau, Axis::X, false),
          line_neighborhood(params.rho, Axis::Y, false), params.r, p, q,
          Topology::Torus, cell.L, cell.L,
          mix64(params.seed ^ mix64(static_cast<std::uint64_t>(out.size()))));
      cell.fate = estimate_origin_fate(model, cell.L, params.replicates);
      out.push_back(cell);
    }
  }
  return out;
}

namespace {

/// Pool-adjacent-violators for a nonincreasing fit under weights.
std::vector<double> isotonic_nonincreasing(const std::vector<double>& ys,
                                           const std::vector<double>& ws) {
  struct Block {
    double sum, weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    blocks.push_back({-ys[i] * ws[i], ws[i], 1});
    while (blocks.size() >= 2) {
      const Block& b = blocks[blocks.size() - 1];
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum / a.weight <= b.sum / b.weight + 1e-15) break;
      Block merged{a.sum + b.sum, a.weight + b.weight, a.count + b.count};
      blocks.pop_back();
      blocks.pop_back();
      blocks.push_back(merged);
    }
  }
  std::vector<double> fit;
  fit.reserve(ys.size());
  for (const Block& b : blocks) {
    for (std::size_t i = 0; i < b.count; ++i) fit.push_back(-b.sum / b.weight);
  }
  return fit;
}

}  // namespace

ExponentFit fit_exponent(const std::vector<ScanCell>& cells, double gamma_ref) {
  std::vector<double> ps;
  for (const ScanCell& c : cells) {
    if (std::find(ps.begin(), ps.end(), c.p) == ps.end()) ps.push_back(c.p);
  }
  std::sort(ps.begin(), ps.end());

  ExponentFit fit;
  for (double p : ps) {
    std::vector<const ScanCell*> row;
    for (const ScanCell& c : cells) {
      if (c.p == p) row.push_back(&c);
    }
    std::sort(row.begin(), row.end(), [](const ScanCell* a, const ScanCell* b) {
      return a->a < b->a;
    });
    if (row.size() < 2) {
      fit.warnings.push_back("p=" + std::to_string(p) + ": fewer than 2 a-values");
      continue;
    }
    std::vector<double> ys, ws, as;
    for (const ScanCell* c : row) {
      ys.push_back(c->fate.p_blue());
      ws.push_back(static_cast<double>(c->fate.replicates));
      as.push_back(c->a);
    }
    const std::vector<double> smooth = isotonic_nonincreasing(ys, ws);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Interval ci = row[i]->fate.blue_ci;
      if (smooth[i] < ci.lo - 1e-12 || smooth[i] > ci.hi + 1e-12) {
        fit.nonmonotone_flagged = true;
      }
    }
    if (smooth.front() < 0.5 || smooth.back() > 0.5) {
      fit.warnings.push_back("p=" + std::to_string(p) +
                             ": smoothed P(blue) does not bracket 1/2");
      continue;
    }
    std::size_t i = 0;
    while (i + 1 < smooth.size() && smooth[i + 1] >= 0.5) ++i;
    // smooth[i] >= 0.5 >= smooth[i+1]
    double log_a_star;
    if (smooth[i] <= 0.5 + 1e-15) {
      log_a_star = std::log(as[i]);
    } else if (i + 1 == smooth.size() || smooth[i] == smooth[i + 1]) {
      log_a_star = std::log(as[i]);
    } else {
      const double w = (smooth[i] - 0.5) / (smooth[i] - smooth[i + 1]);
      log_a_star = (1.0 - w) * std::log(as[i]) + w * std::log(as[i + 1]);
    }
    fit.crossing_p.push_back(p);
    fit.crossing_q.push_back(std::exp(log_a_star) * std::pow(p, gamma_ref));
  }

  fit.points_used = static_cast<int>(fit.crossing_p.size());
  if (fit.points_used < 3) {
    throw std::runtime_error(
        "fit_exponent: fewer than 3 p values with a bracketing crossing");
  }
  // OLS of log q* on log p.
  const int n = fit.points_used;
  double sx = 0, sy = 0;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = std::log(fit.crossing_p[i]);
    ys[i] = std::log(fit.crossing_q[i]);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.gamma_hat = sxy / sxx;
  double ss_res = 0;
  for (int i = 0; i < n; ++i) {
    const double pred = my + fit.gamma_hat * (xs[i] - mx);
    ss_res += (ys[i] - pred) * (ys[i] - pred);
  }
  fit.stderr_ = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return fit;
}

RedWinsCertificate red_wins_certificate(double p, double q, double epsilon,
                                        Rational r, int tau, int rho,
                                        std::uint64_t seed) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be > 0");
  if (p <= 0 || q < 0 || p + q > 1) throw std::invalid_argument("bad (p, q)");
  const double r_val = static_cast<double>(r.num) / static_cast<double>(r.den);
  const double vscale = std::pow(p, static_cast<double>(rho) / (rho + 1.0));

  const std::int64_t g_half =
      static_cast<std::int64_t>(std::floor(epsilon * tau * r_val / p));
  const std::int64_t red_x_max = static_cast<std::int64_t>(std::floor(epsilon / (2 * p)));
  const std::int64_t y_max = static_cast<std::int64_t>(std::floor(epsilon / vscale));
  const std::int64_t blocker_half =
      static_cast<std::int64_t>(std::floor(2 * epsilon * tau * r_val / vscale));

  RedWinsCertificate cert;
  cert.time_bound = epsilon * tau * r_val * (1.0 / vscale + 1.0 / (2 * p));

  ModelSpec base = two_species_model(line_neighborhood(tau, Axis::X, false),
                                     l1_ball(rho), r, p, q,
                                     Topology::DeadBoundary, 1, 1, seed);
  Lattice probe(base);
  const std::int64_t t0_ticks = static_cast<std::int64_t>(
      std::ceil(cert.time_bound * static_cast<double>(probe.tick_scale())));
  const std::int64_t needed = std::max(
      {window_dependence_radius(base, t0_ticks) + 2, g_half + 2,
       red_x_max + blocker_half + 2, y_max + 2});
  if (needed > 40000) {
    throw std::overflow_error("red_wins_certificate: window radius overflow");
  }
  const int radius = static_cast<int>(needed);
  const int side = 2 * radius + 1;
  cert.window_radius = radius;

  ModelSpec model = base;
  model.width = side;
  model.height = side;
  TwoStageSample sample = two_stage_sample(model, p, q);
  const Lattice& lat = sample.lattice;
  std::unordered_set<std::size_t> pblue(sample.potentially_blue_sites.begin(),
                                        sample.potentially_blue_sites.end());
  std::unordered_set<std::size_t> red(sample.red_sites.begin(),
                                      sample.red_sites.end());
  const auto idx = [&](std::int64_t wx, std::int64_t wy) {
    return lat.index(static_cast<int>(wx + radius),
                     static_cast<int>(wy + radius));
  };

  // G: no potentially blue site on the axis interval around the origin.
  cert.g_holds = true;
  for (std::int64_t x = -g_half; x <= g_half; ++x) {
    if (pblue.count(idx(x, 0))) {
      cert.g_holds = false;
      break;
    }
  }

  // H: a red site low in the first quadrant whose neighborhood, within the
  // rescaled rectangle, has no rho neighboring rows of potentially blue.
  cert.h_holds = false;
  for (std::int64_t y = 0; y <= y_max && !cert.h_holds; ++y) {
    for (std::int64_t x = 0; x <= red_x_max && !cert.h_holds; ++x) {
      if (!red.count(idx(x, y))) continue;
      int run = 0;
      bool blocked = false;
      for (std::int64_t yy = 0; yy <= y_max; ++yy) {
        bool line_has = false;
        for (std::int64_t xx = x - blocker_half; xx <= x + blocker_half; ++xx) {
          if (xx < -radius || xx > radius) continue;
          if (pblue.count(idx(xx, yy))) {
            line_has = true;
            break;
          }
        }
        run = line_has ? run + 1 : 0;
        if (run >= rho) {
          blocked = true;
          break;
        }
      }
      if (!blocked) {
        cert.h_holds = true;
        cert.red_x = x;
        cert.red_y = y;
      }
    }
  }

  if (cert.g_holds && cert.h_holds) {
    cert.engine_checked = true;
    SimResult res = run_to_fixation(lat);
    const CellState origin = res.lattice.state(radius, radius);
    cert.origin_red = origin.color == model.species[1].id;
    cert.within_bound = cert.origin_red && origin.colored_at != kNever &&
                        origin.colored_at <= t0_ticks;
  }
  return cert;
}

ThreeColorResult three_color_experiment(double p, double q,
                                        const Neighborhood& blue,
                                        const Neighborhood& red,
                                        const Neighborhood& green, int L,
                                        int replicates, std::uint64_t seed) {
  ModelSpec model;
  model.species.push_back({1, "blue", blue, Rational{1, 1}, Rgb{0, 0, 255}});
  model.species.push_back({2, "red", red, Rational{1, 1}, Rgb{255, 0, 0}});
  model.species.push_back({3, "green", green, Rational{1, 1}, Rgb{0, 160, 0}});
  model.densities = {p, p, q};
  model.topology = Topology::Torus;
  model.width = L;
  model.height = L;
  model.seed = seed;
  model.validate();

  const std::vector<ReplicateRecord> recs = run_replicates(model, L, replicates);
  ThreeColorResult out;
  out.fate = aggregate_two_species(model, recs);
  std::vector<double> fg;
  for (const ReplicateRecord& rec : recs) {
    if (rec.origin_color == 3) ++out.green_wins;
    fg.push_back(rec.frac[2]);
  }
  out.green_ci = wilson_interval(out.green_wins, out.fate.replicates);
  out.mean_frac_green = mean_of(fg);
  return out;
}

bool empty_components_rectangular(const SimResult& result) {
  const Lattice& lat = result.lattice;
  const int w = lat.width();
  const int h = lat.height();
  const bool torus = lat.model().topology == Topology::Torus;
  std::vector<bool> visited(lat.site_count(), false);

  for (std::size_t seed_i = 0; seed_i < lat.site_count(); ++seed_i) {
    if (visited[seed_i] || lat.color_at(seed_i) != 0) continue;
    // BFS with unwrapped relative coordinates; a revisit at a different
    // relative position means the component wraps the torus.
    std::unordered_map<std::size_t, std::pair<std::int64_t, std::int64_t>> rel;
    std::deque<std::size_t> queue{seed_i};
    visited[seed_i] = true;
    rel[seed_i] = {0, 0};
    std::int64_t min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    std::size_t count = 0;
    bool wraps = false;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      ++count;
      const auto [rx, ry] = rel[i];
      min_x = std::min(min_x, rx);
      max_x = std::max(max_x, rx);
      min_y = std::min(min_y, ry);
      max_y = std::max(max_y, ry);
      const int x = static_cast<int>(i % static_cast<std::size_t>(w));
      const int y = static_cast<int>(i / static_cast<std::size_t>(w));
      constexpr int dxs[4] = {1, -1, 0, 0};
      constexpr int dys[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        int nx = x + dxs[d];
        int ny = y + dys[d];
        if (torus) {
          nx = (nx + w) % w;
          ny = (ny + h) % h;
        } else if (nx < 0 || nx >= w || ny < 0 || ny >= h) {
          continue;
        }
        const std::size_t ni = lat.index(nx, ny);
        if (lat.color_at(ni) != 0) continue;
        const std::pair<std::int64_t, std::int64_t> nrel{rx + dxs[d], ry + dys[d]};
        const auto it = rel.find(ni);
        if (it != rel.end()) {
          if (it->second != nrel) wraps = true;
          continue;
        }
        rel[ni] = nrel;
        visited[ni] = true;
        queue.push_back(ni);
      }
    }
    const std::int64_t dx = max_x - min_x + 1;
    const std::int64_t dy = max_y - min_y + 1;
    if (wraps || dx > w || dy > h) return false;
    if (static_cast<std::int64_t>(count) != dx * dy) return false;
  }
  return true;
}

}  // namespace growthlab
