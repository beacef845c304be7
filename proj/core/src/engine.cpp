#include "growthlab/engine.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "growthlab/rng.hpp"

namespace growthlab {

namespace {

constexpr std::int64_t kNoEvent = -1;

std::int64_t next_multiple_after(std::int64_t period, std::int64_t tick) {
  return (tick / period + 1) * period;
}

/// Counts colors and builds the result record from a finished lattice.
SimResult make_result(Lattice&& lat, std::int64_t fixation_tick, bool capped) {
  SimResult res{std::move(lat), fixation_tick, capped, {}, 0};
  const ModelSpec& model = res.lattice.model();
  res.species_counts.assign(model.species.size(), 0);
  std::vector<int> id_to_index(32, -1);
  for (std::size_t s = 0; s < model.species.size(); ++s) {
    id_to_index[static_cast<std::size_t>(model.species[s].id)] =
        static_cast<int>(s);
  }
  for (std::size_t i = 0; i < res.lattice.site_count(); ++i) {
    const int c = res.lattice.color_at(i);
    if (c == 0) {
      ++res.empty_count;
    } else {
      ++res.species_counts[static_cast<std::size_t>(id_to_index[c])];
    }
  }
  return res;
}

}  // namespace

Schedule Schedule::for_lattice(const Lattice& lat) {
  Schedule s;
  s.period_ticks.reserve(lat.model().species.size());
  for (std::size_t i = 0; i < lat.model().species.size(); ++i) {
    s.period_ticks.push_back(lat.period_ticks(i));
  }
  return s;
}

std::vector<std::size_t> Schedule::updating_at(std::int64_t tick) const {
  std::vector<std::size_t> out;
  if (tick <= 0) return out;
  for (std::size_t s = 0; s < period_ticks.size(); ++s) {
    if (tick % period_ticks[s] == 0) out.push_back(s);
  }
  return out;
}

std::int64_t Schedule::next_event_after(std::int64_t tick) const {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t p : period_ticks) {
    best = std::min(best, next_multiple_after(p, tick));
  }
  return best;
}

std::int64_t default_horizon_ticks(const Lattice& lat) {
  return 4 * (static_cast<std::int64_t>(lat.width()) + lat.height()) *
         lat.tick_scale();
}

FrontierEngine::FrontierEngine(Lattice lattice)
    : lattice_(std::move(lattice)), schedule_(Schedule::for_lattice(lattice_)) {
  const std::size_t k = lattice_.model().species.size();
  frontier_.resize(k);
  dead_.assign(k, false);
  next_update_.resize(k);
  for (std::size_t s = 0; s < k; ++s) next_update_[s] = schedule_.period_ticks[s];

  std::vector<int> id_to_index(32, -1);
  for (std::size_t s = 0; s < k; ++s) {
    id_to_index[static_cast<std::size_t>(lattice_.model().species[s].id)] =
        static_cast<int>(s);
  }
  for (std::size_t i = 0; i < lattice_.site_count(); ++i) {
    const int c = lattice_.color_at(i);
    if (c != 0) {
      frontier_[static_cast<std::size_t>(id_to_index[c])].push_back(
          static_cast<std::uint32_t>(i));
    }
  }
  claim_tick_.assign(lattice_.site_count(), kNoEvent);
  claim_mask_.assign(lattice_.site_count(), 0);
}

bool FrontierEngine::all_dead() const {
  return std::all_of(dead_.begin(), dead_.end(), [](bool d) { return d; });
}

std::int64_t FrontierEngine::next_event_tick() const {
  std::int64_t best = kNoEvent;
  for (std::size_t s = 0; s < dead_.size(); ++s) {
    if (dead_[s]) continue;
    if (best == kNoEvent || next_update_[s] < best) best = next_update_[s];
  }
  return best;
}

std::vector<std::size_t> FrontierEngine::step(std::int64_t tick) {
  const ModelSpec& model = lattice_.model();
  const int w = model.width;
  const int h = model.height;
  const bool torus = model.topology == Topology::Torus;

  claimed_sites_.clear();
  std::vector<std::size_t> updating;
  for (std::size_t s = 0; s < dead_.size(); ++s) {
    if (!dead_[s] && tick % schedule_.period_ticks[s] == 0) updating.push_back(s);
  }

  // Claim pass: a species claims every empty site that sees one of its
  // frontier cells through an offset, computed on the pre-update state.
  for (std::size_t s : updating) {
    const std::uint32_t bit = 1u << s;
    const auto& offs = model.species[s].neighborhood.offsets();
    for (std::uint32_t f : frontier_[s]) {
      const int fx = static_cast<int>(f % static_cast<std::uint32_t>(w));
      const int fy = static_cast<int>(f / static_cast<std::uint32_t>(w));
      for (const Offset& o : offs) {
        int x = fx - o.dx;
        int y = fy - o.dy;
        if (torus) {
          if (x < 0) x += w; else if (x >= w) x -= w;
          if (y < 0) y += h; else if (y >= h) y -= h;
          if (x < 0 || x >= w) x = ((x % w) + w) % w;
          if (y < 0 || y >= h) y = ((y % h) + h) % h;
        } else if (x < 0 || x >= w || y < 0 || y >= h) {
          continue;
        }
        const std::size_t i = lattice_.index(x, y);
        if (lattice_.color_at(i) != 0) continue;
        if (claim_tick_[i] != tick) {
          claim_tick_[i] = tick;
          claim_mask_[i] = 0;
          claimed_sites_.push_back(static_cast<std::uint32_t>(i));
        }
        claim_mask_[i] |= bit;
      }
    }
  }

  // Resolution pass: unique claimant wins outright, ties go to the coin
  // (claimants ordered by species position in the model).
  std::vector<std::size_t> newly;
  newly.reserve(claimed_sites_.size());
  std::vector<std::vector<std::uint32_t>> next_frontier(dead_.size());
  for (std::uint32_t i : claimed_sites_) {
    std::uint32_t mask = claim_mask_[i];
    std::size_t winner;
    const int n = std::popcount(mask);
    if (n == 1) {
      winner = static_cast<std::size_t>(std::countr_zero(mask));
    } else {
      const int x = static_cast<int>(i % static_cast<std::uint32_t>(w));
      const int y = static_cast<int>(i / static_cast<std::uint32_t>(w));
      int pick = coin(model.seed, stream::kTieCoin, x, y, tick, n);
      std::uint32_t m = mask;
      while (pick-- > 0) m &= m - 1;  // drop lowest set bits
      winner = static_cast<std::size_t>(std::countr_zero(m));
    }
    lattice_.color_site(i, model.species[winner].id, tick);
    next_frontier[winner].push_back(i);
    newly.push_back(i);
  }

  for (std::size_t s : updating) {
    frontier_[s] = std::move(next_frontier[s]);
    if (frontier_[s].empty()) dead_[s] = true;
    next_update_[s] = tick + schedule_.period_ticks[s];
    if (next_update_[s] < tick) {
      throw std::overflow_error("tick arithmetic overflow");
    }
  }
  if (!newly.empty()) last_colored_tick_ = tick;
  return newly;
}

SimResult FrontierEngine::run(std::int64_t horizon_ticks) {
  if (horizon_ticks < 0) {
    throw std::invalid_argument("horizon must be >= 0");
  }
  while (!all_dead()) {
    const std::int64_t t = next_event_tick();
    if (t > horizon_ticks) {
      return make_result(std::move(lattice_), last_colored_tick_, true);
    }
    step(t);
  }
  return make_result(std::move(lattice_), last_colored_tick_, false);
}

SimResult run_to_fixation(Lattice lattice,
                          std::optional<std::int64_t> horizon_ticks) {
  const std::int64_t horizon =
      horizon_ticks.value_or(default_horizon_ticks(lattice));
  FrontierEngine engine(std::move(lattice));
  return engine.run(horizon);
}

SimResult run_reference(Lattice lattice,
                        std::optional<std::int64_t> horizon_ticks) {
  const std::int64_t horizon =
      horizon_ticks.value_or(default_horizon_ticks(lattice));
  const ModelSpec& model = lattice.model();
  const int w = model.width;
  const int h = model.height;
  const bool torus = model.topology == Topology::Torus;
  const std::size_t k = model.species.size();

  Schedule schedule = Schedule::for_lattice(lattice);
  std::vector<bool> dead(k, false);
  std::int64_t last_colored = 0;
  std::int64_t tick = 0;

  std::vector<std::uint32_t> mask(lattice.site_count());
  while (true) {
    bool any_alive = false;
    for (std::size_t s = 0; s < k; ++s) any_alive |= !dead[s];
    if (!any_alive) break;
    tick = schedule.next_event_after(tick);
    if (tick > horizon) {
      return make_result(std::move(lattice), last_colored, true);
    }
    const auto updating = schedule.updating_at(tick);

    // Full scan: every empty site checks every updating species' offsets
    // against the pre-update state. Dead species are scanned anyway; the
    // frontier engine's death shortcut must not change the outcome.
    std::fill(mask.begin(), mask.end(), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = lattice.index(x, y);
        if (lattice.color_at(i) != 0) continue;
        std::uint32_t m = 0;
        for (std::size_t s : updating) {
          const int id = model.species[s].id;
          for (const Offset& o : model.species[s].neighborhood.offsets()) {
            int nx = x + o.dx;
            int ny = y + o.dy;
            if (torus) {
              nx = ((nx % w) + w) % w;
              ny = ((ny % h) + h) % h;
            } else if (nx < 0 || nx >= w || ny < 0 || ny >= h) {
              continue;
            }
            if (lattice.color_at(lattice.index(nx, ny)) == id) {
              m |= 1u << s;
              break;
            }
          }
        }
        mask[i] = m;
      }
    }

    std::vector<std::int64_t> gained(k, 0);
    bool colored_any = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = lattice.index(x, y);
        const std::uint32_t m = mask[i];
        if (m == 0) continue;
        std::size_t winner;
        const int n = std::popcount(m);
        if (n == 1) {
          winner = static_cast<std::size_t>(std::countr_zero(m));
        } else {
          int pick = coin(model.seed, stream::kTieCoin, x, y, tick, n);
          std::uint32_t mm = m;
          while (pick-- > 0) mm &= mm - 1;
          winner = static_cast<std::size_t>(std::countr_zero(mm));
        }
        lattice.color_site(i, model.species[winner].id, tick);
        ++gained[winner];
        colored_any = true;
      }
    }
    for (std::size_t s : updating) {
      if (gained[s] == 0) dead[s] = true;
    }
    if (colored_any) last_colored = tick;
  }
  return make_result(std::move(lattice), last_colored, false);
}

std::int64_t window_dependence_radius(const ModelSpec& model,
                                      std::int64_t t_ticks) {
  if (t_ticks < 0) throw std::invalid_argument("T must be >= 0");
  if (t_ticks == 0) return 0;
  // sum_s max_norm(s) * den_s / num_s as an exact fraction num/den.
  __int128 num = 0;
  __int128 den = 1;
  for (const Species& s : model.species) {
    const __int128 term_num =
        static_cast<__int128>(s.neighborhood.max_norm()) * s.period.den;
    num = num * s.period.num + term_num * den;
    den = den * s.period.num;
  }
  std::int64_t tick_scale = 1;
  for (const Species& s : model.species) {
    tick_scale = std::lcm(tick_scale, s.period.den);
  }
  const __int128 n = static_cast<__int128>(t_ticks) * num;
  const __int128 d = den * tick_scale;
  const __int128 r = (n + d - 1) / d;  // ceil for nonnegative n
  if (r > std::numeric_limits<std::int64_t>::max()) {
    throw std::overflow_error("dependence radius overflows int64");
  }
  return static_cast<std::int64_t>(r);
}

}  // namespace growthlab
