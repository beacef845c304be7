#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "growthlab/model.hpp"

namespace growthlab {

/// Event timetable in ticks. Species s updates exactly at ticks
/// {k * period_ticks(s) : k >= 1}; a tick where two or more species update
/// is a tie-tick.
struct Schedule {
  std::vector<std::int64_t> period_ticks;  // per species index

  static Schedule for_lattice(const Lattice& lat);

  /// Species indices updating at `tick` (empty if not an event tick).
  std::vector<std::size_t> updating_at(std::int64_t tick) const;

  /// Smallest event tick strictly greater than `tick`.
  std::int64_t next_event_after(std::int64_t tick) const;
};

struct SimResult {
  Lattice lattice;
  std::int64_t fixation_tick = 0;  // last tick at which any site was colored
  bool horizon_capped = false;
  std::vector<std::int64_t> species_counts;  // per species index
  std::int64_t empty_count = 0;

  double fixation_time() const {
    return static_cast<double>(fixation_tick) /
           static_cast<double>(lattice.tick_scale());
  }
  bool operator==(const SimResult& o) const {
    return lattice == o.lattice && fixation_tick == o.fixation_tick &&
           horizon_capped == o.horizon_capped &&
           species_counts == o.species_counts && empty_count == o.empty_count;
  }
};

/// Default horizon: any colorable torus site colors within diameter-many
/// updates, with a factor-4 margin.
std::int64_t default_horizon_ticks(const Lattice& lat);

/// Frontier-optimized synchronous engine. Growth sources for a species are
/// only the cells it colored at its most recent update, because every empty
/// neighbor of older cells was already claimed (by someone) at that update.
class FrontierEngine {
 public:
  explicit FrontierEngine(Lattice lattice);

  const Lattice& lattice() const { return lattice_; }
  const Schedule& schedule() const { return schedule_; }

  /// Applies all species updates scheduled at `tick` on the pre-update
  /// state. Returns the sites colored at this tick. Candidates claimed by
  /// one species get that color; ties are settled by the site-keyed coin.
  std::vector<std::size_t> step(std::int64_t tick);

  bool all_dead() const;
  bool dead(std::size_t species_index) const { return dead_[species_index]; }
  std::int64_t next_event_tick() const;  // over live species only; -1 if none

  /// Runs until fixation (every species' latest update colored nothing) or
  /// until the horizon tick, whichever comes first.
  SimResult run(std::int64_t horizon_ticks);

 private:
  Lattice lattice_;
  Schedule schedule_;
  std::vector<std::vector<std::uint32_t>> frontier_;  // per species: site indices
  std::vector<bool> dead_;
  std::vector<std::int64_t> next_update_;  // per species, in ticks
  std::int64_t last_colored_tick_ = 0;

  // step scratch (claim stamps avoid clearing between ticks)
  std::vector<std::int64_t> claim_tick_;
  std::vector<std::uint32_t> claim_mask_;
  std::vector<std::uint32_t> claimed_sites_;

  friend SimResult finalize_result(Lattice&& lat, std::int64_t fixation_tick,
                                   bool capped);
};

/// Runs the frontier engine to fixation or the horizon.
SimResult run_to_fixation(Lattice lattice,
                          std::optional<std::int64_t> horizon_ticks = {});

/// Reference oracle: same contract as run_to_fixation but scans every site
/// at every event tick. Produces a bit-identical SimResult.
SimResult run_reference(Lattice lattice,
                        std::optional<std::int64_t> horizon_ticks = {});

/// Speed-of-light dependence radius in L-infinity: the states of a window W
/// at tick T coincide between any two initial states that agree on W dilated
/// by this radius. Equals ceil(T_time * sum_s max_norm(N(s)) / period(s)).
std::int64_t window_dependence_radius(const ModelSpec& model,
                                      std::int64_t t_ticks);

}  // namespace growthlab
