#pragma once

#include <cstdint>
#include <vector>

#include "growthlab/model.hpp"

namespace growthlab {

/// Per-site independent categorical draw keyed by (model.seed, site).
/// Colored sites carry colored_at = 0.
Lattice sample_initial(const ModelSpec& model);

/// Output of the two-stage construction. Site indices are row-major.
struct TwoStageSample {
  std::vector<std::size_t> red_sites;              // marked red, prob q
  std::vector<std::size_t> potentially_blue_sites; // independent, prob p/(1-q)
  Lattice lattice;                                  // realized configuration
};

/// Two-stage initial construction for a two-species model (species[0] blue,
/// species[1] red): red marks with probability q; independent potentially-blue
/// marks with probability p/(1-q); realized lattice colors red sites red,
/// potentially-blue non-red sites blue, everything else empty. The marginal
/// law of the realized lattice equals sample_initial with densities (p, q).
TwoStageSample two_stage_sample(const ModelSpec& model, double p, double q);

}  // namespace growthlab
