#include "growthlab/sample.hpp"

#include <stdexcept>

#include "growthlab/rng.hpp"

namespace growthlab {

Lattice sample_initial(const ModelSpec& model) {
  Lattice lat(model);
  const std::size_t k = model.species.size();
  for (int y = 0; y < model.height; ++y) {
    for (int x = 0; x < model.width; ++x) {
      const double u = uniform01(model.seed, stream::kInitialDraw, x, y, 0);
      double acc = 0.0;
      for (std::size_t s = 0; s < k; ++s) {
        acc += model.densities[s];
        if (u < acc) {
          lat.color_site(lat.index(x, y), model.species[s].id, 0);
          break;
        }
      }
    }
  }
  return lat;
}

TwoStageSample two_stage_sample(const ModelSpec& model, double p, double q) {
  if (model.species.size() < 2) {
    throw std::invalid_argument("two_stage_sample needs a blue and a red species");
  }
  if (q >= 1.0) throw std::invalid_argument("two_stage_sample: q must be < 1");
  if (p + q > 1.0 + 1e-12) {
    throw std::invalid_argument("two_stage_sample: p + q must be <= 1");
  }
  const double p_prime = p / (1.0 - q);
  const int blue_id = model.species[0].id;
  const int red_id = model.species[1].id;

  TwoStageSample out{{}, {}, Lattice(model)};
  Lattice& lat = out.lattice;
  for (int y = 0; y < model.height; ++y) {
    for (int x = 0; x < model.width; ++x) {
      const std::size_t i = lat.index(x, y);
      const bool red = uniform01(model.seed, stream::kRedMark, x, y, 0) < q;
      const bool pblue =
          uniform01(model.seed, stream::kPotentiallyBlue, x, y, 0) < p_prime;
      if (red) out.red_sites.push_back(i);
      if (pblue) out.potentially_blue_sites.push_back(i);
      if (red) {
        lat.color_site(i, red_id, 0);
      } else if (pblue) {
        lat.color_site(i, blue_id, 0);
      }
    }
  }
  return out;
}

}  // namespace growthlab
