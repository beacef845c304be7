#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growthlab/model.hpp"

namespace growthlab {

/// Palette and pixel scale. Empty renders white; species use their model
/// rgb. Lattice row y = 0 is the top image row (y increases downward).
struct RenderSpec {
  int scale = 1;
  Rgb empty{255, 255, 255};
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row-major from top-left

  void put(int x, int y, Rgb c) {
    const std::size_t i =
        3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + x);
    rgb[i] = c.r;
    rgb[i + 1] = c.g;
    rgb[i + 2] = c.b;
  }
};

Image render_lattice(const Lattice& lattice, const RenderSpec& spec);

/// Outlines a rectangle given in lattice coordinates (clipped to the image).
void outline_rect(Image& img, const RenderSpec& spec, std::int64_t x0,
                  std::int64_t y0, std::int64_t w, std::int64_t h, Rgb color);

/// Binary PPM (P6), byte-exact for fixed inputs.
void write_ppm(const std::string& path, const Image& img);

}  // namespace growthlab
