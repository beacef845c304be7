#include "growthlab/image.hpp"

#include <fstream>
#include <stdexcept>

namespace growthlab {

Image render_lattice(const Lattice& lattice, const RenderSpec& spec) {
  if (spec.scale < 1) throw std::invalid_argument("render scale must be >= 1");
  Image img;
  img.width = lattice.width() * spec.scale;
  img.height = lattice.height() * spec.scale;
  img.rgb.assign(3 * static_cast<std::size_t>(img.width) * img.height, 0);

  std::vector<Rgb> palette(32, spec.empty);
  for (const Species& s : lattice.model().species) {
    palette[static_cast<std::size_t>(s.id)] = s.rgb;
  }
  for (int y = 0; y < lattice.height(); ++y) {
    for (int x = 0; x < lattice.width(); ++x) {
      const Rgb c = palette[static_cast<std::size_t>(lattice.color_at(x, y))];
      for (int dy = 0; dy < spec.scale; ++dy) {
        for (int dx = 0; dx < spec.scale; ++dx) {
          img.put(x * spec.scale + dx, y * spec.scale + dy, c);
        }
      }
    }
  }
  return img;
}

void outline_rect(Image& img, const RenderSpec& spec, std::int64_t x0,
                  std::int64_t y0, std::int64_t w, std::int64_t h, Rgb color) {
  const auto put = [&](std::int64_t x, std::int64_t y) {
    const std::int64_t px = x * spec.scale;
    const std::int64_t py = y * spec.scale;
    if (px < 0 || py < 0 || px >= img.width || py >= img.height) return;
    img.put(static_cast<int>(px), static_cast<int>(py), color);
  };
  for (std::int64_t x = x0; x < x0 + w; ++x) {
    put(x, y0);
    put(x, y0 + h - 1);
  }
  for (std::int64_t y = y0; y < y0 + h; ++y) {
    put(x0, y);
    put(x0 + w - 1, y);
  }
}

void write_ppm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open image output: " + path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
  if (!out) throw std::runtime_error("failed writing image: " + path);
}

}  // namespace growthlab
