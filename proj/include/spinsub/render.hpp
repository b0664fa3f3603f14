#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinsub/lattice.hpp"
#include "spinsub/substitution.hpp"

namespace spinsub {

using Rgb = std::array<std::uint8_t, 3>;

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // RGB, rows top to bottom

  Image() = default;
  Image(int w, int h, Rgb fill);
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  void fill_rect(int x0, int y0, int w, int h, Rgb c);
};

/// Binary P6, maxval 255.
std::string encode_ppm(const Image& img);
Image decode_ppm(const std::string& bytes);
void write_file(const std::string& path, const std::string& bytes);

/// Color per letter; injective on the alphabet.
struct Palette {
  std::vector<Rgb> colors;
  Rgb background{255, 255, 255};

  const Rgb& operator[](int i) const { return colors[static_cast<std::size_t>(i)]; }
  /// Hue from the spin, shade from the digit.
  static Palette for_spin_system(const SpinSystem& sys);
  /// Evenly spaced hues.
  static Palette distinct(int n);
  static Rgb parse(const std::string& hex);
};

/// Cell geometry of a supertile: pixel rectangle per cell index.
struct CellLayout {
  int width = 0;
  int height = 0;
  std::vector<std::array<int, 2>> origin;  // top-left pixel per cell
  int cell_px = 1;
};

CellLayout layout_cells(const DigitSystem& ds, int level, int cell_px);

/// One filled square per lattice cell; m = 1 renders a horizontal strip.
Image render_supertile(const DigitSystem& ds, const Supertile& tile, const Palette& palette, int cell_px);
/// Colors every cell by chi(spin): class index = power of zeta_n in chi(G) = C_n.
Image render_factor_image(const SpinSystem& sys, const Supertile& tile, const Character& chi, const Palette& classes,
                          int cell_px);

Image render_digit_tile(const TileRaster& raster, Rgb ink = {0, 0, 0}, Rgb background = {255, 255, 255});
std::string digit_tile_svg(const TileRaster& raster);

/// 8-bit grayscale P5 of a row-major grid, log-scaled to its max.
std::string encode_pgm_heatmap(const std::vector<double>& values, int width, int height);

}  // namespace spinsub
