#include "spinsub/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spinsub {

Image::Image(int w, int h, Rgb fill) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
  for (std::size_t i = 0; i < pixels.size(); i += 3) std::copy(fill.begin(), fill.end(), pixels.begin() + i);
}

Rgb Image::at(int x, int y) const {
  const auto o = (static_cast<std::size_t>(y) * width + x) * 3;
  return {pixels[o], pixels[o + 1], pixels[o + 2]};
}

void Image::set(int x, int y, Rgb c) {
  const auto o = (static_cast<std::size_t>(y) * width + x) * 3;
  pixels[o] = c[0];
  pixels[o + 1] = c[1];
  pixels[o + 2] = c[2];
}

void Image::fill_rect(int x0, int y0, int w, int h, Rgb c) {
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) set(x, y, c);
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

Image decode_ppm(const std::string& bytes) {
  std::istringstream is(bytes);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  is >> magic >> w >> h >> maxval;
  if (magic != "P6" || maxval != 255) throw Error(ErrorCode::InvalidArgument, "not a binary 8-bit PPM");
  is.get();
  Image img(w, h, {0, 0, 0});
  is.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!is) throw Error(ErrorCode::InvalidArgument, "truncated PPM");
  return img;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

namespace {

Rgb hsv(double h, double s, double v) {
  h = std::fmod(h, 1.0) * 6.0;
  const int i = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double r = 0, g = 0, b = 0;
  switch (i) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
  auto q8 = [](double x) { return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
  return {q8(r), q8(g), q8(b)};
}

}  // namespace

Palette Palette::for_spin_system(const SpinSystem& sys) {
  Palette p;
  const int G = sys.group().order();
  const int L = sys.digit_count();
  for (int i = 0; i < sys.alphabet_size(); ++i) {
    const auto a = sys.letter_at(i);
    const double value = L == 1 ? 0.85 : 0.45 + 0.45 * a.digit / (L - 1);
    p.colors.push_back(hsv(static_cast<double>(a.spin) / G, 0.75, value));
  }
  return p;
}

Palette Palette::distinct(int n) {
  Palette p;
  for (int i = 0; i < n; ++i) p.colors.push_back(hsv(static_cast<double>(i) / std::max(n, 1), 0.8, 0.8));
  return p;
}

Rgb Palette::parse(const std::string& hex) {
  std::string h = hex;
  if (!h.empty() && h[0] == '#') h.erase(0, 1);
  if (h.size() != 6 || h.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    throw Error(ErrorCode::Config, "palette color '" + hex + "' is not #rrggbb");
  }
  const auto v = std::stoul(h, nullptr, 16);
  return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
}

CellLayout layout_cells(const DigitSystem& ds, int level, int cell_px) {
  const int m = ds.dim();
  if (m > 2) throw Error(ErrorCode::InvalidArgument, "rendering supports m = 1 and m = 2 only");
  if (cell_px < 1) throw Error(ErrorCode::InvalidArgument, "cell size must be at least one pixel");
  const auto dom = ds.digit_domain(level);
  const auto [lo, hi] = dom.bounds();
  CellLayout l;
  l.cell_px = cell_px;
  const long w = (hi[0] - lo[0] + 1) * cell_px;
  const long h = (m == 2 ? hi[1] - lo[1] + 1 : 1) * cell_px;
  if (w * h > static_cast<long>(ds.max_cells()) * 4) {
    throw Error(ErrorCode::DomainTooLarge, "image of " + std::to_string(w) + "x" + std::to_string(h) +
                                               " pixels is too large; lower the level or the cell size");
  }
  l.width = static_cast<int>(w);
  l.height = static_cast<int>(h);
  l.origin.resize(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const auto p = dom.point(i);
    const int x = static_cast<int>(p[0] - lo[0]) * cell_px;
    const int y = m == 2 ? static_cast<int>(hi[1] - p[1]) * cell_px : 0;
    l.origin[i] = {x, y};
  }
  return l;
}

Image render_supertile(const DigitSystem& ds, const Supertile& tile, const Palette& palette, int cell_px) {
  const auto l = layout_cells(ds, tile.level, cell_px);
  Image img(l.width, l.height, palette.background);
  for (std::size_t i = 0; i < tile.cells.size(); ++i)
    img.fill_rect(l.origin[i][0], l.origin[i][1], cell_px, cell_px, palette[tile.cells[i]]);
  return img;
}

Image render_factor_image(const SpinSystem& sys, const Supertile& tile, const Character& chi, const Palette& classes,
                          int cell_px) {
  const auto& g = sys.group();
  const int n = kernel(chi, g).quotient_order;
  const int step = g.exponent() / n;
  Palette p;
  p.background = classes.background;
  for (int i = 0; i < sys.alphabet_size(); ++i)
    p.colors.push_back(classes[g.power(chi, g.element_at(sys.letter_at(i).spin)) / step]);
  return render_supertile(sys.digits(), tile, p, cell_px);
}

Image render_digit_tile(const TileRaster& raster, Rgb ink, Rgb background) {
  if (raster.shape.empty()) return {};
  const int w = raster.shape[0];
  const int h = raster.shape[1];
  Image img(w, h, background);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (raster.counts[static_cast<std::size_t>(y) * w + x] != 0) img.set(x, h - 1 - y, ink);
  return img;
}

std::string digit_tile_svg(const TileRaster& raster) {
  std::ostringstream os;
  const int w = raster.shape.empty() ? 0 : raster.shape[0];
  const int h = raster.shape.empty() ? 0 : raster.shape[1];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\" shape-rendering=\"crispEdges\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
  for (int y = 0; y < h; ++y) {
    // Merge horizontal runs to keep the file small.
    int x = 0;
    while (x < w) {
      if (raster.counts[static_cast<std::size_t>(y) * w + x] == 0) {
        ++x;
        continue;
      }
      int end = x;
      while (end < w && raster.counts[static_cast<std::size_t>(y) * w + end] != 0) ++end;
      os << "<rect x=\"" << x << "\" y=\"" << (h - 1 - y) << "\" width=\"" << (end - x) << "\" height=\"1\"/>\n";
      x = end;
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string encode_pgm_heatmap(const std::vector<double>& values, int width, int height) {
  double mx = 0;
  for (double v : values) mx = std::max(mx, v);
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  const double denom = std::log1p(mx);
  for (int y = height - 1; y >= 0; --y)
    for (int x = 0; x < width; ++x) {
      const double v = values[static_cast<std::size_t>(y) * width + x];
      const double t = denom > 0 ? std::log1p(std::max(v, 0.0)) / denom : 0.0;
      out.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(t * 255.0))));
    }
  return out;
}

}  // namespace spinsub
