#include "fracdyn/cli/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

namespace fracdyn::cli {

namespace {

using Rgb = std::array<unsigned char, 3>;

constexpr Rgb palette[] = {{31, 119, 180}, {214, 39, 40}, {44, 160, 44}, {148, 103, 189}};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-300) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.03 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

}  // namespace

bool write_ppm_scatter(const std::string& path, const Dataset& data, const PlotOptions& options) {
  const std::size_t w = std::max<std::size_t>(options.width, 16);
  const std::size_t h = std::max<std::size_t>(options.height, 16);
  std::vector<Rgb> pixels(w * h, Rgb{255, 255, 255});

  Range xr;
  Range yr;
  for (const auto& row : data.rows) {
    if (row.empty()) continue;
    xr.add(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) yr.add(row[c]);
  }
  xr.pad();
  yr.pad();

  for (std::size_t i = 0; i < w; ++i) pixels[i] = pixels[(h - 1) * w + i] = Rgb{0, 0, 0};
  for (std::size_t j = 0; j < h; ++j) pixels[j * w] = pixels[j * w + w - 1] = Rgb{0, 0, 0};

  for (const auto& row : data.rows) {
    if (row.size() < 2 || !std::isfinite(row[0])) continue;
    const double fx = (row[0] - xr.lo) / (xr.hi - xr.lo);
    const auto px = static_cast<std::size_t>(std::clamp(fx * static_cast<double>(w - 1), 0.0, double(w - 1)));
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) continue;
      const double fy = (row[c] - yr.lo) / (yr.hi - yr.lo);
      const auto py = static_cast<std::size_t>(std::clamp((1.0 - fy) * static_cast<double>(h - 1), 0.0, double(h - 1)));
      pixels[py * w + px] = palette[(c - 1) % std::size(palette)];
    }
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) return false;
  os << "P6\n" << w << ' ' << h << "\n255\n";
  os.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size() * 3));
  return static_cast<bool>(os);
}

}  // namespace fracdyn::cli
