#pragma once

#include <cstddef>
#include <string>

#include "fracdyn/dataset.hpp"

namespace fracdyn::cli {

struct PlotOptions {
  std::size_t width = 800;
  std::size_t height = 600;
};

/// Binary PPM (P6) scatter of column 0 against every later column, one colour per column,
/// on a white background with a one-pixel frame. Returns false if the file cannot be written.
bool write_ppm_scatter(const std::string& path, const Dataset& data, const PlotOptions& options = {});

}  // namespace fracdyn::cli
