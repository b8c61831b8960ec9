#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fracdyn/discrete_map.hpp"
#include "fracdyn/pece.hpp"

namespace fracdyn {

/// A header plus rows of numbers, the common shape of every emitted CSV file.
struct Dataset {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

enum class SeriesFormat {
  /// t,x,y for trajectories or n,x,y for orbits.
  time_series,
  /// x,y phase pairs.
  phase,
};

[[nodiscard]] Dataset export_series(const Trajectory& traj, SeriesFormat format = SeriesFormat::time_series);
[[nodiscard]] Dataset export_series(const DiscreteOrbit& orbit, SeriesFormat format = SeriesFormat::time_series);

/// v with 15 significant digits in %g style, independent of the global locale.
[[nodiscard]] std::string format_number(double v);

void write_csv(std::ostream& os, const Dataset& data);

[[nodiscard]] std::string to_csv(const Dataset& data);

/// Parses the output of write_csv. Throws std::invalid_argument on a malformed number or a
/// row whose width differs from the header.
[[nodiscard]] Dataset parse_csv(std::string_view text);

}  // namespace fracdyn
