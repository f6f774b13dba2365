#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bohmsim/trajectory_engine.hpp"

namespace bohmsim {

/// Column pair used by the trajectory table: ("x","y") for the planar
/// scenarios, ("y1","y2") for the pair scenario.
struct CsvSchema {
  std::string col1 = "x";
  std::string col2 = "y";
  bool drop_second = false;  // slab runs carry y = 0
};

/// traj_id,step,t,<col1>,<col2> with 17 significant digits.
std::string trajectories_to_csv(const std::vector<Trajectory> &trajectories,
                                const CsvSchema &schema);

struct ParsedCsvRow {
  long traj_id = 0;
  long step = 0;
  double t = 0;
  double c1 = 0;
  double c2 = 0;
};
std::vector<ParsedCsvRow> parse_trajectories_csv(const std::string &text);

std::string trajectories_to_json(const std::vector<Trajectory> &trajectories,
                                 const CsvSchema &schema);

/// coord,density table.
std::string density_to_csv(const std::vector<std::pair<double, double>> &samples);

/// Static polyline plot over an optional shaded band and an optional
/// density strip along the right edge.
struct SvgPlot {
  std::string title, xlabel, ylabel;
  std::vector<std::vector<std::pair<double, double>>> lines;
  std::vector<std::pair<double, double>> strip;  // (y, density) at the right edge
  bool has_band = false;
  double band_lo = 0.0, band_hi = 0.0;  // vertical band in x
  int width = 900, height = 620;
};
std::string render_svg(const SvgPlot &plot);

std::uint64_t fnv1a64(const std::string &bytes);
std::string fnv1a64_hex(const std::string &bytes);

void write_file(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

}  // namespace bohmsim
