#include "bohmsim/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bohmsim {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Extent {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  void add(double x, double y) {
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  void pad() {
    const double dx = (xhi - xlo) * 0.04 + 1e-30;
    const double dy = (yhi - ylo) * 0.04 + 1e-30;
    xlo -= dx;
    xhi += dx;
    ylo -= dy;
    yhi += dy;
  }
};

}  // namespace

std::string trajectories_to_csv(const std::vector<Trajectory> &trajectories,
                                const CsvSchema &schema) {
  std::string out = "traj_id,step,t," + schema.col1 + "," + schema.col2 + "\n";
  for (std::size_t id = 0; id < trajectories.size(); ++id) {
    const auto &points = trajectories[id].points;
    for (std::size_t s = 0; s < points.size(); ++s) {
      out += std::to_string(id);
      out += ',';
      out += std::to_string(s);
      out += ',';
      out += fmt17(points[s].t);
      out += ',';
      out += fmt17(points[s].q[0]);
      out += ',';
      out += fmt17(schema.drop_second ? 0.0 : points[s].q[1]);
      out += '\n';
    }
  }
  return out;
}

std::vector<ParsedCsvRow> parse_trajectories_csv(const std::string &text) {
  std::vector<ParsedCsvRow> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty trajectory table");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ParsedCsvRow row;
    char c1[40], c2[40], ct[40];
    if (std::sscanf(line.c_str(), "%ld,%ld,%39[^,],%39[^,],%39s", &row.traj_id, &row.step,
                    ct, c1, c2) != 5)
      throw std::invalid_argument("bad trajectory row: " + line);
    row.t = std::strtod(ct, nullptr);
    row.c1 = std::strtod(c1, nullptr);
    row.c2 = std::strtod(c2, nullptr);
    rows.push_back(row);
  }
  return rows;
}

std::string trajectories_to_json(const std::vector<Trajectory> &trajectories,
                                 const CsvSchema &schema) {
  nlohmann::json doc;
  doc["columns"] = {"t", schema.col1, schema.col2};
  auto &list = doc["trajectories"] = nlohmann::json::array();
  for (std::size_t id = 0; id < trajectories.size(); ++id) {
    nlohmann::json tr;
    tr["id"] = id;
    switch (trajectories[id].status) {
      case TerminalStatus::reached_line: tr["status"] = "reached_line"; break;
      case TerminalStatus::max_steps: tr["status"] = "max_steps"; break;
      case TerminalStatus::left_domain: tr["status"] = "left_domain"; break;
      case TerminalStatus::stalled_at_node: tr["status"] = "stalled_at_node"; break;
    }
    auto &pts = tr["points"] = nlohmann::json::array();
    for (const auto &p : trajectories[id].points)
      pts.push_back({p.t, p.q[0], schema.drop_second ? 0.0 : p.q[1]});
    list.push_back(std::move(tr));
  }
  return doc.dump(1) + "\n";
}

std::string density_to_csv(const std::vector<std::pair<double, double>> &samples) {
  std::string out = "coord,density\n";
  for (const auto &[c, d] : samples) {
    out += fmt17(c);
    out += ',';
    out += fmt17(d);
    out += '\n';
  }
  return out;
}

std::string render_svg(const SvgPlot &plot) {
  const int W = plot.width, H = plot.height;
  const int ml = 70, mr = plot.strip.empty() ? 20 : 70, mt = 40, mb = 50;

  Extent ext;
  for (const auto &line : plot.lines)
    for (const auto &[x, y] : line) ext.add(x, y);
  if (plot.lines.empty()) ext.add(0, 0), ext.add(1, 1);
  ext.pad();

  auto px = [&](double x) {
    return ml + (x - ext.xlo) / (ext.xhi - ext.xlo) * (W - ml - mr);
  };
  auto py = [&](double y) {
    return H - mb - (y - ext.ylo) / (ext.yhi - ext.ylo) * (H - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

  if (plot.has_band) {
    svg << "<rect x=\"" << px(plot.band_lo) << "\" y=\"" << mt << "\" width=\""
        << px(plot.band_hi) - px(plot.band_lo) << "\" height=\"" << H - mt - mb
        << "\" fill=\"#cfe2f3\"/>\n";
  }

  if (!plot.strip.empty()) {
    double peak = 0.0;
    for (const auto &[y, d] : plot.strip) peak = std::max(peak, d);
    if (peak > 0.0) {
      for (std::size_t i = 0; i + 1 < plot.strip.size(); ++i) {
        const auto &[y0, d0] = plot.strip[i];
        const auto &[y1, d1] = plot.strip[i + 1];
        if (y1 < ext.ylo || y0 > ext.yhi) continue;
        const int shade = 255 - static_cast<int>(210.0 * 0.5 * (d0 + d1) / peak);
        svg << "<rect x=\"" << W - mr + 8 << "\" y=\"" << py(y1) << "\" width=\"28\" height=\""
            << std::max(1.0, py(y0) - py(y1)) << "\" fill=\"rgb(" << shade << "," << shade
            << "," << shade << ")\"/>\n";
      }
    }
  }

  svg << "<g fill=\"none\" stroke=\"#20425f\" stroke-width=\"0.8\" stroke-opacity=\"0.85\">\n";
  for (const auto &line : plot.lines) {
    if (line.size() < 2) continue;
    svg << "<polyline points=\"";
    for (const auto &[x, y] : line) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
  }
  svg << "</g>\n";

  // frame and tick labels
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
      << "\" height=\"" << H - mt - mb
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = ext.xlo + (ext.xhi - ext.xlo) * i / 4;
    const double yv = ext.ylo + (ext.yhi - ext.ylo) * i / 4;
    svg << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 16
        << "\" text-anchor=\"middle\">" << fmt17(std::round(xv * 1e6) / 1e6).substr(0, 9)
        << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\">" << fmt17(std::round(yv * 1e6) / 1e6).substr(0, 9)
        << "</text>\n";
  }
  svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\">" << plot.xlabel << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (mt + H - mb) / 2
      << ")\">" << plot.ylabel << "</text>\n";
  svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << plot.title << "</text>\n";
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::uint64_t fnv1a64(const std::string &bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string &bytes) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bohmsim
