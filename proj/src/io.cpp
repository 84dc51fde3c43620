#include "nuhlab/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nuhlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

void emit_plot_data(const std::vector<std::pair<double, double>>& curve,
                    const std::string& path) {
  if (curve.empty()) throw std::invalid_argument("emit_plot_data: empty curve");
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.size());
  for (const auto& [x, y] : curve) rows.push_back({x, y});
  write_csv(path, {"x", "y"}, rows);
}

void write_histogram_csv(const GridHistogram& h, const std::string& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(h.mass.size());
  for (int i = 0; i < h.n; ++i)
    for (int j = 0; j < h.n; ++j)
      rows.push_back({double(i), double(j), h.mass[size_t(i) * h.n + j]});
  write_csv(path, {"row", "col", "mass"}, rows);
}

void write_histogram_binary(const GridHistogram& h, const std::string& path) {
  auto out = open_out(path, true);
  const std::int64_t n = h.n;
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(h.mass.data()),
            std::streamsize(h.mass.size() * sizeof(double)));
}

void write_orbit_csv(const RandomOrbit& orbit, const std::string& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(orbit.points.size());
  for (size_t j = 0; j < orbit.points.size(); ++j)
    rows.push_back({double(j), orbit.points[j].x, orbit.points[j].y,
                    orbit.noises[j].x, orbit.noises[j].y});
  write_csv(path, {"step", "x", "y", "tx", "ty"}, rows);
}

void write_trace_csv(const CocycleTrace& trace, const std::string& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(trace.values.size());
  for (size_t j = 0; j < trace.values.size(); ++j)
    rows.push_back({double(trace.start_index + j), trace.values[j],
                    trace.directions[j].x, trace.directions[j].y});
  write_csv(path, {"step", "a_j", "vx", "vy"}, rows);
}

void write_indices_csv(const std::vector<int>& indices,
                       const std::string& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(indices.size());
  for (int n : indices) rows.push_back({double(n)});
  write_csv(path, {"n"}, rows);
}

void write_stability_csv(const std::vector<StabilityPoint>& curve, int orbits,
                         int steps, const std::string& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.size());
  for (const auto& p : curve)
    rows.push_back({p.epsilon, p.l1_to_reference, double(orbits), double(steps)});
  write_csv(path, {"epsilon", "l1_distance", "orbit_count", "steps"}, rows);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nuhlab
