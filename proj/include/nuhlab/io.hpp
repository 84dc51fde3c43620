#pragma once

#include <string>
#include <vector>

#include "nuhlab/cones.hpp"
#include "nuhlab/measures.hpp"
#include "nuhlab/noise.hpp"

namespace nuhlab {

/// 17 significant digits: enough for bit-faithful decimal round trips.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Two-column CSV with header, for external plotting.
void emit_plot_data(const std::vector<std::pair<double, double>>& curve,
                    const std::string& path);

void write_histogram_csv(const GridHistogram& h, const std::string& path);
/// Raw binary grid: int64 n, then n^2 little-endian doubles.
void write_histogram_binary(const GridHistogram& h, const std::string& path);

void write_orbit_csv(const RandomOrbit& orbit, const std::string& path);
void write_trace_csv(const CocycleTrace& trace, const std::string& path);
void write_indices_csv(const std::vector<int>& indices,
                       const std::string& path);
void write_stability_csv(const std::vector<StabilityPoint>& curve, int orbits,
                         int steps, const std::string& path);

std::string read_file(const std::string& path);

}  // namespace nuhlab
