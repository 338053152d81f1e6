#pragma once

#include <array>
#include <string>
#include <vector>

#include "datagame/analysis.hpp"

namespace datagame {

// Shortest decimal representation that parses back to the same double, so
// rewritten outputs are byte-stable and comparisons downstream are exact.
std::string format_double(double v);

// Serializers build complete file contents; write_text_file reports failures
// with the path in the message.
void write_text_file(const std::string& path, const std::string& content);

std::string bif1d_csv(const std::string& axis_name, const std::vector<Bif1dPoint>& points);
std::string raster_csv(const Raster& raster);

// Plain (P2) portable graymap. Period rasters get one gray level per catalog
// class (divergent 0, unresolved 16); Lle rasters scale finite values onto
// 1..255 with non-finite cells at 0. Pixel row iy = 0 is the top row.
std::string raster_pgm(const Raster& raster);

// Key-value sidecar describing the catalog: class id -> kind, period,
// representative points, in stable key order.
std::string raster_catalog(const Raster& raster);

std::string fixed_points_csv(const std::array<EquilibriumRecord, 8>& records);
std::string voxels_csv(const std::vector<StabilityVoxel>& voxels);
std::string orbit_csv(const OrbitResult<Vec3>& orbit, long first_index);

}  // namespace datagame
