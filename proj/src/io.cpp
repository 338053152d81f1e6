#include "datagame/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace datagame {

std::string format_double(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string bif1d_csv(const std::string& axis_name, const std::vector<Bif1dPoint>& points) {
  std::ostringstream os;
  os << axis_name << ",coordinate,value,class,lle\n";
  static constexpr const char* kCoords[3] = {"p1", "p2", "s"};
  for (const Bif1dPoint& pt : points) {
    const std::string value = format_double(pt.value);
    const std::string label = class_label(pt.attractor.kind, pt.attractor.period);
    const std::string lle = pt.lle ? format_double(*pt.lle) : std::string();
    for (const Vec3& sample : pt.samples) {
      for (int c = 0; c < 3; ++c) {
        os << value << ',' << kCoords[c] << ',' << format_double(sample[c]) << ',' << label << ',' << lle << '\n';
      }
    }
  }
  return os.str();
}

namespace {

void raster_metadata(std::ostringstream& os, const Raster& raster) {
  os << "# mode " << (raster.mode == ScanMode::Period ? "period" : "lle") << '\n';
  os << "# x_label " << raster.x_label << '\n';
  os << "# x_lo " << format_double(raster.x.lo) << '\n';
  os << "# x_hi " << format_double(raster.x.hi) << '\n';
  os << "# nx " << raster.x.n << '\n';
  os << "# y_label " << raster.y_label << '\n';
  os << "# y_lo " << format_double(raster.y.lo) << '\n';
  os << "# y_hi " << format_double(raster.y.hi) << '\n';
  os << "# ny " << raster.y.n << '\n';
}

}  // namespace

std::string raster_csv(const Raster& raster) {
  std::ostringstream os;
  raster_metadata(os, raster);
  const bool period = raster.mode == ScanMode::Period;
  os << "ix,iy,x,y," << (period ? "class" : "lle") << '\n';
  for (int iy = 0; iy < raster.y.n; ++iy) {
    for (int ix = 0; ix < raster.x.n; ++ix) {
      const size_t cell = static_cast<size_t>(iy) * raster.x.n + ix;
      os << ix << ',' << iy << ',' << format_double(raster.x.center(ix)) << ',' << format_double(raster.y.center(iy))
         << ',';
      if (period) {
        os << raster.classes[cell];
      } else {
        os << format_double(raster.values[cell]);
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string raster_pgm(const Raster& raster) {
  const int nx = raster.x.n;
  const int ny = raster.y.n;
  std::vector<int> gray(static_cast<size_t>(nx) * ny, 0);

  if (raster.mode == ScanMode::Period) {
    const int n_classes = static_cast<int>(raster.catalog.size());
    for (size_t cell = 0; cell < raster.classes.size(); ++cell) {
      const int id = raster.classes[cell];
      int level = 0;
      if (id == kUnresolvedClass) {
        level = 16;
      } else if (id >= 0) {
        level = n_classes > 1 ? 64 + (id * 191) / (n_classes - 1) : 255;
      }
      gray[cell] = level;
    }
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : raster.values) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    for (size_t cell = 0; cell < raster.values.size(); ++cell) {
      const double v = raster.values[cell];
      if (!std::isfinite(v)) continue;
      gray[cell] = hi > lo ? 1 + static_cast<int>(254.0 * (v - lo) / (hi - lo)) : 128;
    }
  }

  std::ostringstream os;
  os << "P2\n" << nx << ' ' << ny << "\n255\n";
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      os << gray[static_cast<size_t>(iy) * nx + ix];
      os << (ix + 1 == nx ? '\n' : ' ');
    }
  }
  return os.str();
}

std::string raster_catalog(const Raster& raster) {
  std::ostringstream os;
  os << "mode " << (raster.mode == ScanMode::Period ? "period" : "lle") << '\n';
  os << "classes " << raster.catalog.size() << '\n';
  for (size_t id = 0; id < raster.catalog.size(); ++id) {
    const CatalogEntry& entry = raster.catalog[id];
    os << "class." << id << ".kind " << class_label(entry.kind, entry.period) << '\n';
    os << "class." << id << ".period " << entry.period << '\n';
    if (entry.lle) os << "class." << id << ".lle " << format_double(*entry.lle) << '\n';
    for (size_t k = 0; k < entry.points.size(); ++k) {
      const Vec3& p = entry.points[k];
      os << "class." << id << ".point." << k << ' ' << format_double(p[0]) << ' ' << format_double(p[1]) << ' '
         << format_double(p[2]) << '\n';
    }
  }
  os << "reserved." << kDivergentClass << " divergent\n";
  os << "reserved." << kUnresolvedClass << " unresolved\n";
  return os.str();
}

std::string fixed_points_csv(const std::array<EquilibriumRecord, 8>& records) {
  std::ostringstream os;
  os << "label,p1,p2,s,admissible,stability\n";
  for (const EquilibriumRecord& e : records) {
    os << e.label << ',' << format_double(e.state.p1) << ',' << format_double(e.state.p2) << ','
       << format_double(e.state.s) << ',' << (e.admissible ? 1 : 0) << ',' << to_string(e.stability) << '\n';
  }
  return os.str();
}

std::string voxels_csv(const std::vector<StabilityVoxel>& voxels) {
  std::ostringstream os;
  os << "alpha1,alpha2,alpha3,stable\n";
  for (const StabilityVoxel& v : voxels) {
    os << format_double(v.alpha1) << ',' << format_double(v.alpha2) << ',' << format_double(v.alpha3) << ','
       << (v.stable ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string orbit_csv(const OrbitResult<Vec3>& orbit, long first_index) {
  std::ostringstream os;
  os << "t,p1,p2,s\n";
  long t = first_index;
  for (const Vec3& x : orbit.samples) {
    os << t++ << ',' << format_double(x[0]) << ',' << format_double(x[1]) << ',' << format_double(x[2]) << '\n';
  }
  return os.str();
}

}  // namespace datagame
