#include "geofix/gis_mask.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "geofix/error.hpp"

namespace geofix {

GisMask::GisMask(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative mask size");
  }
  bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::size_t GisMask::CountBuilding() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

namespace {

struct Edge {
  PixelPoint a;
  PixelPoint b;
};

void AppendRingEdges(const Ring& ring, const GeoTransform& t,
                     std::vector<Edge>& edges) {
  std::vector<PixelPoint> px;
  px.reserve(ring.size());
  for (const GeoPoint& g : ring) px.push_back(GpsToPixel(g, t));
  for (std::size_t i = 0; i < px.size(); ++i) {
    const PixelPoint& a = px[i];
    const PixelPoint& b = px[(i + 1) % px.size()];
    if (a.v != b.v) edges.push_back({a, b});  // horizontal edges never cross
  }
}

void FillFootprint(const BuildingFootprint& footprint, const GeoTransform& t,
                   GisMask& mask) {
  std::vector<Edge> edges;
  AppendRingEdges(footprint.outer_ring, t, edges);
  for (const Ring& hole : footprint.holes) AppendRingEdges(hole, t, edges);
  if (edges.empty()) return;

  double v_min = edges.front().a.v;
  double v_max = v_min;
  for (const Edge& e : edges) {
    v_min = std::min({v_min, e.a.v, e.b.v});
    v_max = std::max({v_max, e.a.v, e.b.v});
  }
  const int row_begin = std::max(0, static_cast<int>(std::ceil(v_min)));
  const int row_end =
      std::min(mask.height() - 1, static_cast<int>(std::floor(v_max)));

  std::vector<double> crossings;
  for (int row = row_begin; row <= row_end; ++row) {
    const double y = row;
    crossings.clear();
    for (const Edge& e : edges) {
      // Half-open in y: an edge covers [min_v, max_v), so a vertex shared by
      // two edges is counted once and the bottom boundary is excluded.
      const double lo = std::min(e.a.v, e.b.v);
      const double hi = std::max(e.a.v, e.b.v);
      if (y < lo || y >= hi) continue;
      crossings.push_back(e.a.u + (y - e.a.v) / (e.b.v - e.a.v) *
                                      (e.b.u - e.a.u));
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // Half-open in x: centers with left <= u < right are inside.
      const int col_begin =
          std::max(0, static_cast<int>(std::ceil(crossings[k])));
      const int col_end = std::min(
          mask.width(), static_cast<int>(std::ceil(crossings[k + 1])));
      for (int col = col_begin; col < col_end; ++col) {
        mask.Set(col, row, PixelClass::kBuilding);
      }
    }
  }
}

void PutU32(std::ostream& out, std::uint32_t value) {
  std::array<char, 4> bytes{};
  for (int i = 0; i < 4; ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), 4);
}

std::uint32_t GetU32(std::istream& in) {
  std::array<unsigned char, 4> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 4);
  if (!in) throw Error(ErrorCode::kDocumentMalformed, "truncated mask file");
  return static_cast<std::uint32_t>(bytes[0]) |
         static_cast<std::uint32_t>(bytes[1]) << 8 |
         static_cast<std::uint32_t>(bytes[2]) << 16 |
         static_cast<std::uint32_t>(bytes[3]) << 24;
}

constexpr char kRleMagic[5] = {'G', 'M', 'S', 'K', '1'};

}  // namespace

GisMask Rasterize(std::span<const BuildingFootprint> footprints,
                  const GeoTransform& t) {
  t.Validate();
  GisMask mask(t.width, t.height);
  for (const BuildingFootprint& footprint : footprints) {
    FillFootprint(footprint, t, mask);
  }
  return mask;
}

PixelClass Classify(PixelPoint p, const GisMask& mask) {
  if (!std::isfinite(p.u) || !std::isfinite(p.v)) return PixelClass::kGround;
  const double col = std::floor(p.u + 0.5);
  const double row = std::floor(p.v + 0.5);
  if (col < 0 || row < 0 || col >= mask.width() || row >= mask.height()) {
    return PixelClass::kGround;
  }
  return mask.at(static_cast<int>(col), static_cast<int>(row));
}

void WriteMaskPgm(const std::string& path, const GisMask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  for (int v = 0; v < mask.height(); ++v) {
    for (int u = 0; u < mask.width(); ++u) {
      out.put(mask.at(u, v) == PixelClass::kBuilding ? '\xff' : '\0');
    }
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

void WriteMaskRle(std::ostream& out, const GisMask& mask) {
  out.write(kRleMagic, sizeof(kRleMagic));
  PutU32(out, static_cast<std::uint32_t>(mask.width()));
  PutU32(out, static_cast<std::uint32_t>(mask.height()));
  const std::size_t total =
      static_cast<std::size_t>(mask.width()) * mask.height();
  std::size_t i = 0;
  while (i < total) {
    const int u = static_cast<int>(i % mask.width());
    const int v = static_cast<int>(i / mask.width());
    const PixelClass value = mask.at(u, v);
    std::uint32_t run = 0;
    while (i < total && run < UINT32_MAX &&
           mask.at(static_cast<int>(i % mask.width()),
                   static_cast<int>(i / mask.width())) == value) {
      ++run;
      ++i;
    }
    out.put(static_cast<char>(value));
    PutU32(out, run);
  }
}

GisMask ReadMaskRle(std::istream& in) {
  char magic[sizeof(kRleMagic)];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic),
                         std::begin(kRleMagic))) {
    throw Error(ErrorCode::kDocumentMalformed, "bad mask magic");
  }
  const std::uint32_t width = GetU32(in);
  const std::uint32_t height = GetU32(in);
  GisMask mask(static_cast<int>(width), static_cast<int>(height));
  const std::size_t total = static_cast<std::size_t>(width) * height;
  std::size_t i = 0;
  while (i < total) {
    const int value = in.get();
    if (value != 0 && value != 1) {
      throw Error(ErrorCode::kDocumentMalformed, "bad mask run class");
    }
    const std::uint32_t run = GetU32(in);
    if (run == 0 || run > total - i) {
      throw Error(ErrorCode::kDocumentMalformed, "bad mask run length");
    }
    for (std::uint32_t k = 0; k < run; ++k, ++i) {
      mask.Set(static_cast<int>(i % width), static_cast<int>(i / width),
               static_cast<PixelClass>(value));
    }
  }
  return mask;
}

}  // namespace geofix
