#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "geofix/footprints.hpp"
#include "geofix/geodesy.hpp"

namespace geofix {

enum class PixelClass : std::uint8_t { kGround = 0, kBuilding = 1 };

/// Binary ground/building raster aligned pixel-for-pixel with a basemap.
class GisMask {
 public:
  GisMask() = default;
  GisMask(int width, int height);  // all ground

  int width() const { return width_; }
  int height() const { return height_; }

  PixelClass at(int u, int v) const {
    return static_cast<PixelClass>(bits_[Index(u, v)]);
  }
  void Set(int u, int v, PixelClass c) {
    bits_[Index(u, v)] = static_cast<std::uint8_t>(c);
  }

  std::size_t CountBuilding() const;

  friend bool operator==(const GisMask&, const GisMask&) = default;

 private:
  std::size_t Index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Scanline even-odd fill evaluated at pixel centers. A pixel is building iff
/// its center lies inside any footprint (holes subtract within their own
/// footprint). Centers exactly on an edge follow the half-open rule: left and
/// top edges are inside, right and bottom edges outside.
GisMask Rasterize(std::span<const BuildingFootprint> footprints,
                  const GeoTransform& t);

/// Class of the pixel containing p. Pixel (i, j) covers
/// [i - 0.5, i + 0.5) x [j - 0.5, j + 0.5) because integer coordinates are
/// pixel centers. Points outside the raster are ground.
PixelClass Classify(PixelPoint p, const GisMask& mask);

// PGM (P5) with 0 = ground, 255 = building.
void WriteMaskPgm(const std::string& path, const GisMask& mask);

// Run-length sidecar: "GMSK1", u32 width, u32 height, then row-major
// (u8 class, u32 run length) pairs, all little-endian.
void WriteMaskRle(std::ostream& out, const GisMask& mask);
GisMask ReadMaskRle(std::istream& in);

}  // namespace geofix
