#pragma once

#include <iosfwd>
#include <numbers>
#include <string>

namespace geofix {

// Mean Earth radius used for every metric conversion in the library.
inline constexpr double kEarthRadiusM = 6371000.0;
// Length of one degree of latitude on that sphere (~111194.93 m).
inline constexpr double kMetersPerDegreeLat =
    std::numbers::pi / 180.0 * kEarthRadiusM;

/// WGS84 position in degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool IsValid() const;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Continuous pixel coordinate: u is the column, v the row. Integer values
/// fall on pixel centers.
struct PixelPoint {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
  friend PixelPoint operator+(PixelPoint a, PixelPoint b) {
    return {a.u + b.u, a.v + b.v};
  }
  friend PixelPoint operator-(PixelPoint a, PixelPoint b) {
    return {a.u - b.u, a.v - b.v};
  }
};

double Norm(PixelPoint p);

/// Georeferencing of a north-up basemap raster. The anchor is the WGS84
/// position of the *center* of pixel (0, 0); columns run due east and rows
/// due south at a constant ground sample distance.
///
/// The model is a local equirectangular tangent plane: longitude spacing is
/// scaled by cos(anchor.lat). At campus scale (a few km) its error stays
/// far below GPS ground-truth noise.
struct GeoTransform {
  GeoPoint anchor;
  double gsd = 1.0;  // meters per pixel
  int width = 0;
  int height = 0;

  bool IsValid() const;
  /// Throws Error(kInvalidArgument) when IsValid() is false.
  void Validate() const;
  bool Contains(PixelPoint p) const;
};

GeoPoint PixelToGps(PixelPoint p, const GeoTransform& t);
PixelPoint GpsToPixel(GeoPoint g, const GeoTransform& t);

/// Haversine great-circle distance on the kEarthRadiusM sphere.
double GeodesicDistanceM(GeoPoint a, GeoPoint b);

// World file sidecar: four lines, anchor_lat, anchor_lon, gsd_m_per_px and
// the literal "north_up". Raster size is not part of the file.
GeoTransform ReadWorldFile(std::istream& in, int width, int height);
GeoTransform ReadWorldFile(const std::string& path, int width, int height);
void WriteWorldFile(std::ostream& out, const GeoTransform& t);

}  // namespace geofix
