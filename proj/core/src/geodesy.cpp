#include "geofix/geodesy.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "geofix/error.hpp"

namespace geofix {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double WrapLongitude(double lon) {
  if (lon >= 180.0) return lon - 360.0;
  if (lon < -180.0) return lon + 360.0;
  return lon;
}

double MetersPerDegreeLon(const GeoTransform& t) {
  return kMetersPerDegreeLat * std::cos(t.anchor.lat * kDegToRad);
}

}  // namespace

bool GeoPoint::IsValid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 &&
         lat <= 90.0 && lon >= -180.0 && lon < 180.0;
}

double Norm(PixelPoint p) { return std::hypot(p.u, p.v); }

bool GeoTransform::IsValid() const {
  // The longitude scale degenerates at the poles.
  return anchor.IsValid() && std::abs(anchor.lat) < 89.0 &&
         std::isfinite(gsd) && gsd > 0.0 && width > 0 && height > 0;
}

void GeoTransform::Validate() const {
  if (!IsValid()) {
    std::ostringstream msg;
    msg << "invalid GeoTransform (anchor " << anchor.lat << ", " << anchor.lon
        << ", gsd " << gsd << ", size " << width << "x" << height << ")";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

bool GeoTransform::Contains(PixelPoint p) const {
  return p.u >= -0.5 && p.v >= -0.5 && p.u < width - 0.5 &&
         p.v < height - 0.5;
}

GeoPoint PixelToGps(PixelPoint p, const GeoTransform& t) {
  GeoPoint g;
  g.lat = t.anchor.lat - (p.v * t.gsd) / kMetersPerDegreeLat;
  g.lon = WrapLongitude(t.anchor.lon + (p.u * t.gsd) / MetersPerDegreeLon(t));
  return g;
}

PixelPoint GpsToPixel(GeoPoint g, const GeoTransform& t) {
  PixelPoint p;
  p.u = WrapLongitude(g.lon - t.anchor.lon) * MetersPerDegreeLon(t) / t.gsd;
  p.v = (t.anchor.lat - g.lat) * kMetersPerDegreeLat / t.gsd;
  return p;
}

double GeodesicDistanceM(GeoPoint a, GeoPoint b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s_phi = std::sin(dphi / 2.0);
  const double s_lambda = std::sin(dlambda / 2.0);
  const double h =
      s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoTransform ReadWorldFile(std::istream& in, int width, int height) {
  GeoTransform t;
  std::string orientation;
  if (!(in >> t.anchor.lat >> t.anchor.lon >> t.gsd >> orientation)) {
    throw Error(ErrorCode::kDocumentMalformed,
                "world file needs anchor_lat, anchor_lon, gsd, north_up");
  }
  if (orientation != "north_up") {
    throw Error(ErrorCode::kDocumentMalformed,
                "only north_up basemaps are supported, got '" + orientation +
                    "'");
  }
  t.width = width;
  t.height = height;
  t.Validate();
  return t;
}

GeoTransform ReadWorldFile(const std::string& path, int width, int height) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open world file " + path);
  return ReadWorldFile(in, width, height);
}

void WriteWorldFile(std::ostream& out, const GeoTransform& t) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10)
      << t.anchor.lat << '\n'
      << t.anchor.lon << '\n'
      << t.gsd << '\n'
      << "north_up\n";
}

}  // namespace geofix
