#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// Nothing here calls the code paths it is used to check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "geofix/footprints.hpp"
#include "geofix/geodesy.hpp"
#include "geofix/gis_mask.hpp"
#include "geofix/raster.hpp"

namespace geofix::testing {

inline GeoTransform CampusTransform(int size = 2048, double gsd = 0.3) {
  return GeoTransform{{40.0, -83.0}, gsd, size, size};
}

/// Axis-aligned footprint whose corners sit at the given pixel coordinates.
inline BuildingFootprint PixelRectangle(const GeoTransform& t, double u0,
                                        double v0, double u1, double v1,
                                        std::string id = "rect") {
  BuildingFootprint fp;
  for (PixelPoint p : {PixelPoint{u0, v0}, PixelPoint{u1, v0},
                       PixelPoint{u1, v1}, PixelPoint{u0, v1}}) {
    fp.outer_ring.push_back(PixelToGps(p, t));
  }
  fp.tag_id = std::move(id);
  return fp;
}

/// Square buildings of `side` px on a `pitch` px grid.
inline std::vector<BuildingFootprint> BuildingGrid(const GeoTransform& t,
                                                   int pitch = 128,
                                                   int side = 64) {
  std::vector<BuildingFootprint> out;
  for (int v = 32; v + side < t.height; v += pitch) {
    for (int u = 32; u + side < t.width; u += pitch) {
      out.push_back(PixelRectangle(t, u - 0.5, v - 0.5, u + side - 0.5,
                                   v + side - 0.5));
    }
  }
  return out;
}

/// Brute-force even-odd point-in-polygon over all rings, in pixel space.
inline bool InsidePolygonOracle(const std::vector<std::vector<PixelPoint>>& rings,
                                PixelPoint p) {
  bool inside = false;
  for (const auto& ring : rings) {
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      const PixelPoint& a = ring[i];
      const PixelPoint& b = ring[j];
      if ((a.v > p.v) != (b.v > p.v)) {
        const double x = a.u + (p.v - a.v) / (b.v - a.v) * (b.u - a.u);
        if (p.u < x) inside = !inside;
      }
    }
  }
  return inside;
}

inline double SegmentDistance(PixelPoint p, PixelPoint a, PixelPoint b) {
  const double du = b.u - a.u, dv = b.v - a.v;
  const double len2 = du * du + dv * dv;
  double s = len2 > 0 ? ((p.u - a.u) * du + (p.v - a.v) * dv) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.u - (a.u + s * du), p.v - (a.v + s * dv));
}

inline double DistanceToRings(const std::vector<std::vector<PixelPoint>>& rings,
                              PixelPoint p) {
  double best = INFINITY;
  for (const auto& ring : rings) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      best = std::min(best,
                      SegmentDistance(p, ring[i], ring[(i + 1) % ring.size()]));
    }
  }
  return best;
}

/// Smoothed random texture with plenty of corners.
inline GrayImage TexturedImage(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(0, 255);
  std::vector<double> raw(static_cast<std::size_t>(width) * height);
  for (double& r : raw) r = value(rng);
  // Two passes of a 3x3 box blur.
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> blurred(raw.size());
    for (int v = 0; v < height; ++v) {
      for (int u = 0; u < width; ++u) {
        double sum = 0;
        int n = 0;
        for (int dv = -1; dv <= 1; ++dv) {
          for (int du = -1; du <= 1; ++du) {
            const int uu = u + du, vv = v + dv;
            if (uu < 0 || vv < 0 || uu >= width || vv >= height) continue;
            sum += raw[static_cast<std::size_t>(vv) * width + uu];
            ++n;
          }
        }
        blurred[static_cast<std::size_t>(v) * width + u] = sum / n;
      }
    }
    raw.swap(blurred);
  }
  std::vector<std::uint8_t> pixels(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    // Stretch contrast back after blurring.
    pixels[i] = static_cast<std::uint8_t>(
        std::clamp(std::lround((raw[i] - 128.0) * 2.5 + 128.0), 0L, 255L));
  }
  return GrayImage(width, height, std::move(pixels));
}

/// Random well-conditioned homography close to a similarity with mild
/// perspective, mapping a 512^2 frame into a ~2000^2 basemap.
inline Eigen::Matrix3d RandomHomography(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-0.5, 0.5);
  std::uniform_real_distribution<double> scale(0.8, 1.25);
  std::uniform_real_distribution<double> shift(200.0, 1500.0);
  std::uniform_real_distribution<double> small(-0.05, 0.05);
  std::uniform_real_distribution<double> persp(-2e-4, 2e-4);
  const double a = angle(rng), s = scale(rng);
  Eigen::Matrix3d h;
  h << s * std::cos(a) + small(rng), -s * std::sin(a) + small(rng), shift(rng),
      s * std::sin(a) + small(rng), s * std::cos(a) + small(rng), shift(rng),
      persp(rng), persp(rng), 1.0;
  return h;
}

/// Direct evaluation of a homography matrix on a point (no library code).
inline PixelPoint ApplyMatrix(const Eigen::Matrix3d& h, PixelPoint p) {
  const Eigen::Vector3d x = h * Eigen::Vector3d(p.u, p.v, 1.0);
  return {x.x() / x.z(), x.y() / x.z()};
}

/// Largest displacement between two homographies over the frame corners.
inline double MaxCornerError(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b,
                             int width, int height) {
  double worst = 0.0;
  for (PixelPoint c : {PixelPoint{0, 0}, PixelPoint{double(width), 0},
                       PixelPoint{double(width), double(height)},
                       PixelPoint{0, double(height)}}) {
    const PixelPoint pa = ApplyMatrix(a, c);
    const PixelPoint pb = ApplyMatrix(b, c);
    worst = std::max(worst, std::hypot(pa.u - pb.u, pa.v - pb.v));
  }
  return worst;
}

/// Frobenius-normalized, sign-fixed copy for matrix comparisons.
inline Eigen::Matrix3d NormalizeMatrix(Eigen::Matrix3d m) {
  m /= m.norm();
  if (m(2, 2) < 0) m = -m;
  return m;
}

/// Halton low-discrepancy value (radical inverse) for Monte-Carlo oracles.
inline double Halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

/// Monte-Carlo centroid of a convex polygon: mean of quasi-random samples of
/// its bounding box that fall inside.
inline PixelPoint MonteCarloCentroid(const std::vector<PixelPoint>& convex,
                                     std::uint64_t samples) {
  double u0 = INFINITY, v0 = INFINITY, u1 = -INFINITY, v1 = -INFINITY;
  for (const auto& p : convex) {
    u0 = std::min(u0, p.u);
    v0 = std::min(v0, p.v);
    u1 = std::max(u1, p.u);
    v1 = std::max(v1, p.v);
  }
  double su = 0, sv = 0;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 1; i <= samples; ++i) {
    const PixelPoint p{u0 + Halton(i, 2) * (u1 - u0),
                       v0 + Halton(i, 3) * (v1 - v0)};
    bool inside = true;
    int sign = 0;
    for (std::size_t k = 0; k < convex.size() && inside; ++k) {
      const PixelPoint& a = convex[k];
      const PixelPoint& b = convex[(k + 1) % convex.size()];
      const double cross = (b.u - a.u) * (p.v - a.v) - (b.v - a.v) * (p.u - a.u);
      const int s = cross > 0 ? 1 : (cross < 0 ? -1 : 0);
      if (s != 0) {
        if (sign == 0) sign = s;
        else if (s != sign) inside = false;
      }
    }
    if (inside) {
      su += p.u;
      sv += p.v;
      ++hits;
    }
  }
  return {su / static_cast<double>(hits), sv / static_cast<double>(hits)};
}

/// Random convex quadrilateral: four sorted angles on an ellipse, then a
/// random offset.
inline std::vector<PixelPoint> RandomConvexQuad(std::mt19937_64& rng,
                                                double radius = 20.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> angles(4);
  for (double& a : angles) a = unit(rng) * 2.0 * M_PI;
  std::sort(angles.begin(), angles.end());
  const double ru = radius * (0.5 + unit(rng));
  const double rv = radius * (0.5 + unit(rng));
  const PixelPoint c{100 + 400 * unit(rng), 100 + 400 * unit(rng)};
  std::vector<PixelPoint> quad;
  for (double a : angles) {
    quad.push_back({c.u + ru * std::cos(a), c.v + rv * std::sin(a)});
  }
  return quad;
}

}  // namespace geofix::testing
