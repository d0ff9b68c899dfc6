#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "geofix/error.hpp"
#include "geofix/gis_mask.hpp"
#include "test_support.hpp"

namespace geofix {
namespace {

using testing::DistanceToRings;
using testing::InsidePolygonOracle;
using testing::PixelRectangle;

const GeoTransform kSmall{{40.0, -83.0}, 0.15, 64, 48};

std::vector<std::vector<PixelPoint>> PixelRings(const BuildingFootprint& fp,
                                                const GeoTransform& t) {
  std::vector<std::vector<PixelPoint>> rings;
  auto convert = [&](const Ring& ring) {
    std::vector<PixelPoint> out;
    for (const GeoPoint& g : ring) out.push_back(GpsToPixel(g, t));
    rings.push_back(std::move(out));
  };
  convert(fp.outer_ring);
  for (const Ring& hole : fp.holes) convert(hole);
  return rings;
}

TEST(Rasterize, SquareCoversExactlyItsPixels) {
  // Edges on pixel boundaries: centers 10..19 in both axes.
  const std::vector fps{PixelRectangle(kSmall, 9.5, 9.5, 19.5, 19.5)};
  const GisMask mask = Rasterize(fps, kSmall);
  EXPECT_EQ(mask.CountBuilding(), 100u);
  const auto rings = PixelRings(fps[0], kSmall);
  for (int v = 0; v < kSmall.height; ++v) {
    for (int u = 0; u < kSmall.width; ++u) {
      const bool oracle = InsidePolygonOracle(rings, {double(u), double(v)});
      EXPECT_EQ(mask.at(u, v) == PixelClass::kBuilding, oracle)
          << u << "," << v;
    }
  }
  EXPECT_EQ(Classify({14.5, 14.5}, mask), PixelClass::kBuilding);
  EXPECT_EQ(Classify({-5, -5}, mask), PixelClass::kGround);
}

TEST(Rasterize, EmptyAndOutsideAreAllGround) {
  const GisMask empty = Rasterize({}, kSmall);
  EXPECT_EQ(empty.width(), 64);
  EXPECT_EQ(empty.height(), 48);
  EXPECT_EQ(empty.CountBuilding(), 0u);
  const std::vector far{PixelRectangle(kSmall, 500, 500, 600, 600)};
  EXPECT_EQ(Rasterize(far, kSmall).CountBuilding(), 0u);
}

TEST(Rasterize, HolesSubtract) {
  BuildingFootprint fp = PixelRectangle(kSmall, -0.5, -0.5, 29.5, 29.5);
  const BuildingFootprint hole = PixelRectangle(kSmall, 9.5, 9.5, 19.5, 19.5);
  fp.holes.push_back(hole.outer_ring);
  const std::vector fps{fp};
  const GisMask mask = Rasterize(fps, kSmall);
  EXPECT_EQ(mask.CountBuilding(), 900u - 100u);
  EXPECT_EQ(mask.at(15, 15), PixelClass::kGround);
  EXPECT_EQ(mask.at(5, 5), PixelClass::kBuilding);
}

BuildingFootprint RandomPolygon(std::mt19937_64& rng, const GeoTransform& t,
                                int vertices) {
  std::uniform_real_distribution<double> u(-10.0, t.width + 10.0);
  std::uniform_real_distribution<double> v(-10.0, t.height + 10.0);
  BuildingFootprint fp;
  for (int i = 0; i < vertices; ++i) {
    fp.outer_ring.push_back(PixelToGps({u(rng), v(rng)}, t));
  }
  return fp;
}

TEST(Classify, AgreesWithPointInPolygonAwayFromEdges) {
  std::mt19937_64 rng(2024);
  const GeoTransform t{{40.0, -83.0}, 0.3, 200, 150};
  // Self-intersecting random polygons exercise the even-odd rule.
  const std::vector fps{RandomPolygon(rng, t, 7), RandomPolygon(rng, t, 5)};
  const GisMask mask = Rasterize(fps, t);
  std::vector<std::vector<PixelPoint>> rings;
  for (const auto& fp : fps) {
    for (auto& r : PixelRings(fp, t)) rings.push_back(std::move(r));
  }
  std::uniform_real_distribution<double> u(-0.5, t.width - 0.5);
  std::uniform_real_distribution<double> v(-0.5, t.height - 0.5);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const PixelPoint p{u(rng), v(rng)};
    if (DistanceToRings(rings, p) <= 1.0) continue;
    // Each footprint is tested on its own: a pixel is a building if inside
    // any footprint.
    bool inside = false;
    for (const auto& fp : fps) {
      inside = inside || InsidePolygonOracle(PixelRings(fp, t), p);
    }
    EXPECT_EQ(Classify(p, mask) == PixelClass::kBuilding, inside)
        << p.u << "," << p.v;
    ++checked;
  }
  EXPECT_GT(checked, 5000);
}

TEST(Rasterize, DeterministicAndOrderFree) {
  std::mt19937_64 rng(8);
  const GeoTransform t{{40.0, -83.0}, 0.3, 120, 90};
  std::vector<BuildingFootprint> fps;
  for (int i = 0; i < 6; ++i) fps.push_back(RandomPolygon(rng, t, 4 + i % 3));
  const GisMask a = Rasterize(fps, t);
  EXPECT_EQ(a, Rasterize(fps, t));
  std::reverse(fps.begin(), fps.end());
  EXPECT_EQ(a, Rasterize(fps, t));
}

TEST(Rasterize, AddingFootprintsNeverRemovesBuildingPixels) {
  std::mt19937_64 rng(9);
  const GeoTransform t{{40.0, -83.0}, 0.3, 120, 90};
  std::vector<BuildingFootprint> fps;
  std::size_t previous = 0;
  for (int i = 0; i < 6; ++i) {
    // Convex rectangles only: overlapping even-odd polygons are unioned per
    // footprint, so the count can only grow.
    std::uniform_real_distribution<double> c(0.0, 100.0);
    const double u0 = c(rng), v0 = c(rng) * 0.8;
    fps.push_back(PixelRectangle(t, u0, v0, u0 + 20, v0 + 15));
    const std::size_t count = Rasterize(fps, t).CountBuilding();
    EXPECT_GE(count, previous);
    previous = count;
  }
}

TEST(Rasterize, ConvexAreaWithinDiscretizationBound) {
  std::mt19937_64 rng(4);
  const GeoTransform t{{40.0, -83.0}, 0.3, 640, 640};
  for (int i = 0; i < 20; ++i) {
    const auto quad = testing::RandomConvexQuad(rng, 60.0);
    BuildingFootprint fp;
    double area = 0, perimeter = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const PixelPoint a = quad[k], b = quad[(k + 1) % 4];
      area += a.u * b.v - b.u * a.v;
      perimeter += std::hypot(b.u - a.u, b.v - a.v);
      fp.outer_ring.push_back(PixelToGps(a, t));
    }
    area = std::abs(area) / 2;
    const std::vector fps{fp};
    const double count = double(Rasterize(fps, t).CountBuilding());
    EXPECT_NEAR(count, area, perimeter + 4) << i;
  }
}

TEST(MaskRle, RoundTrip) {
  std::mt19937_64 rng(1);
  const GeoTransform t{{40.0, -83.0}, 0.3, 97, 61};
  const std::vector fps{RandomPolygon(rng, t, 6)};
  const GisMask mask = Rasterize(fps, t);
  std::stringstream s;
  WriteMaskRle(s, mask);
  EXPECT_EQ(ReadMaskRle(s), mask);
}

TEST(MaskRle, RejectsTruncatedInput) {
  GisMask mask(10, 10);
  mask.Set(3, 3, PixelClass::kBuilding);
  std::stringstream s;
  WriteMaskRle(s, mask);
  std::string bytes = s.str();
  bytes.resize(bytes.size() - 3);
  std::istringstream truncated(bytes);
  EXPECT_THROW(ReadMaskRle(truncated), Error);
  std::istringstream garbage("not a mask");
  EXPECT_THROW(ReadMaskRle(garbage), Error);
}

}  // namespace
}  // namespace geofix
