#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "geofix/error.hpp"
#include "geofix/gis_mask.hpp"
#include "geofix/homography.hpp"
#include "geofix/matching.hpp"
#include "geofix/ncc_matcher.hpp"
#include "test_support.hpp"

namespace geofix {
namespace {

using testing::CampusTransform;

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kInvalidArgument;
}

double Median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

struct World {
  GeoTransform t = CampusTransform();
  std::shared_ptr<const GisMask> mask;
  World() {
    const auto fps = testing::BuildingGrid(t);
    mask = std::make_shared<const GisMask>(Rasterize(fps, t));
  }
};

const World& Campus() {
  static const World world;
  return world;
}

Homography FrameAt(double u0, double v0, double angle = 0.0, double s = 1.0) {
  Eigen::Matrix3d m;
  m << s * std::cos(angle), -s * std::sin(angle), u0, s * std::sin(angle),
      s * std::cos(angle), v0, 0, 0, 1;
  return Homography(m);
}

TEST(SyntheticMatcher, IdentityWarp) {
  const auto mask = std::make_shared<const GisMask>(256, 256);
  SyntheticMatcher matcher(mask, {}, 1);
  FrameInput frame{0, 256, 256, GrayImage(256, 256), Homography(), {}};
  const GrayImage window_raster(256, 256);
  const BasemapWindow window{{0, 0}, 256, 256, &window_raster};
  const MatchSet m = matcher.Match(frame, window, 0.2);
  EXPECT_GE(m.pairs.size(), 50u);
  for (const auto& p : m.pairs) {
    EXPECT_LT(Norm(p.image_pt - p.basemap_pt), 1.0);
  }
}

TEST(Matcher, RejectsConfidenceOutsideUnitInterval) {
  const auto mask = std::make_shared<const GisMask>(256, 256);
  SyntheticMatcher matcher(mask, {}, 1);
  FrameInput frame{0, 256, 256, {}, Homography(), {}};
  const BasemapWindow window{{0, 0}, 256, 256, nullptr};
  EXPECT_EQ(CodeOf([&] { matcher.Match(frame, window, 1.0 + 1e-12); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { matcher.Match(frame, window, -0.1); }),
            ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(matcher.Match(frame, window, 1.0));
}

TEST(Matcher, ResultsRespectConfidenceAndBounds) {
  const World& w = Campus();
  SyntheticMatcher matcher(w.mask, {150, 50, 0.5, 0.3, 10.0}, 3);
  FrameInput frame{4, 512, 512, {}, FrameAt(600, 640), {}};
  const BasemapWindow window{{500, 500}, 700, 700, nullptr};
  const MatchSet m = matcher.Match(frame, window, 0.5);
  EXPECT_EQ(m.window_origin, (PixelPoint{500, 500}));
  ASSERT_FALSE(m.pairs.empty());
  for (const auto& p : m.pairs) {
    EXPECT_GE(p.confidence, 0.5);
    EXPECT_GE(p.basemap_pt.u, -0.5);
    EXPECT_LT(p.basemap_pt.u, 699.5);
    EXPECT_GE(p.image_pt.v, -0.5);
    EXPECT_LT(p.image_pt.v, 511.5);
  }
}

TEST(SyntheticMatches, ExactWithoutNoise) {
  const World& w = Campus();
  const Homography gt = FrameAt(700.3, 810.9, 0.01, 1.01);
  const MatchSet m = SyntheticMatches(gt, *w.mask, 512, 512, {100, 60}, 7);
  EXPECT_EQ(m.pairs.size(), 160u);
  for (const auto& p : m.pairs) EXPECT_LT(ReprojectionError(gt, p), 1e-9);
  const Homography recovered = Dlt(m.pairs);
  EXPECT_LT((recovered.matrix() - gt.matrix()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SyntheticMatches, GroundOnlyClassifiesGround) {
  const World& w = Campus();
  const MatchSet m =
      SyntheticMatches(FrameAt(610, 620), *w.mask, 512, 512, {100, 0}, 2);
  ASSERT_EQ(m.pairs.size(), 100u);
  for (const auto& p : m.pairs) {
    EXPECT_EQ(Classify(p.basemap_pt, *w.mask), PixelClass::kGround);
  }
}

TEST(SyntheticMatches, NoiseResidualMatchesChiDistribution) {
  const World& w = Campus();
  const Homography gt = FrameAt(650, 700);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MatchSet m =
        SyntheticMatches(gt, *w.mask, 512, 512, {100, 0, 0.5}, seed);
    double sum = 0;
    for (const auto& p : m.pairs) {
      const double e = ReprojectionError(gt, p);
      sum += e * e;
    }
    const double rms = std::sqrt(sum / double(m.pairs.size()));
    EXPECT_GE(rms, 0.4) << seed;
    EXPECT_LE(rms, 0.9) << seed;
  }
}

TEST(SyntheticMatches, ParallaxAndOutliers) {
  const World& w = Campus();
  const Homography gt = FrameAt(650, 700);
  const MatchSet m =
      SyntheticMatches(gt, *w.mask, 512, 512, {80, 120, 0.0, 0.0, 20.0}, 5);
  int shifted = 0;
  for (const auto& p : m.pairs) {
    const double e = ReprojectionError(gt, p);
    if (e > 1e-6) {
      EXPECT_NEAR(e, 20.0, 1e-6);
      ++shifted;
    }
  }
  EXPECT_EQ(shifted, 120);

  const MatchSet noisy =
      SyntheticMatches(gt, *w.mask, 512, 512, {100, 0, 0.0, 0.25}, 5);
  int bad = 0;
  for (const auto& p : noisy.pairs) bad += ReprojectionError(gt, p) > 1e-6;
  EXPECT_EQ(bad, 25);
}

TEST(SyntheticMatches, InsufficientClassPixels) {
  const GisMask ground_only(1024, 1024);
  const Homography gt = FrameAt(100, 100);
  EXPECT_NO_THROW(SyntheticMatches(gt, ground_only, 512, 512, {0, 0}, 1));
  EXPECT_NO_THROW(SyntheticMatches(gt, ground_only, 512, 512, {50, 0}, 1));
  EXPECT_EQ(CodeOf([&] {
              SyntheticMatches(gt, ground_only, 512, 512, {0, 1}, 1);
            }),
            ErrorCode::kInsufficientClassPixels);
}

TEST(SyntheticMatches, DeterministicPerSeed) {
  const World& w = Campus();
  const Homography gt = FrameAt(650, 700);
  const SyntheticMatchConfig cfg{80, 40, 0.8, 0.2, 12.0};
  const MatchSet a = SyntheticMatches(gt, *w.mask, 512, 512, cfg, 9);
  const MatchSet b = SyntheticMatches(gt, *w.mask, 512, 512, cfg, 9);
  const MatchSet c = SyntheticMatches(gt, *w.mask, 512, 512, cfg, 10);
  EXPECT_EQ(a.pairs, b.pairs);
  EXPECT_NE(a.pairs, c.pairs);
}

TEST(SyntheticMatcher, WindowOriginOnlyShiftsCoordinates) {
  const World& w = Campus();
  SyntheticMatcher matcher(w.mask, {100, 30, 0.5}, 11);
  FrameInput frame{3, 512, 512, {}, FrameAt(800, 800), {}};
  const MatchSet a = matcher.Match(frame, {{600, 600}, 900, 900, nullptr}, 0.0);
  const MatchSet b = matcher.Match(frame, {{583, 611}, 900, 900, nullptr}, 0.0);
  ASSERT_EQ(a.pairs.size(), b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    EXPECT_EQ(a.pairs[i].image_pt, b.pairs[i].image_pt);
    EXPECT_EQ(a.pairs[i].confidence, b.pairs[i].confidence);
    EXPECT_NEAR(a.pairs[i].basemap_pt.u - b.pairs[i].basemap_pt.u, -17, 1e-9);
    EXPECT_NEAR(a.pairs[i].basemap_pt.v - b.pairs[i].basemap_pt.v, 11, 1e-9);
    EXPECT_NEAR(a.FullBasemapPoint(a.pairs[i]).u,
                b.FullBasemapPoint(b.pairs[i]).u, 1e-9);
  }
}

TEST(SyntheticMatcher, NeedsGroundTruth) {
  SyntheticMatcher matcher(std::make_shared<const GisMask>(64, 64), {10, 0}, 1);
  FrameInput frame{0, 32, 32, {}, std::nullopt, {}};
  EXPECT_EQ(CodeOf([&] { matcher.Match(frame, {{0, 0}, 64, 64, nullptr}, 0.0); }),
            ErrorCode::kMatchFailed);
}

TEST(NccMatcher, RecoversKnownShift) {
  const GrayImage window = testing::TexturedImage(320, 320, 17);
  FrameInput frame{0, 256, 256, window.Crop(8, 5, 256, 256), {}, {}};
  NccMatcher matcher;
  const MatchSet m =
      matcher.Match(frame, {{0, 0}, 320, 320, &window}, 0.2);
  ASSERT_GE(m.pairs.size(), 20u);
  std::vector<double> du, dv;
  for (const auto& p : m.pairs) {
    du.push_back(p.basemap_pt.u - p.image_pt.u);
    dv.push_back(p.basemap_pt.v - p.image_pt.v);
    EXPECT_GE(p.confidence, 0.2);
  }
  EXPECT_NEAR(Median(du), 8.0, 0.5);
  EXPECT_NEAR(Median(dv), 5.0, 0.5);
}

TEST(NccMatcher, DeterministicAndCached) {
  const GrayImage window = testing::TexturedImage(300, 300, 5);
  FrameInput frame{0, 200, 200, window.Crop(40, 30, 200, 200), {}, {}};
  NccMatcher matcher;
  const BasemapWindow bw{{1000, 2000}, 300, 300, &window};
  const MatchSet a = matcher.Match(frame, bw, 0.2);
  const MatchSet b = matcher.Match(frame, bw, 0.2);
  EXPECT_EQ(a.pairs, b.pairs);
  EXPECT_EQ(a.window_origin, (PixelPoint{1000, 2000}));
  EXPECT_GE(matcher.cache_hits(), 1u);
}

TEST(NccMatcher, NeedsRasters) {
  NccMatcher matcher;
  FrameInput frame{0, 64, 64, {}, {}, {}};
  EXPECT_THROW(matcher.Match(frame, {{0, 0}, 64, 64, nullptr}, 0.2), Error);
}

TEST(NccMatcher, FlatImageHasNoKeypoints) {
  NccMatcher matcher;
  EXPECT_TRUE(matcher.Extract(GrayImage(64, 64, 128), 100).keypoints.empty());
  const auto f = matcher.Extract(testing::TexturedImage(128, 128, 3), 50);
  EXPECT_LE(f.keypoints.size(), 50u);
  EXPECT_EQ(f.descriptors.size(), f.keypoints.size() * 15u * 15u);
}

TEST(DeriveSeed, SpreadsStreams) {
  EXPECT_NE(DeriveSeed(1, 0), DeriveSeed(1, 1));
  EXPECT_NE(DeriveSeed(1, 0), DeriveSeed(2, 0));
  EXPECT_EQ(DeriveSeed(7, 3), DeriveSeed(7, 3));
}

}  // namespace
}  // namespace geofix
