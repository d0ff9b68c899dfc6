#include <gtest/gtest.h>

#include <filesystem>

#include "geofix/error.hpp"
#include "geofix/raster.hpp"
#include "scene_files.hpp"

namespace geofix {
namespace {

TEST(GrayImage, SampleIsBilinearAndClamped) {
  GrayImage img(2, 2);
  img.at(0, 0) = 0;
  img.at(1, 0) = 100;
  img.at(0, 1) = 50;
  img.at(1, 1) = 150;
  EXPECT_DOUBLE_EQ(img.Sample(0, 0), 0);
  EXPECT_DOUBLE_EQ(img.Sample(0.5, 0), 50);
  EXPECT_DOUBLE_EQ(img.Sample(0.5, 0.5), 75);
  EXPECT_DOUBLE_EQ(img.Sample(-3, -3), 0);
  EXPECT_DOUBLE_EQ(img.Sample(5, 5), 150);
}

TEST(GrayImage, CropFillsOutside) {
  const GrayImage img = testing::TexturedImage(20, 10, 1);
  const GrayImage c = img.Crop(15, -2, 10, 5, 7);
  EXPECT_EQ(c.width(), 10);
  EXPECT_EQ(c.at(0, 2), img.at(15, 0));
  EXPECT_EQ(c.at(4, 4), img.at(19, 2));
  EXPECT_EQ(c.at(5, 3), 7);
  EXPECT_EQ(c.at(0, 0), 7);
}

TEST(RasterIo, PgmAndPngRoundTrip) {
  const auto dir = testing::FreshDir("raster");
  const GrayImage img = testing::TexturedImage(37, 23, 4);
  WritePgm((dir / "a.pgm").string(), img);
  EXPECT_EQ(ReadPgm((dir / "a.pgm").string()), img);
  EXPECT_EQ(ReadImage((dir / "a.pgm").string()), img);
  const auto png = EncodePng(img);
  EXPECT_EQ(DecodePng(png), img);
  std::ofstream((dir / "b.png"), std::ios::binary)
      .write(reinterpret_cast<const char*>(png.data()),
             static_cast<std::streamsize>(png.size()));
  EXPECT_EQ(ReadImage((dir / "b.png").string()), img);
  std::filesystem::remove_all(dir);
}

TEST(RasterIo, Errors) {
  EXPECT_THROW(ReadPgm("/nonexistent/x.pgm"), Error);
  const std::vector<std::uint8_t> junk{1, 2, 3, 4};
  EXPECT_THROW(DecodePng(junk), Error);
  EXPECT_THROW(ReadImage("/tmp/x.tiff"), Error);
}

}  // namespace
}  // namespace geofix
