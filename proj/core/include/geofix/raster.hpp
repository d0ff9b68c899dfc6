#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace geofix {

/// 8-bit single-channel raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  std::uint8_t at(int u, int v) const { return pixels_[Index(u, v)]; }
  std::uint8_t& at(int u, int v) { return pixels_[Index(u, v)]; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }

  /// Bilinear sample at a continuous pixel coordinate; out-of-range reads
  /// clamp to the border.
  double Sample(double u, double v) const;

  /// Copies the [u0, u0+w) x [v0, v0+h) region; parts outside the image are
  /// filled with `fill`.
  GrayImage Crop(int u0, int v0, int w, int h, std::uint8_t fill = 0) const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t Index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

GrayImage ReadPgm(const std::string& path);
void WritePgm(const std::string& path, const GrayImage& image);

std::vector<std::uint8_t> EncodePng(const GrayImage& image);
GrayImage DecodePng(std::span<const std::uint8_t> bytes);
GrayImage ReadPng(const std::string& path);

/// Dispatches on the file extension (.pgm or .png).
GrayImage ReadImage(const std::string& path);

}  // namespace geofix
