#include "geofix/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geofix/error.hpp"

namespace geofix {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative image size");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0 ||
      pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidArgument, "pixel buffer size mismatch");
  }
}

double GrayImage::Sample(double u, double v) const {
  if (empty()) return 0.0;
  u = std::clamp(u, 0.0, static_cast<double>(width_ - 1));
  v = std::clamp(v, 0.0, static_cast<double>(height_ - 1));
  const int u0 = static_cast<int>(std::floor(u));
  const int v0 = static_cast<int>(std::floor(v));
  const int u1 = std::min(u0 + 1, width_ - 1);
  const int v1 = std::min(v0 + 1, height_ - 1);
  const double fu = u - u0;
  const double fv = v - v0;
  const double top = (1.0 - fu) * at(u0, v0) + fu * at(u1, v0);
  const double bottom = (1.0 - fu) * at(u0, v1) + fu * at(u1, v1);
  return (1.0 - fv) * top + fv * bottom;
}

GrayImage GrayImage::Crop(int u0, int v0, int w, int h,
                          std::uint8_t fill) const {
  GrayImage out(w, h, fill);
  const int src_u_begin = std::max(u0, 0);
  const int src_u_end = std::min(u0 + w, width_);
  if (src_u_begin >= src_u_end) return out;
  for (int v = 0; v < h; ++v) {
    const int sv = v0 + v;
    if (sv < 0 || sv >= height_) continue;
    std::copy(pixels_.begin() + Index(src_u_begin, sv),
              pixels_.begin() + Index(src_u_end - 1, sv) + 1,
              out.pixels_.begin() + out.Index(src_u_begin - u0, v));
  }
  return out;
}

namespace {

// Skips whitespace and '#' comments between PGM header tokens.
void SkipPgmSeparators(std::istream& in) {
  while (in) {
    const int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
}

}  // namespace

GrayImage ReadPgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") {
    throw Error(ErrorCode::kDocumentMalformed, path + " is not a binary PGM");
  }
  int width = 0, height = 0, maxval = 0;
  SkipPgmSeparators(in);
  in >> width;
  SkipPgmSeparators(in);
  in >> height;
  SkipPgmSeparators(in);
  in >> maxval;
  if (!in || width <= 0 || height <= 0 || maxval != 255) {
    throw Error(ErrorCode::kDocumentMalformed,
                path + ": unsupported PGM header (need 8-bit)");
  }
  in.get();  // single whitespace after maxval
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(pixels.data()),
          static_cast<std::streamsize>(pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(pixels.size())) {
    throw Error(ErrorCode::kDocumentMalformed, path + ": truncated PGM");
  }
  return GrayImage(width, height, std::move(pixels));
}

void WritePgm(const std::string& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels().data()),
            static_cast<std::streamsize>(image.pixels().size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

std::vector<std::uint8_t> EncodePng(const GrayImage& image) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0,
                                 image.pixels().data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError,
                std::string("png sizing failed: ") + png.message);
  }
  std::vector<std::uint8_t> bytes(size);
  if (!png_image_write_to_memory(&png, bytes.data(), &size, 0,
                                 image.pixels().data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError,
                std::string("png encode failed: ") + png.message);
  }
  bytes.resize(size);
  return bytes;
}

GrayImage DecodePng(std::span<const std::uint8_t> bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kDocumentMalformed,
                std::string("png decode failed: ") + png.message);
  }
  png.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&png);
    throw Error(ErrorCode::kDocumentMalformed,
                std::string("png decode failed: ") + png.message);
  }
  return GrayImage(static_cast<int>(png.width), static_cast<int>(png.height),
                   std::move(pixels));
}

GrayImage ReadPng(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DecodePng(bytes);
}

GrayImage ReadImage(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return ReadPng(path);
  if (ext == ".pgm") return ReadPgm(path);
  throw Error(ErrorCode::kInvalidArgument,
              "unsupported image extension '" + ext + "' (use .pgm or .png)");
}

}  // namespace geofix
