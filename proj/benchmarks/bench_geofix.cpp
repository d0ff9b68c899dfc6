#include <benchmark/benchmark.h>

#include <random>

#include "geofix/geopositioning.hpp"
#include "geofix/gis_mask.hpp"
#include "geofix/homography.hpp"
#include "geofix/matching.hpp"
#include "geofix/ncc_matcher.hpp"

namespace {

using namespace geofix;

const GeoTransform kBasemap{{40.0, -83.0}, 0.3, 2048, 2048};

std::vector<BuildingFootprint> Grid() {
  std::vector<BuildingFootprint> out;
  for (int v = 32; v + 64 < kBasemap.height; v += 128) {
    for (int u = 32; u + 64 < kBasemap.width; u += 128) {
      BuildingFootprint fp;
      for (PixelPoint p : {PixelPoint{u - 0.5, v - 0.5},
                           PixelPoint{u + 63.5, v - 0.5},
                           PixelPoint{u + 63.5, v + 63.5},
                           PixelPoint{u - 0.5, v + 63.5}}) {
        fp.outer_ring.push_back(PixelToGps(p, kBasemap));
      }
      out.push_back(std::move(fp));
    }
  }
  return out;
}

const GisMask& Mask() {
  static const GisMask mask = Rasterize(Grid(), kBasemap);
  return mask;
}

Homography FrameAt(double u, double v) {
  return Homography::Translation(u, v);
}

GrayImage Texture(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(0, 255);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  for (auto& p : px) p = static_cast<std::uint8_t>(value(rng));
  GrayImage raw(w, h, std::move(px));
  GrayImage out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      out.at(u, v) = static_cast<std::uint8_t>(raw.Sample(u + 0.5, v + 0.5));
    }
  }
  return out;
}

void BM_Rasterize(benchmark::State& state) {
  const auto fps = Grid();
  for (auto _ : state) benchmark::DoNotOptimize(Rasterize(fps, kBasemap));
  state.SetItemsProcessed(state.iterations() * kBasemap.width *
                          kBasemap.height);
}
BENCHMARK(BM_Rasterize)->Unit(benchmark::kMillisecond);

void BM_SyntheticMatches(benchmark::State& state) {
  const SyntheticMatchConfig cfg{80, 120, 0.5, 0.1, 20.0};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SyntheticMatches(FrameAt(700, 700), Mask(), 512, 512, cfg, seed++));
  }
}
BENCHMARK(BM_SyntheticMatches)->Unit(benchmark::kMillisecond);

void BM_Dlt(benchmark::State& state) {
  const MatchSet m = SyntheticMatches(FrameAt(700, 700), Mask(), 512, 512,
                                      {static_cast<int>(state.range(0)), 0}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Dlt(m.pairs));
}
BENCHMARK(BM_Dlt)->Arg(4)->Arg(100)->Arg(1000);

void BM_Ransac(benchmark::State& state) {
  const MatchSet m =
      SyntheticMatches(FrameAt(700, 700), Mask(), 512, 512,
                       {static_cast<int>(state.range(0)), 0, 0.5, 0.3}, 2);
  RansacConfig cfg;
  for (auto _ : state) {
    cfg.seed++;
    benchmark::DoNotOptimize(RansacEstimate(m.pairs, cfg));
  }
}
BENCHMARK(BM_Ransac)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_GeolocateFrame(benchmark::State& state) {
  const MatchSet m = SyntheticMatches(FrameAt(700, 700), Mask(), 512, 512,
                                      {80, 120, 0.5, 0.1, 20.0}, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        GeolocateFrame(0, m, 512, 512, Mask(), kBasemap, {}));
  }
}
BENCHMARK(BM_GeolocateFrame)->Unit(benchmark::kMillisecond);

void BM_NccMatch(benchmark::State& state) {
  const GrayImage window = Texture(1024, 1024, 4);
  FrameInput frame{0, 512, 512, window.Crop(200, 150, 512, 512), {}, {}};
  const BasemapWindow bw{{0, 0}, 1024, 1024, &window};
  NccMatcher matcher;
  matcher.Match(frame, bw, 0.2);  // warm the window cache
  for (auto _ : state) benchmark::DoNotOptimize(matcher.Match(frame, bw, 0.2));
}
BENCHMARK(BM_NccMatch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
