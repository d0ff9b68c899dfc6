#include "geofix/homography.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "geofix/error.hpp"

namespace geofix {
namespace {

constexpr double kMinW = 1e-12;
constexpr double kCollinearArea = 1e-6;

Eigen::Matrix3d Normalized(const Eigen::Matrix3d& m) {
  const double norm = m.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw Error(ErrorCode::kDegenerateConfiguration, "zero or non-finite matrix");
  }
  Eigen::Matrix3d out = m / norm;
  double sign_ref = out(2, 2);
  if (sign_ref == 0.0) {
    // Fall back to the first nonzero entry so the representative is unique.
    for (int i = 0; i < 9 && sign_ref == 0.0; ++i) sign_ref = out.data()[i];
  }
  if (sign_ref < 0.0) out = -out;
  return out;
}

bool IsInvertible(const Eigen::Matrix3d& m) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
  const auto& s = svd.singularValues();
  return s(0) > 0.0 && s(2) / s(0) > 1e-15;
}

// Similarity moving the centroid to the origin with mean distance sqrt(2).
std::optional<Eigen::Matrix3d> HartleyTransform(
    std::span<const MatchPair> pairs, bool image_side) {
  double cu = 0.0, cv = 0.0;
  for (const MatchPair& p : pairs) {
    const PixelPoint& q = image_side ? p.image_pt : p.basemap_pt;
    cu += q.u;
    cv += q.v;
  }
  cu /= static_cast<double>(pairs.size());
  cv /= static_cast<double>(pairs.size());
  double mean_dist = 0.0;
  for (const MatchPair& p : pairs) {
    const PixelPoint& q = image_side ? p.image_pt : p.basemap_pt;
    mean_dist += std::hypot(q.u - cu, q.v - cv);
  }
  mean_dist /= static_cast<double>(pairs.size());
  if (!std::isfinite(mean_dist) || mean_dist <= 0.0) return std::nullopt;
  const double s = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * cu, 0.0, s, -s * cv, 0.0, 0.0, 1.0;
  return t;
}

Eigen::Vector2d Transformed(const Eigen::Matrix3d& t, PixelPoint p) {
  return {t(0, 0) * p.u + t(0, 2), t(1, 1) * p.v + t(1, 2)};
}

double TriangleArea(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                    const Eigen::Vector2d& c) {
  return 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

bool HasCollinearTriple(const std::array<Eigen::Vector2d, 4>& pts) {
  static constexpr int kTriples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3},
                                         {1, 2, 3}};
  for (const auto& t : kTriples) {
    if (TriangleArea(pts[t[0]], pts[t[1]], pts[t[2]]) < kCollinearArea) {
      return true;
    }
  }
  return false;
}

std::optional<Homography> TryDlt(std::span<const MatchPair> pairs) {
  const auto t_img = HartleyTransform(pairs, true);
  const auto t_map = HartleyTransform(pairs, false);
  if (!t_img || !t_map) return std::nullopt;

  const Eigen::Index n = static_cast<Eigen::Index>(pairs.size());
  if (n == 4) {
    std::array<Eigen::Vector2d, 4> img, map;
    for (int i = 0; i < 4; ++i) {
      img[i] = Transformed(*t_img, pairs[i].image_pt);
      map[i] = Transformed(*t_map, pairs[i].basemap_pt);
    }
    if (HasCollinearTriple(img) || HasCollinearTriple(map)) return std::nullopt;
  }

  Eigen::MatrixXd a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d x = Transformed(*t_img, pairs[i].image_pt);
    const Eigen::Vector2d y = Transformed(*t_map, pairs[i].basemap_pt);
    a.row(2 * i) << -x.x(), -x.y(), -1.0, 0.0, 0.0, 0.0, y.x() * x.x(),
        y.x() * x.y(), y.x();
    a.row(2 * i + 1) << 0.0, 0.0, 0.0, -x.x(), -x.y(), -1.0, y.y() * x.x(),
        y.y() * x.y(), y.y();
  }

  Eigen::Matrix<double, 9, 1> null_vec;
  Eigen::Matrix<double, 9, 1> singular;
  singular.setZero();
  if (n == 4) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    null_vec = svd.matrixV().col(8);
    singular.head(8) = svd.singularValues();
  } else {
    // Normal equations are well conditioned after Hartley normalization and
    // much cheaper than an SVD of the tall system.
    const Eigen::Matrix<double, 9, 9> ata = a.transpose() * a;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(ata);
    if (eig.info() != Eigen::Success) return std::nullopt;
    null_vec = eig.eigenvectors().col(0);
    for (int i = 0; i < 9; ++i) {
      singular(i) = std::sqrt(std::max(0.0, eig.eigenvalues()(8 - i)));
    }
  }
  // A one-parameter null space needs the 8th singular value clear of zero.
  if (!(singular(0) > 0.0) || singular(7) / singular(0) < 1e-8) {
    return std::nullopt;
  }

  Eigen::Matrix3d hn;
  hn << null_vec(0), null_vec(1), null_vec(2), null_vec(3), null_vec(4),
      null_vec(5), null_vec(6), null_vec(7), null_vec(8);
  const Eigen::Matrix3d h = t_map->inverse() * hn * (*t_img);
  if (!h.allFinite() || h.norm() == 0.0 || !IsInvertible(h / h.norm())) {
    return std::nullopt;
  }
  return Homography(h);
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Score {
  std::size_t inliers = 0;
  double error_sum = 0.0;

  double Mean() const {
    return inliers == 0 ? std::numeric_limits<double>::infinity()
                        : error_sum / static_cast<double>(inliers);
  }
  bool BetterThan(const Score& other) const {
    if (inliers != other.inliers) return inliers > other.inliers;
    return Mean() < other.Mean();
  }
};

Score Evaluate(const Homography& h, std::span<const MatchPair> pairs,
               double threshold, std::vector<std::size_t>* inliers) {
  Score score;
  if (inliers) inliers->clear();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double err = ReprojectionError(h, pairs[i]);
    if (err <= threshold) {
      ++score.inliers;
      score.error_sum += err;
      if (inliers) inliers->push_back(i);
    }
  }
  return score;
}

}  // namespace

Homography::Homography(const Eigen::Matrix3d& m) : h_(Normalized(m)) {
  if (!IsInvertible(h_)) {
    throw Error(ErrorCode::kDegenerateConfiguration, "singular homography");
  }
}

Homography Homography::Translation(double du, double dv) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 2) = du;
  m(1, 2) = dv;
  return Homography(m);
}

Homography Homography::Inverse() const { return Homography(h_.inverse()); }

PixelPoint Apply(const Homography& h, PixelPoint p) {
  const Eigen::Matrix3d& m = h.matrix();
  const double w = m(2, 0) * p.u + m(2, 1) * p.v + m(2, 2);
  if (!(std::abs(w) > kMinW)) {
    throw Error(ErrorCode::kPointAtInfinity, "point maps to infinity");
  }
  return {(m(0, 0) * p.u + m(0, 1) * p.v + m(0, 2)) / w,
          (m(1, 0) * p.u + m(1, 1) * p.v + m(1, 2)) / w};
}

double ReprojectionError(const Homography& h, const MatchPair& pair) {
  const Eigen::Matrix3d& m = h.matrix();
  const PixelPoint& p = pair.image_pt;
  const double w = m(2, 0) * p.u + m(2, 1) * p.v + m(2, 2);
  if (!(std::abs(w) > kMinW)) return std::numeric_limits<double>::infinity();
  const double u = (m(0, 0) * p.u + m(0, 1) * p.v + m(0, 2)) / w;
  const double v = (m(1, 0) * p.u + m(1, 1) * p.v + m(1, 2)) / w;
  return std::hypot(u - pair.basemap_pt.u, v - pair.basemap_pt.v);
}

Homography Dlt(std::span<const MatchPair> pairs) {
  if (pairs.size() < 4) {
    throw Error(ErrorCode::kInsufficientMatches,
                "DLT needs at least 4 pairs, got " +
                    std::to_string(pairs.size()));
  }
  auto h = TryDlt(pairs);
  if (!h) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "collinear, coincident or rank-deficient correspondences");
  }
  return *h;
}

void RansacConfig::Validate() const {
  if (max_iters < 1 || !(inlier_threshold_px > 0.0) || min_inliers < 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "RANSAC needs max_iters >= 1, threshold > 0, min_inliers >= 4");
  }
}

HomographyEstimate RansacEstimate(std::span<const MatchPair> pairs,
                                  const RansacConfig& cfg) {
  cfg.Validate();
  if (pairs.size() < 4) {
    throw Error(ErrorCode::kInsufficientMatches,
                "RANSAC needs at least 4 pairs, got " +
                    std::to_string(pairs.size()));
  }

  std::optional<Homography> best_h;
  Score best;
  std::array<MatchPair, 4> sample;
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    std::mt19937_64 rng(
        SplitMix64(cfg.seed ^ SplitMix64(static_cast<std::uint64_t>(iter))));
    std::array<std::size_t, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      bool fresh = false;
      while (!fresh) {
        idx[k] = pick(rng);
        fresh = std::find(idx.begin(), idx.begin() + k, idx[k]) ==
                idx.begin() + k;
      }
      sample[k] = pairs[idx[k]];
    }
    const auto h = TryDlt(sample);
    if (!h) continue;
    const Score score = Evaluate(*h, pairs, cfg.inlier_threshold_px, nullptr);
    if (!best_h || score.BetterThan(best)) {
      best_h = h;
      best = score;
    }
  }
  if (!best_h || best.inliers < 4) {
    throw Error(ErrorCode::kNoConsensus, "no non-degenerate hypothesis");
  }

  std::vector<std::size_t> inliers;
  Evaluate(*best_h, pairs, cfg.inlier_threshold_px, &inliers);
  Homography h = *best_h;
  for (int round = 0; round < 3; ++round) {
    std::vector<MatchPair> support;
    support.reserve(inliers.size());
    for (std::size_t i : inliers) support.push_back(pairs[i]);
    const auto refit = TryDlt(support);
    if (!refit) break;
    std::vector<std::size_t> refit_inliers;
    const Score refit_score =
        Evaluate(*refit, pairs, cfg.inlier_threshold_px, &refit_inliers);
    if (refit_score.inliers < inliers.size()) break;
    h = *refit;
    const bool stable = refit_inliers == inliers;
    inliers = std::move(refit_inliers);
    if (stable) break;
  }

  const Score final_score = Evaluate(h, pairs, cfg.inlier_threshold_px, &inliers);
  if (final_score.inliers < static_cast<std::size_t>(cfg.min_inliers)) {
    throw Error(ErrorCode::kNoConsensus,
                "best model has " + std::to_string(final_score.inliers) +
                    " inliers, need " + std::to_string(cfg.min_inliers));
  }
  return {h, std::move(inliers), final_score.Mean()};
}

}  // namespace geofix
