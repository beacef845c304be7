#include "growthlab/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace growthlab {

double lambda_of(int m, double alpha) {
  if (m < 1) throw std::invalid_argument("lambda_of: m must be >= 1");
  if (alpha <= 0) throw std::invalid_argument("lambda_of: alpha must be > 0");
  return (m + alpha * m - 1.0) / (m + 1.0);
}

double sigma_of(int m, double alpha) {
  const double sl = std::sqrt(lambda_of(m, alpha));
  if (sl <= 1.0) throw std::invalid_argument("sigma_of: requires lambda > 1");
  return 2.0 * m * sl / (sl - 1.0);
}

void ContinuumConfig::validate() const {
  if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
  if (m <= 2.0 / alpha) throw std::invalid_argument("m must exceed 2/alpha");
  if (alpha_bar <= alpha) throw std::invalid_argument("alpha_bar must exceed alpha");
}

Triple initial_triple(const ContinuumConfig& config) {
  if (config.alpha <= 0) throw std::invalid_argument("alpha must be > 0");
  if (config.m <= 2.0 / config.alpha) {
    throw std::invalid_argument("initial_triple: m must exceed 2/alpha (h would be <= 0)");
  }
  const double h =
      (config.m * config.alpha / 2.0 - 1.0) / (config.m + 1.0);
  return Triple{1.0, config.alpha / 2.0, h};
}

Triple advance_triple(const Triple& t, const ContinuumConfig& config) {
  const double m = config.m;
  const double scale = std::max({std::abs(t.f), std::abs(t.g), 1.0});
  if (std::abs(m * (t.g - t.h) - (t.f + t.h)) > 1e-9 * scale) {
    throw std::invalid_argument("advance_triple: input violates m(g-h) = f+h");
  }
  const double f = t.f + 2.0 * t.h;
  const double g = t.g + config.alpha * t.h;
  const double h = (m * g - f) / (m + 1.0);
  return Triple{f, g, h};
}

std::vector<Segment> canonical_blue_block(const Triple& t, int m) {
  std::vector<Segment> segs;
  segs.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    segs.push_back({static_cast<double>(k), (k - 1) * t.g - k * t.h,
                    k * t.g - k * t.h});
  }
  return segs;
}

namespace {

double dist_to_interval(double x, double lo, double hi) {
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0.0;
}

}  // namespace

BreakthroughResult breakthrough(std::span<const Segment> obstacles,
                                const Segment& red0, double alpha) {
  if (alpha <= 0) throw std::invalid_argument("breakthrough: alpha must be > 0");
  if (red0.left > red0.right) {
    throw std::invalid_argument("breakthrough: malformed red segment");
  }
  if (obstacles.empty()) {
    return {0.0, red0.left, red0.right};
  }

  // Group segments by level, bottom to top. Band i lives between level i-1
  // and level i; band `levels.size()` is above everything.
  std::map<double, std::vector<const Segment*>> by_level;
  for (const Segment& s : obstacles) {
    if (s.level <= red0.level) {
      throw std::invalid_argument("breakthrough: obstacles must sit above red0");
    }
    if (s.left > s.right) {
      throw std::invalid_argument("breakthrough: malformed obstacle segment");
    }
    by_level[s.level].push_back(&s);
  }

  // Candidate x set: every segment endpoint plus red0's endpoints. Optimal
  // crossing points clamp onto gap endpoints or carry over a previous
  // candidate, so this grid is exact (no discretization).
  std::vector<double> xs{red0.left, red0.right};
  for (const Segment& s : obstacles) {
    xs.push_back(s.left);
    xs.push_back(s.right);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const std::size_t nx = xs.size();
  const std::size_t nbands = by_level.size() + 1;

  // blocked[l][j]: x_j lies strictly inside a segment of level-index l.
  std::vector<std::vector<bool>> blocked(by_level.size(),
                                         std::vector<bool>(nx, false));
  {
    std::size_t l = 0;
    for (const auto& [lvl, segs] : by_level) {
      for (const Segment* s : segs) {
        for (std::size_t j = 0; j < nx; ++j) {
          if (xs[j] > s->left && xs[j] < s->right) blocked[l][j] = true;
        }
      }
      ++l;
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(nbands, std::vector<double>(nx, inf));
  using Node = std::pair<double, std::size_t>;  // (cost, band*nx + j)
  std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
  for (std::size_t j = 0; j < nx; ++j) {
    dist[0][j] = alpha * dist_to_interval(xs[j], red0.left, red0.right);
    pq.push({dist[0][j], j});
  }
  while (!pq.empty()) {
    const auto [d, code] = pq.top();
    pq.pop();
    const std::size_t band = code / nx;
    const std::size_t j = code % nx;
    if (d > dist[band][j]) continue;
    const auto relax = [&](std::size_t b2, std::size_t j2, double nd) {
      if (nd < dist[b2][j2]) {
        dist[b2][j2] = nd;
        pq.push({nd, b2 * nx + j2});
      }
    };
    // Horizontal moves within the band (neighbor hops compose to any |dx|).
    if (j > 0) relax(band, j - 1, d + alpha * (xs[j] - xs[j - 1]));
    if (j + 1 < nx) relax(band, j + 1, d + alpha * (xs[j + 1] - xs[j]));
    // Free vertical crossing where no segment interior blocks this x.
    if (band + 1 < nbands && !blocked[band][j]) relax(band + 1, j, d);
    if (band > 0 && !blocked[band - 1][j]) relax(band - 1, j, d);
  }

  double best = inf;
  for (std::size_t j = 0; j < nx; ++j) best = std::min(best, dist[nbands - 1][j]);
  return {best, red0.left - best / alpha, red0.right + best / alpha};
}

}  // namespace growthlab
