#include "dualgeo/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dualgeo {

std::vector<Point> sample_points(int m, int r, int count, std::uint64_t seed, const SamplingBox& box) {
  if (count <= 0) throw std::invalid_argument("sample count must be positive");
  if (!(box.p_min >= 0.0 && box.p_max > box.p_min)) throw std::invalid_argument("empty momentum shell");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Point> pts;
  pts.reserve(count);
  for (int s = 0; s < count; ++s) {
    Point pt;
    pt.x.resize(m);
    for (double& xi : pt.x) xi = box.x_half_width * (2.0 * unit(rng) - 1.0);
    pt.p.resize(r);
    if (r > 0) {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (double& pa : pt.p) {
          pa = gauss(rng);
          norm += pa * pa;
        }
        norm = std::sqrt(norm);
      } while (norm == 0.0);
      // Radius with density proportional to rho^(r-1) on [p_min, p_max].
      const double lo = std::pow(box.p_min, r), hi = std::pow(box.p_max, r);
      const double radius = std::pow(lo + unit(rng) * (hi - lo), 1.0 / r);
      for (double& pa : pt.p) pa *= radius / norm;
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

}  // namespace dualgeo
