#pragma once

#include <cstdint>
#include <vector>

#include "dualgeo/field.hpp"

namespace dualgeo {

// Radius of the excluded ball around the null section.
inline constexpr double kFiberEpsilon = 1e-3;

struct SamplingBox {
  double x_half_width = 1.0;
  double p_min = kFiberEpsilon;
  double p_max = 2.0;
};

// Deterministic sample: x uniform in the cube [-w, w]^m, p uniform (by volume)
// in the shell p_min <= |p| <= p_max.
std::vector<Point> sample_points(int m, int r, int count, std::uint64_t seed, const SamplingBox& box = {});

}  // namespace dualgeo
