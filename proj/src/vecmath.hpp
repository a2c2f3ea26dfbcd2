#pragma once

// Lane-parallel elementary functions for the orbit classifier. Every lane is
// computed independently, so a value never depends on its neighbours.

namespace realdyn::detail {

inline constexpr int kLanes = 8;

void sin_lanes(const double* in, double* out);
void cos_lanes(const double* in, double* out);
void exp_lanes(const double* in, double* out);

/// Name of the implementation in use ("libmvec-avx2" or "scalar").
const char* lane_backend();

}  // namespace realdyn::detail
