#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "realdyn/families.hpp"

namespace realdyn {

struct RotationEstimate {
    double value = 0.0;
    /// 1/n for monotone lifts; infinite otherwise, where value only describes the orbit of t0.
    double error_bound = 0.0;
    std::int64_t n = 0;
    bool monotone = true;
};

/// True when F' does not change sign on the circle (every on-circle critical point has even multiplicity).
bool lift_is_monotone(const TrigPolynomial& poly);

/// (F^n(t0) - t0) / n for a degree-1 trig lift. Throws InvalidDegree when D != 1.
RotationEstimate rotation_number(const FamilyMap& f, double t0 = 0.0, std::int64_t n = 100000);

struct RotationInterval {
    double lower = 0.0;
    double upper = 0.0;
    std::int64_t n = 0;
    bool monotone = true;
};

inline constexpr int kEnvelopeGrid = 1 << 14;

/// Rotation numbers of the lower envelope min_{s>=t} F(s) and upper envelope max_{s<=t} F(s),
/// sampled on kEnvelopeGrid points plus the critical points and interpolated linearly.
RotationInterval rotation_interval(const FamilyMap& f, std::int64_t n = 100000);

struct TongueRow {
    double mu1 = 0.0;
    double mu2 = 0.0;
    RotationInterval interval;
};

/// Rotation intervals of the Arnol'd family t + mu1 + mu2 sin(2 pi t) on an n1 x n2 grid (endpoints included).
std::vector<TongueRow> tongue_scan(double mu1_lo, double mu1_hi, int n1, double mu2_lo, double mu2_hi, int n2,
                                   std::int64_t n = 10000);

/// Header mu1,mu2,rho_minus,rho_plus.
std::string tongue_csv(const std::vector<TongueRow>& rows);

}  // namespace realdyn
