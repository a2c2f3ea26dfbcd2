#pragma once

#include <string>
#include <vector>

#include "realdyn/families.hpp"
#include "realdyn/orbits.hpp"

namespace realdyn {

/// Directions sigma in {+1, -1} along which some probed orbit escapes and |f(sigma x)| grows.
/// 64 starting points are probed, so the result may miss directions.
std::vector<int> escaping_directions(const FamilyMap& f, const Budget& budget = {});

struct SectorSample {
    int sigma = 1;
    double x = 0.0;
    double y = 0.0;
    double ratio = 0.0;  // NaN for rejected samples
};

struct SectorDirection {
    int sigma = 1;
    bool holds = true;
    double max_ratio = 0.0;
    double argmax_x = 0.0;
    double argmax_y = 0.0;
    int samples = 0;
    int rejected = 0;
    /// Log-derivative test: smallest K satisfied by every accepted sample.
    double min_k = 0.0;
    /// Geometric test: smallest modulus found.
    double min_modulus = 0.0;
};

struct SectorReport {
    enum class Test { LogDerivative, Geometric };
    Test test = Test::LogDerivative;
    std::vector<int> sigma;
    std::vector<SectorDirection> directions;
    /// Samples with ratio > 1 and rejected samples (log|f| <= 0 or overflow).
    std::vector<SectorSample> violations;

    double k = 0.0, r = 0.0, x_max = 0.0;
    int n = 0;
    double m = 0.0, theta = 0.0, x0 = 0.0, x_cap = 0.0;
    int grid = 0;

    /// Vacuously true when sigma is empty.
    bool holds() const;
};

/// |f'(sx)|/|f(sx)| <= K log|f(sx)| / x at n geometric samples of [r, x_max].
/// ratio = LHS / RHS.
SectorReport check_log_derivative(const FamilyMap& f, double k, double r, double x_max, int n = 10000,
                                  const Budget& budget = {});

/// |f(sx + iy)| > M on a grid x grid sample of {x0 <= x <= x_cap, |y| <= theta x};
/// ratio = M / |f|. x_cap <= 0 selects 1000 x0.
SectorReport check_sector_geometric(const FamilyMap& f, double m, double theta, double x0, int grid = 64,
                                    double x_cap = 0.0, const Budget& budget = {});

std::string format_sector_report(const SectorReport& report);
std::string sector_violations_csv(const SectorReport& report);

}  // namespace realdyn
