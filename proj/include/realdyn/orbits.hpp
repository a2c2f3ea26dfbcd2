#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "realdyn/families.hpp"

namespace realdyn {

struct Budget {
    std::int64_t max_iter = 100000;
    double cycle_eps = 1e-9;
    double tol_hyp = 1e-6;
    double tol_par = 1e-6;
    int escape_confirm = 20;
    int max_period = 256;

    /// Throws InvalidParameter on nonsensical values.
    void validate() const;
};

/// Samples x0, f(x0), ... Trig lifts are iterated on R/Z, so their samples lie in [0,1).
struct Orbit {
    std::vector<double> points;
    int overflow_sign = 0;  // sign of the first overflowing image, which is not stored
};

Orbit iterate(const FamilyMap& f, double x0, std::int64_t n);

struct DetectedCycle {
    int period = 0;
    double representative = 0.0;
};

/// Smallest p <= max_period whose last three p-blocks each repeat the block
/// before them to within eps. Circle orbits compare distances mod 1.
std::optional<DetectedCycle> detect_cycle(std::span<const double> orbit, double eps, int max_period = 256,
                                          bool circle = false);

struct CycleCandidate {
    int period = 0;
    std::vector<double> points;
    double multiplier = 0.0;
    double residual = 0.0;
};

/// Newton refinement of a period-p orbit through x, reduced to its minimal
/// period. Throws RefinementFailed after 64 steps without convergence.
CycleCandidate refine_cycle(const FamilyMap& f, double x, int period);

enum class FateTag { Attracted, Parabolic, Escaping, Undecided };
enum class EscapeDirection { Plus, Minus, Alternating };
enum class UndecidedReason { Budget, NearNeutral, NonConvergentRecurrence, UndeterminedValue };

std::string_view to_string(FateTag tag);
std::string_view to_string(EscapeDirection dir);
std::string_view to_string(UndecidedReason reason);

struct SingularFate {
    FateTag tag = FateTag::Undecided;
    std::optional<CycleCandidate> cycle;            // Attracted, Parabolic
    EscapeDirection direction = EscapeDirection::Plus;  // Escaping
    UndecidedReason reason = UndecidedReason::Budget;  // Undecided
    std::int64_t iterations = 0;
};

/// Radii beyond which |f(x)| > |x| + 1 holds along +inf and -inf (infinite when it never does).
struct EscapeRadii {
    double plus = 0.0;
    double minus = 0.0;
};

EscapeRadii escape_radii(const FamilyMap& f);
/// Same, reusing already computed singular values.
EscapeRadii escape_radii(const FamilyMap& f, std::span<const SingularValueInfo> values);

SingularFate classify_singular_orbit(const FamilyMap& f, double v, const Budget& budget = {});
SingularFate classify_singular_orbit(const FamilyMap& f, double v, const Budget& budget, const EscapeRadii& radii);

struct OrbitJob {
    const FamilyMap* map = nullptr;
    double value = 0.0;  // non-finite values are reported as undetermined
    EscapeRadii radii;
};

/// Classifies many orbits in lockstep; each fate is independent of the other jobs.
std::vector<SingularFate> classify_orbits(std::span<const OrbitJob> jobs, const Budget& budget = {});

enum class MapClassTag { Hyperbolic, RealHyperbolic, NotDecided, CandidateNonHyperbolic };

std::string_view to_string(MapClassTag tag);

struct MapClass {
    MapClassTag tag = MapClassTag::NotDecided;
    std::vector<SingularValueInfo> singular_values;
    std::vector<SingularFate> fates;  // aligned with singular_values
};

/// Parabolic fates take precedence (CandidateNonHyperbolic), then Undecided
/// (NotDecided); otherwise Hyperbolic when every fate is Attracted and
/// RealHyperbolic when the rest escape.
MapClassTag aggregate(std::span<const SingularFate> fates);

MapClass classify_map(const FamilyMap& f, const Budget& budget = {});

}  // namespace realdyn
