#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "realdyn/families.hpp"
#include "realdyn/orbits.hpp"

namespace realdyn {

inline constexpr double kDefaultSnap = 1e-10;

/// I_j is the gap just below the critical point C_j. ESC+/ESC- end an itinerary.
struct Symbol {
    enum class Type { Interval, Critical, EscapePlus, EscapeMinus };
    Type type = Type::Interval;
    std::int64_t index = 0;

    /// Position in the order ... < I_j < C_j < I_{j+1} < ...
    std::int64_t ordinal() const;
    friend bool operator==(const Symbol&, const Symbol&) = default;
};

std::string to_string(const Symbol& s);

/// Partition of the phase space by the real critical points.
/// Cosine: c_k = pi/2 - phi + k pi over Z, with a sin x + b cos x = R sin(x + phi).
/// Trig lifts: the n critical points in [0,1) cut R/Z into n arcs, I_0 wrapping through 0.
/// Other kinds: finitely many points c_0 < ... < c_{n-1}, with I_0 = (-inf, c_0).
class PartitionR {
public:
    static PartitionR of(const FamilyMap& f);

    Symbol symbol_of(double x, double snap = kDefaultSnap) const;
    /// Distance from x to the nearest critical point (infinite when there is none).
    double distance_to_critical(double x) const;

    bool periodic() const { return periodic_; }
    bool circle() const { return circle_; }
    /// Critical points per period, or in total for non-periodic kinds.
    std::size_t size() const { return points_.size(); }
    const std::vector<double>& points() const { return points_; }

private:
    std::vector<double> points_;  // Cosine: just c_0
    double period_ = 0.0;
    bool periodic_ = false;
    bool circle_ = false;
};

struct Itinerary {
    std::vector<Symbol> symbols;
    int depth = 0;
    /// Some orbit point came within 2 snap of a critical point.
    bool snap_fragile = false;
};

Itinerary itinerary(const FamilyMap& f, double x, int depth, double snap = kDefaultSnap);

struct KneadingEntry {
    double value = 0.0;
    SingularFate fate;
    Itinerary itinerary;
};

struct KneadingData {
    FamilyKind kind = FamilyKind::Cosine;
    std::size_t critical_count = 0;
    std::vector<KneadingEntry> entries;  // singular values ascending
};

KneadingData kneading(const FamilyMap& f, int depth, const Budget& budget = {}, double snap = kDefaultSnap);

/// Index correspondence standing in for the pair of conjugacies: entry j of the
/// first kneading data corresponds to entry values[j] of the second, and
/// critical index i to i + symbol_shift (mod n on the circle).
struct Marking {
    std::vector<std::size_t> values;
    std::int64_t symbol_shift = 0;

    static Marking identity(std::size_t n);
};

/// Throws InvalidMarking unless the marking preserves the (cyclic) order.
bool kneading_equal(const KneadingData& k1, const KneadingData& k2, const Marking& marking);

/// Marking induced by the rotation t -> t + beta that conjugates f to g.
Marking induced_rotation_marking(const FamilyMap& f, const FamilyMap& g, double beta);

char fate_flag(FateTag tag);
/// One line per singular value: a flag letter (A, P, E, U) then the symbols.
std::string format_kneading(const KneadingData& k);

}  // namespace realdyn
