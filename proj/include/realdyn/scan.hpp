#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "realdyn/families.hpp"
#include "realdyn/orbits.hpp"

namespace realdyn {

enum class Palette { Gray, Color };

/// Parameter-plane raster: parameter u_param varies along columns, v_param along rows.
struct ScanSpec {
    FamilyMap family = FamilyMap::cosine(1.0, 0.0);
    std::string u_param;
    std::string v_param;
    double u_min = 0.0;
    double u_max = 1.0;
    double v_min = 0.0;
    double v_max = 1.0;
    int width = 1;
    int height = 1;
    Budget budget;
    Palette palette = Palette::Gray;
    /// Draws the image row containing this v value in grey.
    std::optional<double> overlay_v;

    /// Throws SpecError.
    void validate() const;
};

/// key=value text: the family keys (kind, D, m, mu, a, b, P, Q, c, x0), then
/// u_param v_param u_min u_max v_min v_max width height palette overlay_v and
/// the budget keys max_iter cycle_eps tol_hyp tol_par escape_confirm max_period.
ScanSpec parse_scan_spec(std::string_view text);
std::string format_scan_spec(const ScanSpec& spec);

/// Center of column i (or row j) out of n: lo + (hi - lo) (2i + 1) / (2n).
double cell_center(double lo, double hi, int n, int i);
/// Index of the cell containing value, or -1 outside [lo, hi).
int cell_containing(double lo, double hi, int n, double value);

/// Cell classes; Invalid marks parameters rejected by the family.
enum class CellClass : std::uint8_t { Hyperbolic, RealHyperbolic, NotDecided, CandidateNonHyperbolic, Invalid };

std::string_view to_string(CellClass c);
CellClass cell_class(MapClassTag tag);

struct FateSummary {
    FateTag tag = FateTag::Undecided;
    int period = 0;
    double point = 0.0;
    double multiplier = 0.0;
    EscapeDirection direction = EscapeDirection::Plus;
    UndecidedReason reason = UndecidedReason::Budget;
};

struct Cell {
    CellClass cls = CellClass::Invalid;
    int on_circle_critical = 0;  // trig lifts only
    std::vector<FateSummary> fates;
};

struct ScanResult {
    ScanSpec spec;
    /// Row-major, row j = 0 at v_min.
    std::vector<Cell> cells;
    unsigned workers = 1;
    double seconds = 0.0;

    const Cell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * spec.width + i]; }
    FamilyMap family_at(int i, int j) const;
};

Cell classify_cell(const ScanSpec& spec, double u, double v);

/// workers = 0 picks the hardware concurrency.
ScanResult run_scan(const ScanSpec& spec, unsigned workers = 0);

std::uint8_t gray_level(CellClass c);

/// Binary P5, top row at v_max.
std::string export_pgm(const ScanResult& r);
/// Binary P6.
std::string export_ppm(const ScanResult& r);
/// Header i,j,u,v,class,on_circle_critical,fates.
std::string export_csv(const ScanResult& r);

}  // namespace realdyn
