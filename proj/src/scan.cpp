#include "realdyn/scan.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <span>
#include <set>
#include <sstream>
#include <thread>

#include "realdyn/error.hpp"
#include "realdyn/text_format.hpp"

namespace realdyn {

namespace {

void spec_error(const std::string& what) { throw Error(ErrorCode::SpecError, what); }

const std::set<std::string, std::less<>> kFamilyKeys = {"kind", "D", "m", "mu", "a", "b", "P", "Q", "c", "x0"};

constexpr std::uint8_t kOverlay = 160;

}  // namespace

void ScanSpec::validate() const
{
    if (width < 1 || height < 1)
        spec_error("width and height must be >= 1");
    for (double v : {u_min, u_max, v_min, v_max}) {
        if (!std::isfinite(v))
            spec_error("scan rectangle must be finite");
    }
    if (!(u_min < u_max) || !(v_min < v_max))
        spec_error("scan rectangle must be nondegenerate");
    const auto names = family.parameter_names();
    for (const auto* p : {&u_param, &v_param}) {
        if (std::find(names.begin(), names.end(), *p) == names.end())
            spec_error("unknown axis parameter '" + *p + "' for " + std::string(to_string(family.kind())));
    }
    if (u_param == v_param)
        spec_error("u_param and v_param must differ");
    try {
        budget.validate();
    } catch (const Error& e) {
        spec_error(e.what());
    }
}

ScanSpec parse_scan_spec(std::string_view text)
{
    Assignments family_kv;
    ScanSpec spec;
    std::set<std::string> seen;
    const auto number = [](const std::string& key, const std::string& value) {
        try {
            return parse_number(value);
        } catch (const Error&) {
            spec_error("bad number for " + key + ": '" + value + "'");
        }
        return 0.0;
    };
    const auto integer = [&](const std::string& key, const std::string& value) {
        const double d = number(key, value);
        if (d != std::floor(d) || std::abs(d) > 1e15)
            spec_error(key + " must be an integer");
        return static_cast<std::int64_t>(d);
    };

    Assignments kv;
    try {
        kv = parse_assignments(text);
    } catch (const Error& e) {
        spec_error(e.what());
    }
    for (const auto& [key, value] : kv) {
        seen.insert(key);
        if (kFamilyKeys.count(key)) {
            family_kv.emplace_back(key, value);
        } else if (key == "u_param") {
            spec.u_param = value;
        } else if (key == "v_param") {
            spec.v_param = value;
        } else if (key == "u_min") {
            spec.u_min = number(key, value);
        } else if (key == "u_max") {
            spec.u_max = number(key, value);
        } else if (key == "v_min") {
            spec.v_min = number(key, value);
        } else if (key == "v_max") {
            spec.v_max = number(key, value);
        } else if (key == "width") {
            spec.width = static_cast<int>(std::clamp<std::int64_t>(integer(key, value), -1, 1 << 20));
        } else if (key == "height") {
            spec.height = static_cast<int>(std::clamp<std::int64_t>(integer(key, value), -1, 1 << 20));
        } else if (key == "palette") {
            if (value == "gray" || value == "grey")
                spec.palette = Palette::Gray;
            else if (value == "color" || value == "colour")
                spec.palette = Palette::Color;
            else
                spec_error("unknown palette '" + value + "'");
        } else if (key == "overlay_v") {
            spec.overlay_v = number(key, value);
        } else if (key == "max_iter") {
            spec.budget.max_iter = integer(key, value);
        } else if (key == "cycle_eps") {
            spec.budget.cycle_eps = number(key, value);
        } else if (key == "tol_hyp") {
            spec.budget.tol_hyp = number(key, value);
        } else if (key == "tol_par") {
            spec.budget.tol_par = number(key, value);
        } else if (key == "escape_confirm") {
            spec.budget.escape_confirm = static_cast<int>(std::clamp<std::int64_t>(integer(key, value), 0, 1 << 30));
        } else if (key == "max_period") {
            spec.budget.max_period = static_cast<int>(std::clamp<std::int64_t>(integer(key, value), 0, 1 << 20));
        } else {
            spec_error("unknown scan spec key '" + key + "'");
        }
    }
    for (const char* required : {"kind", "u_param", "v_param", "u_min", "u_max", "v_min", "v_max", "width", "height"}) {
        if (!seen.count(required))
            spec_error(std::string("scan spec is missing '") + required + "'");
    }
    try {
        spec.family = family_from_assignments(family_kv);
    } catch (const Error& e) {
        spec_error(e.what());
    }
    spec.validate();
    return spec;
}

std::string format_scan_spec(const ScanSpec& s)
{
    std::ostringstream out;
    out << format_family(s.family) << '\n'
        << "u_param=" << s.u_param << " u_min=" << format_number(s.u_min) << " u_max=" << format_number(s.u_max) << '\n'
        << "v_param=" << s.v_param << " v_min=" << format_number(s.v_min) << " v_max=" << format_number(s.v_max) << '\n'
        << "width=" << s.width << " height=" << s.height << '\n'
        << "max_iter=" << s.budget.max_iter << " cycle_eps=" << format_number(s.budget.cycle_eps)
        << " tol_hyp=" << format_number(s.budget.tol_hyp) << " tol_par=" << format_number(s.budget.tol_par)
        << " escape_confirm=" << s.budget.escape_confirm << " max_period=" << s.budget.max_period << '\n'
        << "palette=" << (s.palette == Palette::Gray ? "gray" : "color") << '\n';
    if (s.overlay_v)
        out << "overlay_v=" << format_number(*s.overlay_v) << '\n';
    return out.str();
}

double cell_center(double lo, double hi, int n, int i)
{
    // The fraction is a single correctly rounded division, so a 3x finer grid
    // reproduces the coarse centers bit for bit.
    const double t = static_cast<double>(2 * static_cast<std::int64_t>(i) + 1) / static_cast<double>(2 * static_cast<std::int64_t>(n));
    return lo + (hi - lo) * t;
}

int cell_containing(double lo, double hi, int n, double value)
{
    if (!(value >= lo) || !(value < hi))
        return -1;
    const auto i = static_cast<int>(std::floor((value - lo) / (hi - lo) * n));
    return std::clamp(i, 0, n - 1);
}

std::string_view to_string(CellClass c)
{
    switch (c) {
    case CellClass::Hyperbolic: return "hyperbolic";
    case CellClass::RealHyperbolic: return "real-hyperbolic";
    case CellClass::NotDecided: return "not-decided";
    case CellClass::CandidateNonHyperbolic: return "candidate-non-hyperbolic";
    case CellClass::Invalid: return "invalid";
    }
    return "?";
}

CellClass cell_class(MapClassTag tag)
{
    switch (tag) {
    case MapClassTag::Hyperbolic: return CellClass::Hyperbolic;
    case MapClassTag::RealHyperbolic: return CellClass::RealHyperbolic;
    case MapClassTag::NotDecided: return CellClass::NotDecided;
    case MapClassTag::CandidateNonHyperbolic: return CellClass::CandidateNonHyperbolic;
    }
    return CellClass::Invalid;
}

FamilyMap ScanResult::family_at(int i, int j) const
{
    return spec.family.with_parameter(spec.u_param, cell_center(spec.u_min, spec.u_max, spec.width, i))
        .with_parameter(spec.v_param, cell_center(spec.v_min, spec.v_max, spec.height, j));
}

namespace {

// Classifies one row of cells; all singular orbits of the row share one
// lockstep batch.
std::vector<Cell> classify_row(const ScanSpec& spec, std::span<const double> us, double v)
{
    struct Pending {
        std::optional<FamilyMap> map;
        std::vector<SingularValueInfo> values;
        EscapeRadii radii;
    };
    std::vector<Pending> pending(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
        try {
            auto f = spec.family.with_parameter(spec.u_param, us[i]).with_parameter(spec.v_param, v);
            pending[i].values = singular_values(f);
            pending[i].radii = escape_radii(f, pending[i].values);
            pending[i].map = std::move(f);
        } catch (const Error&) {
            pending[i].map.reset();
        }
    }
    std::vector<OrbitJob> jobs;
    for (const auto& p : pending) {
        if (!p.map)
            continue;
        for (const auto& sv : p.values)
            jobs.push_back({&*p.map, sv.determined ? sv.value : std::numeric_limits<double>::quiet_NaN(), p.radii});
    }
    const auto fates = classify_orbits(jobs, spec.budget);

    std::vector<Cell> cells(us.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < us.size(); ++i) {
        const auto& p = pending[i];
        if (!p.map)
            continue;
        auto& cell = cells[i];
        const std::span<const SingularFate> mine(fates.data() + next, p.values.size());
        next += p.values.size();
        cell.cls = cell_class(aggregate(mine));
        for (const auto& sv : p.values)
            cell.on_circle_critical += p.map->circle_map() && sv.on_circle ? sv.multiplicity : 0;
        for (const auto& fate : mine) {
            FateSummary s;
            s.tag = fate.tag;
            s.direction = fate.direction;
            s.reason = fate.reason;
            if (fate.cycle) {
                s.period = fate.cycle->period;
                s.point = fate.cycle->points.front();
                s.multiplier = fate.cycle->multiplier;
            }
            cell.fates.push_back(s);
        }
    }
    return cells;
}

}  // namespace

Cell classify_cell(const ScanSpec& spec, double u, double v)
{
    const double us[] = {u};
    return classify_row(spec, us, v).front();
}

ScanResult run_scan(const ScanSpec& spec, unsigned workers)
{
    spec.validate();
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(spec.height));

    const auto start = std::chrono::steady_clock::now();
    ScanResult r;
    r.spec = spec;
    r.workers = workers;
    r.cells.resize(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height));
    std::vector<double> us;
    for (int i = 0; i < spec.width; ++i)
        us.push_back(cell_center(spec.u_min, spec.u_max, spec.width, i));

    // Rows are dealt round-robin; every cell is written by exactly one worker.
    const auto work = [&](unsigned w) {
        for (int j = static_cast<int>(w); j < spec.height; j += static_cast<int>(workers)) {
            auto row = classify_row(spec, us, cell_center(spec.v_min, spec.v_max, spec.height, j));
            std::move(row.begin(), row.end(), r.cells.begin() + static_cast<std::ptrdiff_t>(j) * spec.width);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::uint8_t gray_level(CellClass c)
{
    switch (c) {
    case CellClass::Hyperbolic: return 255;
    case CellClass::RealHyperbolic: return 220;
    case CellClass::NotDecided: return 128;
    case CellClass::CandidateNonHyperbolic: return 64;
    case CellClass::Invalid: return 0;
    }
    return 0;
}

namespace {

using Rgb = std::array<std::uint8_t, 3>;

Rgb color_of(CellClass c, Palette p)
{
    if (p == Palette::Gray) {
        const auto g = gray_level(c);
        return {g, g, g};
    }
    switch (c) {
    case CellClass::Hyperbolic: return {255, 255, 255};
    case CellClass::RealHyperbolic: return {255, 224, 160};
    case CellClass::NotDecided: return {96, 96, 160};
    case CellClass::CandidateNonHyperbolic: return {192, 32, 32};
    case CellClass::Invalid: return {0, 0, 0};
    }
    return {0, 0, 0};
}

int overlay_row(const ScanSpec& s)
{
    return s.overlay_v ? cell_containing(s.v_min, s.v_max, s.height, *s.overlay_v) : -1;
}

std::string header(const char* magic, const ScanSpec& s)
{
    return std::string(magic) + "\n" + std::to_string(s.width) + " " + std::to_string(s.height) + "\n255\n";
}

}  // namespace

std::string export_pgm(const ScanResult& r)
{
    const auto& s = r.spec;
    std::string out = header("P5", s);
    const int overlay = overlay_row(s);
    for (int j = s.height - 1; j >= 0; --j) {
        for (int i = 0; i < s.width; ++i)
            out.push_back(static_cast<char>(j == overlay ? kOverlay : gray_level(r.at(i, j).cls)));
    }
    return out;
}

std::string export_ppm(const ScanResult& r)
{
    const auto& s = r.spec;
    std::string out = header("P6", s);
    const int overlay = overlay_row(s);
    for (int j = s.height - 1; j >= 0; --j) {
        for (int i = 0; i < s.width; ++i) {
            const Rgb c = j == overlay ? Rgb{kOverlay, kOverlay, kOverlay} : color_of(r.at(i, j).cls, s.palette);
            out.append(reinterpret_cast<const char*>(c.data()), c.size());
        }
    }
    return out;
}

std::string export_csv(const ScanResult& r)
{
    const auto& s = r.spec;
    std::ostringstream out;
    out << "i,j,u,v,class,on_circle_critical,fates\n";
    for (int j = 0; j < s.height; ++j) {
        const double v = cell_center(s.v_min, s.v_max, s.height, j);
        for (int i = 0; i < s.width; ++i) {
            const auto& cell = r.at(i, j);
            out << i << ',' << j << ',' << format_number(cell_center(s.u_min, s.u_max, s.width, i)) << ','
                << format_number(v) << ',' << to_string(cell.cls) << ',' << cell.on_circle_critical << ',';
            for (std::size_t k = 0; k < cell.fates.size(); ++k) {
                const auto& f = cell.fates[k];
                out << (k ? ";" : "") << to_string(f.tag);
                if (f.tag == FateTag::Attracted || f.tag == FateTag::Parabolic)
                    out << ":p=" << f.period << ":x=" << format_number(f.point) << ":m=" << format_number(f.multiplier);
                else if (f.tag == FateTag::Escaping)
                    out << ':' << to_string(f.direction);
                else
                    out << ':' << to_string(f.reason);
            }
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace realdyn
