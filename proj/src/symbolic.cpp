#include "realdyn/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/float128.hpp>

#include "realdyn/detail/closed_form.hpp"
#include "realdyn/error.hpp"

namespace realdyn {

namespace {

using Quad = boost::multiprecision::float128;

constexpr double kInf = std::numeric_limits<double>::infinity();

double circle_distance(double a, double b)
{
    const double d = std::abs(a - b);
    const double r = d - std::floor(d);
    return std::min(r, 1.0 - r);
}

double frac(double x)
{
    const double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

std::int64_t positive_mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

}  // namespace

std::int64_t Symbol::ordinal() const
{
    switch (type) {
    case Type::Interval: return 2 * index;
    case Type::Critical: return 2 * index + 1;
    case Type::EscapePlus: return std::numeric_limits<std::int64_t>::max();
    case Type::EscapeMinus: return std::numeric_limits<std::int64_t>::min();
    }
    return 0;
}

std::string to_string(const Symbol& s)
{
    switch (s.type) {
    case Symbol::Type::Interval: return "I" + std::to_string(s.index);
    case Symbol::Type::Critical: return "C" + std::to_string(s.index);
    case Symbol::Type::EscapePlus: return "ESC+";
    case Symbol::Type::EscapeMinus: return "ESC-";
    }
    return "?";
}

PartitionR PartitionR::of(const FamilyMap& f)
{
    PartitionR p;
    switch (f.kind()) {
    case FamilyKind::TrigLift: {
        p.circle_ = true;
        p.periodic_ = true;
        p.period_ = 1.0;
        for (const auto& c : critical_points_circle(f.trig()).on_circle)
            p.points_.push_back(frac(c.t));
        std::sort(p.points_.begin(), p.points_.end());
        break;
    }
    case FamilyKind::Cosine: {
        const auto& c = f.as<CosineParams>();
        p.periodic_ = true;
        p.period_ = std::numbers::pi;
        p.points_.push_back(std::numbers::pi / 2 - std::atan2(c.b, c.a));
        break;
    }
    case FamilyKind::StandardDeg: p.points_.push_back(-1.0); break;
    case FamilyKind::Exponential: break;
    case FamilyKind::IntegralPE:
        for (const auto& r : real_roots(f.as<IntegralPEParams>().p))
            p.points_.push_back(r.value.real());
        break;
    }
    return p;
}

Symbol PartitionR::symbol_of(double x, double snap) const
{
    using T = Symbol::Type;
    if (periodic_ && !circle_) {
        const double c0 = points_.front();
        const auto nearest = static_cast<std::int64_t>(std::nearbyint((x - c0) / period_));
        if (std::abs(x - (c0 + nearest * period_)) <= snap)
            return {T::Critical, nearest};
        return {T::Interval, static_cast<std::int64_t>(std::ceil((x - c0) / period_))};
    }
    if (circle_) {
        if (points_.empty())
            return {T::Interval, 0};
        const double t = frac(x);
        for (std::size_t j = 0; j < points_.size(); ++j) {
            if (circle_distance(t, points_[j]) <= snap)
                return {T::Critical, static_cast<std::int64_t>(j)};
        }
        const auto above = std::upper_bound(points_.begin(), points_.end(), t) - points_.begin();
        return {T::Interval, static_cast<std::int64_t>(above) % static_cast<std::int64_t>(points_.size())};
    }
    for (std::size_t j = 0; j < points_.size(); ++j) {
        if (std::abs(x - points_[j]) <= snap)
            return {T::Critical, static_cast<std::int64_t>(j)};
    }
    const auto above = std::upper_bound(points_.begin(), points_.end(), x) - points_.begin();
    return {T::Interval, static_cast<std::int64_t>(above)};
}

double PartitionR::distance_to_critical(double x) const
{
    if (points_.empty())
        return kInf;
    if (periodic_ && !circle_) {
        const double c0 = points_.front();
        const double k = std::nearbyint((x - c0) / period_);
        return std::abs(x - (c0 + k * period_));
    }
    double best = kInf;
    for (double c : points_)
        best = std::min(best, circle_ ? circle_distance(frac(x), c) : std::abs(x - c));
    return best;
}

namespace {

// Orbits are followed in quad precision so that conjugate maps keep identical
// itineraries at depths where double rounding would already have diverged.
Itinerary trace_itinerary(const FamilyMap& f, const PartitionR& partition, const EscapeRadii& radii, Quad x,
                          int depth, double snap)
{
    Itinerary it;
    it.depth = depth;
    const bool circle = f.circle_map();
    if (circle)
        x -= floor(x);
    for (int m = 0; m < depth; ++m) {
        const double xd = static_cast<double>(x);
        if (!circle) {
            const double r = xd < 0.0 ? radii.minus : radii.plus;
            if (!std::isfinite(xd) || std::abs(xd) >= r) {
                it.symbols.push_back({xd < 0.0 ? Symbol::Type::EscapeMinus : Symbol::Type::EscapePlus, 0});
                break;
            }
        }
        it.symbols.push_back(partition.symbol_of(xd, snap));
        if (partition.distance_to_critical(xd) <= 2.0 * snap)
            it.snap_fragile = true;
        if (m + 1 == depth)
            break;
        if (f.closed_form()) {
            x = detail::closed_form_derivative(f, x, 0);
            if (circle)
                x -= floor(x);
        } else {
            const auto r = eval(f, xd);
            x = r.overflowed() ? Quad(r.overflow * kInf) : Quad(r.value);
        }
    }
    return it;
}

// Critical values are recomputed from their source point in quad precision.
Quad seed_value(const FamilyMap& f, const SingularValueInfo& sv)
{
    if (!f.closed_form() || sv.kind != SingularKind::Critical || !std::isfinite(sv.source))
        return Quad(sv.value);
    Quad v = detail::closed_form_derivative(f, Quad(sv.source), 0);
    if (f.circle_map())
        v -= floor(v);
    return v;
}

}  // namespace

Itinerary itinerary(const FamilyMap& f, double x, int depth, double snap)
{
    if (depth < 0)
        throw Error(ErrorCode::InvalidParameter, "itinerary depth must be >= 0");
    if (!(snap > 0.0))
        throw Error(ErrorCode::InvalidParameter, "snap tolerance must be > 0");
    if (depth == 0)
        return {};
    return trace_itinerary(f, PartitionR::of(f), escape_radii(f), Quad(x), depth, snap);
}

KneadingData kneading(const FamilyMap& f, int depth, const Budget& budget, double snap)
{
    if (depth < 0)
        throw Error(ErrorCode::InvalidParameter, "kneading depth must be >= 0");
    if (!(snap > 0.0))
        throw Error(ErrorCode::InvalidParameter, "snap tolerance must be > 0");
    budget.validate();
    const auto partition = PartitionR::of(f);
    const auto values = singular_values(f);
    const auto radii = escape_radii(f);

    KneadingData k;
    k.kind = f.kind();
    k.critical_count = partition.size();
    for (const auto& sv : values) {
        KneadingEntry e;
        e.value = sv.value;
        if (!sv.determined) {
            e.fate.tag = FateTag::Undecided;
            e.fate.reason = UndecidedReason::UndeterminedValue;
            e.itinerary.depth = depth;
        } else {
            e.fate = classify_singular_orbit(f, sv.value, budget, radii);
            e.itinerary = depth == 0 ? Itinerary{} : trace_itinerary(f, partition, radii, seed_value(f, sv), depth, snap);
        }
        k.entries.push_back(std::move(e));
    }
    return k;
}

Marking Marking::identity(std::size_t n)
{
    Marking m;
    for (std::size_t i = 0; i < n; ++i)
        m.values.push_back(i);
    return m;
}

bool kneading_equal(const KneadingData& k1, const KneadingData& k2, const Marking& marking)
{
    const auto invalid = [](const std::string& what) { throw Error(ErrorCode::InvalidMarking, what); };
    const std::size_t n = k1.entries.size();
    const bool circle = k1.kind == FamilyKind::TrigLift;
    const bool periodic = circle || k1.kind == FamilyKind::Cosine;
    if (circle != (k2.kind == FamilyKind::TrigLift) || periodic != (k2.kind == FamilyKind::Cosine || circle))
        invalid("marking cannot relate a circle or periodic partition to a different partition type");
    if (k2.entries.size() != n || marking.values.size() != n)
        invalid("marking must be a bijection of singular-value indices");
    if (k1.critical_count != k2.critical_count)
        invalid("marking must be a bijection of critical-point indices");
    std::vector<bool> seen(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        const auto target = marking.values[j];
        if (target >= n || seen[target])
            invalid("marking must be a bijection of singular-value indices");
        seen[target] = true;
        const bool ordered = circle ? target == (j + marking.values[0]) % n : target == j;
        if (!ordered)
            invalid(circle ? "marking must preserve the cyclic order of singular values"
                           : "marking must preserve the order of singular values");
    }
    if (!periodic && marking.symbol_shift != 0)
        invalid("a finite critical set only admits the identity correspondence");

    const auto count = static_cast<std::int64_t>(k1.critical_count);
    const auto image = [&](Symbol s) {
        if (s.type == Symbol::Type::Interval || s.type == Symbol::Type::Critical) {
            s.index += marking.symbol_shift;
            if (circle)
                s.index = count == 0 ? 0 : positive_mod(s.index, count);
        }
        return s;
    };

    for (std::size_t j = 0; j < n; ++j) {
        const auto& a = k1.entries[j];
        const auto& b = k2.entries[marking.values[j]];
        if (a.fate.tag != b.fate.tag)
            return false;
        const int common = std::min(a.itinerary.depth, b.itinerary.depth);
        for (int m = 0; m < common; ++m) {
            const auto i = static_cast<std::size_t>(m);
            const bool ha = i < a.itinerary.symbols.size();
            const bool hb = i < b.itinerary.symbols.size();
            if (ha != hb)
                return false;
            if (!ha)
                break;
            if (image(a.itinerary.symbols[i]) != b.itinerary.symbols[i])
                return false;
        }
    }
    return true;
}

Marking induced_rotation_marking(const FamilyMap& f, const FamilyMap& g, double beta)
{
    if (!f.circle_map() || !g.circle_map())
        throw Error(ErrorCode::KindMismatch, "rotation markings relate two trig lifts");
    const auto invalid = [](const std::string& what) { throw Error(ErrorCode::InvalidMarking, what); };
    constexpr double kMatch = 1e-6;

    const auto nearest = [](const std::vector<double>& pts, double t) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < pts.size(); ++j) {
            if (circle_distance(pts[j], t) < circle_distance(pts[best], t))
                best = j;
        }
        return best;
    };

    Marking m;
    const auto pf = PartitionR::of(f).points();
    const auto pg = PartitionR::of(g).points();
    if (pf.size() != pg.size())
        invalid("rotated map has a different number of critical points");
    if (!pf.empty()) {
        const double target = frac(pf.front() + beta);
        const auto k = nearest(pg, target);
        if (circle_distance(pg[k], target) > kMatch)
            invalid("critical points do not correspond under the rotation");
        m.symbol_shift = static_cast<std::int64_t>(k);
    }

    std::vector<double> vf;
    std::vector<double> vg;
    for (const auto& v : singular_values(f))
        vf.push_back(v.value);
    for (const auto& v : singular_values(g))
        vg.push_back(v.value);
    if (vf.size() != vg.size())
        invalid("rotated map has a different number of singular values");
    for (double v : vf) {
        const double target = frac(v + beta);
        const auto k = nearest(vg, target);
        if (circle_distance(vg[k], target) > kMatch)
            invalid("singular values do not correspond under the rotation");
        m.values.push_back(k);
    }
    return m;
}

char fate_flag(FateTag tag)
{
    switch (tag) {
    case FateTag::Attracted: return 'A';
    case FateTag::Parabolic: return 'P';
    case FateTag::Escaping: return 'E';
    case FateTag::Undecided: return 'U';
    }
    return '?';
}

std::string format_kneading(const KneadingData& k)
{
    std::ostringstream out;
    for (const auto& e : k.entries) {
        out << fate_flag(e.fate.tag);
        if (e.itinerary.snap_fragile)
            out << '!';
        for (const auto& s : e.itinerary.symbols)
            out << ' ' << to_string(s);
        out << '\n';
    }
    return out.str();
}

}  // namespace realdyn
