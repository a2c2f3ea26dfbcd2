#include "realdyn/circle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "realdyn/detail/closed_form.hpp"
#include "realdyn/error.hpp"
#include "realdyn/text_format.hpp"

namespace realdyn {

namespace {

TrigPolynomial degree_one(const FamilyMap& f)
{
    if (!f.circle_map())
        throw Error(ErrorCode::KindMismatch, "rotation numbers need a trig lift");
    auto poly = f.trig();
    if (poly.degree != 1)
        throw Error(ErrorCode::InvalidDegree, "rotation numbers need a degree-1 lift, got D=" + std::to_string(poly.degree));
    return poly;
}

bool rigid(const TrigPolynomial& p)
{
    const auto zero = [](double c) { return c == 0.0; };
    return std::all_of(p.sin_coeffs.begin(), p.sin_coeffs.end(), zero) &&
           std::all_of(p.cos_coeffs.begin(), p.cos_coeffs.end(), zero);
}

// Iterates a degree-1 lift G(t) = t + c + g(t) with g 1-periodic, keeping the
// integer part of the orbit separate so that an integer change of c shifts the
// result by exactly that integer.
template <class Periodic>
double average_displacement(double constant, Periodic g, double t0, std::int64_t n)
{
    const double whole = std::floor(constant);
    const double part = constant - whole;
    double s = t0 - std::floor(t0);
    double turns = std::floor(t0);
    for (std::int64_t k = 0; k < n; ++k) {
        const double y = s + part + g(s);
        const double fl = std::floor(y);
        turns += fl;
        s = y - fl;
        if (s >= 1.0) {
            s -= 1.0;
            turns += 1.0;
        }
    }
    // Rounded to a multiple of 2^-40 (far below 1/n) so that adding the
    // integer part back is exact.
    const double average = (turns - t0 + s) / static_cast<double>(n);
    return std::ldexp(std::nearbyint(std::ldexp(average, 40)), -40) + whole;
}

// Monotone degree-1 lift sampled at nodes of [0,1), linear in between.
struct Envelope {
    std::vector<double> nodes;
    std::vector<double> values;  // envelope minus identity, 1-periodic

    double periodic_part(double s) const
    {
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
        const auto i = static_cast<std::size_t>(it - nodes.begin());
        double x0, y0, x1, y1;
        if (i == 0) {
            x0 = nodes.back() - 1.0;
            y0 = values.back();
            x1 = nodes.front();
            y1 = values.front();
        } else if (i == nodes.size()) {
            x0 = nodes.back();
            y0 = values.back();
            x1 = nodes.front() + 1.0;
            y1 = values.front();
        } else {
            x0 = nodes[i - 1];
            y0 = values[i - 1];
            x1 = nodes[i];
            y1 = values[i];
        }
        const double w = (s - x0) / (x1 - x0);
        // Interpolating G(t) = t + g(t) linearly is the same as interpolating g.
        return y0 + w * (y1 - y0);
    }
};

// upper: E(t) = max over [t-1, t]; lower: E(t) = min over [t, t+1].
Envelope envelope(const std::vector<double>& nodes, const std::vector<double>& lift, bool upper)
{
    const std::size_t n = nodes.size();
    Envelope e;
    e.nodes = nodes;
    e.values.resize(n);
    // Two periods of samples: index i in [0, 2n) stands for nodes[i % n] + (i / n).
    const auto at = [&](std::size_t i) {
        return std::pair{nodes[i % n] + static_cast<double>(i / n), lift[i % n] + static_cast<double>(i / n)};
    };
    std::deque<std::size_t> window;
    if (upper) {
        // Envelope at node i+n uses samples with positions in [pos - 1, pos].
        for (std::size_t i = 0; i < 2 * n; ++i) {
            while (!window.empty() && at(window.back()).second <= at(i).second)
                window.pop_back();
            window.push_back(i);
            while (at(window.front()).first < at(i).first - 1.0)
                window.pop_front();
            if (i >= n)
                e.values[i - n] = at(window.front()).second - 1.0 - nodes[i - n];
        }
    } else {
        for (std::size_t r = 2 * n; r-- > 0;) {
            while (!window.empty() && at(window.back()).second >= at(r).second)
                window.pop_back();
            window.push_back(r);
            while (at(window.front()).first > at(r).first + 1.0)
                window.pop_front();
            if (r < n)
                e.values[r] = at(window.front()).second - nodes[r];
        }
    }
    return e;
}

}  // namespace

bool lift_is_monotone(const TrigPolynomial& poly)
{
    if (rigid(poly))
        return poly.degree != 0;
    const auto crit = critical_points_circle(poly);
    return std::all_of(crit.on_circle.begin(), crit.on_circle.end(),
                       [](const auto& c) { return c.multiplicity % 2 == 0; });
}

RotationEstimate rotation_number(const FamilyMap& f, double t0, std::int64_t n)
{
    const auto poly = degree_one(f);
    if (n < 1)
        throw Error(ErrorCode::InvalidParameter, "rotation number needs n >= 1");
    RotationEstimate est;
    est.n = n;
    if (rigid(poly)) {
        est.value = poly.constant;
        est.error_bound = 0.0;
        return est;
    }
    est.monotone = lift_is_monotone(poly);
    est.error_bound = est.monotone ? 1.0 / static_cast<double>(n) : std::numeric_limits<double>::infinity();
    auto oscillation = poly;
    oscillation.constant = 0.0;
    oscillation.degree = 0;
    est.value = average_displacement(
        poly.constant, [&](double s) { return detail::trig_derivative(oscillation, s, 0); }, t0, n);
    return est;
}

RotationInterval rotation_interval(const FamilyMap& f, std::int64_t n)
{
    const auto poly = degree_one(f);
    if (n < 1)
        throw Error(ErrorCode::InvalidParameter, "rotation interval needs n >= 1");
    RotationInterval out;
    out.n = n;
    if (rigid(poly)) {
        out.lower = out.upper = poly.constant;
        return out;
    }
    out.monotone = lift_is_monotone(poly);

    std::vector<double> nodes;
    nodes.reserve(kEnvelopeGrid + 2 * static_cast<std::size_t>(poly.modality()));
    for (int i = 0; i < kEnvelopeGrid; ++i)
        nodes.push_back(static_cast<double>(i) / kEnvelopeGrid);
    for (const auto& c : critical_points_circle(poly).on_circle)
        nodes.push_back(c.t - std::floor(c.t));
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(), [](double a, double b) { return b - a < 1e-15; }), nodes.end());
    if (nodes.back() >= 1.0)
        nodes.pop_back();

    // Envelopes of F(t) - mu1, so the constant can be split off exactly.
    auto shape = poly;
    shape.constant = 0.0;
    std::vector<double> lift;
    lift.reserve(nodes.size());
    for (double t : nodes)
        lift.push_back(detail::trig_derivative(shape, t, 0));

    if (out.monotone) {
        Envelope e{nodes, {}};
        for (std::size_t i = 0; i < nodes.size(); ++i)
            e.values.push_back(lift[i] - nodes[i]);
        out.lower = out.upper = average_displacement(
            poly.constant, [&](double s) { return e.periodic_part(s); }, 0.0, n);
        return out;
    }
    const auto up = envelope(nodes, lift, true);
    const auto down = envelope(nodes, lift, false);
    out.upper = average_displacement(poly.constant, [&](double s) { return up.periodic_part(s); }, 0.0, n);
    out.lower = average_displacement(poly.constant, [&](double s) { return down.periodic_part(s); }, 0.0, n);
    out.lower = std::min(out.lower, out.upper);
    return out;
}

std::vector<TongueRow> tongue_scan(double mu1_lo, double mu1_hi, int n1, double mu2_lo, double mu2_hi, int n2,
                                   std::int64_t n)
{
    if (n1 < 1 || n2 < 1)
        throw Error(ErrorCode::InvalidParameter, "tongue grid needs at least one point per axis");
    const auto point = [](double lo, double hi, int count, int i) {
        return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    };
    std::vector<TongueRow> rows;
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            TongueRow row;
            row.mu1 = point(mu1_lo, mu1_hi, n1, i);
            row.mu2 = point(mu2_lo, mu2_hi, n2, j);
            row.interval = rotation_interval(FamilyMap::trig_lift(1, 1, {row.mu1, row.mu2}), n);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string tongue_csv(const std::vector<TongueRow>& rows)
{
    std::ostringstream out;
    out << "mu1,mu2,rho_minus,rho_plus\n";
    for (const auto& r : rows)
        out << format_number(r.mu1) << ',' << format_number(r.mu2) << ',' << format_number(r.interval.lower) << ','
            << format_number(r.interval.upper) << '\n';
    return out.str();
}

}  // namespace realdyn
