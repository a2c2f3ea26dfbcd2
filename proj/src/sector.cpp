#include "realdyn/sector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "realdyn/error.hpp"
#include "realdyn/text_format.hpp"

namespace realdyn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// |f(sigma X)| > X at widely spaced X, overflow included.
bool grows(const FamilyMap& f, int sigma)
{
    for (double big : {256.0, 1024.0, 4096.0}) {
        const auto v = eval(f, sigma * big);
        if (!v.overflowed() && !(std::abs(v.value) > big))
            return false;
    }
    return true;
}

}  // namespace

std::vector<int> escaping_directions(const FamilyMap& f, const Budget& budget)
{
    if (f.circle_map())
        return {};
    const auto radii = escape_radii(f);
    if (!std::isfinite(radii.plus) && !std::isfinite(radii.minus))
        return {};
    bool plus = false;
    bool minus = false;
    for (int i = 0; i < 64 && !(plus && minus); ++i) {
        const int sigma = (i % 2 == 0) ? 1 : -1;
        const double x = sigma * std::exp2((i / 2 - 8) * 0.625);
        const auto fate = classify_singular_orbit(f, x, budget, radii);
        if (fate.tag != FateTag::Escaping)
            continue;
        plus |= fate.direction != EscapeDirection::Minus;
        minus |= fate.direction != EscapeDirection::Plus;
    }
    std::vector<int> out;
    if (plus && grows(f, 1))
        out.push_back(1);
    if (minus && grows(f, -1))
        out.push_back(-1);
    return out;
}

bool SectorReport::holds() const
{
    return std::all_of(directions.begin(), directions.end(), [](const auto& d) { return d.holds; });
}

SectorReport check_log_derivative(const FamilyMap& f, double k, double r, double x_max, int n, const Budget& budget)
{
    if (!(k > 0.0) || !(r > 0.0))
        throw Error(ErrorCode::InvalidParameter, "K and r must be > 0");
    if (!(x_max > r))
        throw Error(ErrorCode::InvalidParameter, "x_max must exceed r");
    if (n < 1)
        throw Error(ErrorCode::InvalidParameter, "sample count must be >= 1");

    SectorReport rep;
    rep.test = SectorReport::Test::LogDerivative;
    rep.k = k;
    rep.r = r;
    rep.x_max = x_max;
    rep.n = n;
    rep.sigma = escaping_directions(f, budget);
    const double span = std::log(x_max / r);
    for (int sigma : rep.sigma) {
        SectorDirection d;
        d.sigma = sigma;
        for (int i = 0; i < n; ++i) {
            const double x = i == 0 ? r : (i == n - 1 ? x_max : r * std::exp(span * i / (n - 1)));
            const auto lp = log_profile(f, sigma * x);
            ++d.samples;
            if (!lp.finite || !(lp.log_abs > 0.0)) {
                ++d.rejected;
                rep.violations.push_back({sigma, x, 0.0, kNaN});
                continue;
            }
            const double needed = lp.log_derivative * x / lp.log_abs;
            const double ratio = needed / k;
            d.min_k = std::max(d.min_k, needed);
            if (ratio > d.max_ratio || d.samples == d.rejected + 1) {
                d.max_ratio = ratio;
                d.argmax_x = x;
            }
            if (ratio > 1.0)
                rep.violations.push_back({sigma, x, 0.0, ratio});
        }
        d.holds = d.max_ratio <= 1.0;
        rep.directions.push_back(d);
    }
    return rep;
}

SectorReport check_sector_geometric(const FamilyMap& f, double m, double theta, double x0, int grid, double x_cap,
                                    const Budget& budget)
{
    if (!f.closed_form())
        throw Error(ErrorCode::Unsupported, "the geometric sector test needs complex evaluation");
    if (!(m > 0.0) || !(theta > 0.0) || !(x0 > 0.0))
        throw Error(ErrorCode::InvalidParameter, "M, theta and x0 must be > 0");
    if (grid < 2)
        throw Error(ErrorCode::InvalidParameter, "grid must be >= 2");
    if (x_cap <= 0.0)
        x_cap = 1000.0 * x0;
    if (!(x_cap > x0))
        throw Error(ErrorCode::InvalidParameter, "x_cap must exceed x0");

    SectorReport rep;
    rep.test = SectorReport::Test::Geometric;
    rep.m = m;
    rep.theta = theta;
    rep.x0 = x0;
    rep.x_cap = x_cap;
    rep.grid = grid;
    rep.sigma = escaping_directions(f, budget);
    const double span = std::log(x_cap / x0);
    for (int sigma : rep.sigma) {
        SectorDirection d;
        d.sigma = sigma;
        d.min_modulus = std::numeric_limits<double>::infinity();
        for (int i = 0; i < grid; ++i) {
            const double x = i == grid - 1 ? x_cap : x0 * std::exp(span * i / (grid - 1));
            for (int j = 0; j < grid; ++j) {
                const double y = theta * x * (2.0 * j / (grid - 1) - 1.0);
                ++d.samples;
                const auto v = eval(f, Complex(sigma * x, y));
                if (v.overflowed())
                    continue;
                const double modulus = std::abs(v.value);
                const double ratio = m / modulus;
                if (modulus < d.min_modulus) {
                    d.min_modulus = modulus;
                    d.max_ratio = ratio;
                    d.argmax_x = x;
                    d.argmax_y = y;
                }
                if (ratio > 1.0)
                    rep.violations.push_back({sigma, x, y, ratio});
            }
        }
        d.holds = d.max_ratio <= 1.0;
        rep.directions.push_back(d);
    }
    return rep;
}

std::string format_sector_report(const SectorReport& rep)
{
    std::ostringstream out;
    const bool logd = rep.test == SectorReport::Test::LogDerivative;
    out << "test=" << (logd ? "log-derivative" : "geometric") << '\n';
    if (logd)
        out << "K=" << format_number(rep.k) << " r=" << format_number(rep.r) << " x_max=" << format_number(rep.x_max)
            << " n=" << rep.n << '\n';
    else
        out << "M=" << format_number(rep.m) << " theta=" << format_number(rep.theta) << " x0=" << format_number(rep.x0)
            << " x_cap=" << format_number(rep.x_cap) << " grid=" << rep.grid << '\n';
    out << "sigma=";
    for (std::size_t i = 0; i < rep.sigma.size(); ++i)
        out << (i ? "," : "") << (rep.sigma[i] > 0 ? '+' : '-');
    out << (rep.sigma.empty() ? "none" : "") << '\n';
    for (const auto& d : rep.directions) {
        out << "direction=" << (d.sigma > 0 ? '+' : '-') << " holds=" << (d.holds ? "true" : "false")
            << " max_ratio=" << format_number(d.max_ratio) << " argmax_x=" << format_number(d.argmax_x);
        if (logd)
            out << " min_K=" << format_number(d.min_k);
        else
            out << " argmax_y=" << format_number(d.argmax_y) << " min_modulus=" << format_number(d.min_modulus);
        out << " samples=" << d.samples << " rejected=" << d.rejected << '\n';
    }
    out << "holds=" << (rep.holds() ? "true" : "false") << (rep.sigma.empty() ? " (vacuous)" : "") << '\n';
    return out.str();
}

std::string sector_violations_csv(const SectorReport& rep)
{
    std::ostringstream out;
    out << "sigma,x,y,ratio\n";
    for (const auto& s : rep.violations)
        out << (s.sigma > 0 ? '+' : '-') << ',' << format_number(s.x) << ',' << format_number(s.y) << ','
            << (std::isnan(s.ratio) ? std::string("rejected") : format_number(s.ratio)) << '\n';
    return out.str();
}

}  // namespace realdyn
