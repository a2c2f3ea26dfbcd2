// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <quadmath.h>

#include "realdyn/conjugacy.hpp"
#include "realdyn/circle.hpp"
#include "realdyn/error.hpp"
#include "realdyn/families.hpp"
#include "realdyn/orbits.hpp"
#include "realdyn/scan.hpp"
#include "realdyn/sector.hpp"
#include "realdyn/symbolic.hpp"

using namespace realdyn;

namespace {

constexpr double kTau = 2 * std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, std::string_view name, const std::function<Verdict()>& body)
{
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass)
        ++failures;
    std::printf("%s %d %.*s: %s\n", v.pass ? "PASS" : "FAIL", id, static_cast<int>(name.size()), name.data(),
                v.detail.c_str());
    std::fflush(stdout);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// A refined cycle together with the map it belongs to.
struct FoundCycle {
    FamilyMap map;
    int period;
    double point;
    double multiplier;
};

std::vector<FoundCycle> cycles;

void collect_cycles(const ScanResult& r)
{
    for (int j = 0; j < r.spec.height; ++j) {
        for (int i = 0; i < r.spec.width; ++i) {
            const auto& cell = r.at(i, j);
            for (const auto& f : cell.fates) {
                if (f.tag == FateTag::Attracted || f.tag == FateTag::Parabolic)
                    cycles.push_back({r.family_at(i, j), f.period, f.point, f.multiplier});
            }
        }
    }
}

// Independent quad-precision evaluation of the closed-form kinds used by the figures.
__float128 eval_quad(const FamilyMap& f, __float128 x)
{
    switch (f.kind()) {
    case FamilyKind::Cosine: {
        const auto& p = f.as<CosineParams>();
        return p.a * sinq(x) + p.b * cosq(x);
    }
    case FamilyKind::TrigLift: {
        const auto& t = f.trig();
        __float128 v = t.degree * x + t.constant;
        for (int j = 1; j <= t.modality(); ++j) {
            const __float128 w = 2 * M_PIq * j * x;
            v += t.sin_coeffs[static_cast<std::size_t>(j - 1)] * sinq(w) +
                 t.cos_coeffs[static_cast<std::size_t>(j - 1)] * cosq(w);
        }
        return v;
    }
    case FamilyKind::Exponential: return expq(x) + f.as<ExponentialParams>().a;
    case FamilyKind::StandardDeg: {
        const auto& p = f.as<StandardDegParams>();
        return p.a * x * expq(x) + p.b;
    }
    default: throw std::runtime_error("no quad evaluator for this kind");
    }
}

// Central difference of f^p in quad precision; long cycles make f^p too
// curved for any double-precision step.
double central_difference(const FamilyMap& f, double x, int p)
{
    const __float128 h = 1e-12Q;
    __float128 lo = x - h, hi = x + h;
    for (int i = 0; i < p; ++i) {
        lo = eval_quad(f, lo);
        hi = eval_quad(f, hi);
    }
    return static_cast<double>((hi - lo) / (2 * h));
}

// Dyadic parameters keep rotation conjugates exactly representable.
double dyadic(double v) { return std::ldexp(std::nearbyint(std::ldexp(v, 30)), -30); }

struct FigureRun {
    ScanResult result;
    double seconds = 0.0;
    bool deterministic = false;
};

FigureRun run_figure(const std::string& path)
{
    const auto spec = parse_scan_spec(read_file(path));
    FigureRun run;
    const auto t = Clock::now();
    run.result = run_scan(spec, 0);
    run.seconds = seconds_since(t);
    const auto pgm = export_pgm(run.result);
    // A second run pinned to one worker covers both repeatability and worker independence.
    const auto again = run_scan(spec, 1);
    run.deterministic = export_pgm(again) == pgm && export_csv(again) == export_csv(run.result);
    return run;
}

CellClass class_at(const ScanResult& r, double u, double v)
{
    const auto& s = r.spec;
    const int i = cell_containing(s.u_min, s.u_max, s.width, u);
    const int j = cell_containing(s.v_min, s.v_max, s.height, v);
    if (i < 0 || j < 0)
        throw std::runtime_error("point outside the scan rectangle");
    return r.at(i, j).cls;
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

}  // namespace

int main(int argc, char** argv)
{
    std::string spec_dir = "specs";
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string_view(argv[i]) == "--spec-dir")
            spec_dir = argv[i + 1];
    }
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    report(1, "critical-point count", [&] {
        const auto t = Clock::now();
        int bad = 0;
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const int m = 1 + k % 3;
            const int d = (k / 3) % 4;
            std::vector<double> mu(static_cast<std::size_t>(2 * m));
            for (auto& v : mu)
                v = unit(rng);
            mu.back() = std::abs(mu.back()) + 1e-3;
            const auto set = critical_points_circle(d, m, mu);
            bool ok = set.roots.size() == static_cast<std::size_t>(2 * m);
            for (double r : set.residuals) {
                worst = std::max(worst, r);
                ok = ok && r < 1e-8;
            }
            bad += !ok;
        }
        const double s = seconds_since(t);
        return Verdict{bad == 0 && s < 5.0,
                       std::to_string(bad) + " of 100 failed, worst residual " + fmt("%.3g", worst) + ", " +
                           fmt("%.3f", s) + " s"};
    });

    report(2, "tongue multiplier", [&] {
        const auto t = Clock::now();
        double worst = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double mu2 = k / (21.0 * std::numbers::pi);
            const auto f = FamilyMap::trig_lift(1, 1, {0.0, mu2});
            const auto c = refine_cycle(f, 0.5, 1);
            worst = std::max(worst, std::abs(c.multiplier - (1 - kTau * mu2)));
            cycles.push_back({f, c.period, c.points.front(), c.multiplier});
        }
        const double s = seconds_since(t);
        return Verdict{worst <= 1e-9 && s < 1.0, "max error " + fmt("%.3g", worst) + ", " + fmt("%.3f", s) + " s"};
    });

    report(3, "Figure 1 reproduction", [&] {
        const auto run = run_figure(spec_dir + "/fig1.spec");
        collect_cycles(run.result);
        const auto cls = class_at(run.result, 0.0, 0.25);
        const bool pass = run.seconds < 60.0 && run.deterministic && cls == CellClass::Hyperbolic;
        return Verdict{pass, fmt("%.1f s", run.seconds) + " on " + std::to_string(run.result.workers) +
                                 " workers, deterministic=" + (run.deterministic ? "yes" : "no") +
                                 ", cell (0, 0.25) " + std::string(to_string(cls))};
    });

    report(4, "Figure 2 reproduction", [&] {
        const auto run = run_figure(spec_dir + "/fig2.spec");
        collect_cycles(run.result);
        const auto hyp = class_at(run.result, 0.0, 0.5);
        const auto sine = class_at(run.result, 1.0, 0.0);
        const bool pass = run.seconds < 60.0 && run.deterministic && hyp == CellClass::Hyperbolic &&
                          sine == CellClass::CandidateNonHyperbolic;
        return Verdict{pass, fmt("%.1f s", run.seconds) + " on " + std::to_string(run.result.workers) +
                                 " workers, deterministic=" + (run.deterministic ? "yes" : "no") +
                                 ", cell (0, 0.5) " + std::string(to_string(hyp)) + ", cell (1, 0) " +
                                 std::string(to_string(sine))};
    });

    report(5, "exponential boundary", [&] {
        const auto attracted = [](double a) {
            return classify_map(FamilyMap::exponential(a)).tag == MapClassTag::Hyperbolic;
        };
        double lo = -2.0, hi = 0.0;
        if (!attracted(lo) || attracted(hi))
            return Verdict{false, "boundary not bracketed by [-2, 0]"};
        while (hi - lo > 1e-8) {
            const double mid = 0.5 * (lo + hi);
            (attracted(mid) ? lo : hi) = mid;
        }
        const double a = 0.5 * (lo + hi);
        return Verdict{std::abs(a + 1.0) <= 1e-6, "a* = " + fmt("%.9f", a)};
    });

    report(6, "multiplier vs finite difference", [&] {
        if (cycles.empty())
            return Verdict{false, "no cycles collected"};
        int bad = 0;
        double worst = 0.0;
        for (const auto& c : cycles) {
            const double fd = central_difference(c.map, c.point, c.period);
            const double err = std::abs(c.multiplier - fd) / (1 + std::abs(c.multiplier));
            worst = std::max(worst, err);
            bad += !(err <= 1e-5);
        }
        return Verdict{bad == 0, std::to_string(cycles.size()) + " cycles, " + std::to_string(bad) +
                                     " out of tolerance, worst scaled error " + fmt("%.3g", worst)};
    });

    report(7, "sector suite", [&] {
        const auto t = Clock::now();
        const auto e = check_log_derivative(FamilyMap::exponential(0.0), 1.0, 2.0, 1e6);
        const auto s = check_log_derivative(FamilyMap::standard(1.0, 0.0), 2.0, 10.0, 1e6);
        const auto c = check_log_derivative(FamilyMap::cosine(1.0, 0.0), 1.0, 2.0, 1e6);
        const double sec = seconds_since(t);
        const bool exp_ok = e.holds() && e.directions.size() == 1 && std::abs(e.directions[0].max_ratio - 1) <= 1e-12;
        const bool std_ok = s.holds() && s.directions.size() == 1;
        const bool cos_ok = c.sigma.empty() && c.holds();
        return Verdict{exp_ok && std_ok && cos_ok && sec < 2.0,
                       std::string("exponential ") + (exp_ok ? "ok" : "bad") + ", standard " + (std_ok ? "ok" : "bad") +
                           ", cosine " + (cos_ok ? "vacuous" : "bad") + ", " + fmt("%.3f", sec) + " s"};
    });

    report(8, "conjugacy/kneading coherence", [&] {
        int agree = 0, outside = 0;
        const auto half = RotationAngle::rational(1, 2);
        const auto third = RotationAngle::rational(1, 3);
        for (int k = 0; k < 20; ++k) {
            const int d = k % 4;
            std::vector<double> mu(4);
            for (auto& v : mu)
                v = dyadic(unit(rng));
            mu.back() = std::abs(mu.back()) + 0.0625;
            const auto f = FamilyMap::trig_lift(d, 2, mu);
            const auto c = conjugate_by_rotation(d, 2, mu, half);
            if (c.in_delta) {
                const auto g = FamilyMap::trig_lift(d, 2, c.mu);
                agree += kneading_equal(kneading(f, 30), kneading(g, 30), induced_rotation_marking(f, g, 0.5));
            }
            outside += !conjugate_by_rotation(d, 2, mu, third).in_delta;
        }
        return Verdict{agree == 20 && outside == 20, std::to_string(agree) + "/20 kneading agree at depth 30, " +
                                                         std::to_string(outside) + "/20 beta=1/3 outside Delta"};
    });

    report(9, "rotation equivariance", [&] {
        const std::int64_t n = 100000;
        int shifted = 0, monotone = 0;
        double prev = -1e300;
        for (int k = 0; k <= 100; ++k) {
            const double mu1 = -0.5 + k / 100.0;
            const double rho = rotation_number(FamilyMap::trig_lift(1, 1, {mu1, 0.1}), 0.0, n).value;
            const double up = rotation_number(FamilyMap::trig_lift(1, 1, {mu1 + 1.0, 0.1}), 0.0, n).value;
            shifted += up == rho + 1.0;
            monotone += rho >= prev - 2e-5;
            prev = rho;
        }
        return Verdict{shifted == 101 && monotone == 101, std::to_string(shifted) + "/101 exact shifts, " +
                                                              std::to_string(monotone) + "/101 monotone steps"};
    });

    report(10, "affine rigidity spot checks", [&] {
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        int none = 0;
        for (int k = 0; k < 100; ++k) {
            double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
            if (a == c && b == d)
                d += 1.0;
            const bool cosine = k < 50;
            const auto f = cosine ? FamilyMap::cosine(a, b) : FamilyMap::standard(a, b);
            const auto g = cosine ? FamilyMap::cosine(c, d) : FamilyMap::standard(c, d);
            none += !affine_conjugacy_check(f, g).has_value();
        }
        return Verdict{none == 100, std::to_string(none) + "/100 pairs without an affine conjugacy"};
    });

    return failures == 0 ? 0 : 1;
}
