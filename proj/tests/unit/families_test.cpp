#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "realdyn/error.hpp"
#include "realdyn/families.hpp"
#include "realdyn/text_format.hpp"

using namespace realdyn;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Roots of an ascending complex coefficient list via the companion matrix.
std::vector<Complex> companion_roots(const std::vector<Complex>& c)
{
    const auto n = static_cast<Eigen::Index>(c.size() - 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i)
        m(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i)
        m(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < n; ++i)
        out.push_back(solver.eigenvalues()(i));
    return out;
}

std::vector<double> random_delta_mu(std::mt19937_64& rng, int m)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> mu(static_cast<std::size_t>(2 * m));
    for (auto& v : mu)
        v = u(rng);
    mu.back() = 0.05 + std::abs(mu.back());
    return mu;
}

std::vector<FamilyMap> closed_form_samples()
{
    return {FamilyMap::cosine(1.3, -0.4), FamilyMap::standard(0.7, 0.2), FamilyMap::exponential(-0.3),
            FamilyMap::trig_lift(2, 2, {0.1, 0.2, -0.1, 0.15})};
}

}  // namespace

TEST_CASE("eval examples")
{
    const auto sine = FamilyMap::cosine(1.0, 0.0);
    const auto v = eval(sine, 0.0, true);
    CHECK(v.value == 0.0);
    CHECK(v.derivative == 1.0);

    const auto s = eval(FamilyMap::standard(1.0, 0.0), -1.0, true);
    CHECK(s.value == Approx(-1.0 / std::numbers::e).epsilon(1e-14));
    CHECK(std::abs(s.derivative) < 1e-15);

    const auto pe = FamilyMap::integral_pe({1.0}, {0.0, 1.0});
    CHECK(std::abs(eval(pe, 1.0).value - (std::numbers::e - 1.0)) < 1e-10);
    CHECK(std::abs(eval(pe, -2.0).value - (std::exp(-2.0) - 1.0)) < 1e-10);
}

TEST_CASE("overflow is reported with its sign")
{
    const auto e = eval(FamilyMap::exponential(0.0), 1000.0);
    CHECK(e.overflowed());
    CHECK(e.overflow == 1);
    const auto s = eval(FamilyMap::standard(-1.0, 0.0), 1000.0);
    CHECK(s.overflow == -1);
    CHECK_FALSE(eval(FamilyMap::exponential(0.0), 700.0).overflowed());
}

TEST_CASE("complex evaluation of integral_pe is unsupported")
{
    const auto pe = FamilyMap::integral_pe({1.0}, {0.0, 1.0});
    try {
        eval(pe, Complex{0.5, 0.5});
        FAIL("expected Unsupported");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
}

TEST_CASE("family parameter validation")
{
    const auto code_of = [](auto&& make) {
        try {
            make();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Unsupported;
    };
    CHECK(code_of([] { FamilyMap::cosine(0.0, 0.0); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { FamilyMap::standard(0.0, 1.0); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { FamilyMap::integral_pe({1.0}, {2.0}); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { FamilyMap::integral_pe({0.0}, {0.0, 1.0}); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { FamilyMap::trig_lift(1, 1, {0.0, -0.1}, true); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { FamilyMap::trig_lift(1, 2, {0.0, 0.1}); }) == ErrorCode::InvalidParameter);
    CHECK_NOTHROW(FamilyMap::trig_lift(1, 1, {0.0, -0.1}));
}

TEST_CASE("singular value examples")
{
    const auto c = singular_values(FamilyMap::cosine(3.0, 4.0));
    REQUIRE(c.size() == 2);
    CHECK(c[0].value == Approx(-5.0).epsilon(1e-14));
    CHECK(c[1].value == Approx(5.0).epsilon(1e-14));
    CHECK(c[0].kind == SingularKind::Critical);
    CHECK(c[1].kind == SingularKind::Critical);

    const auto s = singular_values(FamilyMap::standard(1.0, 2.0));
    REQUIRE(s.size() == 2);
    CHECK(s[0].value == Approx(2.0 - 1.0 / std::numbers::e).epsilon(1e-14));
    CHECK(s[0].kind == SingularKind::Critical);
    CHECK(s[0].source == -1.0);
    CHECK(s[1].value == 2.0);
    CHECK(s[1].kind == SingularKind::Asymptotic);

    const auto e = singular_values(FamilyMap::exponential(0.0));
    REQUIRE(e.size() == 1);
    CHECK(e[0].value == 0.0);
    CHECK(e[0].kind == SingularKind::Asymptotic);
}

TEST_CASE("cosine singular values are +-R for random parameters")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng);
        const double r = std::hypot(a, b);
        const auto sv = singular_values(FamilyMap::cosine(a, b));
        REQUIRE(sv.size() == 2);
        CHECK(std::abs(sv[0].value + r) <= 1e-12 * (1 + r));
        CHECK(std::abs(sv[1].value - r) <= 1e-12 * (1 + r));
    }
}

TEST_CASE("integral_pe singular values include the asymptotic limits")
{
    // integral of e^w from 0 is e^x - 1: asymptotic value -1 along -inf, no critical points.
    const auto sv = singular_values(FamilyMap::integral_pe({1.0}, {0.0, 1.0}));
    REQUIRE(sv.size() == 1);
    CHECK(sv[0].kind == SingularKind::Asymptotic);
    CHECK(sv[0].value == Approx(-1.0).epsilon(1e-9));

    // integral of w e^{-w^2}: critical point 0 with value 0, asymptotic value 1/2 both ways.
    const auto g = singular_values(FamilyMap::integral_pe({0.0, 1.0}, {0.0, 0.0, -1.0}));
    bool critical = false, asymptotic = false;
    for (const auto& v : g) {
        if (v.kind == SingularKind::Critical && std::abs(v.value) < 1e-12)
            critical = true;
        if (v.kind == SingularKind::Asymptotic && std::abs(v.value - 0.5) < 1e-9)
            asymptotic = true;
    }
    CHECK(critical);
    CHECK(asymptotic);
}

TEST_CASE("critical_points_real examples")
{
    const auto sine = critical_points_real(FamilyMap::cosine(1.0, 0.0), 0.0, 4.0);
    REQUIRE(sine.size() == 1);
    CHECK(sine[0].x == Approx(kPi / 2).epsilon(1e-13));
    CHECK(sine[0].multiplicity == 1);

    const auto dbl = critical_points_real(FamilyMap::trig_lift(1, 1, {0.0, 1.0 / (2 * kPi)}), 0.0, 1.0);
    REQUIRE(dbl.size() == 1);
    CHECK(dbl[0].x == Approx(0.5).epsilon(1e-7));
    CHECK(dbl[0].multiplicity == 2);

    // cos(2 pi t) = -2/pi
    const double t1 = std::acos(-2.0 / kPi) / (2 * kPi);
    const auto two = critical_points_real(FamilyMap::trig_lift(1, 1, {0.0, 0.25}), 0.0, 1.0);
    REQUIRE(two.size() == 2);
    CHECK(two[0].x == Approx(t1).epsilon(1e-12));
    CHECK(two[1].x == Approx(1.0 - t1).epsilon(1e-12));
    CHECK(two[0].multiplicity == 1);
}

TEST_CASE("critical_points_real rejects a critical endpoint")
{
    try {
        critical_points_real(FamilyMap::cosine(1.0, 0.0), kPi / 2, 3.0);
        FAIL("expected EndpointDegenerate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EndpointDegenerate);
    }
}

TEST_CASE("critical_points_real is stable under subdivision")
{
    const std::vector<FamilyMap> maps{FamilyMap::cosine(1.0, 2.0), FamilyMap::trig_lift(2, 2, {0.1, 0.3, 0.2, 0.4}),
                                      FamilyMap::standard(1.5, 0.0)};
    for (const auto& f : maps) {
        const double lo = -3.3, hi = 4.1;
        const auto full = critical_points_real(f, lo, hi);
        for (std::size_t i = 1; i < full.size(); ++i)
            CHECK(full[i].x > full[i - 1].x);
        // Cut between critical points so no piece has a critical endpoint.
        std::vector<double> cuts{lo};
        for (std::size_t i = 1; i < full.size(); ++i)
            cuts.push_back(0.5 * (full[i - 1].x + full[i].x));
        cuts.push_back(hi);
        std::vector<CriticalPoint> joined;
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            for (const auto& c : critical_points_real(f, cuts[i - 1], cuts[i]))
                joined.push_back(c);
        }
        REQUIRE(joined.size() == full.size());
        for (std::size_t i = 0; i < full.size(); ++i) {
            CHECK(joined[i].x == Approx(full[i].x).epsilon(1e-12));
            CHECK(joined[i].multiplicity == full[i].multiplicity);
        }
    }
}

TEST_CASE("critical_points_circle examples")
{
    const double mu2 = 0.1;
    const auto set = critical_points_circle(1, 1, std::vector<double>{0.0, mu2});
    REQUIRE(set.roots.size() == 2);
    CHECK(set.on_circle.empty());
    // pi mu2 w^2 + w + pi mu2 = 0
    const double a = kPi * mu2;
    const double disc = std::sqrt(1.0 - 4.0 * a * a);
    std::vector<double> expect{(-1.0 + disc) / (2 * a), (-1.0 - disc) / (2 * a)};
    CHECK(expect[0] == Approx(-0.35338).epsilon(1e-4));
    CHECK(expect[1] == Approx(-2.82984).epsilon(1e-4));
    for (double r : expect) {
        const bool found = std::any_of(set.roots.begin(), set.roots.end(),
                                       [&](Complex w) { return std::abs(w - Complex{r, 0.0}) < 1e-10; });
        CHECK(found);
    }

    const auto on = critical_points_circle(1, 1, std::vector<double>{0.0, 0.25});
    REQUIRE(on.on_circle.size() == 2);
    const double t1 = std::acos(-2.0 / kPi) / (2 * kPi);
    CHECK(on.on_circle[0].t == Approx(t1).epsilon(1e-12));
    CHECK(on.on_circle[1].t == Approx(1.0 - t1).epsilon(1e-12));
    for (const auto& c : on.on_circle)
        CHECK(std::abs(std::abs(c.w) - 1.0) < 1e-12);
}

TEST_CASE("critical_points_circle counts 2m roots and matches the companion matrix")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 1 + trial % 3;
        const int d = trial % 4;
        const auto mu = random_delta_mu(rng, m);
        const auto set = critical_points_circle(d, m, mu);
        REQUIRE(set.roots.size() == static_cast<std::size_t>(2 * m));
        CHECK(set.total_multiplicity() == 2 * m);
        for (double r : set.residuals)
            CHECK(r < 1e-8);
        for (const auto& oracle : companion_roots(set.numerator)) {
            double best = 1e300;
            for (const auto& w : set.roots)
                best = std::min(best, std::abs(w - oracle));
            CHECK(best < 1e-6 * (1.0 + std::abs(oracle)));
        }
        // On-circle points are zeros of the real derivative.
        for (const auto& c : set.on_circle)
            CHECK(std::abs(derivative(FamilyMap::trig_lift(d, m, mu), c.t, 1)) < 1e-8);
    }
}

TEST_CASE("analytic derivative agrees with central differences")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (const auto& f : closed_form_samples()) {
        for (int i = 0; i < 1000; ++i) {
            const double x = u(rng);
            const double h = 1e-6;
            const double fd = (eval(f, x + h).value - eval(f, x - h).value) / (2 * h);
            const double d = eval(f, x, true).derivative;
            CHECK(std::abs(fd - d) <= 1e-5 * (1 + std::abs(d)));
        }
    }
}

TEST_CASE("evaluation commutes with complex conjugation")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const auto& f : closed_form_samples()) {
        for (int i = 0; i < 500; ++i) {
            const Complex z{u(rng), u(rng)};
            const auto fz = eval(f, z).value;
            const auto fc = eval(f, std::conj(z)).value;
            CHECK(std::abs(fc - std::conj(fz)) <= 1e-12 * (1 + std::abs(fz)));
        }
    }
}

TEST_CASE("complex and real evaluation agree on the real axis")
{
    for (const auto& f : closed_form_samples()) {
        for (double x : {-1.7, -0.2, 0.0, 0.9, 2.5}) {
            const auto r = eval(f, x, true);
            const auto c = eval(f, Complex{x, 0.0}, true);
            CHECK(c.value.real() == Approx(r.value).epsilon(1e-12));
            CHECK(std::abs(c.value.imag()) < 1e-12);
            CHECK(c.derivative.real() == Approx(r.derivative).epsilon(1e-12));
        }
    }
}

TEST_CASE("family text round trip")
{
    for (const auto& f : closed_form_samples()) {
        const auto g = parse_family(format_family(f));
        CHECK(format_family(g) == format_family(f));
        CHECK(eval(g, 0.3).value == eval(f, 0.3).value);
    }
    const auto pe = parse_family("kind=integral_pe P=1,0.5 Q=0,0,-1 c=0.25 x0=0.5");
    CHECK(pe.kind() == FamilyKind::IntegralPE);
    CHECK(format_family(parse_family(format_family(pe))) == format_family(pe));
    CHECK_THROWS_AS(parse_family("kind=cosine a=1 b=2 q=3"), Error);
}

TEST_CASE("with_parameter rebuilds a validated map")
{
    const auto f = FamilyMap::trig_lift(1, 1, {0.0, 0.1});
    const auto g = f.with_parameter("mu2", 0.3);
    CHECK(g.as<TrigLiftParams>().mu[1] == 0.3);
    CHECK(g.trig().sin_coeffs[0] == 0.3);
    CHECK_THROWS_AS(FamilyMap::cosine(1.0, 0.0).with_parameter("a", 0.0), Error);
}
