#include "realdyn/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "realdyn/detail/closed_form.hpp"
#include "realdyn/error.hpp"

namespace realdyn {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

double frac(double x)
{
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw Error(ErrorCode::InvalidParameter, what);
}

bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double horner(std::span<const double> c, double x)
{
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

int effective_degree(std::span<const double> c)
{
    int d = static_cast<int>(c.size()) - 1;
    while (d >= 0 && c[static_cast<std::size_t>(d)] == 0.0)
        --d;
    return d;
}

struct Integral {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

// integral_a^b P(w) e^{Q(w)} dw; either bound may be infinite.
Integral integrate_pe(const IntegralPEParams& p, double a, double b)
{
    if (a == b)
        return {};
    auto integrand = [&](double w) {
        const double pw = horner(p.p, w);
        if (pw == 0.0)
            return 0.0;
        return pw * std::exp(horner(p.q, w));
    };
    double err = 0.0;
    double l1 = 0.0;
    double value = 0.0;
    if (a < b) {
        value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, a, b, 15, 1e-13, &err, &l1);
    } else {
        value = -boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, b, a, 15, 1e-13, &err, &l1);
    }
    Integral out{value, err, true};
    out.converged = std::isfinite(value) && err <= std::max(kQuadratureTolerance, 1e-12 * l1);
    return out;
}

double complex_overflow_sign(const FamilyMap& f, Complex z)
{
    const double x = z.real();
    const double y = z.imag();
    switch (f.kind()) {
    case FamilyKind::Exponential: return sign_of(std::cos(y));
    case FamilyKind::StandardDeg: {
        const auto& p = f.as<StandardDegParams>();
        return sign_of((p.a * z * std::exp(Complex{0.0, y})).real());
    }
    case FamilyKind::Cosine: {
        const auto& p = f.as<CosineParams>();
        return sign_of(p.a * std::sin(x) + p.b * std::cos(x));
    }
    case FamilyKind::TrigLift: {
        // The highest frequency dominates once cosh(2 pi j y) overflows.
        const auto poly = f.trig();
        for (int j = poly.modality(); j >= 1; --j) {
            const double s = poly.sin_coeffs[static_cast<std::size_t>(j - 1)];
            const double c = poly.cos_coeffs[static_cast<std::size_t>(j - 1)];
            if (s != 0.0 || c != 0.0)
                return sign_of(s * std::sin(kTau * j * x) + c * std::cos(kTau * j * x));
        }
        return 1;
    }
    case FamilyKind::IntegralPE: break;
    }
    return 1;
}

}  // namespace

std::string_view to_string(FamilyKind kind)
{
    switch (kind) {
    case FamilyKind::TrigLift: return "trig_lift";
    case FamilyKind::Cosine: return "cosine";
    case FamilyKind::StandardDeg: return "standard_deg";
    case FamilyKind::Exponential: return "exponential";
    case FamilyKind::IntegralPE: return "integral_pe";
    }
    return "unknown";
}

TrigPolynomial TrigPolynomial::from_mu(int degree, int modality, std::span<const double> mu)
{
    require(modality >= 1, "trig lift modality must be >= 1");
    require(mu.size() == static_cast<std::size_t>(2 * modality), "trig lift needs 2m coefficients");
    TrigPolynomial p;
    p.degree = degree;
    p.constant = mu[0];
    p.sin_coeffs.assign(static_cast<std::size_t>(modality), 0.0);
    p.cos_coeffs.assign(static_cast<std::size_t>(modality), 0.0);
    for (int j = 1; j < modality; ++j) {
        p.sin_coeffs[static_cast<std::size_t>(j - 1)] = mu[static_cast<std::size_t>(2 * j - 1)];
        p.cos_coeffs[static_cast<std::size_t>(j - 1)] = mu[static_cast<std::size_t>(2 * j)];
    }
    p.sin_coeffs.back() = mu.back();
    return p;
}

std::vector<double> TrigPolynomial::to_mu() const
{
    const int m = modality();
    std::vector<double> mu(static_cast<std::size_t>(2 * m), 0.0);
    mu[0] = constant;
    for (int j = 1; j < m; ++j) {
        mu[static_cast<std::size_t>(2 * j - 1)] = sin_coeffs[static_cast<std::size_t>(j - 1)];
        mu[static_cast<std::size_t>(2 * j)] = cos_coeffs[static_cast<std::size_t>(j - 1)];
    }
    mu.back() = sin_coeffs.back();
    return mu;
}

FamilyMap FamilyMap::trig_lift(int degree, int modality, std::vector<double> mu, bool require_delta)
{
    require(degree >= 0, "trig lift degree must be >= 0");
    require(modality >= 1, "trig lift modality must be >= 1");
    require(mu.size() == static_cast<std::size_t>(2 * modality), "trig lift needs exactly 2m coefficients");
    require(all_finite(mu), "trig lift coefficients must be finite");
    if (require_delta)
        require(mu.back() > 0.0, "parameters in Delta need mu_2m > 0");
    const bool constant_map = degree == 0 && std::all_of(mu.begin() + 1, mu.end(), [](double v) { return v == 0.0; });
    require(!constant_map, "trig lift with D = 0 and no trigonometric terms is constant");
    return FamilyMap(TrigLiftParams{degree, modality, std::move(mu)});
}

FamilyMap FamilyMap::trig_lift(const TrigPolynomial& poly)
{
    require(poly.leakage() == 0.0, "cos(2 pi m t) term is not representable as a trig lift");
    return trig_lift(poly.degree, poly.modality(), poly.to_mu());
}

FamilyMap FamilyMap::cosine(double a, double b)
{
    require(std::isfinite(a) && std::isfinite(b), "cosine parameters must be finite");
    require(a * a + b * b > 0.0, "cosine family needs (a, b) != (0, 0)");
    return FamilyMap(CosineParams{a, b});
}

FamilyMap FamilyMap::standard(double a, double b)
{
    require(std::isfinite(a) && std::isfinite(b), "standard family parameters must be finite");
    require(a != 0.0, "degenerate standard family needs a != 0");
    return FamilyMap(StandardDegParams{a, b});
}

FamilyMap FamilyMap::exponential(double a)
{
    require(std::isfinite(a), "exponential parameter must be finite");
    return FamilyMap(ExponentialParams{a});
}

FamilyMap FamilyMap::integral_pe(std::vector<double> p, std::vector<double> q, double c, double x0)
{
    require(all_finite(p) && all_finite(q) && std::isfinite(c) && std::isfinite(x0),
            "integral_pe parameters must be finite");
    require(effective_degree(p) >= 0, "integral_pe needs P not identically zero");
    require(effective_degree(q) >= 1, "integral_pe needs deg Q >= 1");
    p.resize(static_cast<std::size_t>(effective_degree(p) + 1));
    q.resize(static_cast<std::size_t>(effective_degree(q) + 1));
    return FamilyMap(IntegralPEParams{std::move(p), std::move(q), c, x0});
}

FamilyMap::FamilyMap(Params p) : params_(std::move(p))
{
    if (const auto* t = std::get_if<TrigLiftParams>(&params_))
        trig_ = TrigPolynomial::from_mu(t->degree, t->modality, t->mu);
}

const TrigPolynomial& FamilyMap::trig() const
{
    if (kind() != FamilyKind::TrigLift)
        throw Error(ErrorCode::KindMismatch, "not a trig lift");
    return trig_;
}

std::vector<std::string> FamilyMap::parameter_names() const
{
    std::vector<std::string> names;
    switch (kind()) {
    case FamilyKind::TrigLift:
        for (std::size_t i = 1; i <= as<TrigLiftParams>().mu.size(); ++i)
            names.push_back("mu" + std::to_string(i));
        break;
    case FamilyKind::Cosine:
    case FamilyKind::StandardDeg: names = {"a", "b"}; break;
    case FamilyKind::Exponential: names = {"a"}; break;
    case FamilyKind::IntegralPE: {
        const auto& p = as<IntegralPEParams>();
        names = {"c", "x0"};
        for (std::size_t i = 0; i < p.p.size(); ++i)
            names.push_back("p" + std::to_string(i));
        for (std::size_t i = 0; i < p.q.size(); ++i)
            names.push_back("q" + std::to_string(i));
        break;
    }
    }
    return names;
}

namespace {

// Index suffix of names like "mu3" or "q1"; -1 when the prefix does not match.
int indexed(std::string_view name, std::string_view prefix)
{
    if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix)
        return -1;
    int v = 0;
    for (char ch : name.substr(prefix.size())) {
        if (ch < '0' || ch > '9')
            return -1;
        v = v * 10 + (ch - '0');
    }
    return v;
}

double* parameter_slot(FamilyMap::Params& params, std::string_view name)
{
    if (auto* t = std::get_if<TrigLiftParams>(&params)) {
        const int i = indexed(name, "mu");
        if (i >= 1 && static_cast<std::size_t>(i) <= t->mu.size())
            return &t->mu[static_cast<std::size_t>(i - 1)];
    } else if (auto* c = std::get_if<CosineParams>(&params)) {
        if (name == "a") return &c->a;
        if (name == "b") return &c->b;
    } else if (auto* s = std::get_if<StandardDegParams>(&params)) {
        if (name == "a") return &s->a;
        if (name == "b") return &s->b;
    } else if (auto* e = std::get_if<ExponentialParams>(&params)) {
        if (name == "a") return &e->a;
    } else if (auto* ip = std::get_if<IntegralPEParams>(&params)) {
        if (name == "c") return &ip->c;
        if (name == "x0") return &ip->x0;
        if (int i = indexed(name, "p"); i >= 0 && static_cast<std::size_t>(i) < ip->p.size())
            return &ip->p[static_cast<std::size_t>(i)];
        if (int i = indexed(name, "q"); i >= 0 && static_cast<std::size_t>(i) < ip->q.size())
            return &ip->q[static_cast<std::size_t>(i)];
    }
    return nullptr;
}

}  // namespace

double FamilyMap::parameter(std::string_view name) const
{
    auto copy = params_;
    if (double* slot = parameter_slot(copy, name))
        return *slot;
    throw Error(ErrorCode::InvalidParameter, "unknown parameter '" + std::string(name) + "' for " + std::string(to_string(kind())));
}

FamilyMap FamilyMap::with_parameter(std::string_view name, double value) const
{
    auto copy = params_;
    double* slot = parameter_slot(copy, name);
    if (slot == nullptr)
        throw Error(ErrorCode::InvalidParameter, "unknown parameter '" + std::string(name) + "' for " + std::string(to_string(kind())));
    *slot = value;
    // Re-run the factory so invariants hold for the new value.
    return std::visit(
        [](auto&& p) -> FamilyMap {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, TrigLiftParams>)
                return trig_lift(p.degree, p.modality, p.mu);
            else if constexpr (std::is_same_v<P, CosineParams>)
                return cosine(p.a, p.b);
            else if constexpr (std::is_same_v<P, StandardDegParams>)
                return standard(p.a, p.b);
            else if constexpr (std::is_same_v<P, ExponentialParams>)
                return exponential(p.a);
            else
                return integral_pe(p.p, p.q, p.c, p.x0);
        },
        copy);
}

RealValue eval(const FamilyMap& f, double x, bool want_derivative)
{
    RealValue out;
    if (f.kind() == FamilyKind::IntegralPE) {
        const auto& p = f.as<IntegralPEParams>();
        out.value = p.c + integrate_pe(p, p.x0, x).value;
        if (want_derivative)
            out.derivative = horner(p.p, x) * std::exp(horner(p.q, x));
    } else {
        out.value = detail::closed_form_derivative(f, x, 0);
        if (want_derivative)
            out.derivative = detail::closed_form_derivative(f, x, 1);
    }
    if (!std::isfinite(out.value))
        out.overflow = std::isnan(out.value) ? 1 : sign_of(out.value);
    return out;
}

ComplexValue eval(const FamilyMap& f, Complex z, bool want_derivative)
{
    if (!f.closed_form())
        throw Error(ErrorCode::Unsupported, "integral_pe is evaluated on the real axis only");
    ComplexValue out;
    out.value = detail::closed_form_derivative(f, z, 0);
    if (want_derivative)
        out.derivative = detail::closed_form_derivative(f, z, 1);
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
        out.overflow = complex_overflow_sign(f, z);
    return out;
}

double derivative(const FamilyMap& f, double x, int order)
{
    if (order < 0)
        throw Error(ErrorCode::InvalidParameter, "derivative order must be >= 0");
    if (f.kind() == FamilyKind::IntegralPE && order <= 1)
        return order == 0 ? eval(f, x).value : eval(f, x, true).derivative;
    return detail::closed_form_derivative(f, x, order);
}

LogProfile log_profile(const FamilyMap& f, double x)
{
    LogProfile out;
    constexpr double kLarge = 700.0;
    if (f.kind() == FamilyKind::Exponential && x > kLarge) {
        const double a = f.as<ExponentialParams>().a;
        const double t = a * std::exp(-x);
        out.log_abs = x + std::log1p(t);
        out.log_derivative = 1.0 / std::abs(1.0 + t);
        return out;
    }
    if (f.kind() == FamilyKind::StandardDeg && x > kLarge) {
        const auto& p = f.as<StandardDegParams>();
        const double t = p.b * std::exp(-x) / (p.a * x);
        out.log_abs = std::log(std::abs(p.a * x)) + x + std::log(std::abs(1.0 + t));
        out.log_derivative = std::abs(x + 1.0) / std::abs(x * (1.0 + t));
        return out;
    }
    const auto v = eval(f, x, true);
    if (v.overflowed() || !std::isfinite(v.derivative)) {
        out.finite = false;
        return out;
    }
    out.log_abs = std::log(std::abs(v.value));
    out.log_derivative = std::abs(v.derivative) / std::abs(v.value);
    return out;
}

int CircleCriticalSet::total_multiplicity() const
{
    int n = 0;
    for (const auto& c : on_circle)
        n += c.multiplicity;
    for (const auto& c : off_circle)
        n += c.multiplicity;
    return n;
}

CircleCriticalSet critical_points_circle(int degree, int modality, std::span<const double> mu)
{
    require(mu.size() == static_cast<std::size_t>(2 * modality), "trig lift needs exactly 2m coefficients");
    require(mu.back() != 0.0, "critical point count needs mu_2m != 0");
    return critical_points_circle(TrigPolynomial::from_mu(degree, modality, mu));
}

CircleCriticalSet critical_points_circle(const TrigPolynomial& poly)
{
    int m = poly.modality();
    while (m > 0 && poly.sin_coeffs[static_cast<std::size_t>(m - 1)] == 0.0
           && poly.cos_coeffs[static_cast<std::size_t>(m - 1)] == 0.0)
        --m;
    CircleCriticalSet out;
    if (m == 0)
        return out;

    // w^m F'(t) with w = e^{2 pi i t}.
    out.numerator.assign(static_cast<std::size_t>(2 * m + 1), Complex{});
    out.numerator[static_cast<std::size_t>(m)] = static_cast<double>(poly.degree);
    for (int j = 1; j <= m; ++j) {
        const double s = poly.sin_coeffs[static_cast<std::size_t>(j - 1)];
        const double c = poly.cos_coeffs[static_cast<std::size_t>(j - 1)];
        const double pj = std::numbers::pi * j;
        out.numerator[static_cast<std::size_t>(m + j)] += pj * Complex{s, c};
        out.numerator[static_cast<std::size_t>(m - j)] += pj * Complex{s, -c};
    }

    auto roots = find_roots(out.numerator);
    out.roots = roots.roots;
    out.residuals = roots.residuals;
    for (std::size_t i = 0; i < out.residuals.size(); ++i) {
        if (out.residuals[i] > 1e-8) {
            std::ostringstream msg;
            msg << "critical point residual " << out.residuals[i] << " exceeds 1e-8 at root " << out.roots[i];
            throw Error(ErrorCode::RootFindingFailed, msg.str());
        }
    }
    for (const auto& cl : cluster_roots(out.roots)) {
        if (std::abs(std::abs(cl.value) - 1.0) <= 1e-9) {
            out.on_circle.push_back({cl.value, frac(std::arg(cl.value) / kTau), cl.multiplicity});
        } else {
            out.off_circle.push_back(cl);
        }
    }
    std::sort(out.on_circle.begin(), out.on_circle.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    return out;
}

std::vector<SingularValueInfo> singular_values(const FamilyMap& f)
{
    std::vector<SingularValueInfo> out;
    const double inf = std::numeric_limits<double>::infinity();
    switch (f.kind()) {
    case FamilyKind::Cosine: {
        const auto& p = f.as<CosineParams>();
        const double r = std::hypot(p.a, p.b);
        // a sin x + b cos x = r sin(x + phi) has maxima at x = pi/2 - phi.
        const double phi = std::atan2(p.b, p.a);
        const double xmax = std::numbers::pi / 2 - phi;
        out.push_back({-r, SingularKind::Critical, xmax - std::numbers::pi});
        out.push_back({r, SingularKind::Critical, xmax});
        break;
    }
    case FamilyKind::StandardDeg: {
        const auto& p = f.as<StandardDegParams>();
        out.push_back({p.b - p.a / std::numbers::e, SingularKind::Critical, -1.0});
        out.push_back({p.b, SingularKind::Asymptotic, -inf});
        break;
    }
    case FamilyKind::Exponential:
        out.push_back({f.as<ExponentialParams>().a, SingularKind::Asymptotic, -inf});
        break;
    case FamilyKind::TrigLift: {
        const auto poly = f.trig();
        const auto set = critical_points_circle(poly);
        for (const auto& cp : set.on_circle) {
            const double v = frac(detail::trig_derivative(poly, cp.t, 0));
            out.push_back({v, SingularKind::Critical, cp.t, cp.multiplicity, true, true});
        }
        // Off-circle critical points come in pairs w, 1/conj(w) sharing an
        // argument; each distinct argument contributes one projected orbit.
        std::vector<double> angles;
        for (const auto& cl : set.off_circle) {
            const double t = frac(std::arg(cl.value) / kTau);
            const bool seen = std::any_of(angles.begin(), angles.end(), [&](double s) {
                const double d = std::abs(s - t);
                return std::min(d, 1.0 - d) <= 1e-9;
            });
            if (!seen)
                angles.push_back(t);
        }
        std::sort(angles.begin(), angles.end());
        for (double t : angles) {
            const double v = frac(detail::trig_derivative(poly, t, 0));
            out.push_back({v, SingularKind::Critical, t, 1, true, false});
        }
        break;
    }
    case FamilyKind::IntegralPE: {
        const auto& p = f.as<IntegralPEParams>();
        for (const auto& root : real_roots(p.p)) {
            const double x = root.value.real();
            out.push_back({eval(f, x).value, SingularKind::Critical, x, root.multiplicity});
        }
        const int n = effective_degree(p.q);
        const double lead = p.q[static_cast<std::size_t>(n)];
        for (int dir : {-1, 1}) {
            const double sign_at_infinity = lead * ((dir < 0 && n % 2 == 1) ? -1.0 : 1.0);
            if (sign_at_infinity >= 0.0)
                continue;
            const auto integral = integrate_pe(p, p.x0, dir * inf);
            SingularValueInfo info{p.c + integral.value, SingularKind::Asymptotic, dir * inf};
            info.determined = integral.converged && integral.error <= 1e-8 * std::max(1.0, std::abs(integral.value));
            out.push_back(info);
        }
        break;
    }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    return out;
}

namespace {

struct CriticalSearch {
    const FamilyMap& f;
    std::vector<CriticalPoint> found;

    double d1(double x) const { return detail::closed_form_derivative(f, x, 1); }
    double d2(double x) const { return detail::closed_form_derivative(f, x, 2); }

    int multiplicity_at(double x) const
    {
        for (int k = 2; k <= 12; ++k) {
            if (std::abs(detail::closed_form_derivative(f, x, k)) > 1e-8)
                return k - 1;
        }
        return 11;
    }

    // Root of g in [a, b] given a sign change, polished by Newton on g'.
    template <class G, class DG>
    static double solve(G g, DG dg, double a, double b)
    {
        double ga = g(a);
        for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
            const double mid = 0.5 * (a + b);
            const double gm = g(mid);
            if (gm == 0.0)
                return mid;
            if ((gm < 0.0) == (ga < 0.0)) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
            }
        }
        double x = 0.5 * (a + b);
        for (int i = 0; i < 2; ++i) {
            const double slope = dg(x);
            if (slope == 0.0)
                break;
            const double next = x - g(x) / slope;
            if (std::abs(next - x) > 1e-12 || !std::isfinite(next))
                break;
            x = next;
        }
        return x;
    }

    void add(double x) { found.push_back({x, multiplicity_at(x)}); }

    void scan_cell(double a, double b, int depth)
    {
        const double fa = d1(a);
        const double fb = d1(b);
        const double sa = d2(a);
        const double sb = d2(b);
        const bool extremum_inside = (sa < 0.0) != (sb < 0.0);
        if (!extremum_inside) {
            if (fa == 0.0)
                add(a);
            else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0)
                add(solve([&](double x) { return d1(x); }, [&](double x) { return d2(x); }, a, b));
            return;
        }
        if (depth < 6) {
            const double mid = 0.5 * (a + b);
            scan_cell(a, mid, depth + 1);
            scan_cell(mid, b, depth + 1);
            return;
        }
        // f' has a single extremum e in the cell: up to two simple roots or an even root at e.
        const double e = solve([&](double x) { return d2(x); }, [&](double x) { return derivative(f, x, 3); }, a, b);
        const double fe = d1(e);
        const double scale = 1.0 + std::abs(d2(a)) * (b - a);
        if (fa == 0.0)
            add(a);
        if (std::abs(fe) <= 1e-12 * scale) {
            add(e);
            return;
        }
        if (fa != 0.0 && (fa < 0.0) != (fe < 0.0))
            add(solve([&](double x) { return d1(x); }, [&](double x) { return d2(x); }, a, e));
        if (fb != 0.0 && (fe < 0.0) != (fb < 0.0))
            add(solve([&](double x) { return d1(x); }, [&](double x) { return d2(x); }, e, b));
    }
};

}  // namespace

std::vector<CriticalPoint> critical_points_real(const FamilyMap& f, double lo, double hi)
{
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error(ErrorCode::InvalidParameter, "critical point search needs a finite interval lo < hi");
    if (!f.closed_form())
        throw Error(ErrorCode::Unsupported, "critical point search needs a closed-form kind");

    CriticalSearch search{f, {}};
    const auto cells = static_cast<long>(std::max(16.0, std::ceil(256.0 * (hi - lo))));
    double a = lo;
    for (long i = 1; i <= cells; ++i) {
        const double b = i == cells ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
        search.scan_cell(a, b, 0);
        a = b;
    }
    if (search.d1(hi) == 0.0)
        search.add(hi);

    auto& pts = search.found;
    std::sort(pts.begin(), pts.end(), [](const auto& p, const auto& q) { return p.x < q.x; });
    std::vector<CriticalPoint> out;
    for (const auto& p : pts) {
        if (!out.empty() && p.x - out.back().x <= 1e-12)
            continue;
        out.push_back(p);
    }
    for (const auto& p : out) {
        if (p.x - lo <= 1e-12 || hi - p.x <= 1e-12) {
            std::ostringstream msg;
            msg << "f' vanishes at interval endpoint " << p.x;
            throw Error(ErrorCode::EndpointDegenerate, msg.str());
        }
    }
    return out;
}

}  // namespace realdyn
