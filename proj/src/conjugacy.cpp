#include "realdyn/conjugacy.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "realdyn/error.hpp"

namespace realdyn {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

std::pair<double, double> quarter_table(int quarter)
{
    switch (quarter & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

}  // namespace

RotationAngle RotationAngle::rational(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        throw Error(ErrorCode::InvalidParameter, "rotation denominator must be nonzero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    RotationAngle r;
    r.num_ = num / (g == 0 ? 1 : g);
    r.den_ = den / (g == 0 ? 1 : g);
    r.value_ = static_cast<double>(r.num_) / static_cast<double>(r.den_);
    return r;
}

RotationAngle RotationAngle::real(double value)
{
    if (!std::isfinite(value))
        throw Error(ErrorCode::InvalidParameter, "rotation must be finite");
    RotationAngle r;
    r.value_ = value;
    return r;
}

std::pair<double, double> RotationAngle::cos_sin(int j) const
{
    if (is_rational()) {
        // j*num/den reduced mod 1 keeps the argument small.
        std::int64_t r = (static_cast<std::int64_t>(j) * num_) % den_;
        if (r < 0)
            r += den_;
        if ((4 * r) % den_ == 0)
            return quarter_table(static_cast<int>(4 * r / den_));
        const double angle = kTau * static_cast<double>(r) / static_cast<double>(den_);
        return {std::cos(angle), std::sin(angle)};
    }
    const double x = static_cast<double>(j) * value_;
    const double fr = x - std::floor(x);
    const double q = 4.0 * fr;
    if (q == std::floor(q))
        return quarter_table(static_cast<int>(q));
    return {std::cos(kTau * fr), std::sin(kTau * fr)};
}

bool RotationAngle::half_turn_multiple(int j) const
{
    if (is_rational())
        return (2 * static_cast<std::int64_t>(j) * num_) % den_ == 0;
    const double x = 2.0 * static_cast<double>(j) * value_;
    return x == std::floor(x);
}

bool RotationAngle::full_turn_multiple(int j) const
{
    if (is_rational())
        return (static_cast<std::int64_t>(j) * num_) % den_ == 0;
    const double x = static_cast<double>(j) * value_;
    return x == std::floor(x);
}

TrigPolynomial rotate(const TrigPolynomial& poly, const RotationAngle& beta)
{
    TrigPolynomial out = poly;
    out.constant = poly.constant - static_cast<double>(poly.degree - 1) * beta.value();
    for (int j = 1; j <= poly.modality(); ++j) {
        const auto idx = static_cast<std::size_t>(j - 1);
        const auto [c, s] = beta.cos_sin(j);
        // sin(w(t-b)) = sin wt cos wb - cos wt sin wb;  cos(w(t-b)) = cos wt cos wb + sin wt sin wb.
        out.sin_coeffs[idx] = poly.sin_coeffs[idx] * c + poly.cos_coeffs[idx] * s;
        out.cos_coeffs[idx] = poly.cos_coeffs[idx] * c - poly.sin_coeffs[idx] * s;
    }
    return out;
}

RotationConjugate conjugate_by_rotation(int degree, int modality, std::span<const double> mu, const RotationAngle& beta)
{
    const auto poly = TrigPolynomial::from_mu(degree, modality, mu);
    RotationConjugate out;
    out.poly = rotate(poly, beta);
    out.mu = out.poly.to_mu();
    out.leakage = out.poly.leakage();
    const bool leak_free = beta.is_rational() ? beta.half_turn_multiple(modality) : std::abs(out.leakage) <= 1e-12;
    if (leak_free)
        out.poly.cos_coeffs.back() = 0.0;
    out.in_delta = leak_free && out.mu.back() > 0.0;
    return out;
}

TrigPolynomial normalize_translation(int degree, int modality, std::span<const double> mu)
{
    if (degree == 1)
        throw Error(ErrorCode::InvalidDegree, "translation normalization needs D != 1");
    const auto poly = TrigPolynomial::from_mu(degree, modality, mu);
    auto out = rotate(poly, RotationAngle::real(mu[0] / static_cast<double>(degree - 1)));
    return out;
}

std::optional<AffineMapR> affine_conjugacy_check(const FamilyMap& f, const FamilyMap& g)
{
    if (f.kind() != g.kind() || (f.kind() != FamilyKind::Cosine && f.kind() != FamilyKind::StandardDeg))
        throw Error(ErrorCode::KindMismatch, "affine conjugacy check needs two cosine maps or two standard maps");

    AffineMapR candidate;
    double lo = -10.0;
    double hi = 10.0;
    if (f.kind() == FamilyKind::Cosine) {
        // Both maps have period 2 pi, so the scale is 1; images [-R, R] are
        // symmetric about 0, so the shift matching their midpoints is 0.
        const double period_f = kTau;
        const double period_g = kTau;
        candidate.scale = period_f / period_g;
        const double mid_f = 0.0;
        const double mid_g = 0.0;
        candidate.shift = mid_g - candidate.scale * mid_f;
    } else {
        // M fixes the critical point -1 and the unique preimage 0 of the asymptotic value.
        const double crit_f = -1.0;
        const double crit_g = -1.0;
        const double zero_f = 0.0;
        const double zero_g = 0.0;
        candidate.scale = (zero_g - crit_g) / (zero_f - crit_f);
        candidate.shift = zero_g - candidate.scale * zero_f;
        lo = -8.0;
        hi = 2.0;
    }

    const auto inv = candidate.inverse();
    for (int i = 0; i < 100; ++i) {
        const double x = lo + (hi - lo) * (i + 0.5) / 100.0;
        const double lhs = candidate(eval(f, inv(x)).value);
        const double rhs = eval(g, x).value;
        if (std::abs(lhs - rhs) > 1e-10 * (1.0 + std::abs(rhs)))
            return std::nullopt;
    }
    return candidate;
}

}  // namespace realdyn
