#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "realdyn/polynomial.hpp"

namespace realdyn {

enum class FamilyKind { TrigLift, Cosine, StandardDeg, Exponential, IntegralPE };

std::string_view to_string(FamilyKind kind);

/// Lift t -> D t + mu_1 + mu_2m sin(2 pi m t)
///            + sum_{j<m} (mu_2j sin(2 pi j t) + mu_{2j+1} cos(2 pi j t)).
/// mu is stored 0-based, so mu[0] is the constant term.
struct TrigLiftParams {
    int degree = 1;
    int modality = 1;
    std::vector<double> mu;
};

/// a sin x + b cos x
struct CosineParams {
    double a = 0.0;
    double b = 0.0;
};

/// a x e^x + b
struct StandardDegParams {
    double a = 1.0;
    double b = 0.0;
};

/// e^x + a
struct ExponentialParams {
    double a = 0.0;
};

/// c + integral_{x0}^{x} P(w) e^{Q(w)} dw, polynomial coefficients ascending.
struct IntegralPEParams {
    std::vector<double> p;
    std::vector<double> q;
    double c = 0.0;
    double x0 = 0.0;
};

/// Degree-D trigonometric lift written with one sine and one cosine
/// coefficient per frequency j = 1..m. The trig-lift normal form has
/// cos_coeffs[m-1] == 0; conjugation may produce a nonzero value there.
struct TrigPolynomial {
    int degree = 1;
    double constant = 0.0;
    std::vector<double> sin_coeffs;
    std::vector<double> cos_coeffs;

    int modality() const { return static_cast<int>(sin_coeffs.size()); }

    static TrigPolynomial from_mu(int degree, int modality, std::span<const double> mu);
    /// Coefficient of cos(2 pi m t), which the mu layout cannot hold.
    double leakage() const { return cos_coeffs.empty() ? 0.0 : cos_coeffs.back(); }
    /// mu vector ignoring the leakage term.
    std::vector<double> to_mu() const;
};

class FamilyMap {
public:
    using Params = std::variant<TrigLiftParams, CosineParams, StandardDegParams, ExponentialParams, IntegralPEParams>;

    /// require_delta additionally enforces mu_2m > 0.
    static FamilyMap trig_lift(int degree, int modality, std::vector<double> mu, bool require_delta = false);
    static FamilyMap trig_lift(const TrigPolynomial& poly);
    static FamilyMap cosine(double a, double b);
    static FamilyMap standard(double a, double b);
    static FamilyMap exponential(double a);
    static FamilyMap integral_pe(std::vector<double> p, std::vector<double> q, double c = 0.0, double x0 = 0.0);

    FamilyKind kind() const { return static_cast<FamilyKind>(params_.index()); }
    const Params& params() const { return params_; }

    template <class P>
    const P& as() const { return std::get<P>(params_); }

    bool closed_form() const { return kind() != FamilyKind::IntegralPE; }
    /// Trig lifts act on the circle R/Z; everything else on the real line.
    bool circle_map() const { return kind() == FamilyKind::TrigLift; }

    /// Trig lifts only.
    const TrigPolynomial& trig() const;

    std::vector<std::string> parameter_names() const;
    double parameter(std::string_view name) const;
    FamilyMap with_parameter(std::string_view name, double value) const;

private:
    explicit FamilyMap(Params p);
    Params params_;
    TrigPolynomial trig_;  // cached for trig lifts
};

struct RealValue {
    double value = 0.0;
    double derivative = 0.0;
    int overflow = 0;  // +1 / -1: |f| exceeded the double range with that sign

    bool overflowed() const { return overflow != 0; }
};

struct ComplexValue {
    Complex value{};
    Complex derivative{};
    int overflow = 0;  // sign of the real part when the modulus overflowed

    bool overflowed() const { return overflow != 0; }
};

/// Real evaluation. Quadrature kinds hold an absolute tolerance of kQuadratureTolerance.
RealValue eval(const FamilyMap& f, double x, bool want_derivative = false);
/// Complex evaluation for closed-form kinds; IntegralPE throws Unsupported.
ComplexValue eval(const FamilyMap& f, Complex z, bool want_derivative = false);

inline constexpr double kQuadratureTolerance = 1e-10;

/// k-th derivative on the real line, closed-form kinds only.
double derivative(const FamilyMap& f, double x, int order);

/// log|f(x)| and |f'(x)|/|f(x)| computed without overflow for large |x|.
struct LogProfile {
    double log_abs = 0.0;
    double log_derivative = 0.0;
    bool finite = true;
};
LogProfile log_profile(const FamilyMap& f, double x);

enum class SingularKind { Critical, Asymptotic };

struct SingularValueInfo {
    double value = 0.0;
    SingularKind kind = SingularKind::Critical;
    /// Witnessing critical point, or +-infinity for the direction of an asymptotic path.
    double source = 0.0;
    int multiplicity = 1;
    /// False when an asymptotic integral failed to converge.
    bool determined = true;
    /// Trig lifts: false for the projection arg(w)/2pi of a critical point w off the unit circle.
    bool on_circle = true;
};

/// Singular values sorted ascending. Trig-lift values are circle points in [0,1).
std::vector<SingularValueInfo> singular_values(const FamilyMap& f);

struct CriticalPoint {
    double x = 0.0;
    int multiplicity = 1;
};

/// Real zeros of f' in [lo, hi], strictly increasing.
std::vector<CriticalPoint> critical_points_real(const FamilyMap& f, double lo, double hi);

struct CircleCriticalPoint {
    Complex w;
    double t = 0.0;  // arg(w) / 2 pi in [0, 1)
    int multiplicity = 1;
};

struct CircleCriticalSet {
    std::vector<Complex> numerator;   // ascending coefficients, degree 2m
    std::vector<Complex> roots;       // all 2m roots with multiplicity
    std::vector<double> residuals;
    std::vector<CircleCriticalPoint> on_circle;
    std::vector<ClusteredRoot> off_circle;

    int total_multiplicity() const;
};

/// Critical points of the circle map via F'(z) = R(e^{2 pi i z}).
CircleCriticalSet critical_points_circle(int degree, int modality, std::span<const double> mu);
CircleCriticalSet critical_points_circle(const TrigPolynomial& poly);

}  // namespace realdyn
