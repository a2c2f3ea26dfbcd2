#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "realdyn/families.hpp"

namespace realdyn {

/// x -> scale * x + shift with scale > 0.
struct AffineMapR {
    double scale = 1.0;
    double shift = 0.0;

    double operator()(double x) const { return scale * x + shift; }
    AffineMapR inverse() const { return {1.0 / scale, -shift / scale}; }
    bool is_identity() const { return scale == 1.0 && shift == 0.0; }
};

/// Rotation amount beta, kept as an exact fraction when given as one.
class RotationAngle {
public:
    static RotationAngle rational(std::int64_t num, std::int64_t den);
    static RotationAngle real(double value);

    double value() const { return value_; }
    bool is_rational() const { return den_ != 0; }
    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    /// cos and sin of 2 pi j beta, exact at quarter turns.
    std::pair<double, double> cos_sin(int j) const;
    /// Whether j * beta is an integer multiple of 1/2 (so sin(2 pi j beta) == 0), decided exactly for fractions.
    bool half_turn_multiple(int j) const;
    /// Whether j * beta is an integer.
    bool full_turn_multiple(int j) const;

private:
    double value_ = 0.0;
    std::int64_t num_ = 0;
    std::int64_t den_ = 0;
};

struct RotationConjugate {
    TrigPolynomial poly;        // lift of M o f o M^-1 with M(t) = t + beta
    std::vector<double> mu;     // trig-lift coefficients (leakage dropped)
    double leakage = 0.0;       // coefficient of cos(2 pi m t)
    bool in_delta = false;
};

/// Lift t -> F(t - beta) + beta expanded with the addition theorems.
RotationConjugate conjugate_by_rotation(int degree, int modality, std::span<const double> mu, const RotationAngle& beta);
TrigPolynomial rotate(const TrigPolynomial& poly, const RotationAngle& beta);

/// Translation conjugate by M(t) = t + mu_1/(D-1), which removes the constant
/// term. The result may carry a cos(2 pi m t) term. Throws InvalidDegree for D = 1.
TrigPolynomial normalize_translation(int degree, int modality, std::span<const double> mu);

/// Affine conjugacy between two cosine maps or two standard maps, or nullopt.
/// The candidate is derived from the structural constraints (period and image
/// symmetry; fixed critical point, asymptotic preimage and infinity) and then
/// checked pointwise.
std::optional<AffineMapR> affine_conjugacy_check(const FamilyMap& f, const FamilyMap& g);

}  // namespace realdyn
