#pragma once

// Closed-form evaluation shared by the double, complex and quad-precision paths.

#include <cmath>
#include <complex>
#include <type_traits>

#include <boost/math/constants/constants.hpp>

#include "realdyn/error.hpp"
#include "realdyn/families.hpp"

namespace realdyn::detail {

template <class T>
struct real_of {
    using type = T;
};
template <class R>
struct real_of<std::complex<R>> {
    using type = R;
};
template <class T>
using real_of_t = typename real_of<T>::type;

/// sin(x + k pi/2) from s = sin x, c = cos x.
template <class T>
T quarter_shift(const T& s, const T& c, int k)
{
    switch (k & 3) {
    case 0: return s;
    case 1: return c;
    case 2: return -s;
    default: return -c;
    }
}

template <class T>
T trig_derivative(const TrigPolynomial& p, const T& t, int order)
{
    using R = real_of_t<T>;
    using std::cos;
    using std::sin;
    const R tau = R(2) * boost::math::constants::pi<R>();
    T acc = order == 0 ? T(R(p.degree)) * t + T(R(p.constant)) : T(order == 1 ? R(p.degree) : R(0));
    for (int j = 1; j <= p.modality(); ++j) {
        const R sj = R(p.sin_coeffs[j - 1]);
        const R cj = R(p.cos_coeffs[j - 1]);
        if (sj == R(0) && cj == R(0))
            continue;
        const R omega = tau * R(j);
        const T x = T(omega) * t;
        const T s = sin(x);
        const T c = cos(x);
        R scale = R(1);
        for (int i = 0; i < order; ++i)
            scale *= omega;
        acc += T(scale) * (T(sj) * quarter_shift(s, c, order) + T(cj) * quarter_shift(s, c, order + 1));
    }
    return acc;
}

template <class T>
T cosine_derivative(const CosineParams& p, const T& x, int order)
{
    using R = real_of_t<T>;
    using std::cos;
    using std::sin;
    const T s = sin(x);
    const T c = cos(x);
    return T(R(p.a)) * quarter_shift(s, c, order) + T(R(p.b)) * quarter_shift(s, c, order + 1);
}

template <class T>
T standard_derivative(const StandardDegParams& p, const T& x, int order)
{
    using R = real_of_t<T>;
    using std::exp;
    const T e = exp(x);
    T v = T(R(p.a)) * (x + T(R(order))) * e;
    if (order == 0)
        v += T(R(p.b));
    return v;
}

template <class T>
T exponential_derivative(const ExponentialParams& p, const T& x, int order)
{
    using R = real_of_t<T>;
    using std::exp;
    T v = exp(x);
    if (order == 0)
        v += T(R(p.a));
    return v;
}

/// order-th derivative of a closed-form kind; order 0 is the value.
template <class T>
T closed_form_derivative(const FamilyMap& f, const T& x, int order)
{
    switch (f.kind()) {
    case FamilyKind::TrigLift: return trig_derivative(f.trig(), x, order);
    case FamilyKind::Cosine: return cosine_derivative(f.as<CosineParams>(), x, order);
    case FamilyKind::StandardDeg: return standard_derivative(f.as<StandardDegParams>(), x, order);
    case FamilyKind::Exponential: return exponential_derivative(f.as<ExponentialParams>(), x, order);
    case FamilyKind::IntegralPE: break;
    }
    throw Error(ErrorCode::Unsupported, "closed-form evaluation is unavailable for integral_pe");
}

}  // namespace realdyn::detail
