#include "vecmath.hpp"

#include <cmath>

#if defined(REALDYN_HAVE_LIBMVEC)
#include <immintrin.h>

extern "C" {
__attribute__((target("avx2"))) __m256d _ZGVdN4v_sin(__m256d);
__attribute__((target("avx2"))) __m256d _ZGVdN4v_cos(__m256d);
__attribute__((target("avx2"))) __m256d _ZGVdN4v_exp(__m256d);
}
#endif

namespace realdyn::detail {

namespace {

using LaneFn = void (*)(const double*, double*);

void sin_scalar(const double* in, double* out)
{
    for (int i = 0; i < kLanes; ++i)
        out[i] = std::sin(in[i]);
}

void cos_scalar(const double* in, double* out)
{
    for (int i = 0; i < kLanes; ++i)
        out[i] = std::cos(in[i]);
}

void exp_scalar(const double* in, double* out)
{
    for (int i = 0; i < kLanes; ++i)
        out[i] = std::exp(in[i]);
}

#if defined(REALDYN_HAVE_LIBMVEC)
__attribute__((target("avx2"))) void sin_avx2(const double* in, double* out)
{
    for (int i = 0; i < kLanes; i += 4)
        _mm256_storeu_pd(out + i, _ZGVdN4v_sin(_mm256_loadu_pd(in + i)));
}

__attribute__((target("avx2"))) void cos_avx2(const double* in, double* out)
{
    for (int i = 0; i < kLanes; i += 4)
        _mm256_storeu_pd(out + i, _ZGVdN4v_cos(_mm256_loadu_pd(in + i)));
}

__attribute__((target("avx2"))) void exp_avx2(const double* in, double* out)
{
    for (int i = 0; i < kLanes; i += 4)
        _mm256_storeu_pd(out + i, _ZGVdN4v_exp(_mm256_loadu_pd(in + i)));
}

bool use_avx2()
{
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
}
#else
bool use_avx2() { return false; }
#endif

}  // namespace

void sin_lanes(const double* in, double* out)
{
#if defined(REALDYN_HAVE_LIBMVEC)
    if (use_avx2())
        return sin_avx2(in, out);
#endif
    sin_scalar(in, out);
}

void cos_lanes(const double* in, double* out)
{
#if defined(REALDYN_HAVE_LIBMVEC)
    if (use_avx2())
        return cos_avx2(in, out);
#endif
    cos_scalar(in, out);
}

void exp_lanes(const double* in, double* out)
{
#if defined(REALDYN_HAVE_LIBMVEC)
    if (use_avx2())
        return exp_avx2(in, out);
#endif
    exp_scalar(in, out);
}

const char* lane_backend() { return use_avx2() ? "libmvec-avx2" : "scalar"; }

}  // namespace realdyn::detail
