// AVX2/FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// only ever dispatched to after a runtime cpuid check (see dispatch.cpp).
//
// exp/log are evaluated in-register: Cody-Waite range reduction plus a
// degree-13 Taylor polynomial for exp, and the atanh series of the folded
// mantissa for log. Worst-case error is a few ulp, which the equivalence
// suite pins against the scalar reference.

#include "spherelift/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

namespace spherelift::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);                       // (a0+a2, a1+a3)
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));  // (a0+a2)+(a1+a3)
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

// exp(x) for finite or -inf lanes. x < -708 flushes to 0, x > 709 to +inf.
inline __m256d v_exp(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d hi_cut = _mm256_set1_pd(709.0);
    const __m256d lo_cut = _mm256_set1_pd(-708.0);

    __m256d under = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
    __m256d over = _mm256_cmp_pd(x, hi_cut, _CMP_GT_OQ);
    __m256d xc = _mm256_max_pd(_mm256_min_pd(x, hi_cut), lo_cut);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    // Taylor series of exp on |r| <= ln(2)/2, truncation below 1 ulp.
    __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);     // 1/13!
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    // scale by 2^n through the exponent bits; n is in [-1022, 1023] here
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    p = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));

    p = _mm256_blendv_pd(p, _mm256_setzero_pd(), under);
    p = _mm256_blendv_pd(p, _mm256_set1_pd(std::numeric_limits<double>::infinity()), over);
    return p;
}

// log(x) for strictly positive normal doubles.
inline __m256d v_log(__m256d x) {
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d sqrt2 = _mm256_set1_pd(1.41421356237309504880);
    const __m256d one = _mm256_set1_pd(1.0);

    __m256i bits = _mm256_castpd_si256(x);
    __m256i expo = _mm256_srli_epi64(bits, 52);
    // exact int->double for small nonnegative integers
    __m256d ebias = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(expo, _mm256_set1_epi64x(0x4330000000000000LL))),
        _mm256_set1_pd(4503599627370496.0));
    __m256d e = _mm256_sub_pd(ebias, _mm256_set1_pd(1023.0));

    __m256i mant = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FF0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant);  // in [1, 2)

    // fold to [sqrt2/2, sqrt2] so the series argument stays small
    __m256d fold = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), fold);
    e = _mm256_blendv_pd(e, _mm256_add_pd(e, one), fold);

    __m256d r = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    __m256d s = _mm256_mul_pd(r, r);

    // atanh series: log(m) = 2r * (1 + s/3 + s^2/5 + ... ), truncated at s^8
    __m256d q = _mm256_set1_pd(1.0 / 17.0);
    q = _mm256_fmadd_pd(q, s, _mm256_set1_pd(1.0 / 15.0));
    q = _mm256_fmadd_pd(q, s, _mm256_set1_pd(1.0 / 13.0));
    q = _mm256_fmadd_pd(q, s, _mm256_set1_pd(1.0 / 11.0));
    q = _mm256_fmadd_pd(q, s, _mm256_set1_pd(1.0 / 9.0));
    q = _mm256_fmadd_pd(q, s, _mm256_set1_pd(1.0 / 7.0));
    q = _mm256_fmadd_pd(q, s, _mm256_set1_pd(1.0 / 5.0));
    q = _mm256_fmadd_pd(q, s, _mm256_set1_pd(1.0 / 3.0));

    __m256d two_r = _mm256_add_pd(r, r);
    // low-order pieces first, exact e*ln2_hi product last
    __m256d t = _mm256_fmadd_pd(e, ln2_lo, _mm256_mul_pd(_mm256_mul_pd(two_r, s), q));
    t = _mm256_add_pd(t, two_r);
    return _mm256_fmadd_pd(e, ln2_hi, t);
}

double dot_avx2(const double* x, const double* y, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(double a, const double* x, double* y, size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double reduce_max_avx2(const double* x, size_t n) {
    if (n < 4) {
        double m = x[0];
        for (size_t i = 1; i < n; ++i)
            if (x[i] > m) m = x[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(x);
    size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    double m = hmax(acc);
    for (; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

double sum_exp_avx2(const double* x, size_t n, double shift) {
    const __m256d sh = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, v_exp(_mm256_sub_pd(_mm256_loadu_pd(x + i), sh)));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::exp(x[i] - shift);
    return s;
}

double dot_exp_avx2(const double* w, const double* x, size_t n, double shift) {
    const __m256d sh = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d e = v_exp(_mm256_sub_pd(_mm256_loadu_pd(x + i), sh));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), e, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * std::exp(x[i] - shift);
    return s;
}

void exp_shift_avx2(const double* x, double* out, size_t n, double shift) {
    const __m256d sh = _mm256_set1_pd(shift);
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, v_exp(_mm256_sub_pd(_mm256_loadu_pd(x + i), sh)));
    for (; i < n; ++i) out[i] = std::exp(x[i] - shift);
}

void grid_logpdf_avx2(const double* t, double* out, size_t n, const GridCoeffs& c) {
    const __m256d lin = _mm256_set1_pd(c.lin);
    const __m256d srt = _mm256_set1_pd(c.srt);
    const __m256d h = _mm256_set1_pd(c.h);
    const __m256d w0 = _mm256_set1_pd(c.w0);
    const __m256d w1 = _mm256_set1_pd(c.w1);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d neg_inf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());

    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d tv = _mm256_loadu_pd(t + i);
        __m256d w = _mm256_fnmadd_pd(tv, tv, _mm256_fmadd_pd(w1, tv, w0));
        __m256d ok = _mm256_cmp_pd(w, _mm256_setzero_pd(), _CMP_GT_OQ);
        __m256d ws = _mm256_blendv_pd(one, w, ok);  // keep sqrt/log happy off-support
        __m256d val = _mm256_mul_pd(lin, tv);
        val = _mm256_fmadd_pd(srt, _mm256_sqrt_pd(ws), val);
        val = _mm256_fmadd_pd(h, v_log(ws), val);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(neg_inf, val, ok));
    }
    for (; i < n; ++i) {
        const double ti = t[i];
        const double w = c.w0 + c.w1 * ti - ti * ti;
        out[i] = (w <= 0.0) ? -std::numeric_limits<double>::infinity()
                            : c.lin * ti + c.srt * std::sqrt(w) + c.h * std::log(w);
    }
}

constexpr Ops kAvx2Ops = {
    "avx2",        dot_avx2,      axpy_avx2,      reduce_max_avx2,
    sum_exp_avx2,  dot_exp_avx2,  exp_shift_avx2, grid_logpdf_avx2,
};

}  // namespace

const Ops* avx2_ops_build() { return &kAvx2Ops; }

}  // namespace spherelift::kernels

#else

namespace spherelift::kernels {
const Ops* avx2_ops_build() { return nullptr; }
}  // namespace spherelift::kernels

#endif
