#include "syzlab/kernels.hpp"

#include <cmath>
#include <string>

#include "syzlab/errors.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define SYZ_HAVE_X86 1
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#define SYZ_HAVE_NEON 1
#endif

namespace syz {

namespace {

// Constants shared by every variant.  With eps' = eps / alpha:
//   H_xx = alpha W eps' / 2,  H_xy = p + i q,  H_yy = alpha (1/(eps' W) + W eps' |Gamma|^2 / 2)
//   Pf = 4 (H_xx H_yy - p^2 - q^2) and the residual is Pf / (2 alpha^2) - 1.
struct KernelConsts {
    double two_pi_over_k;  // W = two_pi_over_k / l
    double epsp;           // eps / alpha
    double alpha;
    double g_re_coef;      // Re Gamma = g_re_coef * l
    double inv_two_alpha2;
};

KernelConsts make_consts(const ModelParams& p) {
    return {kTwoPi / p.k, p.eps / p.alpha, p.alpha, p.b0 / (2.0 * kPi * kPi),
            1.0 / (2.0 * p.alpha * p.alpha)};
}

inline double residual_one(const KernelConsts& c, double ell, double x2) {
    const double w = c.two_pi_over_k / ell;
    const double we = w * c.epsp;
    const double g_re = c.g_re_coef * ell;
    const double g_im = x2 / ell;
    const double hxx = c.alpha * we * 0.5;
    const double pr = -c.alpha * we * g_re * 0.5;
    const double qi = c.alpha * we * g_im * 0.5;
    const double hyy = c.alpha * (1.0 / we + we * (g_re * g_re + g_im * g_im) * 0.5);
    const double m01 = 2.0 * hyy;
    const double m23 = 2.0 * hxx;
    const double m02 = 2.0 * qi;
    const double m13 = 2.0 * qi;
    const double m03 = 2.0 * pr;
    const double m12 = -2.0 * pr;
    const double pf = m01 * m23 - m02 * m13 + m03 * m12;
    return pf * c.inv_two_alpha2 - 1.0;
}

void run_scalar(const KernelConsts& c, const double* ell, const double* x2, double* out,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = residual_one(c, ell[i], x2[i]);
}

#ifdef SYZ_HAVE_X86
__attribute__((target("avx2"))) void run_avx2(const KernelConsts& c, const double* ell,
                                              const double* x2, double* out, std::size_t n) {
    const __m256d tpk = _mm256_set1_pd(c.two_pi_over_k);
    const __m256d epsp = _mm256_set1_pd(c.epsp);
    const __m256d alpha = _mm256_set1_pd(c.alpha);
    const __m256d grc = _mm256_set1_pd(c.g_re_coef);
    const __m256d inv2a2 = _mm256_set1_pd(c.inv_two_alpha2);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d mtwo = _mm256_set1_pd(-2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d l = _mm256_loadu_pd(ell + i);
        const __m256d x = _mm256_loadu_pd(x2 + i);
        const __m256d w = _mm256_div_pd(tpk, l);
        const __m256d we = _mm256_mul_pd(w, epsp);
        const __m256d g_re = _mm256_mul_pd(grc, l);
        const __m256d g_im = _mm256_div_pd(x, l);
        const __m256d awe = _mm256_mul_pd(alpha, we);
        const __m256d hxx = _mm256_mul_pd(awe, half);
        const __m256d pr = _mm256_mul_pd(_mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), awe), g_re), half);
        const __m256d qi = _mm256_mul_pd(_mm256_mul_pd(awe, g_im), half);
        const __m256d g2 = _mm256_add_pd(_mm256_mul_pd(g_re, g_re), _mm256_mul_pd(g_im, g_im));
        const __m256d hyy = _mm256_mul_pd(
            alpha, _mm256_add_pd(_mm256_div_pd(one, we), _mm256_mul_pd(_mm256_mul_pd(we, g2), half)));
        const __m256d m01 = _mm256_mul_pd(two, hyy);
        const __m256d m23 = _mm256_mul_pd(two, hxx);
        const __m256d m02 = _mm256_mul_pd(two, qi);
        const __m256d m13 = _mm256_mul_pd(two, qi);
        const __m256d m03 = _mm256_mul_pd(two, pr);
        const __m256d m12 = _mm256_mul_pd(mtwo, pr);
        const __m256d pf = _mm256_add_pd(
            _mm256_sub_pd(_mm256_mul_pd(m01, m23), _mm256_mul_pd(m02, m13)), _mm256_mul_pd(m03, m12));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_mul_pd(pf, inv2a2), one));
    }
    run_scalar(c, ell + i, x2 + i, out + i, n - i);
}
#endif

#ifdef SYZ_HAVE_NEON
void run_neon(const KernelConsts& c, const double* ell, const double* x2, double* out,
              std::size_t n) {
    const float64x2_t tpk = vdupq_n_f64(c.two_pi_over_k);
    const float64x2_t epsp = vdupq_n_f64(c.epsp);
    const float64x2_t alpha = vdupq_n_f64(c.alpha);
    const float64x2_t grc = vdupq_n_f64(c.g_re_coef);
    const float64x2_t inv2a2 = vdupq_n_f64(c.inv_two_alpha2);
    const float64x2_t half = vdupq_n_f64(0.5);
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t mtwo = vdupq_n_f64(-2.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t l = vld1q_f64(ell + i);
        const float64x2_t x = vld1q_f64(x2 + i);
        const float64x2_t w = vdivq_f64(tpk, l);
        const float64x2_t we = vmulq_f64(w, epsp);
        const float64x2_t g_re = vmulq_f64(grc, l);
        const float64x2_t g_im = vdivq_f64(x, l);
        const float64x2_t awe = vmulq_f64(alpha, we);
        const float64x2_t hxx = vmulq_f64(awe, half);
        const float64x2_t pr = vmulq_f64(vmulq_f64(vnegq_f64(awe), g_re), half);
        const float64x2_t qi = vmulq_f64(vmulq_f64(awe, g_im), half);
        const float64x2_t g2 = vaddq_f64(vmulq_f64(g_re, g_re), vmulq_f64(g_im, g_im));
        const float64x2_t hyy =
            vmulq_f64(alpha, vaddq_f64(vdivq_f64(one, we), vmulq_f64(vmulq_f64(we, g2), half)));
        const float64x2_t m01 = vmulq_f64(two, hyy);
        const float64x2_t m23 = vmulq_f64(two, hxx);
        const float64x2_t m02 = vmulq_f64(two, qi);
        const float64x2_t m13 = vmulq_f64(two, qi);
        const float64x2_t m03 = vmulq_f64(two, pr);
        const float64x2_t m12 = vmulq_f64(mtwo, pr);
        const float64x2_t pf =
            vaddq_f64(vsubq_f64(vmulq_f64(m01, m23), vmulq_f64(m02, m13)), vmulq_f64(m03, m12));
        vst1q_f64(out + i, vsubq_f64(vmulq_f64(pf, inv2a2), one));
    }
    run_scalar(c, ell + i, x2 + i, out + i, n - i);
}
#endif

}  // namespace

const char* simd_path_name(SimdPath p) {
    switch (p) {
        case SimdPath::Scalar:
            return "scalar";
        case SimdPath::Avx2:
            return "avx2";
        case SimdPath::Neon:
            return "neon";
    }
    return "?";
}

bool simd_path_available(SimdPath p) {
    switch (p) {
        case SimdPath::Scalar:
            return true;
        case SimdPath::Avx2:
#ifdef SYZ_HAVE_X86
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case SimdPath::Neon:
#ifdef SYZ_HAVE_NEON
            return true;
#else
            return false;
#endif
    }
    return false;
}

SimdPath best_simd_path() {
    if (simd_path_available(SimdPath::Avx2)) return SimdPath::Avx2;
    if (simd_path_available(SimdPath::Neon)) return SimdPath::Neon;
    return SimdPath::Scalar;
}

void ma_residual_batch(const ModelParams& p, std::span<const double> ell,
                       std::span<const double> x2, std::span<double> out, SimdPath path) {
    p.validate();
    if (!p.kappa_is_one()) throw ValidationError("ma_residual_batch supports kappa = 1 only");
    if (ell.size() != x2.size() || out.size() != ell.size()) {
        throw ValidationError("ma_residual_batch: input and output sizes differ");
    }
    for (double l : ell) {
        if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("ma_residual_batch: l must be positive");
    }
    if (!simd_path_available(path)) {
        throw ValidationError(std::string("SIMD path not available here: ") + simd_path_name(path));
    }
    const KernelConsts c = make_consts(p);
    switch (path) {
        case SimdPath::Scalar:
            run_scalar(c, ell.data(), x2.data(), out.data(), ell.size());
            return;
        case SimdPath::Avx2:
#ifdef SYZ_HAVE_X86
            run_avx2(c, ell.data(), x2.data(), out.data(), ell.size());
#endif
            return;
        case SimdPath::Neon:
#ifdef SYZ_HAVE_NEON
            run_neon(c, ell.data(), x2.data(), out.data(), ell.size());
#endif
            return;
    }
}

}  // namespace syz
