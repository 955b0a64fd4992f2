#if defined(TORCAST_HAVE_AVX2_TU)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernels_exp.hpp"
#include "kernels_impl.hpp"

// AVX2 variants. Each lane executes the exact operation sequence of the
// scalar reference kernel (same FMA placement, same summation order), so
// outputs are bitwise equal to the scalar variant. Nodes that cannot be
// grouped four-wide (row remainders, disk-window margins) fall back to the
// per-node scalar sequence.

namespace torcast::kernels::detail {

namespace {

using namespace torcast::kernels_detail;

inline __m256d exp4(__m256d x) {
    const __m256d kd = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2E)),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fmadd_pd(kd, _mm256_set1_pd(-kLn2Hi), x);
    r = _mm256_fmadd_pd(kd, _mm256_set1_pd(-kLn2Lo), r);
    __m256d p = _mm256_set1_pd(kC12);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC11));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC10));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC9));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC8));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC7));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC6));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC4));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC3));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC2));
    p = _mm256_fmadd_pd(p, _mm256_mul_pd(r, r), r);
    p = _mm256_add_pd(p, _mm256_set1_pd(1.0));
    const __m128i k32 = _mm256_cvtpd_epi32(kd);
    const __m256i k64 = _mm256_cvtepi32_epi64(k32);
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
    const __m256d res = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
    const __m256d under = _mm256_cmp_pd(x, _mm256_set1_pd(kExpUnderflow), _CMP_LT_OQ);
    return _mm256_andnot_pd(under, res);
}

inline double kde_node(double x, double y, const double* rx, const double* ry, std::size_t nr,
                       double neg_inv_two_sigma_sq, double scale, double acc) {
    for (std::size_t r = 0; r < nr; ++r) {
        const double dx = x - rx[r];
        const double dy = y - ry[r];
        const double d2 = std::fma(dx, dx, dy * dy);
        const double e = exp_core(d2 * neg_inv_two_sigma_sq);
        acc = std::fma(scale, e, acc);
    }
    return acc;
}

inline double disk_node(const double* in, int nx, int ny, const int* half_width, int m, int i,
                        int j) {
    double acc = 0.0;
    for (int dj = -m; dj <= m; ++dj) {
        const int hw = half_width[dj + m];
        if (hw < 0) continue;
        const int jj = j + dj;
        if (jj < 0 || jj >= ny) continue;
        const double* row = in + static_cast<std::size_t>(jj) * nx;
        const int lo = i - hw < 0 ? 0 : i - hw;
        const int hi = i + hw >= nx ? nx - 1 : i + hw;
        for (int ii = lo; ii <= hi; ++ii) {
            acc += row[ii];
        }
    }
    return acc;
}

}  // namespace

void kde_accumulate_avx2(double* out, const double* xs, int nx, const double* ys, int ny,
                         const double* rx, const double* ry, std::size_t nr,
                         double neg_inv_two_sigma_sq, double scale) {
    const __m256d neg_s2 = _mm256_set1_pd(neg_inv_two_sigma_sq);
    const __m256d scale_v = _mm256_set1_pd(scale);
    for (int j = 0; j < ny; ++j) {
        const double y = ys[j];
        const __m256d y_v = _mm256_set1_pd(y);
        double* row = out + static_cast<std::size_t>(j) * nx;
        int i = 0;
        for (; i + 4 <= nx; i += 4) {
            const __m256d x_v = _mm256_loadu_pd(xs + i);
            __m256d acc = _mm256_loadu_pd(row + i);
            for (std::size_t r = 0; r < nr; ++r) {
                const __m256d dx = _mm256_sub_pd(x_v, _mm256_set1_pd(rx[r]));
                const __m256d dy = _mm256_sub_pd(y_v, _mm256_set1_pd(ry[r]));
                const __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
                const __m256d e = exp4(_mm256_mul_pd(d2, neg_s2));
                acc = _mm256_fmadd_pd(scale_v, e, acc);
            }
            _mm256_storeu_pd(row + i, acc);
        }
        for (; i < nx; ++i) {
            row[i] = kde_node(xs[i], y, rx, ry, nr, neg_inv_two_sigma_sq, scale, row[i]);
        }
    }
}

void disk_sum_avx2(double* out, const double* in, int nx, int ny, const int* half_width, int m,
                   double cell_area) {
    int hw_max = 0;
    for (int dj = -m; dj <= m; ++dj) {
        if (half_width[dj + m] > hw_max) hw_max = half_width[dj + m];
    }
    const __m256d area = _mm256_set1_pd(cell_area);
    // Four-wide groups are used only where no lane needs column clipping.
    const int full_lo = hw_max;
    const int full_hi = nx - 1 - hw_max;
    for (int j = 0; j < ny; ++j) {
        double* orow = out + static_cast<std::size_t>(j) * nx;
        int i = 0;
        for (; i < full_lo && i < nx; ++i) {
            orow[i] = disk_node(in, nx, ny, half_width, m, i, j) * cell_area;
        }
        for (; i + 3 <= full_hi; i += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int dj = -m; dj <= m; ++dj) {
                const int hw = half_width[dj + m];
                if (hw < 0) continue;
                const int jj = j + dj;
                if (jj < 0 || jj >= ny) continue;
                const double* row = in + static_cast<std::size_t>(jj) * nx + i;
                for (int di = -hw; di <= hw; ++di) {
                    acc = _mm256_add_pd(acc, _mm256_loadu_pd(row + di));
                }
            }
            _mm256_storeu_pd(orow + i, _mm256_mul_pd(acc, area));
        }
        for (; i < nx; ++i) {
            orow[i] = disk_node(in, nx, ny, half_width, m, i, j) * cell_area;
        }
    }
}

void one_minus_exp_neg_avx2(double* out, const double* lam, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d neg = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_xor_pd(_mm256_loadu_pd(lam + i), neg);
        _mm256_storeu_pd(out + i, _mm256_sub_pd(one, exp4(x)));
    }
    for (; i < n; ++i) {
        out[i] = 1.0 - exp_core(-lam[i]);
    }
}

}  // namespace torcast::kernels::detail

#endif  // TORCAST_HAVE_AVX2_TU
