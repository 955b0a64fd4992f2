#pragma once

#include <cstddef>

// Private linkage between the dispatch layer and the per-variant translation
// units. The AVX2 TU is only compiled on x86-64 (see CMakeLists).

namespace torcast::kernels::detail {

void kde_accumulate_scalar(double* out, const double* xs, int nx, const double* ys, int ny,
                           const double* rx, const double* ry, std::size_t nr,
                           double neg_inv_two_sigma_sq, double scale);
void disk_sum_scalar(double* out, const double* in, int nx, int ny, const int* half_width, int m,
                     double cell_area);
void one_minus_exp_neg_scalar(double* out, const double* lam, std::size_t n);

#if defined(TORCAST_HAVE_AVX2_TU)
void kde_accumulate_avx2(double* out, const double* xs, int nx, const double* ys, int ny,
                         const double* rx, const double* ry, std::size_t nr,
                         double neg_inv_two_sigma_sq, double scale);
void disk_sum_avx2(double* out, const double* in, int nx, int ny, const int* half_width, int m,
                   double cell_area);
void one_minus_exp_neg_avx2(double* out, const double* lam, std::size_t n);
#endif

}  // namespace torcast::kernels::detail
