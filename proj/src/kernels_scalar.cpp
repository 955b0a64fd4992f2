#include <cmath>
#include <cstddef>

#include "kernels_exp.hpp"
#include "kernels_impl.hpp"

// Reference kernels. Summation order is the contract: nodes row-major,
// reports ascending, disk rows dj ascending then di ascending. The SIMD
// variants replicate these sequences lane-wise.

namespace torcast::kernels::detail {

void kde_accumulate_scalar(double* out, const double* xs, int nx, const double* ys, int ny,
                           const double* rx, const double* ry, std::size_t nr,
                           double neg_inv_two_sigma_sq, double scale) {
    for (int j = 0; j < ny; ++j) {
        const double y = ys[j];
        double* row = out + static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const double x = xs[i];
            double acc = row[i];
            for (std::size_t r = 0; r < nr; ++r) {
                const double dx = x - rx[r];
                const double dy = y - ry[r];
                const double d2 = std::fma(dx, dx, dy * dy);
                const double e = kernels_detail::exp_core(d2 * neg_inv_two_sigma_sq);
                acc = std::fma(scale, e, acc);
            }
            row[i] = acc;
        }
    }
}

void disk_sum_scalar(double* out, const double* in, int nx, int ny, const int* half_width, int m,
                     double cell_area) {
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
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
            out[static_cast<std::size_t>(j) * nx + i] = acc * cell_area;
        }
    }
}

void one_minus_exp_neg_scalar(double* out, const double* lam, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = 1.0 - kernels_detail::exp_core(-lam[i]);
    }
}

}  // namespace torcast::kernels::detail
