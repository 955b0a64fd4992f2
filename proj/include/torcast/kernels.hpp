#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace torcast::kernels {

/// Inner-loop implementation selected at runtime. Every kernel yields
/// bitwise-identical results across variants; selection affects speed only.
enum class Variant {
    scalar,
    avx2,
};

const char* variant_name(Variant v);

/// Variants compiled into this binary.
std::vector<Variant> compiled_variants();

/// Compiled in and runnable on the current CPU.
bool variant_supported(Variant v);

/// Process-wide selection. Defaults to the widest supported variant,
/// overridable with TORCAST_KERNELS=scalar|avx2|auto in the environment.
Variant active_variant();
void set_active_variant(Variant v);

/// Resolves "scalar" | "avx2" | "auto" to a supported variant.
Variant resolve_variant(const std::string& name);

/// Gaussian accumulation over a node-centered grid, row-major output:
///   out[j*nx+i] += sum_r scale * exp(neg_inv_two_sigma_sq * d_r^2(i,j))
/// Reports are consumed in ascending index order for every node.
void kde_accumulate(Variant v, double* out, const double* xs, int nx, const double* ys, int ny,
                    const double* rx, const double* ry, std::size_t nr,
                    double neg_inv_two_sigma_sq, double scale);

/// Windowed disk sum:
///   out[j*nx+i] = cell_area * sum_{dj=-m..m} sum_{di=-hw[dj+m]..hw[dj+m]} in[j+dj][i+di]
/// with out-of-grid cells treated as zero. half_width entries < 0 mark rows
/// outside the disk. in and out must not alias.
void disk_sum(Variant v, double* out, const double* in, int nx, int ny, const int* half_width,
              int m, double cell_area);

/// out[i] = 1 - exp(-lam[i])
void one_minus_exp_neg(Variant v, double* out, const double* lam, std::size_t n);

/// The kernel-local exp shared by all variants, exposed for accuracy tests.
double kernel_exp(double x);

}  // namespace torcast::kernels
