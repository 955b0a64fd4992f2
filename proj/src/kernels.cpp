#include "torcast/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "kernels_exp.hpp"
#include "kernels_impl.hpp"
#include "torcast/errors.hpp"

namespace torcast::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(TORCAST_HAVE_AVX2_TU)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Variant default_variant() {
    if (const char* env = std::getenv("TORCAST_KERNELS")) {
        return resolve_variant(env);
    }
    return cpu_has_avx2() ? Variant::avx2 : Variant::scalar;
}

std::atomic<Variant>& active_slot() {
    static std::atomic<Variant> slot{default_variant()};
    return slot;
}

}  // namespace

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::scalar: return "scalar";
        case Variant::avx2: return "avx2";
    }
    return "unknown";
}

std::vector<Variant> compiled_variants() {
    std::vector<Variant> out{Variant::scalar};
#if defined(TORCAST_HAVE_AVX2_TU)
    out.push_back(Variant::avx2);
#endif
    return out;
}

bool variant_supported(Variant v) {
    switch (v) {
        case Variant::scalar: return true;
        case Variant::avx2: return cpu_has_avx2();
    }
    return false;
}

Variant active_variant() {
    return active_slot().load(std::memory_order_relaxed);
}

void set_active_variant(Variant v) {
    if (!variant_supported(v)) {
        throw ArgumentError(std::string("kernel variant not supported on this host: ") +
                            variant_name(v));
    }
    active_slot().store(v, std::memory_order_relaxed);
}

Variant resolve_variant(const std::string& name) {
    if (name == "auto" || name.empty()) {
        return cpu_has_avx2() ? Variant::avx2 : Variant::scalar;
    }
    if (name == "scalar") return Variant::scalar;
    if (name == "avx2") {
        if (!variant_supported(Variant::avx2)) {
            throw ArgumentError("avx2 kernels requested but unavailable on this host");
        }
        return Variant::avx2;
    }
    throw ArgumentError("unknown kernel variant: '" + name + "' (want scalar|avx2|auto)");
}

void kde_accumulate(Variant v, double* out, const double* xs, int nx, const double* ys, int ny,
                    const double* rx, const double* ry, std::size_t nr,
                    double neg_inv_two_sigma_sq, double scale) {
#if defined(TORCAST_HAVE_AVX2_TU)
    if (v == Variant::avx2) {
        detail::kde_accumulate_avx2(out, xs, nx, ys, ny, rx, ry, nr, neg_inv_two_sigma_sq, scale);
        return;
    }
#endif
    (void)v;
    detail::kde_accumulate_scalar(out, xs, nx, ys, ny, rx, ry, nr, neg_inv_two_sigma_sq, scale);
}

void disk_sum(Variant v, double* out, const double* in, int nx, int ny, const int* half_width,
              int m, double cell_area) {
#if defined(TORCAST_HAVE_AVX2_TU)
    if (v == Variant::avx2) {
        detail::disk_sum_avx2(out, in, nx, ny, half_width, m, cell_area);
        return;
    }
#endif
    (void)v;
    detail::disk_sum_scalar(out, in, nx, ny, half_width, m, cell_area);
}

void one_minus_exp_neg(Variant v, double* out, const double* lam, std::size_t n) {
#if defined(TORCAST_HAVE_AVX2_TU)
    if (v == Variant::avx2) {
        detail::one_minus_exp_neg_avx2(out, lam, n);
        return;
    }
#endif
    (void)v;
    detail::one_minus_exp_neg_scalar(out, lam, n);
}

double kernel_exp(double x) {
    return kernels_detail::exp_core(x);
}

}  // namespace torcast::kernels
