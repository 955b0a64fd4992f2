#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

// Kernel-local exp(). The scalar form below and the AVX2 form in
// kernels_avx2.cpp evaluate the identical operation sequence (same
// constants, same FMA placement, round-to-nearest-even k), so every
// variant produces bitwise-equal results. Accuracy is a few ulp over
// the domain the kernels use (x <= 0); inputs below the cutoff flush
// to zero instead of entering the subnormal range.

namespace torcast::kernels_detail {

constexpr double kLog2E = 1.4426950408889634074;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kExpUnderflow = -708.0;

// Taylor coefficients 1/k!.
constexpr double kC2 = 5.0000000000000000e-01;
constexpr double kC3 = 1.6666666666666666e-01;
constexpr double kC4 = 4.1666666666666664e-02;
constexpr double kC5 = 8.3333333333333332e-03;
constexpr double kC6 = 1.3888888888888889e-03;
constexpr double kC7 = 1.9841269841269841e-04;
constexpr double kC8 = 2.4801587301587302e-05;
constexpr double kC9 = 2.7557319223985893e-06;
constexpr double kC10 = 2.7557319223985888e-07;
constexpr double kC11 = 2.5052108385441720e-08;
constexpr double kC12 = 2.0876756987868100e-09;

inline double exp_core(double x) {
    if (x < kExpUnderflow) return 0.0;
    const double kd = std::nearbyint(x * kLog2E);
    double r = std::fma(kd, -kLn2Hi, x);
    r = std::fma(kd, -kLn2Lo, r);
    double p = kC12;
    p = std::fma(p, r, kC11);
    p = std::fma(p, r, kC10);
    p = std::fma(p, r, kC9);
    p = std::fma(p, r, kC8);
    p = std::fma(p, r, kC7);
    p = std::fma(p, r, kC6);
    p = std::fma(p, r, kC5);
    p = std::fma(p, r, kC4);
    p = std::fma(p, r, kC3);
    p = std::fma(p, r, kC2);
    p = std::fma(p, r * r, r);
    p += 1.0;
    const std::int64_t k = static_cast<std::int64_t>(kd);
    const double scale = std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52);
    return p * scale;
}

}  // namespace torcast::kernels_detail
