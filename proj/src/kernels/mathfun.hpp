#pragma once

// Software exp/log used by the array kernels. The SIMD variants replay the
// exact same operation sequence with packed arithmetic, so scalar and SIMD
// kernels produce bit-identical results (every +,-,*,/ is correctly rounded
// and no FMA contraction is permitted in these translation units).
//
// exp follows the Cephes rational approximation, log the classic fdlibm
// reduction; both are accurate to ~1 ulp over the ranges the kernels use.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace qbath::kernels::detail {

// ---- exp constants (Cephes) ----
inline constexpr double kExpP0 = 1.26177193074810590878e-4;
inline constexpr double kExpP1 = 3.02994407707441961300e-2;
inline constexpr double kExpP2 = 9.99999999999999999910e-1;
inline constexpr double kExpQ0 = 3.00198505138664455042e-6;
inline constexpr double kExpQ1 = 2.52448340349684104192e-3;
inline constexpr double kExpQ2 = 2.27265548208155028766e-1;
inline constexpr double kExpQ3 = 2.00000000000000000005e0;
inline constexpr double kLog2E = 1.4426950408889634073599;
inline constexpr double kLn2Hi = 6.93145751953125e-1;
inline constexpr double kLn2Lo = 1.42860682030941723212e-6;
inline constexpr double kExpOverflow = 709.782712893383996732;
inline constexpr double kExpUnderflow = -745.133219101941108420;

// ---- log constants (fdlibm) ----
inline constexpr double kLogLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLogLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kLg1 = 6.666666666666735130e-01;
inline constexpr double kLg2 = 3.999999999940941908e-01;
inline constexpr double kLg3 = 2.857142874366239149e-01;
inline constexpr double kLg4 = 2.222219843214978396e-01;
inline constexpr double kLg5 = 1.818357216161805012e-01;
inline constexpr double kLg6 = 1.531383769920937332e-01;
inline constexpr double kLg7 = 1.479819860511658591e-01;
inline constexpr double kSqrt2Minus1 = 0.41421356237309503;

/// 2^k for integer-valued k in [-1075, 1024], built from exponent bits.
inline double pow2_int(std::int64_t k) {
  return std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52);
}

/// exp(x), clamped to 0 / +inf outside the double range, NaN-propagating.
inline double sexp(double x) {
  // clamp the working argument so the scaling below stays in range
  double m = (x > 710.0) ? 710.0 : x;
  m = (m < -746.0) ? -746.0 : m;

  const double n = std::floor(kLog2E * m + 0.5);
  double r = m - n * kLn2Hi;
  r = r - n * kLn2Lo;
  const double xx = r * r;
  const double px = r * ((kExpP0 * xx + kExpP1) * xx + kExpP2);
  const double qx = ((kExpQ0 * xx + kExpQ1) * xx + kExpQ2) * xx + kExpQ3;
  double y = 1.0 + 2.0 * (px / (qx - px));

  // scale by 2^n in two factors so subnormal results round once
  const double n1 = std::floor(n * 0.5);
  const double n2 = n - n1;
  y = y * pow2_int(static_cast<std::int64_t>(n1));
  y = y * pow2_int(static_cast<std::int64_t>(n2));

  y = (x > kExpOverflow) ? std::numeric_limits<double>::infinity() : y;
  y = (x < kExpUnderflow) ? 0.0 : y;
  y = (x != x) ? x : y;
  return y;
}

/// Core of log(1+f) for f in (-0.293, 0.414): returns 2*atanh(s) pieces.
/// Callers combine as: s*(hfsq+R) + k*ln2_lo - hfsq + f + k*ln2_hi.
struct LogCore {
  double f, hfsq, s, r;
};

inline LogCore log_core(double f) {
  const double hfsq = 0.5 * f * f;
  const double s = f / (2.0 + f);
  const double z = s * s;
  const double w = z * z;
  const double t1 = w * (kLg2 + w * (kLg4 + w * kLg6));
  const double t2 = z * (kLg1 + w * (kLg3 + w * (kLg5 + w * kLg7)));
  return {f, hfsq, s, t2 + t1};
}

inline double log_combine(const LogCore& c, double k) {
  return c.s * (c.hfsq + c.r) + k * kLogLn2Lo - c.hfsq + c.f + k * kLogLn2Hi;
}

/// log(x) for finite normal positive x. No subnormal or non-positive
/// handling: kernel callers guarantee the domain.
inline double slog(double x) {
  std::uint64_t ux = std::bit_cast<std::uint64_t>(x);
  std::uint64_t hx = ux >> 32;
  hx += 0x3ff00000ULL - 0x3fe6a09eULL;
  const double k =
      static_cast<double>(static_cast<std::int64_t>(hx >> 20) - 0x3ff);
  const std::uint64_t mant_hi = (hx & 0x000fffffULL) + 0x3fe6a09eULL;
  const double xr =
      std::bit_cast<double>((mant_hi << 32) | (ux & 0xffffffffULL));
  return log_combine(log_core(xr - 1.0), k);
}

/// log(1+t) for t in [0, 1]; used by logaddexp where t = exp(-|a-b|).
inline double slog1p01(double t) {
  const bool big = t > kSqrt2Minus1;
  const double f = big ? (0.5 * t - 0.5) : t;
  const double k = big ? 1.0 : 0.0;
  return log_combine(log_core(f), k);
}

/// logaddexp(a, b) = log(e^a + e^b); -inf acts as the additive identity.
inline double slogaddexp(double a, double b) {
  const double m = (a > b) ? a : b;
  const double d = (a > b) ? (a - b) : (b - a);
  const double r = m + slog1p01(sexp(-d));
  return (m == -std::numeric_limits<double>::infinity()) ? m : r;
}

}  // namespace qbath::kernels::detail
