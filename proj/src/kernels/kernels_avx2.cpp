// AVX2 kernels. Each function replays the scalar reference operation order
// with packed arithmetic: identical polynomial evaluation trees, identical
// blend/select logic, no FMA. Equivalence with the scalar kernels is exact
// and enforced by tests.

#if defined(__AVX2__)

#include <immintrin.h>

#include <array>
#include <cstring>
#include <limits>

#include "mathfun.hpp"
#include "qbath/kernels.hpp"
#include "qbath/rng.hpp"

namespace qbath::kernels {
namespace {

namespace md = detail;

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

/// 2^k for integer-valued doubles k in [-1075, 1024].
inline __m256d vpow2(__m256d k) {
  const __m256d magic = set1(6755399441055744.0);  // 2^52 + 2^51
  const __m256i ti = _mm256_castpd_si256(_mm256_add_pd(k, magic));
  const __m256i ki = _mm256_sub_epi64(
      _mm256_and_si256(ti, _mm256_set1_epi64x(0x000fffffffffffffLL)),
      _mm256_set1_epi64x(1LL << 51));
  const __m256i bits = _mm256_slli_epi64(
      _mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52);
  return _mm256_castsi256_pd(bits);
}

inline __m256d vexp4(__m256d x) {
  __m256d m = _mm256_blendv_pd(x, set1(710.0),
                               _mm256_cmp_pd(x, set1(710.0), _CMP_GT_OQ));
  m = _mm256_blendv_pd(m, set1(-746.0),
                       _mm256_cmp_pd(m, set1(-746.0), _CMP_LT_OQ));

  const __m256d n = _mm256_floor_pd(
      _mm256_add_pd(_mm256_mul_pd(m, set1(md::kLog2E)), set1(0.5)));
  __m256d r = _mm256_sub_pd(m, _mm256_mul_pd(n, set1(md::kLn2Hi)));
  r = _mm256_sub_pd(r, _mm256_mul_pd(n, set1(md::kLn2Lo)));
  const __m256d xx = _mm256_mul_pd(r, r);
  const __m256d px = _mm256_mul_pd(
      r, _mm256_add_pd(
             _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(set1(md::kExpP0), xx),
                                         set1(md::kExpP1)),
                           xx),
             set1(md::kExpP2)));
  const __m256d qx = _mm256_add_pd(
      _mm256_mul_pd(
          _mm256_add_pd(
              _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(set1(md::kExpQ0), xx),
                                          set1(md::kExpQ1)),
                            xx),
              set1(md::kExpQ2)),
          xx),
      set1(md::kExpQ3));
  __m256d y = _mm256_add_pd(
      set1(1.0),
      _mm256_mul_pd(set1(2.0), _mm256_div_pd(px, _mm256_sub_pd(qx, px))));

  const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, set1(0.5)));
  const __m256d n2 = _mm256_sub_pd(n, n1);
  y = _mm256_mul_pd(y, vpow2(n1));
  y = _mm256_mul_pd(y, vpow2(n2));

  y = _mm256_blendv_pd(y, set1(std::numeric_limits<double>::infinity()),
                       _mm256_cmp_pd(x, set1(md::kExpOverflow), _CMP_GT_OQ));
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(),
                       _mm256_cmp_pd(x, set1(md::kExpUnderflow), _CMP_LT_OQ));
  y = _mm256_blendv_pd(y, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
  return y;
}

/// log core on the reduced argument; combine mirrors detail::log_combine.
inline __m256d vlog_combine(__m256d f, __m256d k) {
  const __m256d hfsq = _mm256_mul_pd(set1(0.5), _mm256_mul_pd(f, f));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(set1(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  const __m256d w = _mm256_mul_pd(z, z);
  const __m256d t1 = _mm256_mul_pd(
      w, _mm256_add_pd(set1(md::kLg2),
                       _mm256_mul_pd(w, _mm256_add_pd(set1(md::kLg4),
                                                      _mm256_mul_pd(
                                                          w, set1(md::kLg6))))));
  const __m256d t2 = _mm256_mul_pd(
      z,
      _mm256_add_pd(
          set1(md::kLg1),
          _mm256_mul_pd(
              w, _mm256_add_pd(
                     set1(md::kLg3),
                     _mm256_mul_pd(w, _mm256_add_pd(set1(md::kLg5),
                                                    _mm256_mul_pd(
                                                        w, set1(md::kLg7))))))));
  const __m256d rr = _mm256_add_pd(t2, t1);
  // s*(hfsq+R) + k*ln2_lo - hfsq + f + k*ln2_hi, left to right
  __m256d res = _mm256_mul_pd(s, _mm256_add_pd(hfsq, rr));
  res = _mm256_add_pd(res, _mm256_mul_pd(k, set1(md::kLogLn2Lo)));
  res = _mm256_sub_pd(res, hfsq);
  res = _mm256_add_pd(res, f);
  res = _mm256_add_pd(res, _mm256_mul_pd(k, set1(md::kLogLn2Hi)));
  return res;
}

inline __m256d vlog4(__m256d x) {
  const __m256i ux = _mm256_castpd_si256(x);
  __m256i hx = _mm256_srli_epi64(ux, 32);
  hx = _mm256_add_epi64(hx, _mm256_set1_epi64x(0x3ff00000LL - 0x3fe6a09eLL));
  const __m256i k64 = _mm256_sub_epi64(_mm256_srli_epi64(hx, 20),
                                       _mm256_set1_epi64x(0x3ff));
  // lanes hold small ints; pack low 32 bits and convert
  const __m256i permuted = _mm256_permutevar8x32_epi32(
      k64, _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6));
  const __m256d kd = _mm256_cvtepi32_pd(_mm256_castsi256_si128(permuted));

  const __m256i mant_hi =
      _mm256_add_epi64(_mm256_and_si256(hx, _mm256_set1_epi64x(0x000fffffLL)),
                       _mm256_set1_epi64x(0x3fe6a09eLL));
  const __m256i uxn =
      _mm256_or_si256(_mm256_slli_epi64(mant_hi, 32),
                      _mm256_and_si256(ux, _mm256_set1_epi64x(0xffffffffLL)));
  const __m256d f = _mm256_sub_pd(_mm256_castsi256_pd(uxn), set1(1.0));
  return vlog_combine(f, kd);
}

inline __m256d vlog1p01(__m256d t) {
  const __m256d big = _mm256_cmp_pd(t, set1(md::kSqrt2Minus1), _CMP_GT_OQ);
  const __m256d f = _mm256_blendv_pd(
      t, _mm256_sub_pd(_mm256_mul_pd(set1(0.5), t), set1(0.5)), big);
  const __m256d k = _mm256_and_pd(big, set1(1.0));
  return vlog_combine(f, k);
}

inline __m256d vlogaddexp4(__m256d a, __m256d b) {
  const __m256d agtb = _mm256_cmp_pd(a, b, _CMP_GT_OQ);
  const __m256d m = _mm256_blendv_pd(b, a, agtb);
  const __m256d d =
      _mm256_blendv_pd(_mm256_sub_pd(b, a), _mm256_sub_pd(a, b), agtb);
  const __m256d r =
      _mm256_add_pd(m, vlog1p01(vexp4(_mm256_sub_pd(_mm256_setzero_pd(), d))));
  const __m256d minf = set1(-std::numeric_limits<double>::infinity());
  return _mm256_blendv_pd(r, m, _mm256_cmp_pd(m, minf, _CMP_EQ_OQ));
}

void exp_shift_avx2(const double* x, double shift, double* out,
                    std::size_t n) {
  const __m256d sh = set1(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     vexp4(_mm256_add_pd(_mm256_loadu_pd(x + i), sh)));
  }
  for (; i < n; ++i) out[i] = md::sexp(x[i] + shift);
}

void log_pos_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, vlog4(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = md::slog(x[i]);
}

void logaddexp_acc_avx2(double* acc, const double* x, double shift,
                        std::size_t n) {
  const __m256d sh = set1(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_add_pd(_mm256_loadu_pd(x + i), sh);
    _mm256_storeu_pd(acc + i, vlogaddexp4(_mm256_loadu_pd(acc + i), xi));
  }
  for (; i < n; ++i) acc[i] = md::slogaddexp(acc[i], x[i] + shift);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vacc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t i = n4; i < n; ++i) s += x[i];
  return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    vacc = _mm256_add_pd(
        vacc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vacc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
  return s;
}

double max_avx2(const double* x, std::size_t n) {
  const double minf = -std::numeric_limits<double>::infinity();
  __m256d vacc = set1(minf);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    vacc = _mm256_blendv_pd(vacc, xi, _mm256_cmp_pd(xi, vacc, _CMP_GT_OQ));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vacc);
  double m = minf;
  for (int l = 0; l < 4; ++l) m = (lanes[l] > m) ? lanes[l] : m;
  for (std::size_t i = n4; i < n; ++i) m = (x[i] > m) ? x[i] : m;
  return m;
}

std::size_t count_le_avx2(const double* x, std::size_t n, double t) {
  const __m256d vt = set1(t);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vt, _CMP_LE_OQ);
    c += static_cast<std::size_t>(__builtin_popcount(
        static_cast<unsigned>(_mm256_movemask_pd(m))));
  }
  for (; i < n; ++i) c += (x[i] <= t) ? 1 : 0;
  return c;
}

/// Four independent xoshiro256++ states, one per lane.
struct Xoshiro4 {
  __m256i s0, s1, s2, s3;

  static __m256i rotl(__m256i v, int k) {
    return _mm256_or_si256(_mm256_slli_epi64(v, k),
                           _mm256_srli_epi64(v, 64 - k));
  }

  __m256i next() {
    const __m256i result =
        _mm256_add_epi64(rotl(_mm256_add_epi64(s0, s3), 23), s0);
    const __m256i t = _mm256_slli_epi64(s1, 17);
    s2 = _mm256_xor_si256(s2, s0);
    s3 = _mm256_xor_si256(s3, s1);
    s1 = _mm256_xor_si256(s1, s2);
    s0 = _mm256_xor_si256(s0, s3);
    s2 = _mm256_xor_si256(s2, t);
    s3 = rotl(s3, 45);
    return result;
  }

  __m256d next_u01() {
    const __m256i bits = _mm256_srli_epi64(next(), 12);
    const __m256d magic = set1(0x1.0p52);
    const __m256d v = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(
            bits, _mm256_set1_epi64x(0x4330000000000000LL))),
        magic);
    return _mm256_mul_pd(v, set1(0x1.0p-52));
  }
};

void mc_discrete_sums_avx2(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t tag, std::uint64_t first,
                           std::size_t count, std::int64_t n_mol,
                           const double* cum, const double* inc, double base,
                           int n_cut, double* out) {
  const std::size_t count4 = count & ~std::size_t{3};
  for (std::size_t i = 0; i < count4; i += 4) {
    std::array<std::array<std::uint64_t, 4>, 4> st;
    for (std::size_t l = 0; l < 4; ++l) {
      st[l] = Xoshiro256pp::expand(derive_seed(seed, {stream, tag,
                                                      first + i + l}));
    }
    Xoshiro4 rng{
        _mm256_setr_epi64x(st[0][0], st[1][0], st[2][0], st[3][0]),
        _mm256_setr_epi64x(st[0][1], st[1][1], st[2][1], st[3][1]),
        _mm256_setr_epi64x(st[0][2], st[1][2], st[2][2], st[3][2]),
        _mm256_setr_epi64x(st[0][3], st[1][3], st[2][3], st[3][3]),
    };
    const __m256d vbase = set1(base);
    __m256d sum = _mm256_setzero_pd();
    for (std::int64_t j = 0; j < n_mol; ++j) {
      const __m256d u = rng.next_u01();
      __m256d e = vbase;
      for (int a = 0; a < n_cut; ++a) {
        const __m256d mask = _mm256_cmp_pd(u, set1(cum[a]), _CMP_GE_OQ);
        e = _mm256_add_pd(e, _mm256_and_pd(mask, set1(inc[a])));
      }
      sum = _mm256_add_pd(sum, e);
    }
    _mm256_storeu_pd(out + i, sum);
  }
  if (count4 < count) {
    scalar_kernels().mc_discrete_sums(seed, stream, tag, first + count4,
                                      count - count4, n_mol, cum, inc, base,
                                      n_cut, out + count4);
  }
}

}  // namespace

const Dispatch* avx2_kernels() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const Dispatch d = {
      "avx2",         exp_shift_avx2, log_pos_avx2,
      logaddexp_acc_avx2, sum_avx2,   dot_avx2,
      max_avx2,       count_le_avx2,  mc_discrete_sums_avx2,
  };
  return &d;
}

}  // namespace qbath::kernels

#else  // !__AVX2__

#include "qbath/kernels.hpp"

namespace qbath::kernels {
const Dispatch* avx2_kernels() { return nullptr; }
}  // namespace qbath::kernels

#endif
