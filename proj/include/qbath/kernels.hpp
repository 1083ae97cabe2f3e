#pragma once

// Array kernels behind the hot loops (Monte Carlo draws, log-domain
// convolution, batched exp/log). Two implementations exist: a scalar
// reference and an AVX2 variant selected at runtime. They are written to
// produce bit-identical output: the scalar code replays the SIMD operation
// order (4-lane blocked reductions, shared software exp/log, no FMA), and
// the equivalence suite asserts exact equality.
//
// Environment override: QBATH_KERNELS=scalar|avx2 forces a variant.

#include <cstddef>
#include <cstdint>

namespace qbath::kernels {

struct Dispatch {
  const char* name;

  /// out[i] = exp(x[i] + shift)
  void (*exp_shift)(const double* x, double shift, double* out, std::size_t n);

  /// out[i] = log(x[i]); x[i] must be normal positive
  void (*log_pos)(const double* x, double* out, std::size_t n);

  /// acc[i] = logaddexp(acc[i], x[i] + shift); -inf entries are neutral
  void (*logaddexp_acc)(double* acc, const double* x, double shift,
                        std::size_t n);

  /// 4-lane blocked sum: ((l0+l1)+(l2+l3)) then sequential tail
  double (*sum)(const double* x, std::size_t n);

  /// 4-lane blocked dot product, same combine order as sum
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// max element; -inf for n == 0 (no NaN inputs)
  double (*max)(const double* x, std::size_t n);

  /// number of elements <= t
  std::size_t (*count_le)(const double* x, std::size_t n, double t);

  /// Sums of n_mol draws from a discrete law for samples
  /// [first, first+count). Sample g uses its own generator seeded from
  /// (seed, stream, tag, g). A draw maps u in [0,1) to an energy as
  /// base + sum_a inc[a] * [u >= cum[a]], a = 0..n_cut-1.
  void (*mc_discrete_sums)(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t tag, std::uint64_t first,
                           std::size_t count, std::int64_t n_mol,
                           const double* cum, const double* inc, double base,
                           int n_cut, double* out);
};

/// Kernel table picked at first use (CPUID + QBATH_KERNELS override).
const Dispatch& active();

const Dispatch& scalar_kernels();

/// nullptr when the binary or the CPU lacks AVX2 support.
const Dispatch* avx2_kernels();

}  // namespace qbath::kernels
