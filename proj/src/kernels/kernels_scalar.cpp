// Scalar reference kernels. These define the semantics the AVX2 variant
// must reproduce bit for bit: reductions run in 4-lane blocked order and
// all transcendentals go through the shared software exp/log.

#include <limits>

#include "mathfun.hpp"
#include "qbath/kernels.hpp"
#include "qbath/rng.hpp"

namespace qbath::kernels {
namespace {

using detail::sexp;
using detail::slog;
using detail::slogaddexp;

void exp_shift_scalar(const double* x, double shift, double* out,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = sexp(x[i] + shift);
}

void log_pos_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = slog(x[i]);
}

void logaddexp_acc_scalar(double* acc, const double* x, double shift,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = slogaddexp(acc[i], x[i] + shift);
}

double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  double s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) s += x[i];
  return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += a[i] * b[i];
    acc[1] += a[i + 1] * b[i + 1];
    acc[2] += a[i + 2] * b[i + 2];
    acc[3] += a[i + 3] * b[i + 3];
  }
  double s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
  return s;
}

double max_scalar(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = (x[i] > m) ? x[i] : m;
  return m;
}

std::size_t count_le_scalar(const double* x, std::size_t n, double t) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (x[i] <= t) ? 1 : 0;
  return c;
}

void mc_discrete_sums_scalar(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t tag, std::uint64_t first,
                             std::size_t count, std::int64_t n_mol,
                             const double* cum, const double* inc, double base,
                             int n_cut, double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    Xoshiro256pp rng = make_rng(seed, {stream, tag, first + i});
    double sum = 0.0;
    for (std::int64_t j = 0; j < n_mol; ++j) {
      const double u = static_cast<double>(rng.next() >> 12) * 0x1.0p-52;
      double e = base;
      for (int a = 0; a < n_cut; ++a) e += (u >= cum[a]) ? inc[a] : 0.0;
      sum += e;
    }
    out[i] = sum;
  }
}

}  // namespace

const Dispatch& scalar_kernels() {
  static const Dispatch d = {
      "scalar",         exp_shift_scalar, log_pos_scalar,
      logaddexp_acc_scalar, sum_scalar,   dot_scalar,
      max_scalar,       count_le_scalar,  mc_discrete_sums_scalar,
  };
  return d;
}

}  // namespace qbath::kernels
