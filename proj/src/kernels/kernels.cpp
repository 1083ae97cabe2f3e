#include "qbath/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qbath::kernels {
namespace {

const Dispatch& pick() {
  const char* env = std::getenv("QBATH_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) {
    return scalar_kernels();
  }
  const Dispatch* simd = avx2_kernels();
  if (env != nullptr && std::strcmp(env, "avx2") == 0) {
    return simd != nullptr ? *simd : scalar_kernels();
  }
  return simd != nullptr ? *simd : scalar_kernels();
}

}  // namespace

const Dispatch& active() {
  static const Dispatch& d = pick();
  return d;
}

}  // namespace qbath::kernels
