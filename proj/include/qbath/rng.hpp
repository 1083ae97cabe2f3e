#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace qbath {

/// User-facing stream identity. Identical (seed, stream_id) must produce
/// identical draws across runs and worker counts; the library derives
/// finer-grained substreams from this pair deterministically.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

namespace rng_detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 output scramble (stateless).
inline constexpr std::uint64_t splitmix_scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rng_detail

/// SplitMix64 (Steele, Lea, Flood): used only to expand seeds into
/// xoshiro state and to fold substream indices into the seed.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += rng_detail::kGolden;
    return rng_detail::splitmix_scramble(state_);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256++ (Blackman, Vigna). The generator algorithm is fixed here so
/// every seeded output of the project is bit-reproducible.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) : Xoshiro256pp(expand(seed)) {}
  explicit Xoshiro256pp(const std::array<std::uint64_t, 4>& s) : s_(s) {}

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) from the top 52 bits.
  double u01() { return static_cast<double>(next() >> 12) * 0x1.0p-52; }

  static std::array<std::uint64_t, 4> expand(std::uint64_t seed) {
    SplitMix64 sm(seed);
    std::array<std::uint64_t, 4> s{sm.next(), sm.next(), sm.next(), sm.next()};
    if ((s[0] | s[1] | s[2] | s[3]) == 0) s[0] = rng_detail::kGolden;
    return s;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_;
};

/// Folds a chain of substream indices into a 64-bit state seed. The chain is
/// (stream_id, use tag, sample index, ...): every Monte Carlo sample gets its
/// own generator, so results do not depend on batching or thread count.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t x = seed;
  for (std::uint64_t id : path) {
    x = rng_detail::splitmix_scramble(x + rng_detail::kGolden * (id + 1));
  }
  return x;
}

inline Xoshiro256pp make_rng(std::uint64_t seed,
                             std::initializer_list<std::uint64_t> path) {
  return Xoshiro256pp(derive_seed(seed, path));
}

/// Fixed substream tags for the independent uses inside one command.
namespace rng_use {
inline constexpr std::uint64_t kHaarSample = 1;
inline constexpr std::uint64_t kMcTail = 2;
inline constexpr std::uint64_t kTiltedTail = 3;
inline constexpr std::uint64_t kChebyshev = 4;
inline constexpr std::uint64_t kConvergeRowBase = 16;
}  // namespace rng_use

}  // namespace qbath
