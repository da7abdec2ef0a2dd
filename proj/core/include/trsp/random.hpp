#ifndef TRSP_RANDOM_HPP
#define TRSP_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace trsp {

// SplitMix64 (Steele, Lea, Flood 2014). A counter-based generator whose
// output depends only on the seed and the draw count, so streams are
// reproducible across compilers and standard libraries. split() derives an
// independent child stream, used for per-replica and per-instance seeds.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return mix(state_ += kGamma); }

  SplitMix64 split() { return SplitMix64(mix((*this)() ^ kSplitSalt)); }

  // Uniform integer in [lo, hi] by rejection, bias-free.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>((*this)());
    const std::uint64_t limit = max() - max() % span;
    std::uint64_t draw;
    do {
      draw = (*this)();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSplitSalt = 0x5851f42d4c957f2dULL;
  std::uint64_t state_;
};

// Deterministic seed derivation from a base seed and a list of integers.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = SplitMix64::mix(base + 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t p : parts) h = SplitMix64::mix(h ^ (p + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace trsp

#endif  // TRSP_RANDOM_HPP
