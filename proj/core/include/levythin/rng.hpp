#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace levythin {

/// Seed plus stream id; the pair fully determines a draw sequence.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Hash of (seed, a, b) used to derive independent substreams.
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// xoshiro256** engine. Satisfies UniformRandomBitGenerator, but library
/// samplers only use next_u64/uniform so results are identical on every
/// platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngState state);
  Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RngState{seed, stream}) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;

  const RngState& state() const noexcept { return origin_; }

 private:
  RngState origin_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace levythin
