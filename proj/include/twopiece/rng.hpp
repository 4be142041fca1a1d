#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace twopiece {

// xoshiro256** (Blackman & Vigna) seeded through splitmix64. Every derived
// variate uses only arithmetic defined here, so a seed reproduces the same
// stream on any platform. Single owner: give each thread its own stream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;
  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() noexcept;
  // Standard normal by the Marsaglia polar method.
  double normal() noexcept;

  // UniformRandomBitGenerator surface.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Deterministic seed derivation: hashes the master seed together with an
// ordered list of indices. Used to give replicates, cells and rolling steps
// independent streams that do not depend on execution order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept;

// Bit pattern of a double, for hashing real-valued grid coordinates.
std::uint64_t double_bits(double x) noexcept;

}  // namespace twopiece
