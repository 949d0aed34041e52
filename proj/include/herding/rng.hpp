#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace herding {

/// Philox4x32-10 block function: maps a 128-bit counter and a 64-bit key to
/// 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to derive child seeds from (seed, salt) pairs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// What a substream is used for. Different purposes of the same realization
/// never share counter space.
enum class StreamPurpose : std::uint8_t {
  Population = 1,
  Dynamics = 2,
  InitialCondition = 3,
  Langevin = 4,
};

/// Counter-based random stream. The key is the run seed; the upper half of
/// the counter carries the substream id, the lower half counts blocks.
/// Any (seed, stream) pair can be materialized independently in O(1), which
/// is what makes ensembles independent of scheduling.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  /// Substream for realization `index` and `purpose`. `index` must be < 2^56.
  static CounterRng substream(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept;

  /// Uniform integer on [0, bound); bound must be positive. Unbiased
  /// (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) noexcept;

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  /// Standard normal variate (Box-Muller, second variate cached).
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace herding
