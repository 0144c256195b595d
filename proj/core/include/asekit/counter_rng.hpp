#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace asekit::sim {

/// Philox4x32-10 counter-based generator. A stream is identified by
/// (seed, stream_id, substream); the block counter advances as numbers are
/// drawn, so any stream can be reproduced without touching the others.
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t substream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double on (0, 1), never exactly 0 or 1.
  double uniform_open();

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int cursor_ = 4;
};

}  // namespace asekit::sim
