#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace fmcoint {

// Counter-based PRNG: Philox4x32-10 (stream layout "fmcoint-philox4x32-10/v1").
//
//   key     = (seed lo32, seed hi32)
//   counter = (block lo32, block hi32, stream lo32, stream hi32)
//
// Streams are independent random sequences under one seed; Monte Carlo
// replication r draws from stream r, so parallel and serial runs produce
// bit-identical results. Each 128-bit block yields two 53-bit uniforms,
// turned into two N(0,1) deviates by Box-Muller.
class PhiloxStream {
 public:
  static constexpr std::string_view generator_id = "fmcoint-philox4x32-10/v1";

  explicit PhiloxStream(std::uint64_t seed, std::uint64_t stream = 0);

  // Uniform on (0,1], 53-bit resolution.
  double next_uniform();

  // Standard normal deviate.
  double next_gaussian();

  void fill_gaussian(std::span<double> out);

  // One raw Philox4x32-10 block; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                            const std::array<std::uint32_t, 2>& key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<double, 2> uniforms_{};
  int uniform_pos_ = 2;
  double cached_gaussian_ = 0.0;
  bool have_cached_gaussian_ = false;
};

}  // namespace fmcoint
