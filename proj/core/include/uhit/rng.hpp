#pragma once

// Counter-based random number generation. The generator is a keyed 4x64
// block cipher applied to a 256-bit counter: every (seed, stream) pair is
// an independent sequence, any absolute position can be reached in O(1),
// and replaying a stream never requires storing state.

#include <array>
#include <cstdint>

namespace uhit::rng {

class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

  // Next raw 64-bit word of the keyed stream.
  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform on (0, 1): never returns zero, safe under log().
  double uniform_pos();

  // Standard normal via a 128-layer ziggurat over the raw words.
  double normal();

  // Jump so the next word is the first of block `block` (blocks are 4
  // words wide). Discards any buffered words.
  void set_counter(std::uint64_t block);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_;
  std::array<std::uint64_t, 4> buf_;
  int idx_;
};

}  // namespace uhit::rng
