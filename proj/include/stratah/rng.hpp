#pragma once

#include <array>
#include <cstdint>

namespace stratah {

// Philox 4x32-10 counter-based generator (Salmon et al., Random123).
// A block is a pure function of (key, counter), which is what makes
// per-replicate substreams reproducible independent of thread count.
struct Philox4x32 {
  static constexpr std::uint32_t mult0 = 0xD2511F53u;
  static constexpr std::uint32_t mult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t weyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t weyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += weyl0;
        key[1] += weyl1;
      }
      const std::uint64_t p0 = std::uint64_t(mult0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(mult1) * ctr[2];
      const auto hi0 = std::uint32_t(p0 >> 32);
      const auto lo0 = std::uint32_t(p0);
      const auto hi1 = std::uint32_t(p1 >> 32);
      const auto lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

// One logical random stream, addressed by (seed, substream).  Draws are a
// pure function of (seed, substream, draw index); streams for different
// substreams never overlap.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t substream)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        base_{std::uint32_t(substream), std::uint32_t(substream >> 32), 0, 0} {}

  std::uint32_t next_u32() {
    if (idx_ == 4) refill();
    return buf_[idx_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform double strictly inside (0,1); safe to pass to log().
  double uniform() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

private:
  void refill() {
    auto ctr = base_;
    ctr[2] = std::uint32_t(block_);
    ctr[3] = std::uint32_t(block_ >> 32);
    buf_ = Philox4x32::block(ctr, key_);
    ++block_;
    idx_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int idx_ = 4;
};

}  // namespace stratah
