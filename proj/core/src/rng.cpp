#include "uhit/rng.hpp"

#include <cmath>

namespace uhit::rng {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhi(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) >> 64);
}

// One 10-round philox4x64 block.
std::array<std::uint64_t, 4> encrypt(std::array<std::uint64_t, 4> c,
                                     std::array<std::uint64_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    const std::uint64_t hi0 = mulhi(kMul0, c[0]);
    const std::uint64_t lo0 = kMul0 * c[0];
    const std::uint64_t hi1 = mulhi(kMul1, c[2]);
    const std::uint64_t lo1 = kMul1 * c[2];
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

// 128-layer ziggurat tables for the standard normal, built on first use.
// kZigR is the base-strip abscissa, kZigV the common strip area.
constexpr double kZigR = 3.442619855899;
constexpr double kZigV = 9.91256303526217e-3;

struct ZigguratTables {
  std::uint64_t kn[128];
  double wn[128];
  double fn[128];

  ZigguratTables() {
    const double m = 9223372036854775808.0;  // 2^63
    double dn = kZigR;
    double tn = kZigR;
    const double q = kZigV / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint64_t>((dn / q) * m);
    kn[1] = 0;
    wn[0] = q / m;
    wn[127] = dn / m;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(kZigV / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint64_t>((dn / tn) * m);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m;
    }
  }
};

const ZigguratTables& ziggurat() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_{seed, stream},
      ctr_{0, 0, 0, 0}, buf_{}, idx_(4) {}

void Philox::refill() {
  buf_ = encrypt(ctr_, key_);
  idx_ = 0;
  for (int i = 0; i < 4; ++i) {
    if (++ctr_[i] != 0) break;
  }
}

std::uint64_t Philox::next_u64() {
  if (idx_ == 4) refill();
  return buf_[idx_++];
}

double Philox::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::uniform_pos() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

void Philox::set_counter(std::uint64_t block) {
  ctr_ = {block, 0, 0, 0};
  idx_ = 4;
}

double Philox::normal() {
  const auto& z = ziggurat();
  for (;;) {
    const std::uint64_t u = next_u64();
    const auto hz = static_cast<std::int64_t>(u);
    const int iz = static_cast<int>(u & 127);
    const std::uint64_t az = hz < 0 ? ~u + 1 : u;
    if (az < z.kn[iz]) return static_cast<double>(hz) * z.wn[iz];
    if (iz == 0) {
      // base strip: sample the tail beyond kZigR by inversion-rejection
      double x;
      double y;
      do {
        x = -std::log(uniform_pos()) / kZigR;
        y = -std::log(uniform_pos());
      } while (y + y < x * x);
      return hz < 0 ? -(kZigR + x) : (kZigR + x);
    }
    const double x = static_cast<double>(hz) * z.wn[iz];
    if (z.fn[iz] + uniform() * (z.fn[iz - 1] - z.fn[iz]) <
        std::exp(-0.5 * x * x)) {
      return x;
    }
  }
}

}  // namespace uhit::rng
