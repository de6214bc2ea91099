#include "swing/rng.hpp"

#include <cmath>
#include <numbers>

namespace swing {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c,
                         const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t(kMul0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kMul1) * c[2];
  const std::uint32_t hi0 = std::uint32_t(p0 >> 32);
  const std::uint32_t lo0 = std::uint32_t(p0);
  const std::uint32_t hi1 = std::uint32_t(p1 >> 32);
  const std::uint32_t lo1 = std::uint32_t(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    philox_round(ctr, key);
  }
  return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, StreamPurpose purpose,
                       std::uint32_t path, std::uint16_t date)
    : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
      ctr_{path,
           std::uint32_t(date) | (std::uint32_t(purpose) << 16),
           0u, 0u} {}

void CounterRng::next_block(std::uint64_t& a, std::uint64_t& b) {
  const auto r = Philox4x32::block(ctr_, key_);
  ++ctr_[2];
  a = std::uint64_t(r[0]) | (std::uint64_t(r[1]) << 32);
  b = std::uint64_t(r[2]) | (std::uint64_t(r[3]) << 32);
}

double CounterRng::next_uniform() {
  if (has_pending_uniform_) {
    has_pending_uniform_ = false;
    return pending_uniform_;
  }
  std::uint64_t a, b;
  next_block(a, b);
  pending_uniform_ = double(b >> 11) * 0x1p-53;
  has_pending_uniform_ = true;
  return double(a >> 11) * 0x1p-53;
}

double CounterRng::next_normal() {
  if (has_pending_normal_) {
    has_pending_normal_ = false;
    return pending_normal_;
  }
  std::uint64_t a, b;
  next_block(a, b);
  // u1 in (0, 1] so the log is finite; u2 in [0, 1)
  const double u1 = double((a >> 11) + 1) * 0x1p-53;
  const double u2 = double(b >> 11) * 0x1p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  pending_normal_ = r * std::sin(t);
  has_pending_normal_ = true;
  return r * std::cos(t);
}

}  // namespace swing
