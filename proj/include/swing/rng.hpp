#pragma once

#include <array>
#include <cstdint>

namespace swing {

// Philox4x32-10 counter-based generator. block() is a pure function of
// (counter, key), so any point of any stream can be addressed directly;
// results do not depend on batch sizes, call order, or scheduling.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);
};

// Substream addressing. The 128-bit counter is carved up as
//   word0 = path index, word1 = date | purpose << 16, word2 = block, word3 = 0,
// and the key is the 64-bit master seed. Distinct purposes never collide, so
// training, valuation, validation, parameter init, UW draws and the LS fit all
// consume independent noise from one seed.
enum class StreamPurpose : std::uint8_t {
  PathsTrain = 0,
  PathsValuation = 1,
  PathsValidation = 2,
  NetInit = 3,
  UwInit = 4,
  LsPaths = 5,
};

// Generator over one (purpose, path, date) cell. Uniforms carry 53 bits;
// normals are Box-Muller pairs, two per 128-bit block.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, StreamPurpose purpose, std::uint32_t path,
             std::uint16_t date);

  double next_uniform();  // in [0, 1)
  double next_normal();   // N(0, 1)

 private:
  void next_block(std::uint64_t& a, std::uint64_t& b);

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  double pending_normal_ = 0.0;
  double pending_uniform_ = 0.0;
  bool has_pending_normal_ = false;
  bool has_pending_uniform_ = false;
};

}  // namespace swing
