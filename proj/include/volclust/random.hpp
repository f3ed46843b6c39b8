#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace volclust {

/// Explicit seed value. Every random quantity in the library is derived from one.
struct Seed {
  std::uint64_t value = 0;
};

/// Seeded generator with portable draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// transforms are written out here: uniforms use the top 53 bits, normals use
/// the Marsaglia polar method, and bounded integers use Lemire's multiply-shift
/// rejection. Draw sequences are therefore identical on every conforming
/// toolchain.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal draw.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace volclust
