#pragma once

#include <cstdint>
#include <random>

namespace nivfunc {

/// Derives one 64-bit stream seed from (master seed, replication index,
/// stream tag) by splitmix64 mixing. Streams with distinct (index, tag) are
/// statistically independent, and the mapping is a pure function, so results
/// never depend on execution order.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t tag);

/// Counter-seeded generator with hand-rolled uniform and normal transforms.
/// The std::mt19937_64 engine is bit-reproducible by the standard; the
/// transforms below avoid the implementation-defined std distributions.
class StreamRng {
 public:
  StreamRng(std::uint64_t master, std::uint64_t index, std::uint64_t tag)
      : seed_(derive_stream_seed(master, index, tag)), engine_(seed_) {}
  explicit StreamRng(std::uint64_t raw_seed) : seed_(raw_seed), engine_(raw_seed) {}

  std::uint64_t stream_seed() const { return seed_; }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; caches the second variate.
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nivfunc
