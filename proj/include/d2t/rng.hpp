#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace d2t {

/// Seeded generator with a platform-independent bounded draw; the standard
/// distributions are implementation-defined and would break golden files.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n); n must be positive.
  std::size_t uniform(std::size_t n);
  /// Uniform real in [0, 1).
  double uniform_real();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Per-record sub-seed from a corpus seed and a record id.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view id);

}  // namespace d2t
