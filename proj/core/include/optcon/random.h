#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace optcon {

// Portable stream: mt19937_64 plus a fixed bits-to-double mapping, so draws
// do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Seed from several integers (run seed, agent index, purpose tag, ...).
  static Rng Derive(std::initializer_list<std::uint64_t> parts);

  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t MixSeed(std::initializer_list<std::uint64_t> parts);

}  // namespace optcon
