#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace collatt {

// Identifier embedded in every run record. "ms" = split motion/event streams.
inline constexpr std::string_view kGeneratorId = "mt19937_64-ms1";

// Stateless mix used to derive independent stream seeds from one run seed.
uint64_t splitmix64(uint64_t x);

// Draws below avoid std::uniform_*_distribution on purpose: the standard
// pins the mt19937_64 output sequence but not the distributions, and record
// replay must be bit-stable.

// Unbiased integer in [0, n) by rejection.
uint64_t uniform_index(std::mt19937_64& rng, uint64_t n);

// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(std::mt19937_64& rng);

// Standard normal via Box-Muller on uniform_unit draws (two draws per call).
double standard_normal(std::mt19937_64& rng);

// Smallest k with u < probs[0] + ... + probs[k]; zero-width intervals are
// never selected. Falls back to the last positive entry if u lands past the
// accumulated total (floating point shortfall).
int sample_discrete(double u, std::span<const double> probs);

// Per-run generator state. The motion stream decides which RL pair moves;
// the event stream feeds the p-gate and the realized link values. Splitting
// them keeps the motion sequence of a seed identical across grw, samols and
// unitary dynamics.
class RunRng {
 public:
  explicit RunRng(uint64_t seed)
      : motion_(splitmix64(seed ^ 0x6d6f74696f6e0001ull)),
        event_(splitmix64(seed ^ 0x6576656e74000002ull)) {}

  std::mt19937_64& motion() { return motion_; }
  std::mt19937_64& event() { return event_; }

 private:
  std::mt19937_64 motion_;
  std::mt19937_64 event_;
};

}  // namespace collatt
