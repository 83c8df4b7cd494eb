#ifndef CCFL_RNG_HPP
#define CCFL_RNG_HPP

#include <cstdint>
#include <random>

namespace ccfl {

/// Independent random streams, one per purpose, so that fixing one axis of
/// randomness (e.g. topology) never perturbs another (e.g. fading draws).
enum class Stream : std::uint32_t {
  topology = 1,
  fading = 2,
  traffic = 3,
  data = 4,
};

using Engine = std::mt19937_64;

/// Engine for `purpose` derived from `seed`; `lane` selects a further
/// substream (parallel worker, device index, ...).
inline Engine make_engine(std::uint64_t seed, Stream purpose, std::uint32_t lane = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose), lane};
  return Engine(seq);
}

}  // namespace ccfl

#endif  // CCFL_RNG_HPP
