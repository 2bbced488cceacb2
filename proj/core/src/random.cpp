#include "relay/random.hpp"

namespace relay {

Engine make_engine(const SeedSpec& seed, std::uint64_t stream) {
  auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
  auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(seed.master), hi(seed.master), lo(seed.replica),
                    hi(seed.replica), lo(stream),      hi(stream)};
  return Engine(seq);
}

ReplicaStreams::ReplicaStreams(const SeedSpec& seed, int walkers) : control_(make_engine(seed, 0)) {
  walkers_.reserve(static_cast<std::size_t>(walkers));
  for (int j = 0; j < walkers; ++j) {
    walkers_.push_back(make_engine(seed, static_cast<std::uint64_t>(j) + 1));
  }
}

}  // namespace relay
