#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "relay/model.hpp"

namespace relay {

using Engine = std::mt19937_64;

/// Engine for substream `stream` of replica `seed.replica` under
/// `seed.master`. Stream 0 is the replica's control stream; walker j uses
/// stream j + 1.
Engine make_engine(const SeedSpec& seed, std::uint64_t stream);

/// The random streams owned by one replica: a control stream (initial state,
/// handoff tie-breaks) plus one stream per walker (direction flips, switch
/// clocks). Walker draws therefore do not depend on the order in which the
/// simulator visits walkers.
class ReplicaStreams {
 public:
  ReplicaStreams(const SeedSpec& seed, int walkers);

  Engine& control() noexcept { return control_; }
  Engine& walker(std::size_t j) noexcept { return walkers_[j]; }
  [[nodiscard]] std::size_t walker_count() const noexcept { return walkers_.size(); }

 private:
  Engine control_;
  std::vector<Engine> walkers_;
};

inline double uniform01(Engine& engine) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine);
}

inline std::size_t uniform_index(Engine& engine, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine);
}

}  // namespace relay
