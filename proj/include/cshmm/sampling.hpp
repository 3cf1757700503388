#pragma once

#include <cstdint>

#include "cshmm/analysis.hpp"
#include "cshmm/machine.hpp"

namespace cshmm {

// xoshiro256** seeded through splitmix64; fixed for reproducible runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  // uniform draw in [0, 1) with 53 random bits
  double unit();

 private:
  std::uint64_t s_[4];
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<StateKey> states;   // length + 1 entries, start first
  Word symbols;                   // length entries
};

struct EstimateReport {
  std::string quantity;
  double estimate = 0.0;
  double standard_error = 0.0;
  Enclosure exact;
  std::uint64_t samples = 0;
};

// Inverse-CDF draw from the eps-truncated stationary vector, renormalized;
// total-variation bias <= eps. Machines with a native sampler draw exactly
// up to the same truncation.
StateKey sample_stationary_state(const MachineSpec& spec, Rng& rng, double eps);

// Edge-consistent weighted random walk of `length` steps from `start`.
Trajectory sample_path(const MachineSpec& spec, Rng& rng, const StateKey& start,
                       std::uint64_t length);

// Plug-in estimate of H[X^t] from sliding windows, with leave-one-trajectory-
// out jackknife standard error. Requires total windows >= 10 * distinct
// observed words.
EstimateReport empirical_block_entropy(const std::vector<Trajectory>& trajs,
                                       std::int64_t t,
                                       const Enclosure& exact);

struct ReturnTimeReport {
  EstimateReport estimate;               // mean return time vs 1/pi_state
  bool all_one_or_even = true;           // return-time parity property
  std::uint64_t max_return_time = 0;
};

// Empirical mean of n first-return times to `state`, started at `state`,
// compared against the Kac expectation 1/pi_state.
ReturnTimeReport mean_return_time(const MachineSpec& spec, Rng& rng,
                                  const StateKey& state, std::uint64_t n,
                                  const Enclosure& kac);

}  // namespace cshmm
