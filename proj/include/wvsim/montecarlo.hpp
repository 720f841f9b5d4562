#pragma once

// Finite-statistics emulation: seeded multinomial coincidence counts and
// plug-in estimates with binomial standard errors. The generator is a small
// counter-based splitmix64 implemented here so identical seeds give
// identical streams everywhere.

#include <cstdint>
#include <map>
#include <string>

#include "wvsim/protocols.hpp"

namespace wvsim {

// splitmix64 avalanche of (master + GOLDEN_GAMMA * (index + 1)); per-point
// streams are independent of worker scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point_index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double next_double();  // uniform in [0, 1)

 private:
  std::uint64_t state_;
};

struct MeasurementRecord {
  std::map<std::string, long> counts;
  long shots = 0;
  std::uint64_t seed = 0;
};

// Multinomial draw of `shots` outcomes from `probs` (must sum to 1 within
// 1e-9, shots >= 1).
MeasurementRecord sample_record(const std::map<std::string, double>& probs,
                                long shots, std::uint64_t seed);

// Empirical expectation (n_plus - n_minus)/(n_plus + n_minus) and binomial
// standard error sqrt((1 - e^2)/n) for a two-outcome observable.
std::pair<double, double> two_outcome_stats(const MeasurementRecord& record,
                                            const std::string& plus,
                                            const std::string& minus);

// Plug-in PointerStats from a record labelled by one of the regime label
// conventions ({plus,minus}, {plus_post,minus_post,fail} or
// {erase_post,perp_post,erase_fail,perp_fail}).
PointerStats empirical_stats(const MeasurementRecord& record);

}  // namespace wvsim
