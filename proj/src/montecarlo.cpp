#include "wvsim/montecarlo.hpp"

#include <cmath>
#include <vector>

namespace wvsim {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t avalanche(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point_index) {
  return avalanche(master + kGoldenGamma * (point_index + 1));
}

std::uint64_t Rng::next_u64() {
  state_ += kGoldenGamma;
  return avalanche(state_);
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

MeasurementRecord sample_record(const std::map<std::string, double>& probs,
                                long shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidDistribution("shots must be >= 1");
  double total = 0.0;
  for (const auto& [label, p] : probs) {
    if (p < -1e-12 || !std::isfinite(p))
      throw InvalidDistribution("negative or non-finite probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidDistribution("outcome probabilities must sum to 1");

  std::vector<std::string> labels;
  std::vector<double> cum;
  double acc = 0.0;
  for (const auto& [label, p] : probs) {
    labels.push_back(label);
    acc += p;
    cum.push_back(acc);
  }
  cum.back() = 1.0;

  MeasurementRecord rec;
  rec.shots = shots;
  rec.seed = seed;
  for (const std::string& l : labels) rec.counts[l] = 0;
  Rng rng(seed);
  for (long i = 0; i < shots; ++i) {
    double u = rng.next_double();
    size_t k = 0;
    while (k + 1 < cum.size() && u >= cum[k]) ++k;
    ++rec.counts[labels[k]];
  }
  return rec;
}

std::pair<double, double> two_outcome_stats(const MeasurementRecord& record,
                                            const std::string& plus,
                                            const std::string& minus) {
  auto get = [&](const std::string& l) -> long {
    auto it = record.counts.find(l);
    return it == record.counts.end() ? 0 : it->second;
  };
  long np = get(plus);
  long nm = get(minus);
  long n = np + nm;
  if (n == 0) return {0.0, 0.0};
  double e = static_cast<double>(np - nm) / static_cast<double>(n);
  double se = std::sqrt(std::max(1.0 - e * e, 0.0) / static_cast<double>(n));
  return {e, se};
}

PointerStats empirical_stats(const MeasurementRecord& record) {
  PointerStats st;
  st.shots = record.shots;
  auto has = [&](const char* l) { return record.counts.count(l) > 0; };
  long post = 0;
  if (has("erase_post") || has("perp_post")) {
    auto [e, se] = two_outcome_stats(record, "erase_post", "perp_post");
    st.exp_z = e;
    st.se_z = se;
    post = record.counts.at("erase_post") + record.counts.at("perp_post");
  } else if (has("plus_post") || has("minus_post")) {
    auto [e, se] = two_outcome_stats(record, "plus_post", "minus_post");
    st.exp_x = e;
    st.se_x = se;
    post = record.counts.at("plus_post") + record.counts.at("minus_post");
  } else {
    auto [e, se] = two_outcome_stats(record, "plus", "minus");
    st.exp_x = e;
    st.se_x = se;
    post = record.shots;
  }
  st.p_postselect =
      static_cast<double>(post) / static_cast<double>(record.shots);
  st.valid = post > 0;
  return st;
}

}  // namespace wvsim
