#pragma once

// Seeded synthetic measurement generator. Every draw is a pure function of
// (seed, record index, draw slot) through a counter-based SplitMix64 mix, so
// datasets are reproducible from (generator name, spec) on any platform and
// any chunking.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plfit/dataset.hpp"
#include "plfit/models.hpp"

namespace plfit {

inline constexpr std::string_view kGeneratorName = "splitmix64-counter/v1";

enum class DistanceSampling { log_uniform, uniform };

std::string_view to_string(DistanceSampling s) noexcept;
DistanceSampling parse_distance_sampling(std::string_view name);

struct SynthSpec {
  // Mean model for LOS records, or for all records when los_model is unset.
  PathLossParams model = CiParams{2.0};
  // With los_model set, flags are Bernoulli(p(d)) and NLOS records follow
  // nlos_model / nlos_sigma_db.
  std::optional<LosProbParams> los_model;
  std::optional<PathLossParams> nlos_model;
  std::optional<double> nlos_sigma_db;
  bool los = true;  // flag for every record when los_model is unset

  std::vector<double> frequencies_ghz{28.0};
  double distance_min_m = 10.0;
  double distance_max_m = 1000.0;
  DistanceSampling sampling = DistanceSampling::log_uniform;
  double sigma_db = 0.0;
  // Residual standard deviation grows as sigma_db + sigma_slope_db_per_m * d.
  double sigma_slope_db_per_m = 0.0;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  std::string campaign = "synthetic";
};

// Throws DomainError describing the first violated invariant.
void validate(const SynthSpec& spec);

Dataset generate_pathloss(const SynthSpec& spec);

// LOS draws only; requires spec.los_model. Uses the same draws as the flags of
// generate_pathloss, so both agree record by record.
std::vector<LosSample> generate_los(const SynthSpec& spec);

// Counter-based primitives, exposed for tests and cross-language replays.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) noexcept;
// Uniform on the open interval (0, 1).
double counter_uniform(std::uint64_t seed, std::uint64_t record, unsigned slot) noexcept;
// Box-Muller standard normal from two slots of the record.
double counter_normal(std::uint64_t seed, std::uint64_t record, unsigned slot_a,
                      unsigned slot_b) noexcept;

}  // namespace plfit
