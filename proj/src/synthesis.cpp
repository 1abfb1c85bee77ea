#include "plfit/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "plfit/errors.hpp"

namespace plfit {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSlotsPerRecord = 8;

enum Slot : unsigned { kDistance = 0, kFrequency = 1, kLos = 2, kNormalA = 3, kNormalB = 4 };

struct Draw {
  double distance;
  double frequency;
  bool los;
};

Draw draw_geometry(const SynthSpec& spec, std::uint64_t i) {
  const double u = counter_uniform(spec.seed, i, kDistance);
  const double lo = spec.distance_min_m, hi = spec.distance_max_m;
  double d = spec.sampling == DistanceSampling::log_uniform
                 ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)))
                 : lo + u * (hi - lo);
  d = std::clamp(d, lo, hi);

  const auto k = spec.frequencies_ghz.size();
  const auto idx = std::min(
      k - 1, static_cast<std::size_t>(counter_uniform(spec.seed, i, kFrequency) * static_cast<double>(k)));

  bool los = spec.los;
  if (spec.los_model) {
    los = counter_uniform(spec.seed, i, kLos) < los_probability(d, *spec.los_model);
  }
  return {d, spec.frequencies_ghz[idx], los};
}

}  // namespace

std::string_view to_string(DistanceSampling s) noexcept {
  return s == DistanceSampling::uniform ? "uniform" : "log-uniform";
}

DistanceSampling parse_distance_sampling(std::string_view name) {
  if (name == "log-uniform") return DistanceSampling::log_uniform;
  if (name == "uniform") return DistanceSampling::uniform;
  throw std::invalid_argument("unknown distance sampling '" + std::string(name) +
                              "' (expected log-uniform or uniform)");
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) noexcept {
  std::uint64_t z = seed + kGolden * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t record, unsigned slot) noexcept {
  const std::uint64_t bits = counter_hash(seed, record * kSlotsPerRecord + slot) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t record, unsigned slot_a,
                      unsigned slot_b) noexcept {
  const double u1 = counter_uniform(seed, record, slot_a);
  const double u2 = counter_uniform(seed, record, slot_b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void validate(const SynthSpec& spec) {
  if (spec.frequencies_ghz.empty()) {
    throw DomainError("synthesis needs at least one frequency");
  }
  for (double f : spec.frequencies_ghz) Frequency{f};
  if (!std::isfinite(spec.distance_min_m) || spec.distance_min_m < 1.0) {
    throw DomainError("distance range minimum must be >= 1 m");
  }
  if (!std::isfinite(spec.distance_max_m) || spec.distance_max_m <= spec.distance_min_m) {
    throw DomainError("distance range maximum must exceed the minimum");
  }
  auto check_sigma = [&](double sigma, const char* name) {
    if (!std::isfinite(sigma) || sigma < 0.0) {
      throw DomainError(std::string(name) + " must be finite and >= 0 dB");
    }
    if (!std::isfinite(spec.sigma_slope_db_per_m) ||
        sigma + spec.sigma_slope_db_per_m * spec.distance_min_m < 0.0 ||
        sigma + spec.sigma_slope_db_per_m * spec.distance_max_m < 0.0) {
      throw DomainError(std::string(name) + " plus the distance slope goes negative in range");
    }
  };
  check_sigma(spec.sigma_db, "sigma_db");
  if (spec.nlos_sigma_db) check_sigma(*spec.nlos_sigma_db, "nlos_sigma_db");
  if (spec.n_samples < 1) {
    throw DomainError("n_samples must be >= 1");
  }
  // Evaluate every model once so breakpoints and finiteness are checked up front.
  const Frequency f(spec.frequencies_ghz.front());
  const Distance3D d(spec.distance_min_m);
  mean_path_loss(f, d, spec.model);
  if (spec.nlos_model) mean_path_loss(f, d, *spec.nlos_model);
}

Dataset generate_pathloss(const SynthSpec& spec) {
  validate(spec);
  if (spec.los_model && !spec.nlos_model) {
    throw DomainError("a LOS probability model requires an NLOS path loss model");
  }
  Dataset ds;
  ds.metadata.source = std::string("synthetic:") + std::string(kGeneratorName) +
                       ":seed=" + std::to_string(spec.seed);
  ds.metadata.ingested_at = std::chrono::system_clock::now();
  ds.records.reserve(spec.n_samples);
  for (std::uint64_t i = 0; i < spec.n_samples; ++i) {
    const Draw g = draw_geometry(spec, i);
    const bool nlos_branch = spec.los_model && !g.los;
    const PathLossParams& model = nlos_branch ? *spec.nlos_model : spec.model;
    const double base_sigma = nlos_branch && spec.nlos_sigma_db ? *spec.nlos_sigma_db : spec.sigma_db;
    const double sigma = base_sigma + spec.sigma_slope_db_per_m * g.distance;

    const Frequency f(g.frequency);
    const Distance3D d(g.distance);
    double pl = mean_path_loss(f, d, model);
    if (sigma > 0.0) pl += sigma * counter_normal(spec.seed, i, kNormalA, kNormalB);
    if (!(pl > 0.0)) {
      throw DomainError("synthetic path loss is not positive; choose a model with larger losses");
    }
    ds.records.push_back({f, d, pl, g.los, spec.campaign, std::nullopt, std::nullopt});
  }
  return ds;
}

std::vector<LosSample> generate_los(const SynthSpec& spec) {
  if (!spec.los_model) {
    throw DomainError("generate_los needs a LOS probability model");
  }
  validate(spec);
  std::vector<LosSample> out;
  out.reserve(spec.n_samples);
  for (std::uint64_t i = 0; i < spec.n_samples; ++i) {
    const Draw g = draw_geometry(spec, i);
    out.push_back({g.distance, g.los});
  }
  return out;
}

}  // namespace plfit
