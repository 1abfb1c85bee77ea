#pragma once

// Least-squares fitting of the path-loss families, the breakpoint search for
// dual-slope models, smoothed LOS-probability curves with (d1, d2) search,
// and the binned shadow-fading magnitude line.
//
// All fits work on dB residuals: residual = measured - model.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "plfit/dataset.hpp"
#include "plfit/models.hpp"

namespace plfit {

struct Residual {
  double distance_m;
  double residual_db;
};

struct FitReport {
  PathLossParams params;
  double sigma = 0.0;  // RMS of residuals, dB
  std::size_t n_samples = 0;
  std::vector<std::string> warnings;
  std::vector<Residual> residuals;  // in dataset order

  ModelFamily family() const noexcept { return family_of(params); }
};

// Minimum record counts per family.
inline constexpr std::size_t kMinSamplesCi = 2;
inline constexpr std::size_t kMinSamplesAbg = 3;
inline constexpr std::size_t kMinSamplesFi = 2;
inline constexpr std::size_t kMinSamplesDual = 4;
inline constexpr double kMinDualSpanM = 3.0;
// Dual-slope segments with fewer samples than this produce a warning.
inline constexpr std::size_t kMinSegmentSamples = 5;

FitReport fit_ci(const Dataset& ds);
FitReport fit_abg(const Dataset& ds);
FitReport fit_fi(const Dataset& ds);
FitReport fit_ci_dual(const Dataset& ds);
FitReport fit_fi_dual(const Dataset& ds);
FitReport fit(const Dataset& ds, ModelFamily family);

// Integer-meter breakpoint candidates ceil(min d) .. floor(max d).
std::vector<double> breakpoint_grid(const Dataset& ds);

struct LosCurvePoint {
  double distance_m;
  double probability;
  std::size_t support;
};

struct EmpiricalLosCurve {
  std::vector<LosCurvePoint> points;
};

inline constexpr double kLosWindowHalfWidthM = 5.0;

// LOS fraction within +/-5 m of each integer meter between the extreme
// sample distances; grid points with no support are skipped.
EmpiricalLosCurve empirical_los_curve(std::span<const LosSample> samples);

struct LosFitReport {
  LosProbParams params = LosProbParams::uma_3gpp();
  double mse = 0.0;
};

struct LosSearchGrid {
  double d2_min = 1.0;
  double d2_max = 2000.0;
  double d1_max = 200.0;         // d1d2 / nyu: d1 in {0} u log grid up to d1_max
  double d1_min_positive = 0.1;  // smallest nonzero d1 on the d1d2 / nyu grid
  double rate_min = 1e-4;        // inv_exp d1 bounds, 1/m
  double rate_max = 1.0;
  std::size_t points = 200;
  double tolerance = 1e-8;       // stop when a sweep improves MSE by less than this fraction
};

// Unweighted mean squared error of the model against the curve points.
double los_model_mse(const EmpiricalLosCurve& curve, const LosProbParams& params);

// uma_3gpp has no free parameters and only reports its MSE. Others run a
// coarse grid then coordinate-wise refinement.
LosFitReport fit_los_model(const EmpiricalLosCurve& curve, LosModelKind kind,
                           const LosSearchGrid& grid = {});

enum class SfStatistic { mean_abs, rms };

std::string_view to_string(SfStatistic stat) noexcept;
SfStatistic parse_sf_statistic(std::string_view name);

struct SfBin {
  double center_m;
  double magnitude_db;
  std::size_t count;
};

struct ShadowFadingProfile {
  std::vector<SfBin> bins;
  SfLineParams line{};
  std::vector<std::string> warnings;
};

// Bins residuals into [k w, (k+1) w) and fits magnitude = A d + B by
// unweighted least squares over the non-empty bins.
ShadowFadingProfile shadow_fading_profile(const FitReport& report, double bin_width_m = 1.0,
                                          SfStatistic stat = SfStatistic::mean_abs);

}  // namespace plfit
