#pragma once

// JSON and CSV shapes for parameters, fit reports, LOS fits, shadow-fading
// profiles and synthesis specs. Numbers are written with 17 significant
// digits so identical runs diff clean.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "plfit/estimation.hpp"
#include "plfit/models.hpp"
#include "plfit/synthesis.hpp"

namespace plfit {

using Json = nlohmann::ordered_json;

// {"model": "ci", "ple": 3.0}, {"model": "abg", "alpha": .., "beta": .., "gamma": ..}, ...
Json to_json(const PathLossParams& params);
PathLossParams path_loss_params_from_json(const Json& j);

// {"kind": "invexp", "d1": .., "d2": ..}
Json to_json(const LosProbParams& params);
LosProbParams los_params_from_json(const Json& j);

// Model, parameters, sigma_db, n_samples and warnings; residuals go to CSV.
Json to_json(const FitReport& report);
Json to_json(const LosFitReport& report);
Json to_json(const ShadowFadingProfile& profile);

Json to_json(const SynthSpec& spec);
// Missing optional keys take SynthSpec defaults. Throws FormatError.
SynthSpec synth_spec_from_json(const Json& j);

// Pretty-prints with two-space indent; doubles use %.17g, non-finite -> null.
void write_json(std::ostream& out, const Json& j);
std::string dump_json(const Json& j);

void write_residuals_csv(std::ostream& out, const FitReport& report);
void write_los_curve_csv(std::ostream& out, const EmpiricalLosCurve& curve);
void write_sf_bins_csv(std::ostream& out, const ShadowFadingProfile& profile);

}  // namespace plfit
