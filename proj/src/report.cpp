#include "plfit/report.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "plfit/errors.hpp"
#include "text.hpp"

namespace plfit {

namespace {

double number(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw FormatError(std::string("expected numeric field '") + key + "'");
  }
  return it->get<double>();
}

std::string string_field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw FormatError(std::string("expected string field '") + key + "'");
  }
  return it->get<std::string>();
}

void write_string(std::ostream& out, const std::string& s) {
  out << Json(s).dump();
}

void write_value(std::ostream& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad;
        write_string(out, key);
        out << ": ";
        write_value(out, value, depth + 1);
      }
      out << '\n' << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write_value(out, j[i], depth + 1);
      }
      out << '\n' << close_pad << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) out << detail::format_number(v);
      else out << "null";
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

Json to_json(const PathLossParams& params) {
  Json j;
  j["model"] = std::string(to_string(family_of(params)));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CiParams>) {
          j["ple"] = p.ple;
        } else if constexpr (std::is_same_v<T, AbgParams>) {
          j["alpha"] = p.alpha;
          j["beta"] = p.beta;
          j["gamma"] = p.gamma;
        } else if constexpr (std::is_same_v<T, FiParams>) {
          j["alpha"] = p.alpha;
          j["beta"] = p.beta;
        } else if constexpr (std::is_same_v<T, CiDualParams>) {
          j["n1"] = p.n1;
          j["n2"] = p.n2;
          j["d_th"] = p.d_th;
        } else {
          j["alpha1"] = p.alpha1;
          j["beta1"] = p.beta1;
          j["beta2"] = p.beta2;
          j["d_th"] = p.d_th;
        }
      },
      params);
  return j;
}

PathLossParams path_loss_params_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("path loss model must be a JSON object");
  ModelFamily family;
  try {
    family = parse_model_family(string_field(j, "model"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  switch (family) {
    case ModelFamily::ci: return CiParams{number(j, "ple")};
    case ModelFamily::abg: return AbgParams{number(j, "alpha"), number(j, "beta"), number(j, "gamma")};
    case ModelFamily::fi: return FiParams{number(j, "alpha"), number(j, "beta")};
    case ModelFamily::ci_dual: return CiDualParams{number(j, "n1"), number(j, "n2"), number(j, "d_th")};
    case ModelFamily::fi_dual:
      return FiDualParams{number(j, "alpha1"), number(j, "beta1"), number(j, "beta2"), number(j, "d_th")};
  }
  throw FormatError("unknown model");
}

Json to_json(const LosProbParams& params) {
  Json j;
  j["kind"] = std::string(to_string(params.kind()));
  j["d1"] = params.d1();
  j["d2"] = params.d2();
  return j;
}

LosProbParams los_params_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("LOS model must be a JSON object");
  LosModelKind kind;
  try {
    kind = parse_los_model_kind(string_field(j, "kind"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  if (kind == LosModelKind::uma_3gpp && !j.contains("d1") && !j.contains("d2")) {
    return LosProbParams::uma_3gpp();
  }
  return LosProbParams::make(kind, number(j, "d1"), number(j, "d2"));
}

Json to_json(const FitReport& report) {
  Json j;
  j["model"] = std::string(to_string(report.family()));
  Json params = to_json(report.params);
  params.erase("model");
  j["params"] = std::move(params);
  j["sigma_db"] = report.sigma;
  j["n_samples"] = report.n_samples;
  j["warnings"] = report.warnings;
  return j;
}

Json to_json(const LosFitReport& report) {
  Json j = to_json(report.params);
  j["mse"] = report.mse;
  return j;
}

Json to_json(const ShadowFadingProfile& profile) {
  Json j;
  j["A_db_per_m"] = profile.line.a;
  j["B_db"] = profile.line.b;
  j["n_bins"] = profile.bins.size();
  std::size_t n = 0;
  for (const auto& b : profile.bins) n += b.count;
  j["n_samples"] = n;
  j["warnings"] = profile.warnings;
  return j;
}

Json to_json(const SynthSpec& spec) {
  Json j;
  j["model"] = to_json(spec.model);
  if (spec.los_model) j["los_model"] = to_json(*spec.los_model);
  if (spec.nlos_model) j["nlos_model"] = to_json(*spec.nlos_model);
  if (spec.nlos_sigma_db) j["nlos_sigma_db"] = *spec.nlos_sigma_db;
  j["los"] = spec.los;
  j["frequencies_ghz"] = spec.frequencies_ghz;
  j["distance_range_m"] = Json::array({spec.distance_min_m, spec.distance_max_m});
  j["sampling"] = std::string(to_string(spec.sampling));
  j["sigma_db"] = spec.sigma_db;
  j["sigma_slope_db_per_m"] = spec.sigma_slope_db_per_m;
  j["n_samples"] = spec.n_samples;
  j["seed"] = spec.seed;
  j["campaign"] = spec.campaign;
  return j;
}

SynthSpec synth_spec_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("synthesis spec must be a JSON object");
  SynthSpec spec;
  try {
    if (!j.contains("model")) throw FormatError("synthesis spec needs a 'model'");
    spec.model = path_loss_params_from_json(j.at("model"));
    if (j.contains("los_model")) spec.los_model = los_params_from_json(j.at("los_model"));
    if (j.contains("nlos_model")) spec.nlos_model = path_loss_params_from_json(j.at("nlos_model"));
    if (j.contains("nlos_sigma_db")) spec.nlos_sigma_db = number(j, "nlos_sigma_db");
    if (j.contains("los")) spec.los = j.at("los").get<bool>();
    if (j.contains("frequencies_ghz")) {
      spec.frequencies_ghz = j.at("frequencies_ghz").get<std::vector<double>>();
    }
    if (j.contains("distance_range_m")) {
      const auto range = j.at("distance_range_m").get<std::vector<double>>();
      if (range.size() != 2) throw FormatError("distance_range_m must be [min, max]");
      spec.distance_min_m = range[0];
      spec.distance_max_m = range[1];
    }
    if (j.contains("sampling")) {
      spec.sampling = parse_distance_sampling(string_field(j, "sampling"));
    }
    if (j.contains("sigma_db")) spec.sigma_db = number(j, "sigma_db");
    if (j.contains("sigma_slope_db_per_m")) spec.sigma_slope_db_per_m = number(j, "sigma_slope_db_per_m");
    if (j.contains("n_samples")) spec.n_samples = j.at("n_samples").get<std::size_t>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("campaign")) spec.campaign = string_field(j, "campaign");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid synthesis spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return spec;
}

void write_json(std::ostream& out, const Json& j) {
  write_value(out, j, 0);
  out << '\n';
}

std::string dump_json(const Json& j) {
  std::ostringstream out;
  write_json(out, j);
  return out.str();
}

void write_residuals_csv(std::ostream& out, const FitReport& report) {
  out << "distance_m,residual_db\n";
  for (const auto& r : report.residuals) {
    out << detail::format_number(r.distance_m) << ',' << detail::format_number(r.residual_db) << '\n';
  }
}

void write_los_curve_csv(std::ostream& out, const EmpiricalLosCurve& curve) {
  out << "distance_m,probability,support\n";
  for (const auto& p : curve.points) {
    out << detail::format_number(p.distance_m) << ',' << detail::format_number(p.probability) << ','
        << p.support << '\n';
  }
}

void write_sf_bins_csv(std::ostream& out, const ShadowFadingProfile& profile) {
  out << "center_m,magnitude_db,count,fitted_db\n";
  for (const auto& b : profile.bins) {
    out << detail::format_number(b.center_m) << ',' << detail::format_number(b.magnitude_db) << ','
        << b.count << ',' << detail::format_number(profile.line.a * b.center_m + profile.line.b)
        << '\n';
  }
}

}  // namespace plfit
