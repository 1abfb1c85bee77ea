#include "plfit/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "plfit/dataset.hpp"
#include "plfit/errors.hpp"
#include "plfit/estimation.hpp"
#include "plfit/report.hpp"
#include "plfit/synthesis.hpp"
#include "text.hpp"

namespace plfit::cli {

namespace fs = std::filesystem;

namespace {

// Input problem that maps to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string out_dir;
  std::vector<std::string> models;
  std::vector<std::string> los_models{"uma3gpp", "d1d2", "nyu", "invexp"};
  double bin_width = 1.0;
  std::string sf_stat = "mean";
  std::optional<std::uint64_t> seed;
  std::string spec;
  // eval
  std::string eval_model;
  std::vector<std::string> params;
  std::vector<double> freqs;
  std::vector<double> distances;
};

const std::vector<std::string> kAllModels = {"ci", "abg", "fi", "ci-dual", "fi-dual"};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("failed writing " + path.string());
}

fs::path prepare_out_dir(const std::string& dir) {
  if (dir.empty()) throw InputError("--out-dir is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InputError("output directory " + dir + " is not writable");
  }
  return fs::path(dir);
}

ParseResult load_dataset(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  return read_csv_file(path);
}

std::vector<ModelFamily> parse_families(const std::vector<std::string>& names) {
  std::vector<ModelFamily> out;
  for (const auto& n : names) {
    const ModelFamily f = parse_model_family(n);
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

std::vector<LosModelKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<LosModelKind> out;
  for (const auto& n : names) {
    const LosModelKind k = parse_los_model_kind(n);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

Json config_json(const std::string& command, const Options& o) {
  Json c;
  c["command"] = command;
  c["input"] = o.input;
  c["out_dir"] = o.out_dir;
  c["models"] = o.models;
  c["los_models"] = o.los_models;
  c["bin_width"] = o.bin_width;
  c["sf_stat"] = o.sf_stat;
  c["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
  c["spec"] = o.spec;
  return c;
}

void write_manifest(const fs::path& dir, const std::string& command, const Options& o,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
  Json m;
  m["tool"] = std::string(kToolName);
  m["version"] = std::string(kToolVersion);
  m["config"] = config_json(command, o);
  Json in = Json::array();
  for (const auto& path : inputs) {
    Json e;
    e["path"] = path;
    e["sha256"] = sha256_file(path);
    e["bytes"] = static_cast<std::uint64_t>(fs::file_size(path));
    in.push_back(std::move(e));
  }
  m["inputs"] = std::move(in);
  m["outputs"] = outputs;
  write_file(dir / "run_manifest.json", dump_json(m));
}

std::vector<double> distinct_frequencies(const Dataset& ds) {
  std::set<double> s;
  for (const auto& r : ds.records) s.insert(r.frequency.ghz());
  return {s.begin(), s.end()};
}

std::pair<double, double> distance_span(const Dataset& ds) {
  double lo = ds.records.front().distance_3d.meters(), hi = lo;
  for (const auto& r : ds.records) {
    lo = std::min(lo, r.distance_3d.meters());
    hi = std::max(hi, r.distance_3d.meters());
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.input.empty()) throw InputError("--input is required");
  ParseResult parsed;
  try {
    parsed = read_csv_file(o.input);
  } catch (const EmptyDatasetError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& r : e.rejections()) err << "line " << r.line << ": " << r.reason << '\n';
    return kInvalidInput;
  }
  out << "valid rows: " << parsed.dataset.size() << '\n';
  out << "rejected rows: " << parsed.rejections.size() << '\n';
  for (const auto& r : parsed.rejections) out << "line " << r.line << ": " << r.reason << '\n';
  for (const auto& w : parsed.warnings) out << "warning: " << w << '\n';

  if (!o.out_dir.empty()) {
    const fs::path dir = prepare_out_dir(o.out_dir);
    Json report;
    report["input"] = o.input;
    report["valid_rows"] = parsed.dataset.size();
    Json rejected = Json::array();
    for (const auto& r : parsed.rejections) {
      Json e;
      e["line"] = r.line;
      e["reason"] = r.reason;
      rejected.push_back(std::move(e));
    }
    report["rejections"] = std::move(rejected);
    report["warnings"] = parsed.warnings;
    write_file(dir / "validation.json", dump_json(report));
    write_manifest(dir, "validate", o, {o.input}, {"validation.json"});
  }
  return parsed.rejections.empty() ? kSuccess : kPartialValidation;
}

int cmd_fit_pathloss(const Options& o, std::ostream& out) {
  const auto families = parse_families(o.models.empty() ? kAllModels : o.models);
  const ParseResult parsed = load_dataset(o.input);
  const fs::path dir = prepare_out_dir(o.out_dir);
  const auto [los, nlos] = partition(parsed.dataset);

  Json report;
  report["input"] = o.input;
  report["n_records"] = parsed.dataset.size();
  report["n_rejected"] = parsed.rejections.size();
  Json parts;
  std::ostringstream curves;
  curves << "partition,model,freq_ghz,distance_m,path_loss_db\n";

  for (const auto& [name, part] : {std::pair<std::string, const Dataset*>{"los", &los},
                                   std::pair<std::string, const Dataset*>{"nlos", &nlos}}) {
    Json p;
    p["n_samples"] = part->size();
    if (part->empty()) {
      p["skipped"] = "no records in partition";
      parts[name] = std::move(p);
      continue;
    }
    Json fits;
    const auto freqs = distinct_frequencies(*part);
    const auto [lo, hi] = distance_span(*part);
    for (ModelFamily family : families) {
      const std::string key(to_string(family));
      try {
        const FitReport fr = fit(*part, family);
        fits[key] = to_json(fr);
        for (double f : freqs) {
          for (double d = std::max(1.0, std::ceil(lo)); d <= std::floor(hi); d += 1.0) {
            curves << name << ',' << key << ',' << detail::format_number(f) << ','
                   << detail::format_number(d) << ','
                   << detail::format_number(mean_path_loss(Frequency(f), Distance3D(d), fr.params))
                   << '\n';
          }
        }
      } catch (const DomainError& e) {
        fits[key] = Json{{"model", key}, {"skipped", e.what()}};
      } catch (const SingularDesignError& e) {
        fits[key] = Json{{"model", key}, {"skipped", e.what()}, {"column", e.column()}};
      }
    }
    p["fits"] = std::move(fits);
    parts[name] = std::move(p);
  }
  report["partitions"] = std::move(parts);

  std::ostringstream scatter;
  scatter << "distance_m,path_loss_db,freq_ghz,los\n";
  for (const auto& r : parsed.dataset.records) {
    scatter << detail::format_number(r.distance_3d.meters()) << ','
            << detail::format_number(r.path_loss_db) << ',' << detail::format_number(r.frequency.ghz())
            << ',' << (r.los ? "los" : "nlos") << '\n';
  }

  write_file(dir / "fit_report.json", dump_json(report));
  write_file(dir / "scatter.csv", scatter.str());
  write_file(dir / "curves.csv", curves.str());
  write_manifest(dir, "fit-pathloss", o, {o.input}, {"fit_report.json", "scatter.csv", "curves.csv"});
  out << "wrote " << (dir / "fit_report.json").string() << '\n';
  return kSuccess;
}

int cmd_fit_losprob(const Options& o, std::ostream& out) {
  const auto kinds = parse_kinds(o.los_models);
  if (kinds.empty()) throw InputError("--los-models is empty");
  const ParseResult parsed = load_dataset(o.input);
  const fs::path dir = prepare_out_dir(o.out_dir);
  const auto samples = los_samples(parsed.dataset);
  const EmpiricalLosCurve curve = empirical_los_curve(samples);

  std::vector<LosFitReport> fits;
  for (LosModelKind k : kinds) fits.push_back(fit_los_model(curve, k));
  std::vector<std::size_t> order(fits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fits[a].mse < fits[b].mse; });

  Json report;
  report["input"] = o.input;
  report["n_samples"] = samples.size();
  report["n_curve_points"] = curve.points.size();
  Json rows = Json::array();
  for (std::size_t r = 0; r < order.size(); ++r) {
    Json row;
    row["rank"] = r + 1;
    const Json fit_json = to_json(fits[order[r]]);
    for (const auto& [k, v] : fit_json.items()) row[k] = v;
    rows.push_back(std::move(row));
  }
  report["models"] = std::move(rows);

  std::ostringstream csv;
  csv << "distance_m,support,empirical";
  for (LosModelKind k : kinds) csv << ',' << to_string(k);
  csv << '\n';
  for (const auto& p : curve.points) {
    csv << detail::format_number(p.distance_m) << ',' << p.support << ','
        << detail::format_number(p.probability);
    for (const auto& f : fits) csv << ',' << detail::format_number(los_probability(p.distance_m, f.params));
    csv << '\n';
  }

  write_file(dir / "los_fit.json", dump_json(report));
  write_file(dir / "los_curves.csv", csv.str());
  write_manifest(dir, "fit-losprob", o, {o.input}, {"los_fit.json", "los_curves.csv"});
  out << "wrote " << (dir / "los_fit.json").string() << '\n';
  return kSuccess;
}

int cmd_shadow(const Options& o, std::ostream& out) {
  const auto families = parse_families(o.models.empty() ? std::vector<std::string>{"ci", "fi"} : o.models);
  const SfStatistic stat = parse_sf_statistic(o.sf_stat);
  if (!(o.bin_width > 0.0) || !std::isfinite(o.bin_width)) {
    throw InputError("--bin-width must be > 0");
  }
  const ParseResult parsed = load_dataset(o.input);
  const fs::path dir = prepare_out_dir(o.out_dir);
  const auto [los, nlos] = partition(parsed.dataset);

  Json report;
  report["input"] = o.input;
  report["bin_width_m"] = o.bin_width;
  report["statistic"] = std::string(to_string(stat));
  Json parts;
  std::ostringstream csv;
  csv << "partition,model,center_m,magnitude_db,count,fitted_db\n";
  for (const auto& [name, part] : {std::pair<std::string, const Dataset*>{"los", &los},
                                   std::pair<std::string, const Dataset*>{"nlos", &nlos}}) {
    Json p;
    p["n_samples"] = part->size();
    if (part->empty()) {
      p["skipped"] = "no records in partition";
      parts[name] = std::move(p);
      continue;
    }
    Json models;
    for (ModelFamily family : families) {
      const std::string key(to_string(family));
      try {
        const FitReport fr = fit(*part, family);
        const ShadowFadingProfile profile = shadow_fading_profile(fr, o.bin_width, stat);
        Json j = to_json(profile);
        j["sigma_db"] = fr.sigma;
        models[key] = std::move(j);
        for (const auto& b : profile.bins) {
          csv << name << ',' << key << ',' << detail::format_number(b.center_m) << ','
              << detail::format_number(b.magnitude_db) << ',' << b.count << ','
              << detail::format_number(profile.line.a * b.center_m + profile.line.b) << '\n';
        }
      } catch (const DomainError& e) {
        models[key] = Json{{"skipped", e.what()}};
      } catch (const SingularDesignError& e) {
        models[key] = Json{{"skipped", e.what()}, {"column", e.column()}};
      }
    }
    p["models"] = std::move(models);
    parts[name] = std::move(p);
  }
  report["partitions"] = std::move(parts);

  write_file(dir / "sf_profile.json", dump_json(report));
  write_file(dir / "sf_bins.csv", csv.str());
  write_manifest(dir, "shadow", o, {o.input}, {"sf_profile.json", "sf_bins.csv"});
  out << "wrote " << (dir / "sf_profile.json").string() << '\n';
  return kSuccess;
}

std::map<std::string, double> parse_param_list(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--param expects key=value, got '" + item + "'");
    const auto value = detail::parse_double(std::string_view(item).substr(eq + 1));
    if (!value) throw InputError("--param value is not a number: '" + item + "'");
    out[std::string(detail::trim(std::string_view(item).substr(0, eq)))] = *value;
  }
  return out;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto params = parse_param_list(o.params);
  auto get = [&](const char* key) {
    const auto it = params.find(key);
    if (it == params.end()) throw InputError(std::string("missing --param ") + key);
    return it->second;
  };
  auto need_distances = [&] {
    if (o.distances.empty()) throw InputError("--distance is required");
  };
  auto need_freqs = [&] {
    if (o.freqs.empty()) throw InputError("--freq is required for " + o.eval_model);
  };
  const std::string& m = o.eval_model;
  std::ostringstream csv;

  if (m == "fspl") {
    need_freqs();
    csv << "freq_ghz,fspl_1m_db\n";
    for (double f : o.freqs) {
      csv << detail::format_number(f) << ',' << detail::format_number(fspl_1m(Frequency(f))) << '\n';
    }
  } else if (m == "uma3gpp" || m == "d1d2" || m == "nyu" || m == "invexp") {
    need_distances();
    const LosModelKind kind = parse_los_model_kind(m);
    const LosProbParams p = kind == LosModelKind::uma_3gpp
                                ? LosProbParams::uma_3gpp()
                                : LosProbParams::make(kind, get("d1"), get("d2"));
    csv << "distance_m,los_probability\n";
    for (double d : o.distances) {
      csv << detail::format_number(d) << ',' << detail::format_number(los_probability(d, p)) << '\n';
    }
  } else if (m == "sf-line") {
    need_distances();
    const SfLineParams p{get("a"), get("b")};
    csv << "distance_m,sf_db\n";
    for (double d : o.distances) {
      csv << detail::format_number(d) << ',' << detail::format_number(sf_line(Distance3D(d), p)) << '\n';
    }
  } else {
    need_distances();
    Json j;
    try {
      j["model"] = std::string(to_string(parse_model_family(m)));
    } catch (const std::invalid_argument&) {
      throw InputError("unknown --model '" + m +
                       "' (expected ci, abg, fi, ci-dual, fi-dual, fspl, uma3gpp, d1d2, nyu, invexp, sf-line)");
    }
    for (const auto& [k, v] : params) j[k] = v;
    const PathLossParams p = path_loss_params_from_json(j);
    const bool uses_freq = std::holds_alternative<CiParams>(p) || std::holds_alternative<AbgParams>(p) ||
                           std::holds_alternative<CiDualParams>(p);
    if (uses_freq) need_freqs();
    const std::vector<double> freqs = uses_freq ? o.freqs : std::vector<double>{1.0};
    csv << (uses_freq ? "freq_ghz,distance_m,path_loss_db\n" : "distance_m,path_loss_db\n");
    for (double f : freqs) {
      for (double d : o.distances) {
        if (uses_freq) csv << detail::format_number(f) << ',';
        csv << detail::format_number(d) << ','
            << detail::format_number(mean_path_loss(Frequency(f), Distance3D(d), p)) << '\n';
      }
    }
  }
  out << csv.str();
  if (!o.out_dir.empty()) {
    const fs::path dir = prepare_out_dir(o.out_dir);
    write_file(dir / "eval.csv", csv.str());
    write_manifest(dir, "eval", o, {}, {"eval.csv"});
  }
  return kSuccess;
}

int cmd_synth(const Options& o, std::ostream& out) {
  if (o.spec.empty()) throw InputError("--spec is required");
  std::ifstream in(o.spec, std::ios::binary);
  if (!in) throw InputError("cannot open " + o.spec);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("spec is not valid JSON: " + std::string(e.what()));
  }
  SynthSpec spec = synth_spec_from_json(j);
  if (o.seed) spec.seed = *o.seed;
  const Dataset ds = generate_pathloss(spec);
  const fs::path dir = prepare_out_dir(o.out_dir);

  std::ostringstream csv;
  serialize_csv(ds, csv);
  Json sidecar;
  sidecar["generator"] = std::string(kGeneratorName);
  sidecar["spec"] = to_json(spec);
  sidecar["n_records"] = ds.size();
  write_file(dir / "dataset.csv", csv.str());
  write_file(dir / "dataset.spec.json", dump_json(sidecar));
  write_manifest(dir, "synth", o, {o.spec}, {"dataset.csv", "dataset.spec.json"});
  out << "wrote " << ds.size() << " records to " << (dir / "dataset.csv").string() << '\n';
  return kSuccess;
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 init failed");
  }
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fit and evaluate large-scale path loss, LOS probability and shadow fading models",
               std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Measurement CSV")->required();
  };
  auto add_models = [&](CLI::App* sub, const std::string& def) {
    sub->add_option("--models", o.models, "Path loss families: " + def)->delimiter(',');
  };

  auto* validate = app.add_subcommand("validate", "Schema check and per-row rejection report");
  add_input(validate);
  validate->add_option("--out-dir", o.out_dir, "Optional directory for validation.json");

  auto* fit_pl = app.add_subcommand("fit-pathloss", "Fit path loss families per LOS/NLOS partition");
  add_input(fit_pl);
  fit_pl->add_option("--out-dir", o.out_dir)->required();
  add_models(fit_pl, "ci,abg,fi,ci-dual,fi-dual (default all)");

  auto* fit_los = app.add_subcommand("fit-losprob", "Smoothed LOS curve and LOS model fits");
  add_input(fit_los);
  fit_los->add_option("--out-dir", o.out_dir)->required();
  fit_los->add_option("--los-models", o.los_models, "uma3gpp,d1d2,nyu,invexp")->delimiter(',');

  auto* shadow = app.add_subcommand("shadow", "Shadow fading magnitude versus distance");
  add_input(shadow);
  shadow->add_option("--out-dir", o.out_dir)->required();
  add_models(shadow, "default ci,fi");
  shadow->add_option("--bin-width", o.bin_width, "Distance bin width in m")->capture_default_str();
  shadow->add_option("--sf-stat", o.sf_stat, "Per-bin statistic")
      ->check(CLI::IsMember({"mean", "rms"}))
      ->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Evaluate a model and print CSV");
  eval->add_option("--model", o.eval_model,
                   "ci, abg, fi, ci-dual, fi-dual, fspl, uma3gpp, d1d2, nyu, invexp, sf-line")
      ->required();
  eval->add_option("--param", o.params, "key=value, repeatable or comma separated")->delimiter(',');
  eval->add_option("--freq", o.freqs, "Frequencies in GHz")->delimiter(',');
  eval->add_option("--distance", o.distances, "Distances in m")->delimiter(',');
  eval->add_option("--out-dir", o.out_dir, "Optional directory for eval.csv");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset from a JSON spec");
  synth->add_option("--spec", o.spec, "Synthesis spec JSON")->required();
  synth->add_option("--out-dir", o.out_dir)->required();
  synth->add_option("--seed", o.seed, "Overrides the spec seed");

  std::vector<std::string> reversed(args.size() > 0 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidInput;
  }

  try {
    if (*validate) return cmd_validate(o, out, err);
    if (*fit_pl) return cmd_fit_pathloss(o, out);
    if (*fit_los) return cmd_fit_losprob(o, out);
    if (*shadow) return cmd_shadow(o, out);
    if (*eval) return cmd_eval(o, out);
    if (*synth) return cmd_synth(o, out);
  } catch (const EmptyDatasetError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const SingularDesignError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace plfit::cli
