#include <doctest.h>

#include <cmath>
#include <sstream>

#include "plfit/cli.hpp"
#include "plfit/dataset.hpp"
#include "plfit/report.hpp"
#include "plfit/synthesis.hpp"
#include "support.hpp"

using namespace plfit;
using testsupport::read_text;
using testsupport::run_cli;
using testsupport::TempDir;
using testsupport::write_text;

namespace {

const char* kClean =
    "freq_ghz,distance_m,path_loss_db,los\n"
    "28,10,90.1,los\n"
    "28,50,110.3,nlos\n"
    "28,120,120.7,los\n";

const char* kPartial =
    "freq_ghz,distance_m,path_loss_db,los\n"
    "28,10,90.1,los\n"
    "28,0.5,80,los\n"
    "28,abc,100,nlos\n"
    "28,120,120.7,maybe\n"
    "28,200,130,nlos\n";

void write_dataset(const std::string& path, const Dataset& ds) {
  std::ostringstream s;
  serialize_csv(ds, s);
  write_text(path, s.str());
}

}  // namespace

TEST_CASE("validate exit codes") {
  TempDir t;
  write_text(t / "clean.csv", kClean);
  write_text(t / "partial.csv", kPartial);
  write_text(t / "empty.csv", "");
  write_text(t / "header_only.csv", "freq_ghz,distance_m,path_loss_db,los\n");
  write_text(t / "no_los.csv", "freq_ghz,distance_m,path_loss_db\n28,10,90\n");

  CHECK(run_cli({"validate", "--input", t / "clean.csv"}).code == cli::kSuccess);
  const auto partial = run_cli({"validate", "--input", t / "partial.csv", "--out-dir", t / "v"});
  CHECK(partial.code == cli::kPartialValidation);
  CHECK(partial.out.find("line 3:") != std::string::npos);
  const Json v = Json::parse(read_text(t / "v/validation.json"));
  CHECK(v["valid_rows"] == 2);
  CHECK(v["rejections"].size() == 3);
  CHECK(v["rejections"][0]["line"] == 3);

  CHECK(run_cli({"validate", "--input", t / "empty.csv"}).code == cli::kInvalidInput);
  CHECK(run_cli({"validate", "--input", t / "header_only.csv"}).code == cli::kInvalidInput);
  const auto no_los = run_cli({"validate", "--input", t / "no_los.csv"});
  CHECK(no_los.code == cli::kInvalidInput);
  CHECK(no_los.err.find("los") != std::string::npos);
  CHECK(run_cli({"validate", "--input", t / "missing.csv"}).code == cli::kInvalidInput);
  CHECK(run_cli({"validate"}).code == cli::kInvalidInput);
  CHECK(run_cli({"no-such-command"}).code == cli::kInvalidInput);
  CHECK(run_cli({"--version"}).code == cli::kSuccess);
}

TEST_CASE("fit-pathloss on synthetic LOS-only data") {
  TempDir t;
  SynthSpec s;
  s.model = CiParams{3.0};
  s.frequencies_ghz = {2, 10, 18, 28};
  s.sigma_db = 6.7;
  s.n_samples = 20000;
  s.seed = 11;
  write_dataset(t / "in.csv", generate_pathloss(s));

  const auto r = run_cli({"fit-pathloss", "--input", t / "in.csv", "--out-dir", t / "out"});
  REQUIRE(r.code == cli::kSuccess);
  const Json j = Json::parse(read_text(t / "out/fit_report.json"));
  const Json& los = j["partitions"]["los"];
  CHECK(los["n_samples"] == 20000);
  CHECK(std::abs(los["fits"]["ci"]["params"]["ple"].get<double>() - 3.0) < 0.03);
  CHECK(j["partitions"]["nlos"]["skipped"] == "no records in partition");
  for (const char* m : {"ci", "abg", "fi", "ci-dual", "fi-dual"}) CHECK(los["fits"].contains(m));
  const double ci = los["fits"]["ci"]["sigma_db"].get<double>();
  CHECK(los["fits"]["abg"]["sigma_db"].get<double>() <= ci + 1e-9);
  CHECK(los["fits"]["ci-dual"]["sigma_db"].get<double>() <= ci + 1e-9);
  CHECK(read_text(t / "out/curves.csv").rfind("partition,model,freq_ghz,distance_m,path_loss_db\n", 0) == 0);
  const Json m = Json::parse(read_text(t / "out/run_manifest.json"));
  CHECK(m["inputs"][0]["sha256"] == cli::sha256_file(t / "in.csv"));
  CHECK(m["inputs"][0]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("fit-pathloss records per-model failures and rejects unknown models") {
  TempDir t;
  // One frequency: ABG is singular in freq_ghz, the others fit.
  write_text(t / "in.csv", "freq_ghz,distance_m,path_loss_db,los\n"
                           "28,10,95,nlos\n28,20,104,nlos\n28,40,113,nlos\n28,80,123,nlos\n");
  REQUIRE(run_cli({"fit-pathloss", "--input", t / "in.csv", "--out-dir", t / "o", "--models", "ci,abg"}).code ==
          cli::kSuccess);
  const Json j = Json::parse(read_text(t / "o/fit_report.json"));
  CHECK(j["partitions"]["nlos"]["fits"]["abg"]["column"] == "freq_ghz");
  CHECK(j["partitions"]["nlos"]["fits"]["ci"].contains("params"));
  CHECK(run_cli({"fit-pathloss", "--input", t / "in.csv", "--out-dir", t / "o", "--models", "quad"}).code ==
        cli::kInvalidInput);
}

TEST_CASE("fit-losprob ranks models by MSE") {
  TempDir t;
  SynthSpec s;
  s.model = CiParams{2.0};
  s.nlos_model = CiParams{3.0};
  s.los_model = LosProbParams::make(LosModelKind::inv_exp, 0.0054, 97);
  s.distance_min_m = 10;
  s.distance_max_m = 500;
  s.sampling = DistanceSampling::uniform;
  s.n_samples = 50000;
  s.seed = 97;
  write_dataset(t / "in.csv", generate_pathloss(s));
  REQUIRE(run_cli({"fit-losprob", "--input", t / "in.csv", "--out-dir", t / "o"}).code == cli::kSuccess);
  const Json j = Json::parse(read_text(t / "o/los_fit.json"));
  REQUIRE(j["models"].size() == 4);
  CHECK(j["models"][0]["rank"] == 1);
  double prev = -1;
  for (const auto& row : j["models"]) {
    CHECK(row["mse"].get<double>() >= prev);
    prev = row["mse"].get<double>();
  }
  CHECK(j["models"][3]["kind"] == "uma3gpp");
  CHECK(read_text(t / "o/los_curves.csv").rfind("distance_m,support,empirical,uma3gpp,d1d2,nyu,invexp\n", 0) == 0);

  // All-LOS input: UMa MSE is the mean of (1 - p_uma)^2 over the curve.
  std::ostringstream all;
  all << "freq_ghz,distance_m,path_loss_db,los\n";
  for (int d = 10; d <= 100; ++d) all << "28," << d << ",100,los\n";
  write_text(t / "all.csv", all.str());
  REQUIRE(run_cli({"fit-losprob", "--input", t / "all.csv", "--out-dir", t / "a", "--los-models", "uma3gpp"}).code ==
          cli::kSuccess);
  const Json a = Json::parse(read_text(t / "a/los_fit.json"));
  double ss = 0;
  for (int d = 10; d <= 100; ++d) ss += std::pow(1 - los_probability(d, LosProbParams::uma_3gpp()), 2);
  CHECK(std::abs(a["models"][0]["mse"].get<double>() - ss / 91) < 1e-15);
}

TEST_CASE("shadow writes a profile per partition and model") {
  TempDir t;
  SynthSpec s;
  s.model = CiParams{2.1};
  s.sigma_db = 2.5;
  s.sigma_slope_db_per_m = 0.004;
  s.distance_min_m = 10;
  s.distance_max_m = 500;
  s.sampling = DistanceSampling::uniform;
  s.n_samples = 5000;
  s.seed = 3;
  write_dataset(t / "in.csv", generate_pathloss(s));
  REQUIRE(run_cli({"shadow", "--input", t / "in.csv", "--out-dir", t / "o", "--sf-stat", "rms"}).code ==
          cli::kSuccess);
  const Json j = Json::parse(read_text(t / "o/sf_profile.json"));
  CHECK(j["statistic"] == "rms");
  CHECK(j["partitions"]["los"]["models"]["ci"]["A_db_per_m"].get<double>() > 0);
  CHECK(j["partitions"]["los"]["models"].contains("fi"));
  CHECK(run_cli({"shadow", "--input", t / "in.csv", "--out-dir", t / "o", "--bin-width", "0"}).code ==
        cli::kInvalidInput);
  CHECK(run_cli({"shadow", "--input", t / "in.csv", "--out-dir", t / "o", "--sf-stat", "median"}).code ==
        cli::kInvalidInput);
}

TEST_CASE("eval prints model values") {
  auto r = run_cli({"eval", "--model", "ci", "--param", "n=3", "--freq", "28", "--distance", "100"});
  CHECK(r.code == cli::kInvalidInput);  // CI takes "ple"
  r = run_cli({"eval", "--model", "ci", "--param", "ple=3", "--freq", "28", "--distance", "100"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out == "freq_ghz,distance_m,path_loss_db\n28,100,121.39094384872776\n");
  r = run_cli({"eval", "--model", "invexp", "--param", "d1=0.0054,d2=97", "--distance", "97"});
  CHECK(r.out == "distance_m,los_probability\n97,0.5\n");
  r = run_cli({"eval", "--model", "fi", "--param", "alpha=40,beta=3", "--distance", "10,100"});
  CHECK(r.out == "distance_m,path_loss_db\n10,70\n100,100\n");
  CHECK(run_cli({"eval", "--model", "ci", "--param", "ple=3", "--distance", "100"}).code == cli::kInvalidInput);
  CHECK(run_cli({"eval", "--model", "ci", "--param", "ple=3", "--freq", "28", "--distance", "0.5"}).code ==
        cli::kInvalidInput);
  CHECK(run_cli({"eval", "--model", "warp", "--distance", "5"}).code == cli::kInvalidInput);
}

TEST_CASE("synth and downstream commands are byte-reproducible") {
  TempDir t;
  write_text(t / "spec.json", R"({
  "model": {"model": "ci", "ple": 2.1},
  "nlos_model": {"model": "ci", "ple": 3.2},
  "los_model": {"kind": "nyu", "d1": 0, "d2": 395},
  "frequencies_ghz": [28, 73],
  "distance_range_m": [10, 800],
  "sigma_db": 4,
  "n_samples": 3000,
  "seed": 9
})");
  for (const char* run : {"a", "b"}) {
    const std::string dir = t / run;
    REQUIRE(run_cli({"synth", "--spec", t / "spec.json", "--out-dir", dir}).code == cli::kSuccess);
  }
  for (const char* f : {"dataset.csv", "dataset.spec.json"}) {
    CHECK(read_text(t / (std::string("a/") + f)) == read_text(t / (std::string("b/") + f)));
  }
  // The manifest records the output directory, so compare a rerun in place.
  const std::string manifest = read_text(t / "a/run_manifest.json");
  REQUIRE(run_cli({"synth", "--spec", t / "spec.json", "--out-dir", t / "a"}).code == cli::kSuccess);
  CHECK(read_text(t / "a/run_manifest.json") == manifest);
  const Json side = Json::parse(read_text(t / "a/dataset.spec.json"));
  CHECK(side["generator"] == std::string(kGeneratorName));
  CHECK(side["n_records"] == 3000);

  REQUIRE(run_cli({"synth", "--spec", t / "spec.json", "--out-dir", t / "c", "--seed", "10"}).code == cli::kSuccess);
  CHECK(read_text(t / "a/dataset.csv") != read_text(t / "c/dataset.csv"));

  const std::string in = t / "a/dataset.csv";
  for (const char* run : {"x", "y"}) {
    const std::string dir = t / run;
    CHECK(run_cli({"fit-pathloss", "--input", in, "--out-dir", dir + "/pl"}).code == cli::kSuccess);
    CHECK(run_cli({"fit-losprob", "--input", in, "--out-dir", dir + "/los"}).code == cli::kSuccess);
    CHECK(run_cli({"shadow", "--input", in, "--out-dir", dir + "/sf"}).code == cli::kSuccess);
  }
  for (const char* f : {"pl/fit_report.json", "pl/curves.csv", "pl/scatter.csv", "los/los_fit.json",
                        "los/los_curves.csv", "sf/sf_profile.json", "sf/sf_bins.csv"}) {
    CHECK(read_text(t / (std::string("x/") + f)) == read_text(t / (std::string("y/") + f)));
  }

  write_text(t / "bad.json", "{ not json");
  CHECK(run_cli({"synth", "--spec", t / "bad.json", "--out-dir", t / "d"}).code == cli::kInvalidInput);
  write_text(t / "bad2.json", R"({"model": {"model": "ci", "ple": 2}, "n_samples": 0})");
  CHECK(run_cli({"synth", "--spec", t / "bad2.json", "--out-dir", t / "d"}).code == cli::kInvalidInput);
}
