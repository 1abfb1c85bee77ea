#pragma once

// Closed-form large-scale propagation models: free-space anchor, CI / ABG /
// FI single-slope path loss, dual-slope CI / FI, LOS probability families,
// and the distance-linear shadow-fading magnitude.
//
// Units throughout: frequency in GHz, distance in meters, loss in dB,
// logarithms base 10.

#include <string_view>
#include <variant>

namespace plfit {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

class Frequency {
 public:
  // Throws DomainError unless ghz is finite and > 0.
  explicit Frequency(double ghz);

  double ghz() const noexcept { return ghz_; }
  double hz() const noexcept { return ghz_ * 1e9; }

 private:
  double ghz_;
};

// 3D T-R separation; path-loss models are anchored at 1 m so d >= 1.
class Distance3D {
 public:
  explicit Distance3D(double meters);

  double meters() const noexcept { return meters_; }

 private:
  double meters_;
};

struct CiParams {
  double ple;

  bool operator==(const CiParams&) const = default;
};

struct AbgParams {
  double alpha;
  double beta;   // dB
  double gamma;

  bool operator==(const AbgParams&) const = default;
};

struct FiParams {
  double alpha;  // floating intercept, dB
  double beta;

  bool operator==(const FiParams&) const = default;
};

struct CiDualParams {
  double n1;
  double n2;
  double d_th;  // breakpoint, m

  bool operator==(const CiDualParams&) const = default;
};

struct FiDualParams {
  double alpha1;  // dB
  double beta1;
  double beta2;
  double d_th;  // breakpoint, m

  bool operator==(const FiDualParams&) const = default;
};

using PathLossParams =
    std::variant<CiParams, AbgParams, FiParams, CiDualParams, FiDualParams>;

enum class ModelFamily { ci, abg, fi, ci_dual, fi_dual };

std::string_view to_string(ModelFamily family) noexcept;
// Accepts "ci", "abg", "fi", "ci-dual", "fi-dual". Throws std::invalid_argument.
ModelFamily parse_model_family(std::string_view name);
ModelFamily family_of(const PathLossParams& params) noexcept;

enum class LosModelKind { uma_3gpp, d1d2, nyu_squared, inv_exp };

std::string_view to_string(LosModelKind kind) noexcept;
// Accepts "uma3gpp", "d1d2", "nyu", "invexp". Throws std::invalid_argument.
LosModelKind parse_los_model_kind(std::string_view name);

// LOS probability model with its two shape parameters. For inv_exp, d1 is a
// rate in 1/m; for the others it is a distance in m. uma_3gpp is pinned to
// (18, 63).
class LosProbParams {
 public:
  static constexpr double kUmaD1 = 18.0;
  static constexpr double kUmaD2 = 63.0;

  static LosProbParams uma_3gpp() noexcept;
  // Throws DomainError on invalid parameters for the kind.
  static LosProbParams make(LosModelKind kind, double d1, double d2);

  LosModelKind kind() const noexcept { return kind_; }
  double d1() const noexcept { return d1_; }
  double d2() const noexcept { return d2_; }

 private:
  LosProbParams(LosModelKind kind, double d1, double d2) noexcept
      : kind_(kind), d1_(d1), d2_(d2) {}

  LosModelKind kind_;
  double d1_;
  double d2_;
};

struct SfLineParams {
  double a;  // dB per meter
  double b;  // dB

  bool operator==(const SfLineParams&) const = default;
};

// 20 log10(4 pi f / c), the free-space loss at 1 m.
double fspl_1m(Frequency f);

double ci_path_loss(Frequency f, Distance3D d, CiParams p);
double abg_path_loss(Frequency f, Distance3D d, AbgParams p);
double fi_path_loss(Distance3D d, FiParams p);
double ci_dual_path_loss(Frequency f, Distance3D d, CiDualParams p);
double fi_dual_path_loss(Distance3D d, FiDualParams p);

// Dispatches on the parameter variant. FI variants ignore f.
double mean_path_loss(Frequency f, Distance3D d, const PathLossParams& params);

// Accepts any d > 0. Result is in [0, 1].
double los_probability(double distance_m, const LosProbParams& p);

double sf_line(Distance3D d, SfLineParams p);

// p(d) * PL_los + (1 - p(d)) * PL_nlos.
double blended_mean_path_loss(Frequency f, Distance3D d, const LosProbParams& los_params,
                              const PathLossParams& pl_los, const PathLossParams& pl_nlos);

}  // namespace plfit
