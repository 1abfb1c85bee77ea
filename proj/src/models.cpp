#include "plfit/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "plfit/errors.hpp"

namespace plfit {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

void require_breakpoint(double d_th) {
  require_finite(d_th, "breakpoint distance");
  if (d_th < 1.0) {
    throw DomainError("breakpoint distance must be >= 1 m, got " + std::to_string(d_th));
  }
}

double dual_slope(double anchor, double slope1, double slope2, double d_th, double d) {
  if (d <= d_th) {
    return anchor + 10.0 * slope1 * std::log10(d);
  }
  return anchor + 10.0 * slope1 * std::log10(d_th) + 10.0 * slope2 * std::log10(d / d_th);
}

// Bracketed 3GPP-style term min(d1/d, 1)(1 - e^{-d/d2}) + e^{-d/d2}.
double d1d2_term(double d, double d1, double d2) {
  const double decay = std::exp(-d / d2);
  return std::min(d1 / d, 1.0) * (1.0 - decay) + decay;
}

}  // namespace

Frequency::Frequency(double ghz) : ghz_(ghz) {
  if (!std::isfinite(ghz) || ghz <= 0.0) {
    throw DomainError("frequency must be finite and > 0 GHz, got " + std::to_string(ghz));
  }
}

Distance3D::Distance3D(double meters) : meters_(meters) {
  if (!std::isfinite(meters)) {
    throw DomainError("distance must be finite");
  }
  if (meters < 1.0) {
    throw DomainError("distance below 1 m reference: " + std::to_string(meters));
  }
}

std::string_view to_string(ModelFamily family) noexcept {
  switch (family) {
    case ModelFamily::ci: return "ci";
    case ModelFamily::abg: return "abg";
    case ModelFamily::fi: return "fi";
    case ModelFamily::ci_dual: return "ci-dual";
    case ModelFamily::fi_dual: return "fi-dual";
  }
  return "unknown";
}

ModelFamily parse_model_family(std::string_view name) {
  for (auto f : {ModelFamily::ci, ModelFamily::abg, ModelFamily::fi, ModelFamily::ci_dual,
                 ModelFamily::fi_dual}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown path loss model '" + std::string(name) +
                              "' (expected ci, abg, fi, ci-dual, fi-dual)");
}

ModelFamily family_of(const PathLossParams& params) noexcept {
  return static_cast<ModelFamily>(params.index());
}

std::string_view to_string(LosModelKind kind) noexcept {
  switch (kind) {
    case LosModelKind::uma_3gpp: return "uma3gpp";
    case LosModelKind::d1d2: return "d1d2";
    case LosModelKind::nyu_squared: return "nyu";
    case LosModelKind::inv_exp: return "invexp";
  }
  return "unknown";
}

LosModelKind parse_los_model_kind(std::string_view name) {
  for (auto k : {LosModelKind::uma_3gpp, LosModelKind::d1d2, LosModelKind::nyu_squared,
                 LosModelKind::inv_exp}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown LOS model '" + std::string(name) +
                              "' (expected uma3gpp, d1d2, nyu, invexp)");
}

LosProbParams LosProbParams::uma_3gpp() noexcept {
  return {LosModelKind::uma_3gpp, kUmaD1, kUmaD2};
}

LosProbParams LosProbParams::make(LosModelKind kind, double d1, double d2) {
  require_finite(d1, "d1");
  require_finite(d2, "d2");
  if (d2 <= 0.0) {
    throw DomainError("d2 must be > 0");
  }
  switch (kind) {
    case LosModelKind::uma_3gpp:
      if (d1 != kUmaD1 || d2 != kUmaD2) {
        throw DomainError("uma3gpp LOS model is pinned to d1 = 18 m, d2 = 63 m");
      }
      break;
    case LosModelKind::d1d2:
    case LosModelKind::nyu_squared:
      if (d1 < 0.0) {
        throw DomainError("d1 must be >= 0 for the d1/d2 model family");
      }
      break;
    case LosModelKind::inv_exp:
      break;
  }
  return {kind, d1, d2};
}

double fspl_1m(Frequency f) {
  return 20.0 * std::log10(4.0 * std::numbers::pi * f.hz() / kSpeedOfLight);
}

double ci_path_loss(Frequency f, Distance3D d, CiParams p) {
  return fspl_1m(f) + 10.0 * p.ple * std::log10(d.meters());
}

double abg_path_loss(Frequency f, Distance3D d, AbgParams p) {
  return 10.0 * p.alpha * std::log10(d.meters()) + p.beta + 10.0 * p.gamma * std::log10(f.ghz());
}

double fi_path_loss(Distance3D d, FiParams p) {
  return p.alpha + 10.0 * p.beta * std::log10(d.meters());
}

double ci_dual_path_loss(Frequency f, Distance3D d, CiDualParams p) {
  require_breakpoint(p.d_th);
  return dual_slope(fspl_1m(f), p.n1, p.n2, p.d_th, d.meters());
}

double fi_dual_path_loss(Distance3D d, FiDualParams p) {
  require_breakpoint(p.d_th);
  return dual_slope(p.alpha1, p.beta1, p.beta2, p.d_th, d.meters());
}

double mean_path_loss(Frequency f, Distance3D d, const PathLossParams& params) {
  struct Visitor {
    Frequency f;
    Distance3D d;
    double operator()(const CiParams& p) const { return ci_path_loss(f, d, p); }
    double operator()(const AbgParams& p) const { return abg_path_loss(f, d, p); }
    double operator()(const FiParams& p) const { return fi_path_loss(d, p); }
    double operator()(const CiDualParams& p) const { return ci_dual_path_loss(f, d, p); }
    double operator()(const FiDualParams& p) const { return fi_dual_path_loss(d, p); }
  };
  return std::visit(Visitor{f, d}, params);
}

double los_probability(double distance_m, const LosProbParams& p) {
  if (!std::isfinite(distance_m) || distance_m <= 0.0) {
    throw DomainError("LOS probability needs a finite distance > 0");
  }
  double prob = 0.0;
  switch (p.kind()) {
    case LosModelKind::uma_3gpp:
    case LosModelKind::d1d2:
      prob = d1d2_term(distance_m, p.d1(), p.d2());
      break;
    case LosModelKind::nyu_squared: {
      const double t = d1d2_term(distance_m, p.d1(), p.d2());
      prob = t * t;
      break;
    }
    case LosModelKind::inv_exp:
      prob = 1.0 / (1.0 + std::exp(p.d1() * (distance_m - p.d2())));
      break;
  }
  constexpr double kRoundOff = 1e-12;
  if (prob < -kRoundOff || prob > 1.0 + kRoundOff || std::isnan(prob)) {
    throw std::logic_error("LOS probability out of [0, 1]: " + std::to_string(prob));
  }
  return std::clamp(prob, 0.0, 1.0);
}

double sf_line(Distance3D d, SfLineParams p) {
  return p.a * d.meters() + p.b;
}

double blended_mean_path_loss(Frequency f, Distance3D d, const LosProbParams& los_params,
                              const PathLossParams& pl_los, const PathLossParams& pl_nlos) {
  const double p = los_probability(d.meters(), los_params);
  const double los = mean_path_loss(f, d, pl_los);
  const double nlos = mean_path_loss(f, d, pl_nlos);
  if (p == 1.0) return los;
  if (p == 0.0) return nlos;
  return p * los + (1.0 - p) * nlos;
}

}  // namespace plfit
