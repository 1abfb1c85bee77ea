#include "plfit/estimation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "plfit/errors.hpp"
#include "text.hpp"

namespace plfit {

namespace {

// Per-record quantities shared by the path-loss fitters.
struct Design {
  std::vector<double> distance;   // m
  std::vector<double> log_d;      // 10 log10(d)
  std::vector<double> log_f;      // 10 log10(f)
  std::vector<double> path_loss;  // dB
  std::vector<double> fspl;       // fspl_1m(f)
};

Design make_design(const Dataset& ds) {
  Design x;
  const std::size_t n = ds.size();
  x.distance.reserve(n);
  x.log_d.reserve(n);
  x.log_f.reserve(n);
  x.path_loss.reserve(n);
  x.fspl.reserve(n);
  for (const auto& r : ds.records) {
    x.distance.push_back(r.distance_3d.meters());
    x.log_d.push_back(10.0 * std::log10(r.distance_3d.meters()));
    x.log_f.push_back(10.0 * std::log10(r.frequency.ghz()));
    x.path_loss.push_back(r.path_loss_db);
    x.fspl.push_back(fspl_1m(r.frequency));
  }
  return x;
}

void require_samples(const Dataset& ds, std::size_t minimum, ModelFamily family) {
  if (ds.size() < minimum) {
    throw DomainError(std::string(to_string(family)) + " fit needs at least " +
                      std::to_string(minimum) + " records, got " + std::to_string(ds.size()));
  }
}

std::size_t count_distinct(const std::vector<double>& values) {
  return std::set<double>(values.begin(), values.end()).size();
}

void require_distinct_distances(const Design& x, ModelFamily family) {
  if (count_distinct(x.distance) < 2) {
    throw SingularDesignError("distance_m", std::string(to_string(family)) +
                                                " fit is singular: all distances are equal");
  }
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s / static_cast<double>(v.size());
}

// Fills residuals and sigma from the final parameter set.
FitReport finish_report(const Dataset& ds, PathLossParams params, std::vector<std::string> warnings) {
  FitReport report;
  report.params = params;
  report.n_samples = ds.size();
  report.warnings = std::move(warnings);
  report.residuals.reserve(ds.size());
  double ss = 0.0;
  for (const auto& r : ds.records) {
    const double res = r.path_loss_db - mean_path_loss(r.frequency, r.distance_3d, params);
    report.residuals.push_back({r.distance_3d.meters(), res});
    ss += res * res;
  }
  report.sigma = std::sqrt(ss / static_cast<double>(ds.size()));
  return report;
}

void warn_slope_range(std::vector<std::string>& warnings, const char* name, double value) {
  if (value < 1.0 || value > 10.0) {
    warnings.push_back(std::string(name) + " = " + detail::format_number(value) +
                       " is outside the typical range [1, 10]");
  }
}

// Closed-form line through the origin, t = slope * x.
double slope_through_origin(const std::vector<double>& x, const std::vector<double>& t) {
  double sxt = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxt += x[i] * t[i];
    sxx += x[i] * x[i];
  }
  return sxt / sxx;
}

struct Line {
  double intercept;
  double slope;
};

// Ordinary least squares y = intercept + slope * x with centered sums.
Line ols_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

Eigen::Vector2d solve_normal_2x2(double s11, double s12, double s22, double r1, double r2) {
  Eigen::Matrix2d gram;
  gram << s11, s12, s12, s22;
  return gram.completeOrthogonalDecomposition().solve(Eigen::Vector2d(r1, r2));
}

// One candidate breakpoint of a dual-slope fit.
struct DualCandidate {
  double d_th;
  double anchor;  // FI intercept; unused for CI
  double slope1;
  double slope2;
  double rss;
  std::size_t left;
  std::size_t right;
};

double dual_rss(const Design& x, const std::vector<double>& target, double log_th, double anchor,
                double slope1, double slope2) {
  double rss = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double a = std::min(x.log_d[i], log_th);
    const double b = std::max(x.log_d[i] - log_th, 0.0);
    const double r = target[i] - anchor - slope1 * a - slope2 * b;
    rss += r * r;
  }
  return rss;
}

// target = PL - FSPL; unknowns (n1, n2) with columns a = min(w, L), b = max(w - L, 0).
DualCandidate ci_dual_candidate(const Design& x, const std::vector<double>& target, double d_th,
                                double single_ple) {
  const double log_th = 10.0 * std::log10(d_th);
  double saa = 0.0, sab = 0.0, sbb = 0.0, sat = 0.0, sbt = 0.0;
  std::size_t left = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (x.distance[i] <= d_th) {
      ++left;
      saa += x.log_d[i] * x.log_d[i];
      sat += x.log_d[i] * target[i];
    } else {
      const double b = x.log_d[i] - log_th;
      saa += log_th * log_th;
      sab += log_th * b;
      sbb += b * b;
      sat += log_th * target[i];
      sbt += b * target[i];
    }
  }
  const std::size_t right = target.size() - left;
  DualCandidate c{d_th, 0.0, single_ple, single_ple, 0.0, left, right};
  if (right > 0) {
    const Eigen::Vector2d sol = solve_normal_2x2(saa, sab, sbb, sat, sbt);
    c.slope1 = sol[0];
    c.slope2 = sol[1];
  }
  c.rss = dual_rss(x, target, log_th, 0.0, c.slope1, c.slope2);
  return c;
}

// Unknowns (alpha1, beta1, beta2); intercept removed by centering.
DualCandidate fi_dual_candidate(const Design& x, double d_th, Line single) {
  const double log_th = 10.0 * std::log10(d_th);
  const auto& y = x.path_loss;
  const double n = static_cast<double>(y.size());
  double sa = 0.0, sb = 0.0, sy = 0.0, saa = 0.0, sab = 0.0, sbb = 0.0, say = 0.0, sby = 0.0;
  std::size_t left = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = std::min(x.log_d[i], log_th);
    const double b = std::max(x.log_d[i] - log_th, 0.0);
    if (x.distance[i] <= d_th) ++left;
    sa += a;
    sb += b;
    sy += y[i];
    saa += a * a;
    sab += a * b;
    sbb += b * b;
    say += a * y[i];
    sby += b * y[i];
  }
  const std::size_t right = y.size() - left;
  DualCandidate c{d_th, single.intercept, single.slope, single.slope, 0.0, left, right};
  if (left > 0 && right > 0) {
    const double ma = sa / n, mb = sb / n, my = sy / n;
    const Eigen::Vector2d sol = solve_normal_2x2(saa - n * ma * ma, sab - n * ma * mb,
                                                 sbb - n * mb * mb, say - n * ma * my,
                                                 sby - n * mb * my);
    c.slope1 = sol[0];
    c.slope2 = sol[1];
    c.anchor = my - c.slope1 * ma - c.slope2 * mb;
  }
  c.rss = dual_rss(x, y, log_th, c.anchor, c.slope1, c.slope2);
  return c;
}

void require_dual_preconditions(const Dataset& ds, ModelFamily family) {
  require_samples(ds, kMinSamplesDual, family);
  const auto [lo, hi] = std::minmax_element(
      ds.records.begin(), ds.records.end(),
      [](const auto& a, const auto& b) { return a.distance_3d.meters() < b.distance_3d.meters(); });
  if (hi->distance_3d.meters() - lo->distance_3d.meters() < kMinDualSpanM) {
    throw DomainError(std::string(to_string(family)) + " fit needs records spanning at least 3 m");
  }
}

template <typename Evaluate>
DualCandidate scan_breakpoints(const std::vector<double>& grid, Evaluate evaluate) {
  if (grid.empty()) {
    throw DomainError("breakpoint grid is empty: distance range shorter than 1 m");
  }
  DualCandidate best = evaluate(grid.front());
  for (std::size_t k = 1; k < grid.size(); ++k) {
    DualCandidate c = evaluate(grid[k]);
    if (c.rss < best.rss) best = c;
  }
  return best;
}

std::vector<std::string> dual_warnings(const DualCandidate& c, const char* slope1_name,
                                       const char* slope2_name) {
  std::vector<std::string> warnings;
  if (c.left < kMinSegmentSamples) {
    warnings.push_back("only " + std::to_string(c.left) + " samples at or below the breakpoint");
  }
  if (c.right < kMinSegmentSamples) {
    warnings.push_back("only " + std::to_string(c.right) + " samples beyond the breakpoint");
  }
  if (c.slope1 < 0.0) {
    warnings.push_back(std::string(slope1_name) + " is negative (" +
                       detail::format_number(c.slope1) + "); slope not physically usable");
  }
  if (c.slope2 < 0.0) {
    warnings.push_back(std::string(slope2_name) + " is negative (" +
                       detail::format_number(c.slope2) + "); slope not physically usable");
  }
  return warnings;
}

}  // namespace

FitReport fit_ci(const Dataset& ds) {
  require_samples(ds, kMinSamplesCi, ModelFamily::ci);
  const Design x = make_design(ds);
  require_distinct_distances(x, ModelFamily::ci);
  std::vector<double> target(x.path_loss.size());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = x.path_loss[i] - x.fspl[i];
  const double ple = slope_through_origin(x.log_d, target);
  std::vector<std::string> warnings;
  warn_slope_range(warnings, "PLE", ple);
  return finish_report(ds, CiParams{ple}, std::move(warnings));
}

FitReport fit_abg(const Dataset& ds) {
  require_samples(ds, kMinSamplesAbg, ModelFamily::abg);
  const Design x = make_design(ds);
  if (count_distinct(x.log_f) < 2) {
    throw SingularDesignError("freq_ghz",
                              "abg fit is singular: needs at least 2 distinct frequencies (freq_ghz)");
  }
  if (count_distinct(x.distance) < 2) {
    throw SingularDesignError("distance_m",
                              "abg fit is singular: needs at least 2 distinct distances (distance_m)");
  }
  const auto n = static_cast<Eigen::Index>(ds.size());
  const double md = mean(x.log_d), mf = mean(x.log_f), my = mean(x.path_loss);
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    design(i, 0) = x.log_d[k] - md;
    design(i, 1) = x.log_f[k] - mf;
    rhs(i) = x.path_loss[k] - my;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 2) {
    throw SingularDesignError("distance_m/freq_ghz",
                              "abg fit is singular: log-distance and log-frequency are collinear");
  }
  const Eigen::Vector2d coef = qr.solve(rhs);
  const AbgParams params{coef[0], my - coef[0] * md - coef[1] * mf, coef[1]};
  return finish_report(ds, params, {});
}

FitReport fit_fi(const Dataset& ds) {
  require_samples(ds, kMinSamplesFi, ModelFamily::fi);
  const Design x = make_design(ds);
  require_distinct_distances(x, ModelFamily::fi);
  const Line line = ols_line(x.log_d, x.path_loss);
  return finish_report(ds, FiParams{line.intercept, line.slope}, {});
}

std::vector<double> breakpoint_grid(const Dataset& ds) {
  if (ds.empty()) return {};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : ds.records) {
    lo = std::min(lo, r.distance_3d.meters());
    hi = std::max(hi, r.distance_3d.meters());
  }
  std::vector<double> grid;
  for (double d = std::ceil(lo); d <= std::floor(hi); d += 1.0) grid.push_back(d);
  return grid;
}

FitReport fit_ci_dual(const Dataset& ds) {
  require_dual_preconditions(ds, ModelFamily::ci_dual);
  const Design x = make_design(ds);
  std::vector<double> target(x.path_loss.size());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = x.path_loss[i] - x.fspl[i];
  const double single = slope_through_origin(x.log_d, target);
  const DualCandidate best = scan_breakpoints(
      breakpoint_grid(ds), [&](double d_th) { return ci_dual_candidate(x, target, d_th, single); });
  return finish_report(ds, CiDualParams{best.slope1, best.slope2, best.d_th},
                       dual_warnings(best, "n1", "n2"));
}

FitReport fit_fi_dual(const Dataset& ds) {
  require_dual_preconditions(ds, ModelFamily::fi_dual);
  const Design x = make_design(ds);
  const Line single = ols_line(x.log_d, x.path_loss);
  const DualCandidate best = scan_breakpoints(
      breakpoint_grid(ds), [&](double d_th) { return fi_dual_candidate(x, d_th, single); });
  return finish_report(ds, FiDualParams{best.anchor, best.slope1, best.slope2, best.d_th},
                       dual_warnings(best, "beta1", "beta2"));
}

FitReport fit(const Dataset& ds, ModelFamily family) {
  switch (family) {
    case ModelFamily::ci: return fit_ci(ds);
    case ModelFamily::abg: return fit_abg(ds);
    case ModelFamily::fi: return fit_fi(ds);
    case ModelFamily::ci_dual: return fit_ci_dual(ds);
    case ModelFamily::fi_dual: return fit_fi_dual(ds);
  }
  throw std::invalid_argument("unknown model family");
}

// ---------------------------------------------------------------------------
// LOS probability

EmpiricalLosCurve empirical_los_curve(std::span<const LosSample> samples) {
  if (samples.empty()) {
    throw DomainError("empirical LOS curve needs at least one sample");
  }
  for (const auto& s : samples) {
    if (!std::isfinite(s.distance_3d) || s.distance_3d <= 0.0) {
      throw DomainError("LOS sample distances must be finite and > 0");
    }
  }
  std::vector<LosSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](const LosSample& a, const LosSample& b) {
    return a.distance_3d < b.distance_3d || (a.distance_3d == b.distance_3d && a.los < b.los);
  });
  // los_prefix[i] = number of LOS samples among sorted[0, i)
  std::vector<std::size_t> los_prefix(sorted.size() + 1, 0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    los_prefix[i + 1] = los_prefix[i] + (sorted[i].los ? 1 : 0);
  }

  const double first = std::ceil(sorted.front().distance_3d);
  const double last = std::floor(sorted.back().distance_3d);
  if (first > last) {
    throw DomainError("LOS samples do not span a whole meter; the 1 m curve grid is empty");
  }
  EmpiricalLosCurve curve;
  std::size_t lo = 0, hi = 0;  // window [lo, hi)
  for (double g = first; g <= last; g += 1.0) {
    while (lo < sorted.size() && sorted[lo].distance_3d < g - kLosWindowHalfWidthM) ++lo;
    hi = std::max(hi, lo);
    while (hi < sorted.size() && sorted[hi].distance_3d <= g + kLosWindowHalfWidthM) ++hi;
    const std::size_t support = hi - lo;
    if (support == 0) continue;
    const std::size_t los = los_prefix[hi] - los_prefix[lo];
    curve.points.push_back(
        {g, static_cast<double>(los) / static_cast<double>(support), support});
  }
  return curve;
}

double los_model_mse(const EmpiricalLosCurve& curve, const LosProbParams& params) {
  if (curve.points.empty()) {
    throw DomainError("LOS curve is empty");
  }
  double ss = 0.0;
  for (const auto& p : curve.points) {
    const double e = los_probability(p.distance_m, params) - p.probability;
    ss += e * e;
  }
  return ss / static_cast<double>(curve.points.size());
}

namespace {

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

// One search coordinate. In log space the golden search runs on log(value).
struct Axis {
  double lo;
  double hi;
  bool log_space;
  double step;  // bracket half-width in search space

  double to_search(double v) const { return log_space ? std::log(v) : v; }
  double from_search(double s) const { return log_space ? std::exp(s) : s; }
};

// Golden-section minimization of f over [a, b] (search space).
double golden_section(const std::function<double(double)>& f, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace

LosFitReport fit_los_model(const EmpiricalLosCurve& curve, LosModelKind kind,
                           const LosSearchGrid& grid) {
  if (curve.points.empty()) {
    throw DomainError("LOS curve is empty");
  }
  if (kind == LosModelKind::uma_3gpp) {
    const auto params = LosProbParams::uma_3gpp();
    return {params, los_model_mse(curve, params)};
  }
  if (grid.points < 2) {
    throw DomainError("LOS search grid needs at least 2 points per axis");
  }

  std::vector<double> d1_values;
  Axis d1_axis{};
  if (kind == LosModelKind::inv_exp) {
    d1_values = log_grid(grid.rate_min, grid.rate_max, grid.points);
    d1_axis = {grid.rate_min, grid.rate_max, true, 0.0};
  } else {
    d1_values = log_grid(grid.d1_min_positive, grid.d1_max, grid.points - 1);
    d1_values.insert(d1_values.begin(), 0.0);
    d1_axis = {0.0, grid.d1_max, false, 0.0};
  }
  const std::vector<double> d2_values = log_grid(grid.d2_min, grid.d2_max, grid.points);
  Axis d2_axis{grid.d2_min, grid.d2_max, true,
               std::log(grid.d2_max / grid.d2_min) / static_cast<double>(grid.points - 1)};
  if (d1_axis.log_space) {
    d1_axis.step = std::log(grid.rate_max / grid.rate_min) / static_cast<double>(grid.points - 1);
  }

  auto mse_at = [&](double d1, double d2) {
    return los_model_mse(curve, LosProbParams::make(kind, d1, d2));
  };

  double best_d1 = d1_values.front(), best_d2 = d2_values.front();
  double best = std::numeric_limits<double>::infinity();
  for (double d1 : d1_values) {
    for (double d2 : d2_values) {
      const double m = mse_at(d1, d2);
      if (m < best) {
        best = m;
        best_d1 = d1;
        best_d2 = d2;
      }
    }
  }

  // Linear d1 axis on a log grid: bracket to the neighbouring grid values.
  auto linear_bracket = [&](double v) {
    const auto it = std::lower_bound(d1_values.begin(), d1_values.end(), v);
    const double below = it == d1_values.begin() ? d1_values.front() : *std::prev(it);
    const auto up = std::upper_bound(d1_values.begin(), d1_values.end(), v);
    const double above = up == d1_values.end() ? d1_values.back() : *up;
    return std::pair{std::min(below, v), std::max(above, v)};
  };

  auto refine = [&](const Axis& axis, double& value, const std::function<double(double)>& mse_of) {
    double a, b;
    if (axis.log_space) {
      const double s = axis.to_search(value);
      a = std::max(axis.to_search(axis.lo), s - axis.step);
      b = std::min(axis.to_search(axis.hi), s + axis.step);
    } else {
      std::tie(a, b) = linear_bracket(value);
    }
    if (!(b > a)) return;
    const auto f = [&](double s) { return mse_of(axis.from_search(s)); };
    const double candidate = axis.from_search(golden_section(f, a, b));
    const double m = mse_of(candidate);
    if (m < best) {
      best = m;
      value = candidate;
    }
  };

  // Pattern move along the net displacement of a sweep, in search space.
  // Coordinate steps alone zig-zag slowly along the diagonal (d1, d2) valleys.
  auto pattern_move = [&](double from_d1, double from_d2) {
    const double s1 = d1_axis.to_search(best_d1), s2 = d2_axis.to_search(best_d2);
    const double v1 = s1 - (d1_axis.log_space ? std::log(from_d1) : from_d1);
    const double v2 = s2 - d2_axis.to_search(from_d2);
    if (v1 == 0.0 && v2 == 0.0) return;
    double t_max = 16.0;
    const auto limit = [&t_max](double s, double v, double lo, double hi) {
      if (v > 0) t_max = std::min(t_max, (hi - s) / v);
      if (v < 0) t_max = std::min(t_max, (lo - s) / v);
    };
    limit(s1, v1, d1_axis.to_search(d1_axis.lo), d1_axis.to_search(d1_axis.hi));
    limit(s2, v2, d2_axis.to_search(d2_axis.lo), d2_axis.to_search(d2_axis.hi));
    if (!(t_max > 0.0)) return;
    const auto at = [&](double t) {
      return std::pair{d1_axis.from_search(s1 + t * v1), d2_axis.from_search(s2 + t * v2)};
    };
    const auto f = [&](double t) {
      const auto [a, b] = at(t);
      return mse_at(std::max(a, 0.0), b);
    };
    const double t = golden_section(f, 0.0, t_max);
    const double m = f(t);
    if (m < best) {
      best = m;
      std::tie(best_d1, best_d2) = at(t);
      best_d1 = std::max(best_d1, 0.0);
    }
  };

  for (int sweep = 0; sweep < 500; ++sweep) {
    const double before = best;
    const double from_d1 = best_d1, from_d2 = best_d2;
    refine(d1_axis, best_d1, [&](double d1) { return mse_at(d1, best_d2); });
    refine(d2_axis, best_d2, [&](double d2) { return mse_at(best_d1, d2); });
    pattern_move(from_d1, from_d2);
    // Relative stop: exact curves drive the MSE far below any absolute 1e-8.
    if (before - best < grid.tolerance * before) break;
  }
  return {LosProbParams::make(kind, best_d1, best_d2), best};
}

// ---------------------------------------------------------------------------
// Shadow fading

std::string_view to_string(SfStatistic stat) noexcept {
  return stat == SfStatistic::rms ? "rms" : "mean";
}

SfStatistic parse_sf_statistic(std::string_view name) {
  if (name == "mean") return SfStatistic::mean_abs;
  if (name == "rms") return SfStatistic::rms;
  throw std::invalid_argument("unknown shadow fading statistic '" + std::string(name) +
                              "' (expected mean or rms)");
}

ShadowFadingProfile shadow_fading_profile(const FitReport& report, double bin_width_m,
                                          SfStatistic stat) {
  if (!std::isfinite(bin_width_m) || bin_width_m <= 0.0) {
    throw DomainError("bin width must be finite and > 0 m");
  }
  struct Accum {
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    std::size_t count = 0;
  };
  std::map<long long, Accum> bins;
  for (const auto& r : report.residuals) {
    auto& acc = bins[static_cast<long long>(std::floor(r.distance_m / bin_width_m))];
    acc.abs_sum += std::abs(r.residual_db);
    acc.sq_sum += r.residual_db * r.residual_db;
    ++acc.count;
  }
  if (bins.size() < 2) {
    throw DomainError("shadow fading profile needs at least 2 non-empty distance bins");
  }

  ShadowFadingProfile profile;
  std::vector<double> centers, magnitudes;
  for (const auto& [k, acc] : bins) {
    const double n = static_cast<double>(acc.count);
    const double magnitude =
        stat == SfStatistic::rms ? std::sqrt(acc.sq_sum / n) : acc.abs_sum / n;
    const double center = (static_cast<double>(k) + 0.5) * bin_width_m;
    profile.bins.push_back({center, magnitude, acc.count});
    centers.push_back(center);
    magnitudes.push_back(magnitude);
  }
  const Line line = ols_line(centers, magnitudes);
  profile.line = {line.slope, line.intercept};
  if (profile.line.b < 0.0) {
    profile.warnings.push_back("fitted intercept B = " + detail::format_number(profile.line.b) +
                               " dB is negative");
  }
  return profile;
}

}  // namespace plfit
