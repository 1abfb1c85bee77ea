#pragma once

// Test-only reference solvers, written independently of src/estimation.cpp.
//
// Dual-slope fits are posed as two free line segments (intercept, slope each)
// joined by equality constraints and solved through the KKT system, instead of
// the reparameterised normal equations used by the library.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "plfit/dataset.hpp"
#include "plfit/models.hpp"

namespace oracle {

struct DualResult {
  double d_th = 0.0;
  double rms = std::numeric_limits<double>::infinity();
  double intercept = 0.0;
  double slope1 = 0.0;
  double slope2 = 0.0;
};

// Constrained least squares for one breakpoint. anchored = CI (intercept 0
// after subtracting FSPL), otherwise FI (free intercept).
inline DualResult constrained_dual_at(const plfit::Dataset& ds, double d_th, bool anchored) {
  const int n = static_cast<int>(ds.size());
  const double L = 10.0 * std::log10(d_th);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, 4);  // [c1, s1, c2, s2]
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) {
    const auto& r = ds.records[static_cast<std::size_t>(i)];
    const double w = 10.0 * std::log10(r.distance_3d.meters());
    t(i) = r.path_loss_db - (anchored ? plfit::fspl_1m(r.frequency) : 0.0);
    if (r.distance_3d.meters() <= d_th) {
      A(i, 0) = 1.0;
      A(i, 1) = w;
    } else {
      A(i, 2) = 1.0;
      A(i, 3) = w;
    }
  }
  const int m = anchored ? 2 : 1;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, 4);
  C.row(0) << 1.0, L, -1.0, -L;  // continuity at the breakpoint
  if (anchored) C.row(1) << 1.0, 0.0, 0.0, 0.0;

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(4 + m, 4 + m);
  K.topLeftCorner(4, 4) = 2.0 * A.transpose() * A;
  K.topRightCorner(4, m) = C.transpose();
  K.bottomLeftCorner(m, 4) = C;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 + m);
  rhs.head(4) = 2.0 * A.transpose() * t;
  const Eigen::VectorXd sol = K.completeOrthogonalDecomposition().solve(rhs);
  const Eigen::VectorXd theta = sol.head(4);

  DualResult out;
  out.d_th = d_th;
  out.rms = std::sqrt((A * theta - t).squaredNorm() / n);
  out.intercept = theta(0);
  out.slope1 = theta(1);
  out.slope2 = theta(3);
  return out;
}

// Exhaustive scan of every integer-meter breakpoint.
inline DualResult exhaustive_dual(const plfit::Dataset& ds, bool anchored) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : ds.records) {
    lo = std::min(lo, r.distance_3d.meters());
    hi = std::max(hi, r.distance_3d.meters());
  }
  DualResult best;
  for (double d = std::ceil(lo); d <= std::floor(hi); d += 1.0) {
    const DualResult c = constrained_dual_at(ds, d, anchored);
    if (c.rms < best.rms) best = c;
  }
  return best;
}

}  // namespace oracle
