#pragma once

#include <optional>
#include <vector>

#include "polyrecon/lp.hpp"
#include "polyrecon/types.hpp"

namespace polyrecon {

/// min ||A h - y||^2  subject to  B h >= 0.
struct ConstrainedLS {
  SparseMat A;
  Vec y;
  Mat B;
};

struct QPOptions {
  /// Stationarity/complementarity tolerance, relative to 1 + ||A^T y||.
  double kkt_tol = 1e-8;
  /// Primal feasibility tolerance, relative to 1 + ||h||.
  double feas_tol = 1e-9;
  /// 0 selects the default cap of 50 (n + p) iterations.
  int max_iterations = 0;
  /// Feasible starting point (B h >= 0). Defaults to the origin.
  std::optional<Vec> warm_start;
};

struct QPSolution {
  Vec h_star;
  double objective = 0.0;
  /// Largest of the four KKT violations below.
  double kkt_residual = 0.0;
  double stationarity = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  /// Rows of B in the final working set, ascending.
  std::vector<int> active_rows;
  /// Multipliers for every row of B; zero outside active_rows.
  Vec multipliers;
  int iterations = 0;
  bool converged = false;
};

/// Raised when the active-set loop hits its iteration cap; carries the best iterate.
class IterationLimit : public Error {
 public:
  explicit IterationLimit(QPSolution best)
      : Error("solve_cls: iteration limit reached; result unverified"), best_(std::move(best)) {}
  const QPSolution& best() const { return best_; }

 private:
  QPSolution best_;
};

/// Primal active-set method on the normal equations. Steps inside the
/// working-set null space use the minimum-norm solution, so singular
/// A^T A yields a canonical minimizer.
QPSolution solve_cls(const ConstrainedLS& problem, const QPOptions& opts = {});

struct KKTReport {
  double stationarity = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  double kkt_tol = 0.0;
  double feas_tol = 0.0;
  bool passed = false;
};

/// Re-evaluates the KKT conditions of (h, mu) from scratch.
KKTReport check_kkt(const ConstrainedLS& problem, const Vec& h, const Vec& mu, const QPOptions& opts = {});

}  // namespace polyrecon
