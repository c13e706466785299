#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyrecon/design.hpp"
#include "polyrecon/geometry.hpp"
#include "polyrecon/qp.hpp"

namespace polyrecon {

/// The minimizer set { h in P(Delta) : A h = y_hat }.
struct SolutionSetDescription {
  int dimension = 0;
  bool bounded = true;
  /// Present when dimension == 1 and the set is bounded.
  std::optional<std::pair<Vec, Vec>> segment_endpoints;
};

struct ReconstructionResult {
  Vec h_hat;
  Vec y_hat;
  double objective = 0.0;
  SolutionSetDescription solution_set;
  UniquenessReport uniqueness;
  QPSolution qp;
  DesignMatrix design;
};

ReconstructionResult reconstruct(const DeformationCone& cone, const Dataset& data, const QPOptions& opts = {});
ReconstructionResult reconstruct(const Fan& fan, const Dataset& data, const QPOptions& opts = {});

/// `kernel` is an orthonormal basis of ker A (see numeric_rank).
SolutionSetDescription solution_set(const DeformationCone& cone, const Mat& kernel, const Vec& h_hat);
SolutionSetDescription solution_set(const DeformationCone& cone, const DesignMatrix& design, const Vec& h_hat);

/// True iff ker A meets P(Delta) outside the origin.
bool detect_unbounded(const DeformationCone& cone, const DesignMatrix& design);
bool detect_unbounded(const DeformationCone& cone, const Mat& kernel);

struct MultiFanEntry {
  std::optional<ReconstructionResult> result;
  std::string error;
  bool iteration_limit = false;
};

struct MultiFanResult {
  std::vector<MultiFanEntry> per_fan;
  double min_objective = 0.0;
  double tie_tol = 0.0;
  /// Fans within tie_tol of min_objective, ascending.
  std::vector<int> minimizers;

  bool tie() const { return minimizers.size() > 1; }
};

/// Throws InvalidArgument when the fans do not share one ray list.
MultiFanResult reconstruct_multi(const std::vector<Fan>& fans, const Dataset& data, const QPOptions& opts = {});

struct GKEstimate {
  SupportVector h;
  /// One point per measurement, x_i with <x_i, u_i> fitted to y_i.
  std::vector<Vec> points;
  double objective = 0.0;
};

/// Fits points x_1..x_m with <x_j, u_i> <= <x_i, u_i>, then returns the
/// smallest polytope with facet normals `rays` containing them.
GKEstimate gk_estimate(const std::vector<Vec>& rays, const Dataset& data, const QPOptions& opts = {});

}  // namespace polyrecon
