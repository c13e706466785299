#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polyrecon/design.hpp"
#include "polyrecon/geometry.hpp"
#include "polyrecon/random.hpp"

namespace polyrecon {

/// x in C_t(j): the barycentric coefficients of x, scaled by the ray norms,
/// are within t of e_j in the sup norm.
bool in_ct(const Fan& fan, const Vec& x, int j, double t);

std::vector<Vec> sample_uniform_sphere(int d, int m, std::uint64_t seed);

enum class FillMode { Uniform, Facets };

struct SamplingPlan {
  double t = 0.0;
  double delta = 0.0;
  int m = 0;
  std::uint64_t seed = 0;
  std::vector<int> quotas;
  /// How samples beyond the quotas are drawn: uniform on the sphere, or
  /// normalized rays continuing the round robin.
  FillMode fill = FillMode::Uniform;

  /// m (2.5 n t + delta), the per-ray count demanded by the hypothesis.
  double required_count() const;
};

/// Quotas ceil(m (2.5 n t + delta)) for every ray. Throws QuotaInfeasible
/// when t >= 1/2, delta <= 0, or the quotas sum to more than m.
SamplingPlan make_plan(const Fan& fan, double t, double delta, int m, std::uint64_t seed,
                       FillMode fill = FillMode::Uniform);

/// t = 0 plan with floor(m / n) samples per ray and delta = floor(m / n) / m;
/// the remaining samples continue the ray round robin.
SamplingPlan balanced_facet_plan(const Fan& fan, int m, std::uint64_t seed);

/// Quota samples round-robin by ray, each verified by in_ct, then the fill.
std::vector<Vec> sample_concentrated(const Fan& fan, const SamplingPlan& plan);

/// counts[j] = number of directions in C_t(j).
std::vector<int> audit_counts(const Fan& fan, const std::vector<Vec>& directions, double t);
bool hypothesis_met(const Fan& fan, const std::vector<Vec>& directions, const SamplingPlan& plan);

struct NoiseModel {
  double sigma = 0.0;
  /// Per-sample standard deviations; overrides sigma when nonempty.
  std::vector<double> sigmas;
  std::uint64_t seed = 0;

  double sd(int i) const;
  /// Uniform variance bound max sigma_i^2.
  double gamma() const;
  Vec draw(int m, Rng& rng) const;
};

struct BoundParameters {
  double kappa = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  double value = 0.0;
};

/// (1/sqrt m) (n c^2 / kappa) sqrt(2 d gamma lambda log(2n/eta)). Throws
/// NonpositiveLambda when lambda <= 0.
BoundParameters theoretical_bound(const FanConstants& constants, const SamplingPlan& plan, double gamma, double eta,
                                  int m);

struct EigenReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double upper_bound = 0.0;  // m n c^2
  double lower_bound = 0.0;  // m delta / max |v|^2
  bool upper_holds = false;
  bool lower_holds = false;
  bool hypothesis_met = false;

  /// Throws HypothesisUnmet when the dataset fails the concentration counts.
  void require_hypothesis() const;
};

EigenReport eigen_checks(const Fan& fan, const std::vector<Vec>& directions, const DesignMatrix& design,
                         const SamplingPlan& plan);

struct ConvergenceRecord {
  int m = 0;
  int replicate = 0;
  double hausdorff_error = 0.0;
  double objective = 0.0;
  double elapsed = 0.0;
  /// Error bound at the run's eta; NaN when unavailable.
  double bound = 0.0;
  bool failed = false;
  std::string error;
};

using PlanFactory = std::function<SamplingPlan(int m, std::uint64_t seed)>;

struct ConvergenceOptions {
  std::vector<int> m_schedule;
  int replicates = 20;
  NoiseModel noise;
  double eta = 0.05;
  std::uint64_t seed = 1;
};

/// Records ordered by m, then replicate. Stream seeds derive from (seed, m, replicate).
std::vector<ConvergenceRecord> run_convergence(const Fan& fan, const SupportVector& h0, const PlanFactory& plans,
                                               const ConvergenceOptions& opts);

double median(std::vector<double> values);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct RateSummary {
  std::vector<int> m;
  std::vector<double> median_error;
  std::vector<double> median_bound;
  double slope = 0.0;
  int bound_violations = 0;
  int failures = 0;
};

RateSummary summarize(const std::vector<ConvergenceRecord>& records);

}  // namespace polyrecon
