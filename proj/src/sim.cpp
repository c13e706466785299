#include "polyrecon/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "polyrecon/estimator.hpp"

namespace polyrecon {

namespace {

int ceil_count(double x) { return static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, x))); }

Vec normalized_ray(const Fan& fan, int j) { return fan.ray(j) / fan.ray(j).norm(); }

Vec sample_cap(const Vec& center, double radius, Rng& rng) {
  const int d = static_cast<int>(center.size());
  Vec w;
  do {
    w = rng.unit_vector(d);
    w -= center.dot(w) * center;
  } while (w.norm() < 1e-8);
  w.normalize();
  const double phi = radius * rng.uniform();
  return (std::cos(phi) * center + std::sin(phi) * w).normalized();
}

Vec concentrated_sample(const Fan& fan, int j, double t, Rng& rng) {
  const Vec center = normalized_ray(fan, j);
  if (t == 0.0) return center;
  double radius = t;
  for (;;) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Vec u = sample_cap(center, radius, rng);
      if (in_ct(fan, u, j, t)) return u;
    }
    radius *= 0.5;
    if (radius < 1e-12) return center;
  }
}

}  // namespace

bool in_ct(const Fan& fan, const Vec& x, int j, double t) {
  const BarycentricVector b = carrier(fan, x / x.norm());
  double dist = 0.0;
  bool seen_j = false;
  for (std::size_t k = 0; k < b.rays.size(); ++k) {
    const int i = b.rays[k];
    const double scaled = b.weights(k) * fan.ray(i).norm();
    if (i == j) {
      seen_j = true;
      dist = std::max(dist, std::abs(scaled - 1.0));
    } else {
      dist = std::max(dist, std::abs(scaled));
    }
  }
  if (!seen_j) dist = std::max(dist, 1.0);
  return dist <= t + 1e-12;
}

std::vector<Vec> sample_uniform_sphere(int d, int m, std::uint64_t seed) {
  if (m < 1 || d < 1) throw InvalidArgument("sample_uniform_sphere: need d >= 1 and m >= 1");
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) out.push_back(rng.unit_vector(d));
  return out;
}

double SamplingPlan::required_count() const {
  return m * (2.5 * static_cast<double>(quotas.size()) * t + delta);
}

SamplingPlan make_plan(const Fan& fan, double t, double delta, int m, std::uint64_t seed, FillMode fill) {
  const int n = fan.num_rays();
  char buf[256];
  if (!(t >= 0.0 && t < 0.5)) {
    std::snprintf(buf, sizeof buf, "sampling plan: t = %.17g outside [0, 0.5)", t);
    throw QuotaInfeasible(buf);
  }
  if (!(delta > 0.0) || m < 1) {
    std::snprintf(buf, sizeof buf, "sampling plan: need delta > 0 and m >= 1 (delta = %.17g, m = %d)", delta, m);
    throw QuotaInfeasible(buf);
  }
  SamplingPlan plan;
  plan.t = t;
  plan.delta = delta;
  plan.m = m;
  plan.seed = seed;
  plan.fill = fill;
  const int q = ceil_count(m * (2.5 * n * t + delta));
  if (static_cast<long>(q) * n > m) {
    std::snprintf(buf, sizeof buf,
                  "sampling plan: quota %d per ray over %d rays exceeds m = %d (t = %.17g, delta = %.17g, "
                  "2.5 n t + delta = %.17g)",
                  q, n, m, t, delta, 2.5 * n * t + delta);
    throw QuotaInfeasible(buf);
  }
  plan.quotas.assign(n, q);
  return plan;
}

SamplingPlan balanced_facet_plan(const Fan& fan, int m, std::uint64_t seed) {
  const int n = fan.num_rays();
  if (m < n) throw QuotaInfeasible("balanced_facet_plan: m = " + std::to_string(m) + " is below n = " + std::to_string(n));
  SamplingPlan plan;
  plan.t = 0.0;
  plan.m = m;
  plan.seed = seed;
  plan.fill = FillMode::Facets;
  plan.quotas.assign(n, m / n);
  plan.delta = static_cast<double>(m / n) / m;
  return plan;
}

std::vector<Vec> sample_concentrated(const Fan& fan, const SamplingPlan& plan) {
  const int n = fan.num_rays();
  if (static_cast<int>(plan.quotas.size()) != n) throw InvalidArgument("sample_concentrated: plan has wrong ray count");
  long total = 0;
  for (int q : plan.quotas) total += q;
  if (total > plan.m)
    throw QuotaInfeasible("sample_concentrated: quotas sum to " + std::to_string(total) + " > m = " +
                          std::to_string(plan.m));

  Rng rng(plan.seed);
  std::vector<Vec> out;
  out.reserve(plan.m);
  std::vector<int> left = plan.quotas;
  int ray = 0;
  for (long emitted = 0; emitted < total; ray = (ray + 1) % n) {
    if (left[ray] == 0) continue;
    out.push_back(concentrated_sample(fan, ray, plan.t, rng));
    --left[ray];
    ++emitted;
  }
  for (int next = 0; static_cast<int>(out.size()) < plan.m; next = (next + 1) % n) {
    if (plan.fill == FillMode::Facets)
      out.push_back(normalized_ray(fan, next));
    else
      out.push_back(rng.unit_vector(fan.dim()));
  }
  return out;
}

std::vector<int> audit_counts(const Fan& fan, const std::vector<Vec>& directions, double t) {
  std::vector<int> counts(fan.num_rays(), 0);
  for (const Vec& u : directions)
    for (int j = 0; j < fan.num_rays(); ++j) counts[j] += in_ct(fan, u, j, t);
  return counts;
}

bool hypothesis_met(const Fan& fan, const std::vector<Vec>& directions, const SamplingPlan& plan) {
  const double need = static_cast<double>(directions.size()) * (2.5 * fan.num_rays() * plan.t + plan.delta);
  const std::vector<int> counts = audit_counts(fan, directions, plan.t);
  return std::all_of(counts.begin(), counts.end(), [&](int c) { return c >= need - 1e-9 * std::max(1.0, need); });
}

double NoiseModel::sd(int i) const { return sigmas.empty() ? sigma : sigmas.at(i); }

double NoiseModel::gamma() const {
  double g = sigma * sigma;
  if (!sigmas.empty()) {
    g = 0.0;
    for (double s : sigmas) g = std::max(g, s * s);
  }
  return g;
}

Vec NoiseModel::draw(int m, Rng& rng) const {
  Vec e(m);
  for (int i = 0; i < m; ++i) e(i) = sd(i) * rng.normal();
  return e;
}

BoundParameters theoretical_bound(const FanConstants& k, const SamplingPlan& plan, double gamma, double eta, int m) {
  if (m < 1) throw InvalidArgument("theoretical_bound: m must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("theoretical_bound: eta must lie in (0, 1)");
  const double n = k.num_rays;
  const double c2 = k.c_delta * k.c_delta;
  BoundParameters b;
  b.eta = eta;
  b.kappa = std::pow(plan.delta / (k.max_ray_norm * k.max_ray_norm), 1.5);
  b.lambda = c2 - (c2 - plan.t * plan.t / (k.min_ray_norm * k.min_ray_norm)) * (n - 1.0) *
                      (2.5 * n * plan.t + plan.delta);
  if (!(b.lambda > 0.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "theoretical_bound: lambda = %.17g is not positive", b.lambda);
    throw NonpositiveLambda(buf);
  }
  b.value = (1.0 / std::sqrt(static_cast<double>(m))) * (n * c2 / b.kappa) *
            std::sqrt(2.0 * k.dim * gamma * b.lambda * std::log(2.0 * n / eta));
  return b;
}

void EigenReport::require_hypothesis() const {
  if (!hypothesis_met) throw HypothesisUnmet("eigen_checks: dataset fails the per-ray concentration counts");
}

EigenReport eigen_checks(const Fan& fan, const std::vector<Vec>& directions, const DesignMatrix& design,
                         const SamplingPlan& plan) {
  const FanConstants& k = fan.constants();
  const double m = design.rows();
  const Mat H = Mat(design.A.transpose() * design.A);
  Eigen::SelfAdjointEigenSolver<Mat> eig(H, Eigen::EigenvaluesOnly);
  EigenReport r;
  r.lambda_min = eig.eigenvalues()(0);
  r.lambda_max = eig.eigenvalues()(H.rows() - 1);
  r.upper_bound = m * k.num_rays * k.c_delta * k.c_delta;
  r.lower_bound = m * plan.delta / (k.max_ray_norm * k.max_ray_norm);
  const double slack = 1e-9 * std::max(1.0, r.upper_bound);
  r.upper_holds = r.lambda_max <= r.upper_bound + slack;
  r.lower_holds = r.lambda_min >= r.lower_bound - slack;
  r.hypothesis_met = hypothesis_met(fan, directions, plan);
  return r;
}

std::vector<ConvergenceRecord> run_convergence(const Fan& fan, const SupportVector& h0, const PlanFactory& plans,
                                               const ConvergenceOptions& opts) {
  const DeformationCone cone(fan);
  cone.require(h0, "run_convergence");
  for (std::size_t s = 1; s < opts.m_schedule.size(); ++s)
    if (opts.m_schedule[s] <= opts.m_schedule[s - 1])
      throw InvalidArgument("run_convergence: m schedule must be increasing");

  std::vector<ConvergenceRecord> records;
  for (int m : opts.m_schedule) {
    for (int rep = 0; rep < opts.replicates; ++rep) {
      ConvergenceRecord rec;
      rec.m = m;
      rec.replicate = rep;
      rec.bound = std::numeric_limits<double>::quiet_NaN();
      const auto start = std::chrono::steady_clock::now();
      try {
        const SamplingPlan plan = plans(m, derive_seed(opts.seed, m, rep));
        try {
          rec.bound = theoretical_bound(fan.constants(), plan, opts.noise.gamma(), opts.eta, m).value;
        } catch (const NonpositiveLambda&) {
        }
        Dataset data;
        data.directions = sample_concentrated(fan, plan);
        Rng noise_rng(derive_seed(opts.noise.seed, m, rep));
        const Vec noise = opts.noise.draw(m, noise_rng);
        data.values.resize(m);
        for (int i = 0; i < m; ++i) data.values(i) = support_value(fan, h0, data.directions[i]) + noise(i);
        const ReconstructionResult res = reconstruct(cone, data);
        rec.objective = res.objective;
        rec.hausdorff_error = hausdorff(cone, res.h_hat, h0);
      } catch (const Error& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      rec.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      records.push_back(std::move(rec));
    }
  }
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: need at least two points");
  const std::size_t k = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

RateSummary summarize(const std::vector<ConvergenceRecord>& records) {
  RateSummary s;
  for (const auto& r : records)
    if (std::find(s.m.begin(), s.m.end(), r.m) == s.m.end()) s.m.push_back(r.m);
  std::sort(s.m.begin(), s.m.end());
  for (int m : s.m) {
    std::vector<double> errs, bounds;
    for (const auto& r : records) {
      if (r.m != m) continue;
      if (r.failed) {
        ++s.failures;
        continue;
      }
      errs.push_back(r.hausdorff_error);
      if (!std::isnan(r.bound)) {
        bounds.push_back(r.bound);
        if (r.hausdorff_error > r.bound) ++s.bound_violations;
      }
    }
    s.median_error.push_back(median(errs));
    s.median_bound.push_back(median(bounds));
  }
  if (s.m.size() >= 2) {
    std::vector<double> xs(s.m.begin(), s.m.end());
    s.slope = loglog_slope(xs, s.median_error);
  }
  return s;
}

}  // namespace polyrecon
