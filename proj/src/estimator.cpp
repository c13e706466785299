#include "polyrecon/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyrecon/lp.hpp"

namespace polyrecon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// B K with entries negligible relative to the largest one set to zero.
Mat kernel_constraints(const Mat& B, const Mat& K) {
  Mat C = B * K;
  const double scale = C.size() ? C.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < C.size(); ++i)
    if (std::abs(C.data()[i]) <= 1e-12 * scale) C.data()[i] = 0.0;
  return C;
}

LinearProgram box_program(const Mat& C, const Vec& rhs) {
  LinearProgram lp;
  lp.B = C;
  lp.b = rhs;
  const int k = static_cast<int>(C.cols());
  lp.lower = Vec::Constant(k, -1.0);
  lp.upper = Vec::Constant(k, 1.0);
  return lp;
}

// {lambda : C lambda >= 0} != {0}
bool cone_nontrivial(const Mat& C) {
  const int k = static_cast<int>(C.cols());
  if (k == 0) return false;
  if (C.rows() == 0) return true;
  LinearProgram lp = box_program(C, Vec::Zero(C.rows()));
  for (int j = 0; j < k; ++j) {
    for (double sign : {1.0, -1.0}) {
      lp.c = Vec::Zero(k);
      lp.c(j) = -sign;
      const LPSolution sol = solve_lp(lp);
      if (sol.status == LPStatus::Optimal && -sol.objective > 1e-9) return true;
    }
  }
  return false;
}

// Dimension of {lambda : C_A lambda >= 0} for the rows of C active at lambda = 0.
int local_dimension(const Mat& C, const std::vector<int>& active) {
  const int k = static_cast<int>(C.cols());
  if (active.empty()) return k;
  Mat CA(active.size(), k);
  for (std::size_t r = 0; r < active.size(); ++r) CA.row(r) = C.row(active[r]);
  LinearProgram lp = box_program(CA, Vec::Zero(CA.rows()));
  std::vector<int> equalities;
  for (std::size_t r = 0; r < active.size(); ++r) {
    lp.c = -CA.row(r).transpose();
    const LPSolution sol = solve_lp(lp);
    if (sol.status == LPStatus::Optimal && -sol.objective <= 1e-9 * (1.0 + CA.row(r).norm())) equalities.push_back(r);
  }
  if (equalities.empty()) return k;
  Mat CE(equalities.size(), k);
  for (std::size_t r = 0; r < equalities.size(); ++r) CE.row(r) = CA.row(equalities[r]);
  Eigen::FullPivLU<Mat> lu(CE);
  lu.setThreshold(1e-9);
  return k - static_cast<int>(lu.rank());
}

}  // namespace

ReconstructionResult reconstruct(const DeformationCone& cone, const Dataset& data, const QPOptions& opts) {
  const Fan& fan = cone.fan();
  data.check(fan.dim());
  ReconstructionResult r;
  r.design = build_design(fan, data.directions);
  ConstrainedLS problem{r.design.A, data.values, cone.B()};
  r.qp = solve_cls(problem, opts);
  r.h_hat = r.qp.h_star;
  r.y_hat = r.design.A * r.h_hat;
  r.objective = (r.y_hat - data.values).squaredNorm();
  r.uniqueness = uniqueness_report(fan, r.design);
  r.solution_set = solution_set(cone, r.uniqueness.kernel_basis, r.h_hat);
  return r;
}

ReconstructionResult reconstruct(const Fan& fan, const Dataset& data, const QPOptions& opts) {
  const DeformationCone cone(fan);
  return reconstruct(cone, data, opts);
}

SolutionSetDescription solution_set(const DeformationCone& cone, const Mat& kernel, const Vec& h_hat) {
  SolutionSetDescription out;
  const int k = static_cast<int>(kernel.cols());
  if (k == 0) return out;

  const Mat& B = cone.B();
  const Mat C = kernel_constraints(B, kernel);
  const Vec slack = (B * h_hat).cwiseMax(0.0);
  const double tol = 1e-9 * (1.0 + h_hat.norm());
  std::vector<int> active;
  for (int i = 0; i < slack.size(); ++i)
    if (slack(i) <= tol * std::max(1.0, B.row(i).norm())) active.push_back(i);

  out.dimension = local_dimension(C, active);
  out.bounded = !cone_nontrivial(C);
  if (k != 1 || out.dimension == 0 || !out.bounded) return out;

  LinearProgram lp;
  lp.B = C;
  lp.b = -slack;
  lp.lower = Vec::Constant(1, -kInf);
  lp.upper = Vec::Constant(1, kInf);
  double ends[2];
  for (int s = 0; s < 2; ++s) {
    lp.c = Vec::Constant(1, s == 0 ? -1.0 : 1.0);
    const LPSolution sol = solve_lp(lp);
    if (sol.status != LPStatus::Optimal) {
      out.bounded = false;
      return out;
    }
    ends[s] = sol.x(0);
  }
  const Vec z = kernel.col(0);
  out.segment_endpoints = std::make_pair(Vec(h_hat + ends[0] * z), Vec(h_hat + ends[1] * z));
  return out;
}

SolutionSetDescription solution_set(const DeformationCone& cone, const DesignMatrix& design, const Vec& h_hat) {
  return solution_set(cone, numeric_rank(design).kernel_basis, h_hat);
}

bool detect_unbounded(const DeformationCone& cone, const Mat& kernel) {
  if (kernel.cols() == 0) return false;
  return cone_nontrivial(kernel_constraints(cone.B(), kernel));
}

bool detect_unbounded(const DeformationCone& cone, const DesignMatrix& design) {
  return detect_unbounded(cone, numeric_rank(design).kernel_basis);
}

MultiFanResult reconstruct_multi(const std::vector<Fan>& fans, const Dataset& data, const QPOptions& opts) {
  if (fans.empty()) throw InvalidArgument("reconstruct_multi: no fans given");
  for (std::size_t f = 1; f < fans.size(); ++f) {
    bool same = fans[f].num_rays() == fans[0].num_rays() && fans[f].dim() == fans[0].dim();
    for (int i = 0; same && i < fans[0].num_rays(); ++i) same = fans[f].ray(i) == fans[0].ray(i);
    if (!same) throw InvalidArgument("reconstruct_multi: fan " + std::to_string(f) + " has a different ray list");
  }

  MultiFanResult out;
  out.tie_tol = 1e-8 * (1.0 + data.values.squaredNorm());
  out.min_objective = kInf;
  for (const Fan& fan : fans) {
    MultiFanEntry entry;
    try {
      entry.result = reconstruct(fan, data, opts);
      out.min_objective = std::min(out.min_objective, entry.result->objective);
    } catch (const IterationLimit& e) {
      entry.error = e.what();
      entry.iteration_limit = true;
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.per_fan.push_back(std::move(entry));
  }
  for (std::size_t f = 0; f < out.per_fan.size(); ++f) {
    const auto& res = out.per_fan[f].result;
    if (res && res->objective <= out.min_objective + out.tie_tol) out.minimizers.push_back(static_cast<int>(f));
  }
  return out;
}

GKEstimate gk_estimate(const std::vector<Vec>& rays, const Dataset& data, const QPOptions& opts) {
  if (rays.empty()) throw InvalidArgument("gk_estimate: no rays given");
  const int d = static_cast<int>(rays[0].size());
  data.check(d);
  const int m = data.size();

  ConstrainedLS problem;
  problem.A.resize(m, m * d);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < d; ++c) triplets.emplace_back(i, i * d + c, data.directions[i](c));
  problem.A.setFromTriplets(triplets.begin(), triplets.end());
  problem.y = data.values;
  problem.B = Mat::Zero(static_cast<Eigen::Index>(m) * (m - 1), m * d);
  int row = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      problem.B.block(row, i * d, 1, d) = data.directions[i].transpose();
      problem.B.block(row, j * d, 1, d) = -data.directions[i].transpose();
      ++row;
    }
  }

  const QPSolution sol = solve_cls(problem, opts);
  GKEstimate out;
  out.objective = sol.objective;
  for (int i = 0; i < m; ++i) out.points.push_back(sol.h_star.segment(i * d, d));
  out.h = Vec::Constant(static_cast<Eigen::Index>(rays.size()), -kInf);
  for (std::size_t k = 0; k < rays.size(); ++k)
    for (const Vec& x : out.points) out.h(k) = std::max(out.h(k), x.dot(rays[k]));
  return out;
}

}  // namespace polyrecon
