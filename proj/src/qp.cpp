#include "polyrecon/qp.hpp"

#include <algorithm>
#include <cmath>

namespace polyrecon {

namespace {

struct WorkingSetFactor {
  Mat Z;      // null-space basis of B_W
  Mat Q1;     // range basis of B_W^T
  Mat R;      // B_W^T = Q1 R
};

WorkingSetFactor factor_working_set(const Mat& B, const std::vector<int>& W, int n) {
  WorkingSetFactor f;
  const int w = static_cast<int>(W.size());
  if (w == 0) {
    f.Z = Mat::Identity(n, n);
    return f;
  }
  Mat M(n, w);
  for (int k = 0; k < w; ++k) M.col(k) = B.row(W[k]).transpose();
  Eigen::HouseholderQR<Mat> qr(M);
  const Mat Q = qr.householderQ() * Mat::Identity(n, n);
  f.Q1 = Q.leftCols(w);
  f.Z = Q.rightCols(n - w);
  f.R = qr.matrixQR().topLeftCorner(w, w).triangularView<Eigen::Upper>();
  return f;
}

// Minimum-norm minimizer of 0.5 p^T H p + grad^T p over p in range(Z).
Vec subspace_step(const Mat& H, const Vec& grad, const Mat& Z) {
  if (Z.cols() == 0) return Vec::Zero(H.rows());
  const Mat Hr = Z.transpose() * H * Z;
  const Vec gr = Z.transpose() * grad;
  Eigen::SelfAdjointEigenSolver<Mat> eig(Hr);
  const Vec& ev = eig.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return Vec::Zero(H.rows());
  const double thr = 1e-11 * top;
  const Mat& V = eig.eigenvectors();
  Vec pr = Vec::Zero(Z.cols());
  for (int k = 0; k < ev.size(); ++k) {
    if (ev(k) > thr) pr -= V.col(k) * (V.col(k).dot(gr) / ev(k));
  }
  return Z * pr;
}

Vec working_multipliers(const WorkingSetFactor& f, const Vec& grad) {
  return f.R.triangularView<Eigen::Upper>().solve(f.Q1.transpose() * grad);
}

}  // namespace

KKTReport check_kkt(const ConstrainedLS& problem, const Vec& h, const Vec& mu, const QPOptions& opts) {
  KKTReport r;
  const Vec g = problem.A.transpose() * problem.y;
  r.kkt_tol = opts.kkt_tol * (1.0 + g.norm());
  r.feas_tol = opts.feas_tol * (1.0 + h.norm());
  const Vec residual = problem.A * h - problem.y;
  Vec stat = problem.A.transpose() * residual;
  const int p = static_cast<int>(problem.B.rows());
  if (p > 0) {
    stat -= problem.B.transpose() * mu;
    const Vec Bh = problem.B * h;
    r.primal_infeasibility = std::max(0.0, -Bh.minCoeff());
    r.dual_infeasibility = std::max(0.0, -mu.minCoeff());
    r.complementarity = (mu.array() * Bh.array()).abs().maxCoeff();
  }
  r.stationarity = stat.norm();
  r.passed = r.stationarity <= r.kkt_tol && r.primal_infeasibility <= r.feas_tol &&
             r.dual_infeasibility <= r.kkt_tol && r.complementarity <= r.kkt_tol;
  return r;
}

QPSolution solve_cls(const ConstrainedLS& problem, const QPOptions& opts) {
  const SparseMat& A = problem.A;
  const int n = static_cast<int>(A.cols());
  const int p = static_cast<int>(problem.B.rows());
  if (problem.y.size() != A.rows()) throw InvalidArgument("solve_cls: y length does not match A");
  if (p > 0 && problem.B.cols() != n) throw InvalidArgument("solve_cls: B width does not match A");
  const Mat& B = problem.B;

  const Mat H = Mat(A.transpose() * A);
  const Vec g = A.transpose() * problem.y;
  const double kkt_abs = opts.kkt_tol * (1.0 + g.norm());
  const double dual_tol = 0.1 * kkt_abs;
  const int cap = opts.max_iterations > 0 ? opts.max_iterations : 50 * (n + p);

  Vec x = opts.warm_start ? *opts.warm_start : Vec::Zero(n);
  if (x.size() != n) throw InvalidArgument("solve_cls: warm start has wrong length");
  if (p > 0 && (B * x).minCoeff() < -opts.feas_tol * (1.0 + x.norm()))
    throw InvalidArgument("solve_cls: warm start violates B h >= 0");

  std::vector<int> W;
  std::vector<char> in_ws(p, 0);
  bool at_subspace_min = false;
  bool done = false;
  int iter = 0;
  WorkingSetFactor factor = factor_working_set(B, W, n);
  Vec mu_w;

  for (; iter < cap; ++iter) {
    const Vec grad = H * x - g;
    Vec step;
    if (!at_subspace_min) {
      step = subspace_step(H, grad, factor.Z);
      if (step.norm() <= 1e-14 * (1.0 + x.norm())) at_subspace_min = true;
    }
    if (at_subspace_min) {
      if (W.empty()) {
        done = true;
        break;
      }
      mu_w = working_multipliers(factor, grad);
      int drop = -1;
      for (std::size_t k = 0; k < W.size(); ++k) {
        if (mu_w(k) < -dual_tol && (drop < 0 || W[k] < W[drop])) drop = static_cast<int>(k);
      }
      if (drop < 0) {
        done = true;
        break;
      }
      in_ws[W[drop]] = 0;
      W.erase(W.begin() + drop);
      factor = factor_working_set(B, W, n);
      at_subspace_min = false;
      continue;
    }

    double alpha = 1.0;
    int blocking = -1;
    const double pnorm = step.norm();
    for (int i = 0; i < p; ++i) {
      if (in_ws[i]) continue;
      const double bp = B.row(i).dot(step);
      if (bp >= -1e-14 * B.row(i).norm() * pnorm) continue;
      const double ratio = std::max(0.0, B.row(i).dot(x)) / -bp;
      const double eps = 1e-15 * (1.0 + alpha);
      if (ratio < alpha - eps) {
        alpha = ratio;
        blocking = i;
      } else if (blocking < 0 && ratio <= alpha + eps) {
        alpha = std::min(alpha, ratio);
        blocking = i;
      }
    }
    x += alpha * step;
    if (blocking >= 0) {
      in_ws[blocking] = 1;
      W.insert(std::upper_bound(W.begin(), W.end(), blocking), blocking);
      factor = factor_working_set(B, W, n);
      at_subspace_min = false;
    } else {
      at_subspace_min = true;
    }
  }

  QPSolution sol;
  sol.h_star = x;
  sol.iterations = iter;
  sol.active_rows = W;
  sol.multipliers = Vec::Zero(p);
  if (!W.empty()) {
    const Vec grad = H * x - g;
    mu_w = working_multipliers(factor, grad);
    for (std::size_t k = 0; k < W.size(); ++k) sol.multipliers(W[k]) = mu_w(k);
  }
  const Vec residual = A * x - problem.y;
  sol.objective = residual.squaredNorm();
  const KKTReport kkt = check_kkt(problem, x, sol.multipliers, opts);
  sol.stationarity = kkt.stationarity;
  sol.primal_infeasibility = kkt.primal_infeasibility;
  sol.dual_infeasibility = kkt.dual_infeasibility;
  sol.complementarity = kkt.complementarity;
  sol.kkt_residual = std::max({kkt.stationarity, kkt.primal_infeasibility, kkt.dual_infeasibility,
                               kkt.complementarity});
  sol.converged = done;
  if (!done) throw IterationLimit(sol);
  return sol;
}

}  // namespace polyrecon
