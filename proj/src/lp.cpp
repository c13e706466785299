#include "polyrecon/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace polyrecon {

const char* to_string(LPStatus status) {
  switch (status) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

void set_box(LinearProgram& lp, double bound) {
  const auto n = lp.c.size();
  lp.lower = Vec::Constant(n, -bound);
  lp.upper = Vec::Constant(n, bound);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { GE, LE, EQ };

struct Row {
  Vec a;
  Sense sense;
  double rhs;
};

class Tableau {
 public:
  Tableau(Mat tab, std::vector<int> basis, int artificial_begin, const LPOptions& opts)
      : tab_(std::move(tab)), basis_(std::move(basis)), art_begin_(artificial_begin), opts_(opts) {
    obj_ = Vec::Zero(tab_.cols());
  }

  int rows() const { return static_cast<int>(tab_.rows()); }
  int cols() const { return static_cast<int>(tab_.cols()) - 1; }
  int rhs_col() const { return cols(); }
  bool is_artificial(int j) const { return j >= art_begin_; }

  void set_cost(const Vec& cost) {
    obj_.setZero();
    obj_.head(cols()) = cost;
    for (int i = 0; i < rows(); ++i) {
      const double cb = cost(basis_[i]);
      if (cb != 0.0) obj_ -= cb * tab_.row(i).transpose();
    }
  }

  // Bland's rule: smallest entering index, ties in the ratio test broken by
  // the smallest basic variable index.
  LPStatus run(bool allow_artificial, int& pivots) {
    const double cost_tol = opts_.pivot_tol * (1.0 + obj_.head(cols()).cwiseAbs().maxCoeff());
    while (true) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (obj_(j) < -cost_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LPStatus::Optimal;

      int leave = -1;
      double best = kInf;
      for (int i = 0; i < rows(); ++i) {
        const double a = tab_(i, enter);
        if (a <= opts_.pivot_tol) continue;
        const double ratio = std::max(0.0, tab_(i, rhs_col())) / a;
        const double eps = 1e-13 * (1.0 + std::abs(best == kInf ? 0.0 : best));
        if (leave < 0 || ratio < best - eps) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + eps && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return LPStatus::Unbounded;
      pivot(leave, enter);
      if (++pivots > opts_.max_pivots) throw Error("solve_lp: pivot limit exceeded");
    }
  }

  void pivot(int r, int e) {
    tab_.row(r) /= tab_(r, e);
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double f = tab_(i, e);
      if (f != 0.0) tab_.row(i) -= f * tab_.row(r);
    }
    const double f = obj_(e);
    if (f != 0.0) obj_ -= f * tab_.row(r).transpose();
    basis_[r] = e;
  }

  double objective_value() const { return -obj_(rhs_col()); }

  // After phase one: pivot zero-level artificials out of the basis and drop
  // rows that turn out to be linearly dependent.
  void expel_artificials() {
    std::vector<int> keep;
    for (int i = 0; i < rows(); ++i) {
      if (!is_artificial(basis_[i])) {
        keep.push_back(i);
        continue;
      }
      int col = -1;
      for (int j = 0; j < art_begin_; ++j) {
        if (std::abs(tab_(i, j)) > opts_.pivot_tol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
        keep.push_back(i);
      }
    }
    if (static_cast<int>(keep.size()) == rows()) return;
    Mat reduced(keep.size(), tab_.cols());
    std::vector<int> basis;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      reduced.row(k) = tab_.row(keep[k]);
      basis.push_back(basis_[keep[k]]);
    }
    tab_ = std::move(reduced);
    basis_ = std::move(basis);
  }

  Vec primal(int num_structural) const {
    Vec s = Vec::Zero(num_structural);
    for (int i = 0; i < rows(); ++i) {
      if (basis_[i] < num_structural) s(basis_[i]) = tab_(i, rhs_col());
    }
    return s;
  }

 private:
  Mat tab_;
  Vec obj_;
  std::vector<int> basis_;
  int art_begin_;
  const LPOptions& opts_;
};

}  // namespace

LPSolution solve_lp(const LinearProgram& lp, const LPOptions& opts) {
  const int n = static_cast<int>(lp.c.size());
  const int pb = static_cast<int>(lp.B.rows());
  const int pe = static_cast<int>(lp.E.rows());
  if ((pb > 0 && lp.B.cols() != n) || (pe > 0 && lp.E.cols() != n))
    throw InvalidArgument("solve_lp: constraint matrix width does not match c");
  if ((lp.b.size() != 0 && lp.b.size() != pb) || (lp.f.size() != 0 && lp.f.size() != pe))
    throw InvalidArgument("solve_lp: right-hand side length mismatch");
  if ((lp.lower.size() != 0 && lp.lower.size() != n) || (lp.upper.size() != 0 && lp.upper.size() != n))
    throw InvalidArgument("solve_lp: bound vector length mismatch");

  const Vec lower = lp.lower.size() ? lp.lower : Vec::Constant(n, -kInf);
  const Vec upper = lp.upper.size() ? lp.upper : Vec::Constant(n, kInf);

  LPSolution out;
  out.x = Vec::Zero(n);

  // x = offset + T s with s >= 0.
  std::vector<std::pair<int, double>> columns;
  Vec offset = Vec::Zero(n);
  std::vector<std::pair<int, double>> ranges;  // (column, width)
  for (int j = 0; j < n; ++j) {
    const double l = lower(j), u = upper(j);
    if (l > u) return out;
    if (std::isfinite(l)) {
      offset(j) = l;
      columns.emplace_back(j, 1.0);
      if (std::isfinite(u)) ranges.emplace_back(static_cast<int>(columns.size()) - 1, u - l);
    } else if (std::isfinite(u)) {
      offset(j) = u;
      columns.emplace_back(j, -1.0);
    } else {
      columns.emplace_back(j, 1.0);
      columns.emplace_back(j, -1.0);
    }
  }
  const int N = static_cast<int>(columns.size());
  Mat T = Mat::Zero(n, N);
  for (int k = 0; k < N; ++k) T(columns[k].first, k) = columns[k].second;

  std::vector<Row> rows;
  rows.reserve(pb + pe + ranges.size());
  for (int i = 0; i < pb; ++i) {
    const double bi = lp.b.size() ? lp.b(i) : 0.0;
    rows.push_back({(lp.B.row(i) * T).transpose(), Sense::GE, bi - lp.B.row(i).dot(offset)});
  }
  for (int i = 0; i < pe; ++i) {
    const double fi = lp.f.size() ? lp.f(i) : 0.0;
    rows.push_back({(lp.E.row(i) * T).transpose(), Sense::EQ, fi - lp.E.row(i).dot(offset)});
  }
  for (const auto& [k, width] : ranges) {
    Vec a = Vec::Zero(N);
    a(k) = 1.0;
    rows.push_back({a, Sense::LE, width});
  }

  const int R = static_cast<int>(rows.size());
  int num_slack = 0;
  for (const auto& r : rows) num_slack += r.sense != Sense::EQ;

  // Layout: [structural N | slacks | artificials | rhs]
  std::vector<double> slack_sign(R, 0.0);
  std::vector<int> slack_col(R, -1);
  {
    int s = N;
    for (int i = 0; i < R; ++i) {
      if (rows[i].sense == Sense::EQ) continue;
      slack_col[i] = s++;
      slack_sign[i] = rows[i].sense == Sense::GE ? -1.0 : 1.0;
    }
  }
  std::vector<int> basis(R, -1);
  int num_art = 0;
  for (int i = 0; i < R; ++i) {
    const double sign = rows[i].rhs < 0.0 ? -1.0 : 1.0;
    if (slack_col[i] >= 0 && sign * slack_sign[i] > 0.0) {
      basis[i] = slack_col[i];
    } else {
      ++num_art;
    }
  }
  const int art_begin = N + num_slack;
  const int total = art_begin + num_art;
  Mat tab = Mat::Zero(R, total + 1);
  {
    int a = art_begin;
    for (int i = 0; i < R; ++i) {
      const double sign = rows[i].rhs < 0.0 ? -1.0 : 1.0;
      tab.row(i).head(N) = sign * rows[i].a.transpose();
      if (slack_col[i] >= 0) tab(i, slack_col[i]) = sign * slack_sign[i];
      tab(i, total) = sign * rows[i].rhs;
      if (basis[i] < 0) {
        tab(i, a) = 1.0;
        basis[i] = a++;
      }
    }
  }

  Tableau tableau(std::move(tab), std::move(basis), art_begin, opts);
  int pivots = 0;
  if (num_art > 0) {
    Vec phase1 = Vec::Zero(total);
    phase1.tail(num_art).setOnes();
    tableau.set_cost(phase1);
    tableau.run(true, pivots);
    double rhs_scale = 1.0;
    for (const auto& r : rows) rhs_scale = std::max(rhs_scale, std::abs(r.rhs));
    if (tableau.objective_value() > opts.feasibility_tol * rhs_scale) {
      out.status = LPStatus::Infeasible;
      out.pivots = pivots;
      return out;
    }
    tableau.expel_artificials();
  }

  Vec phase2 = Vec::Zero(total);
  phase2.head(N) = T.transpose() * lp.c;
  tableau.set_cost(phase2);
  out.status = tableau.run(false, pivots);
  out.pivots = pivots;
  out.x = offset + T * tableau.primal(N);
  out.objective = lp.c.dot(out.x);
  return out;
}

}  // namespace polyrecon
