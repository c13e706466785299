#include "polyrecon/fan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "polyrecon/lp.hpp"
#include "polyrecon/random.hpp"

namespace polyrecon {

bool SimplicialFan::operator==(const SimplicialFan& other) const {
  if (dim != other.dim || cells != other.cells || rays.size() != other.rays.size()) return false;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (rays[i].size() != other.rays[i].size() || rays[i] != other.rays[i]) return false;
  }
  return true;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "[ok]   " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  return os.str();
}

namespace {

Mat generator_matrix(const SimplicialFan& fan, const std::vector<int>& cell) {
  Mat M(fan.dim, cell.size());
  for (std::size_t k = 0; k < cell.size(); ++k) M.col(k) = fan.rays[cell[k]];
  return M;
}

double min_ray_norm(const SimplicialFan& fan) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : fan.rays) m = std::min(m, v.norm());
  return m;
}

ValidationCheck check_structure(const SimplicialFan& fan) {
  ValidationCheck c{"structure", true, ""};
  const int d = fan.dim;
  const int n = static_cast<int>(fan.rays.size());
  std::ostringstream err;
  if (d < 2) {
    err << "dim must be >= 2";
  } else if (n == 0 || fan.cells.empty()) {
    err << "fan needs rays and cells";
  } else {
    for (int i = 0; i < n && err.str().empty(); ++i) {
      if (fan.rays[i].size() != d) err << "ray " << i << " has " << fan.rays[i].size() << " components";
      else if (!fan.rays[i].allFinite() || fan.rays[i].norm() == 0.0) err << "ray " << i << " is zero or non-finite";
    }
    for (std::size_t j = 0; j < fan.cells.size() && err.str().empty(); ++j) {
      const auto& cell = fan.cells[j];
      if (static_cast<int>(cell.size()) != d) {
        err << "cell " << j << " has " << cell.size() << " generators";
        break;
      }
      std::set<int> seen;
      for (int idx : cell) {
        if (idx < 0 || idx >= n) {
          err << "cell " << j << " references ray " << idx;
          break;
        }
        if (!seen.insert(idx).second) {
          err << "cell " << j << " repeats ray " << idx;
          break;
        }
      }
    }
  }
  c.detail = err.str();
  c.passed = c.detail.empty();
  return c;
}

ValidationCheck check_independent(const SimplicialFan& fan) {
  ValidationCheck c{"cells linearly independent", true, ""};
  for (std::size_t j = 0; j < fan.cells.size(); ++j) {
    const Mat M = generator_matrix(fan, fan.cells[j]);
    double scale = 1.0;
    for (int k = 0; k < M.cols(); ++k) scale *= M.col(k).norm();
    const double det = std::abs(M.determinant()) / scale;
    if (!(det > 1e-12)) {
      c.passed = false;
      c.detail = "cell " + std::to_string(j) + " has (normalized) determinant " + std::to_string(det);
      return c;
    }
  }
  return c;
}

ValidationCheck check_positive_span(const SimplicialFan& fan) {
  ValidationCheck c{"rays positively span", true, ""};
  const int d = fan.dim;
  const int n = static_cast<int>(fan.rays.size());
  Mat V(d, n);
  for (int i = 0; i < n; ++i) V.col(i) = fan.rays[i].normalized();
  Eigen::FullPivLU<Mat> lu(V);
  if (lu.rank() < d) {
    c.passed = false;
    c.detail = "rays span a subspace of dimension " + std::to_string(lu.rank());
    return c;
  }
  // max s  s.t.  sum lambda_i v_i = 0, sum lambda_i = 1, lambda_i >= s.
  LinearProgram lp;
  lp.c = Vec::Zero(n + 1);
  lp.c(n) = -1.0;
  lp.E = Mat::Zero(d + 1, n + 1);
  lp.E.topLeftCorner(d, n) = V;
  lp.E.row(d).head(n).setOnes();
  lp.f = Vec::Zero(d + 1);
  lp.f(d) = 1.0;
  lp.B = Mat::Zero(n, n + 1);
  lp.B.leftCols(n) = Mat::Identity(n, n);
  lp.B.col(n).setConstant(-1.0);
  lp.lower = Vec::Constant(n + 1, -std::numeric_limits<double>::infinity());
  lp.upper = Vec::Constant(n + 1, std::numeric_limits<double>::infinity());
  lp.upper(n) = 1.0;
  const LPSolution sol = solve_lp(lp);
  const double s = sol.status == LPStatus::Optimal ? -sol.objective : 0.0;
  if (!(s > 1e-9)) {
    c.passed = false;
    c.detail = "origin is not interior to the hull of the normalized rays";
  }
  return c;
}

ValidationCheck check_distinct_rays(const SimplicialFan& fan) {
  ValidationCheck c{"rays pairwise non-parallel", true, ""};
  const std::size_t n = fan.rays.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((fan.rays[i].normalized() - fan.rays[j].normalized()).norm() < 1e-12) {
        c.passed = false;
        c.detail = "rays " + std::to_string(i) + " and " + std::to_string(j) + " are positive multiples";
        return c;
      }
    }
  }
  return c;
}

ValidationCheck check_ray_degree(const SimplicialFan& fan) {
  ValidationCheck c{"every ray in >= d cells", true, ""};
  std::vector<int> degree(fan.rays.size(), 0);
  for (const auto& cell : fan.cells)
    for (int idx : cell) ++degree[idx];
  for (std::size_t i = 0; i < degree.size(); ++i) {
    if (degree[i] < fan.dim) {
      c.passed = false;
      c.detail = "ray " + std::to_string(i) + " lies in " + std::to_string(degree[i]) + " cells";
      return c;
    }
  }
  return c;
}

ValidationCheck check_completeness(const SimplicialFan& fan, const ValidationOptions& opts) {
  ValidationCheck c{"completeness probe", true, ""};
  std::vector<Eigen::PartialPivLU<Mat>> lus;
  for (const auto& cell : fan.cells) lus.emplace_back(generator_matrix(fan, cell));
  const double vmin = min_ray_norm(fan);
  Rng rng(opts.seed);
  int uncovered = 0, overlapped = 0;
  for (int s = 0; s < opts.probe_samples; ++s) {
    const Vec u = rng.unit_vector(fan.dim);
    const double tol = 1e-9 / vmin;
    int hits = 0;
    for (const auto& lu : lus) {
      const Vec lambda = lu.solve(u);
      if (lambda.minCoeff() >= -tol) ++hits;
    }
    uncovered += hits == 0;
    overlapped += hits > 1;
  }
  if (uncovered || overlapped) {
    c.passed = false;
    c.detail = std::to_string(uncovered) + " of " + std::to_string(opts.probe_samples) +
               " probes uncovered, " + std::to_string(overlapped) + " in several cells";
  }
  return c;
}

ValidationCheck check_proper_intersections(const SimplicialFan& fan) {
  ValidationCheck c{"cells meet in common faces", true, ""};
  const int d = fan.dim;
  const int r = static_cast<int>(fan.cells.size());
  for (int a = 0; a < r; ++a) {
    for (int b = a + 1; b < r; ++b) {
      const Mat Ma = generator_matrix(fan, fan.cells[a]);
      const Mat Mb = generator_matrix(fan, fan.cells[b]);
      // max sum of cell-a weights on generators outside b over points of both cones.
      LinearProgram lp;
      lp.c = Vec::Zero(2 * d);
      for (int k = 0; k < d; ++k) {
        const int idx = fan.cells[a][k];
        if (std::find(fan.cells[b].begin(), fan.cells[b].end(), idx) == fan.cells[b].end()) lp.c(k) = -1.0;
      }
      lp.E = Mat::Zero(d + 1, 2 * d);
      lp.E.topLeftCorner(d, d) = Ma;
      lp.E.topRightCorner(d, d) = -Mb;
      lp.E.row(d).setOnes();
      lp.f = Vec::Zero(d + 1);
      lp.f(d) = 1.0;
      lp.lower = Vec::Zero(2 * d);
      const LPSolution sol = solve_lp(lp);
      if (sol.status == LPStatus::Optimal && -sol.objective > 1e-9) {
        c.passed = false;
        c.detail = "cells " + std::to_string(a) + " and " + std::to_string(b) + " overlap";
        return c;
      }
    }
  }
  return c;
}

}  // namespace

ValidationReport validate(const SimplicialFan& fan, const ValidationOptions& opts) {
  ValidationReport report;
  report.checks.push_back(check_structure(fan));
  if (!report.checks.back().passed) return report;
  report.checks.push_back(check_independent(fan));
  const bool cells_ok = report.checks.back().passed;
  report.checks.push_back(check_positive_span(fan));
  report.checks.push_back(check_distinct_rays(fan));
  report.checks.push_back(check_ray_degree(fan));
  if (cells_ok) {
    report.checks.push_back(check_completeness(fan, opts));
    if (opts.strict) report.checks.push_back(check_proper_intersections(fan));
  }
  return report;
}

Vec BarycentricVector::dense(int num_rays) const {
  Vec out = Vec::Zero(num_rays);
  for (std::size_t k = 0; k < rays.size(); ++k) out(rays[k]) = weights(k);
  return out;
}

double BarycentricVector::dot(const Vec& h) const {
  double s = 0.0;
  for (std::size_t k = 0; k < rays.size(); ++k) s += weights(k) * h(rays[k]);
  return s;
}

Fan Fan::create(SimplicialFan raw, const ValidationOptions& opts) {
  Fan fan;
  fan.report_ = validate(raw, opts);
  if (!fan.report_.ok()) throw InvalidFan("fan failed validation:\n" + fan.report_.summary());
  fan.raw_ = std::move(raw);
  for (const auto& cell : fan.raw_.cells) {
    fan.generators_.push_back(generator_matrix(fan.raw_, cell));
    fan.lu_.emplace_back(fan.generators_.back());
    fan.inverse_.push_back(fan.lu_.back().inverse());
  }
  fan.constants_.dim = fan.raw_.dim;
  fan.constants_.num_rays = fan.num_rays();
  fan.constants_.min_ray_norm = min_ray_norm(fan.raw_);
  fan.constants_.max_ray_norm = 0.0;
  for (const auto& v : fan.raw_.rays) fan.constants_.max_ray_norm = std::max(fan.constants_.max_ray_norm, v.norm());
  fan.constants_.c_delta = c_delta(fan);
  return fan;
}

BarycentricVector carrier(const Fan& fan, const Vec& u) {
  if (u.size() != fan.dim()) throw InvalidArgument("carrier: vector has wrong dimension");
  const double unorm = u.norm();
  if (!(unorm > 0.0)) throw InvalidArgument("carrier: zero vector has no carrier");
  const double tol = 1e-9 * unorm / fan.constants().min_ray_norm;
  for (int j = 0; j < fan.num_cells(); ++j) {
    Vec lambda = fan.lu(j).solve(u);
    if (lambda.minCoeff() < -tol) continue;
    // one refinement step keeps exactly representable coefficients exact
    lambda += fan.lu(j).solve(u - fan.generators(j) * lambda);
    for (int k = 0; k < lambda.size(); ++k) {
      if (std::abs(lambda(k)) <= tol) lambda(k) = 0.0;
    }
    BarycentricVector out;
    out.cell = j;
    out.rays = fan.cell(j);
    out.weights = lambda;
    return out;
  }
  throw NoCarrier("carrier: no cell admits nonnegative coefficients");
}

WallCrossingSystem wall_crossings(const Fan& fan) {
  const int d = fan.dim();
  const int n = fan.num_rays();
  const int r = fan.num_cells();
  WallCrossingSystem sys;
  std::vector<Eigen::RowVectorXd> rows;
  for (int a = 0; a < r; ++a) {
    const std::set<int> sa(fan.cell(a).begin(), fan.cell(a).end());
    for (int b = a + 1; b < r; ++b) {
      std::vector<int> shared;
      int ray_b = -1;
      for (int idx : fan.cell(b)) {
        if (sa.count(idx)) shared.push_back(idx);
        else ray_b = idx;
      }
      if (static_cast<int>(shared.size()) != d - 1) continue;
      int ray_a = -1;
      for (int idx : fan.cell(a)) {
        if (std::find(shared.begin(), shared.end(), idx) == shared.end()) ray_a = idx;
      }

      // [v_a v_b v_shared...] c = 0,  c_a + c_b = 2
      Mat S = Mat::Zero(d + 1, d + 1);
      S.col(0).head(d) = fan.ray(ray_a);
      S.col(1).head(d) = fan.ray(ray_b);
      for (int k = 0; k < d - 1; ++k) S.col(2 + k).head(d) = fan.ray(shared[k]);
      S(d, 0) = 1.0;
      S(d, 1) = 1.0;
      Eigen::FullPivLU<Mat> lu(S);
      lu.setThreshold(1e-10);
      const double maxnorm = S.cwiseAbs().maxCoeff();
      const double pivot_floor = 1e-10 * maxnorm;
      const double smallest_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
      if (lu.rank() < d + 1 || smallest_pivot <= pivot_floor)
        throw DegenerateWall("wall between cells " + std::to_string(a) + " and " + std::to_string(b) +
                             " has a rank-deficient dependence system");
      Vec rhs = Vec::Zero(d + 1);
      rhs(d) = 2.0;
      const Vec sol = lu.solve(rhs);
      double ca = sol(0), cb = sol(1);
      if (!(ca > 0.0 && cb > 0.0))
        throw DegenerateWall("cells " + std::to_string(a) + " and " + std::to_string(b) +
                             " lie on the same side of their common wall");
      // exact normalization: the larger coefficient is >= 1, so 2 - larger is exact
      if (ca >= cb) cb = 2.0 - ca;
      else ca = 2.0 - cb;
      Vec cs = Vec::Zero(d - 1);
      if (d > 1) {
        Mat Vs(d, d - 1);
        for (int k = 0; k < d - 1; ++k) Vs.col(k) = fan.ray(shared[k]);
        const Vec target = -(ca * fan.ray(ray_a) + cb * fan.ray(ray_b));
        cs = Vs.colPivHouseholderQr().solve(target);
        cs += Vs.colPivHouseholderQr().solve(target - Vs * cs);
      }
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
      row(ray_a) = ca;
      row(ray_b) = cb;
      for (int k = 0; k < d - 1; ++k) row(shared[k]) = cs(k);
      rows.push_back(row);
      sys.walls.push_back({a, b, ray_a, ray_b, shared});
    }
  }
  sys.B = Mat::Zero(rows.size(), n);
  for (std::size_t k = 0; k < rows.size(); ++k) sys.B.row(k) = rows[k];
  return sys;
}

double max_linear_over_cone_cap(const Fan& fan, int cell, const Vec& r) {
  const int d = fan.dim();
  const Mat& M = fan.generators(cell);
  const double rnorm = r.norm();
  if (rnorm == 0.0) return 0.0;
  const Vec full = fan.lu(cell).solve(r);
  if (full.minCoeff() >= -1e-12 * rnorm / fan.constants().min_ray_norm) return rnorm;

  // The maximizer lies in the relative interior of some proper face; on that
  // face it is the normalized projection of r onto the face's span.
  double best = 0.0;
  const unsigned full_mask = (1u << d) - 1u;
  for (unsigned mask = 1; mask < full_mask; ++mask) {
    std::vector<int> cols;
    for (int k = 0; k < d; ++k)
      if (mask & (1u << k)) cols.push_back(k);
    Mat G(d, cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) G.col(k) = M.col(cols[k]);
    const Vec alpha = G.colPivHouseholderQr().solve(r);
    if (alpha.minCoeff() < -1e-12 * rnorm / fan.constants().min_ray_norm) continue;
    const double value = (G * alpha.cwiseMax(0.0)).norm();
    best = std::max(best, value);
  }
  return best;
}

double c_delta(const Fan& fan) {
  double best = 0.0;
  for (int j = 0; j < fan.num_cells(); ++j) {
    const Mat& inv = fan.inverse(j);
    for (int k = 0; k < fan.dim(); ++k) {
      best = std::max(best, max_linear_over_cone_cap(fan, j, inv.row(k).transpose()));
    }
  }
  return best;
}

namespace {

// min over {h : rows h >= 0, |h|_inf <= 1} of <target, h>.
double cone_min(const Mat& rows, const Eigen::RowVectorXd& target) {
  LinearProgram lp;
  lp.c = target.transpose();
  lp.B = rows;
  set_box(lp, 1.0);
  const LPSolution sol = solve_lp(lp);
  return sol.objective;
}

}  // namespace

std::vector<int> irredundant_rows(const Mat& B) {
  const int p = static_cast<int>(B.rows());
  std::vector<int> candidates;
  for (int i = 0; i < p; ++i) {
    const double ni = B.row(i).norm();
    if (ni == 0.0) continue;
    bool parallel = false;
    for (int k : candidates) {
      const double nk = B.row(k).norm();
      if ((B.row(i) / ni - B.row(k) / nk).norm() < 1e-10) {
        parallel = true;
        break;
      }
    }
    if (!parallel) candidates.push_back(i);
  }
  std::vector<int> kept = candidates;
  for (std::size_t pos = 0; pos < kept.size();) {
    const int i = kept[pos];
    Mat others(kept.size() - 1, B.cols());
    for (std::size_t k = 0, r = 0; k < kept.size(); ++k)
      if (k != pos) others.row(r++) = B.row(kept[k]);
    const Eigen::RowVectorXd row = B.row(i) / B.row(i).norm();
    if (others.rows() > 0 && cone_min(others, row) >= -1e-9) {
      kept.erase(kept.begin() + pos);
    } else {
      ++pos;
    }
  }
  return kept;
}

bool cone_contains(const Mat& outer, const Mat& inner, double tol) {
  for (int i = 0; i < outer.rows(); ++i) {
    const double norm = outer.row(i).norm();
    if (norm == 0.0) continue;
    if (cone_min(inner, outer.row(i) / norm) < -tol) return false;
  }
  return true;
}

std::string format_inequality(const Eigen::RowVectorXd& row) {
  auto coefficient = [](double c) {
    std::ostringstream os;
    const double a = std::abs(c);
    if (std::abs(a - std::round(a)) <= 1e-9 * std::max(1.0, a)) {
      const long v = std::lround(a);
      if (v != 1) os << v << ' ';
    } else {
      os.precision(17);
      os << a << ' ';
    }
    return os.str();
  };
  std::ostringstream os;
  bool first = true;
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < row.size(); ++i) {
      const double c = row(i);
      if (std::abs(c) <= 1e-12) continue;
      if ((pass == 0) != (c > 0)) continue;
      if (first) os << (c < 0 ? "-" : "");
      else os << (c < 0 ? " - " : " + ");
      os << coefficient(c) << 'h' << (i + 1);
      first = false;
    }
  }
  if (first) os << '0';
  os << " >= 0";
  return os.str();
}

}  // namespace polyrecon
