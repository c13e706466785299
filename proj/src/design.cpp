#include "polyrecon/design.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace polyrecon {

void Dataset::check(int dim) const {
  if (directions.empty()) throw InvalidArgument("dataset is empty");
  if (static_cast<std::size_t>(values.size()) != directions.size())
    throw InvalidArgument("dataset has " + std::to_string(directions.size()) + " directions but " +
                          std::to_string(values.size()) + " values");
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (directions[i].size() != dim)
      throw InvalidArgument("direction " + std::to_string(i) + " has " + std::to_string(directions[i].size()) +
                            " components, expected " + std::to_string(dim));
    if (!(directions[i].norm() > 0.0)) throw InvalidArgument("direction " + std::to_string(i) + " is zero");
  }
}

DesignMatrix build_design(const Fan& fan, const std::vector<Vec>& directions) {
  const int m = static_cast<int>(directions.size());
  DesignMatrix out;
  out.A.resize(m, fan.num_rays());
  out.A.reserve(Eigen::VectorXi::Constant(m, fan.dim()));
  out.carrier_cells.resize(m);
  for (int i = 0; i < m; ++i) {
    BarycentricVector bary;
    try {
      bary = carrier(fan, directions[i]);
    } catch (const NoCarrier& e) {
      throw NoCarrier("build_design: sample " + std::to_string(i) + " has no carrier", i);
    }
    out.carrier_cells[i] = bary.cell;
    for (std::size_t k = 0; k < bary.rays.size(); ++k) {
      if (bary.weights(k) != 0.0) out.A.insert(i, bary.rays[k]) = bary.weights(k);
    }
  }
  out.A.makeCompressed();
  return out;
}

int DirectionGraph::num_edges() const {
  int e = 0;
  for (const auto& adj : adjacency) e += static_cast<int>(adj.size());
  return e;
}

DirectionGraph direction_graph(const DesignMatrix& design) {
  DirectionGraph g;
  g.num_rays = design.cols();
  g.num_samples = design.rows();
  g.adjacency.assign(g.num_rays, {});
  for (int j = 0; j < design.A.outerSize(); ++j) {
    for (SparseMat::InnerIterator it(design.A, j); it; ++it) {
      if (it.value() > 1e-12) g.adjacency[it.col()].push_back(j);
    }
  }
  return g;
}

DirectionGraph ray_facet_graph(const Fan& fan) {
  DirectionGraph g;
  g.num_rays = fan.num_rays();
  g.num_samples = fan.num_cells();
  g.adjacency.assign(g.num_rays, {});
  for (int j = 0; j < fan.num_cells(); ++j)
    for (int idx : fan.cell(j)) g.adjacency[idx].push_back(j);
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

Matching max_matching(const DirectionGraph& graph) {
  Matching m;
  m.ray_to_sample.assign(graph.num_rays, -1);
  m.sample_to_ray.assign(graph.num_samples, -1);
  std::vector<int> visited(graph.num_samples, -1);

  std::function<bool(int, int)> augment = [&](int ray, int stamp) {
    for (int s : graph.adjacency[ray]) {
      if (visited[s] == stamp) continue;
      visited[s] = stamp;
      if (m.sample_to_ray[s] < 0 || augment(m.sample_to_ray[s], stamp)) {
        m.sample_to_ray[s] = ray;
        m.ray_to_sample[ray] = s;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < graph.num_rays; ++i) {
    if (augment(i, i)) ++m.size;
  }
  return m;
}

RankInfo numeric_rank(const DesignMatrix& design) {
  const Mat A = Mat(design.A);
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  RankInfo info;
  double colmax = 0.0;
  for (int j = 0; j < n; ++j) colmax = std::max(colmax, A.col(j).norm());
  info.threshold = std::max(m, n) * std::numeric_limits<double>::epsilon() * colmax;

  Eigen::ColPivHouseholderQR<Mat> qr(A);
  const int k = std::min(m, n);
  const Mat& QR = qr.matrixQR();
  for (int i = 0; i < k; ++i)
    if (std::abs(QR(i, i)) > info.threshold) ++info.rank;

  if (info.rank < n) {
    // ker A = ker (R P^T); R is the top n rows of the factor (zero-padded when m < n).
    Mat R = Mat::Zero(n, n);
    R.topRows(k) = QR.topRows(k).triangularView<Eigen::Upper>();
    const Mat RPt = R * qr.colsPermutation().transpose();
    Eigen::JacobiSVD<Mat> svd(RPt, Eigen::ComputeFullV);
    info.kernel_basis = svd.matrixV().rightCols(n - info.rank);
    for (int c = 0; c < info.kernel_basis.cols(); ++c) {
      for (int r = 0; r < n; ++r) {
        if (std::abs(info.kernel_basis(r, c)) > 1e-12) {
          if (info.kernel_basis(r, c) < 0) info.kernel_basis.col(c) *= -1.0;
          break;
        }
      }
    }
  } else {
    info.kernel_basis = Mat::Zero(n, 0);
  }
  return info;
}

UniquenessReport uniqueness_report(const Fan& fan, const DesignMatrix& design) {
  UniquenessReport r;
  const RankInfo rank = numeric_rank(design);
  r.numeric_rank = rank.rank;
  r.kernel_basis = rank.kernel_basis;
  r.matching_size = max_matching(direction_graph(design)).size;
  r.cells_covered.assign(fan.num_cells(), false);
  for (int i = 0; i < design.A.outerSize(); ++i) {
    int positive = 0;
    for (SparseMat::InnerIterator it(design.A, i); it; ++it) positive += it.value() > 1e-12;
    if (positive == fan.dim()) r.cells_covered[design.carrier_cells[i]] = true;
  }
  r.unique_for_all_y = r.numeric_rank == design.cols();
  return r;
}

}  // namespace polyrecon
