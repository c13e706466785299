#pragma once

#include <vector>

#include "polyrecon/fan.hpp"
#include "polyrecon/types.hpp"

namespace polyrecon {

/// Support measurements: y_i is a (possibly noisy) value of h_P(u_i).
struct Dataset {
  std::vector<Vec> directions;
  Vec values;

  int size() const { return static_cast<int>(directions.size()); }
  /// Throws InvalidArgument unless m >= 1, every direction is nonzero with
  /// `dim` components, and the lengths agree.
  void check(int dim) const;
};

/// Rows are the barycentric vectors [u_i]; at most d nonzeros per row.
struct DesignMatrix {
  SparseMat A;
  std::vector<int> carrier_cells;

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
};

/// Throws NoCarrier with the offending row index.
DesignMatrix build_design(const Fan& fan, const std::vector<Vec>& directions);

/// Bipartite graph between rays [n] and samples [m].
struct DirectionGraph {
  int num_rays = 0;
  int num_samples = 0;
  /// adjacency[i] lists the samples joined to ray i, ascending.
  std::vector<std::vector<int>> adjacency;

  int num_edges() const;
};

/// Edge (i, j) iff (A)_{j i} > 1e-12.
DirectionGraph direction_graph(const DesignMatrix& design);

/// Ray-cell incidence graph; samples are the maximal cells.
DirectionGraph ray_facet_graph(const Fan& fan);

struct Matching {
  int size = 0;
  std::vector<int> ray_to_sample;  // -1 when unmatched
  std::vector<int> sample_to_ray;
};

/// Maximum-cardinality matching by augmenting paths in index order.
Matching max_matching(const DirectionGraph& graph);

struct RankInfo {
  int rank = 0;
  double threshold = 0.0;
  /// n x (n - rank), orthonormal columns spanning ker A.
  Mat kernel_basis;
};

/// Rank from a column-pivoted QR with threshold max(m, n) eps max_j |A e_j|.
RankInfo numeric_rank(const DesignMatrix& design);

struct UniquenessReport {
  int numeric_rank = 0;
  int matching_size = 0;
  std::vector<bool> cells_covered;
  bool unique_for_all_y = false;
  Mat kernel_basis;
};

UniquenessReport uniqueness_report(const Fan& fan, const DesignMatrix& design);

}  // namespace polyrecon
