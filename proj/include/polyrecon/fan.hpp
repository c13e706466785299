#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "polyrecon/types.hpp"

namespace polyrecon {

/// Ray generators plus maximal cells, each an ordered d-subset of ray indices.
/// Rays need not have unit length.
struct SimplicialFan {
  int dim = 0;
  std::vector<Vec> rays;
  std::vector<std::vector<int>> cells;

  bool operator==(const SimplicialFan& other) const;
};

struct ValidationOptions {
  /// Random unit vectors used by the completeness probe.
  int probe_samples = 1000;
  std::uint64_t seed = 0x0fa2c0de;
  /// Additionally check that every pair of cells meets in a common face (O(cells^2) LPs).
  bool strict = false;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const;
  std::string summary() const;
};

/// Report-style check of the necessary conditions for a complete simplicial fan.
ValidationReport validate(const SimplicialFan& fan, const ValidationOptions& opts = {});

/// Sparse barycentric coordinates [u] of a vector in its carrier cell.
struct BarycentricVector {
  int cell = -1;
  std::vector<int> rays;  // generators of `cell`, in cell order
  Vec weights;            // one nonnegative coefficient per entry of `rays`

  Vec dense(int num_rays) const;
  double dot(const Vec& h) const;
};

/// One wall-crossing inequality: the two cells, their non-shared generators
/// (ray_a in cell_a, ray_b in cell_b) and the shared ones.
struct Wall {
  int cell_a = -1;
  int cell_b = -1;
  int ray_a = -1;
  int ray_b = -1;
  std::vector<int> shared;
};

/// B with B h >= 0 exactly on the deformation cone; row k belongs to walls[k].
struct WallCrossingSystem {
  Mat B;
  std::vector<Wall> walls;
};

struct FanConstants {
  int dim = 0;
  int num_rays = 0;
  double c_delta = 0.0;
  double min_ray_norm = 0.0;
  double max_ray_norm = 0.0;
};

/// A fan that passed validation, with per-cell factorizations cached.
/// Immutable after construction and safe for concurrent readers.
class Fan {
 public:
  /// Throws InvalidFan carrying the validation summary.
  static Fan create(SimplicialFan raw, const ValidationOptions& opts = {});

  int dim() const { return raw_.dim; }
  int num_rays() const { return static_cast<int>(raw_.rays.size()); }
  int num_cells() const { return static_cast<int>(raw_.cells.size()); }
  const Vec& ray(int i) const { return raw_.rays[i]; }
  const std::vector<int>& cell(int j) const { return raw_.cells[j]; }
  const SimplicialFan& raw() const { return raw_; }
  const ValidationReport& report() const { return report_; }
  const FanConstants& constants() const { return constants_; }

  /// d x d matrix whose columns are the generators of cell j.
  const Mat& generators(int j) const { return generators_[j]; }
  const Eigen::PartialPivLU<Mat>& lu(int j) const { return lu_[j]; }
  const Mat& inverse(int j) const { return inverse_[j]; }

 private:
  Fan() = default;

  SimplicialFan raw_;
  ValidationReport report_;
  FanConstants constants_;
  std::vector<Mat> generators_;
  std::vector<Eigen::PartialPivLU<Mat>> lu_;
  std::vector<Mat> inverse_;
};

/// First cell (in fan order) with coefficients >= -tol; tiny coefficients are snapped to 0.
BarycentricVector carrier(const Fan& fan, const Vec& u);

WallCrossingSystem wall_crossings(const Fan& fan);

/// max { <r, u> : u in cell, |u| = 1 }, or 0 when that maximum is <= 0.
double max_linear_over_cone_cap(const Fan& fan, int cell, const Vec& r);

/// max over unit u and rays i of [u]_i, evaluated exactly cell by cell.
double c_delta(const Fan& fan);

/// Indices of an irredundant subset of rows describing the cone {h : B h >= 0}.
std::vector<int> irredundant_rows(const Mat& B);

/// True iff {h : inner h >= 0} is contained in {h : outer h >= 0}.
bool cone_contains(const Mat& outer, const Mat& inner, double tol = 1e-9);

/// "h1 + h3 - h2 >= 0" style rendering with 1-based ray indices.
std::string format_inequality(const Eigen::RowVectorXd& row);

}  // namespace polyrecon
