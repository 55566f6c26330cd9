#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace activedt {

enum class DatasetKind { grid, diagonal, sorted1d };

std::string to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(const std::string& s);

/// Default cap on the number of points a constructor may materialize.
inline constexpr std::size_t kDefaultPointCap = std::size_t{1} << 24;

/// A finite, ordered universe of points. Grid and diagonal datasets hold
/// integer coordinates in 1..w (1-based, as in the grid definition); the sorted
/// 1-D variant holds strictly increasing reals. Immutable after construction.
class GridDataset {
 public:
  GridDataset(DatasetKind kind, std::size_t dim, std::size_t width, std::vector<double> coords);

  DatasetKind kind() const { return kind_; }
  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  /// Per-axis width w. For the sorted 1-D variant this is n.
  std::size_t width() const { return width_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double coord(std::size_t i, std::size_t axis) const { return coords_[i * dim_ + axis]; }
  /// 1-D value X_{i+1} (0-based storage index i).
  double value(std::size_t i) const { return coords_[i * dim_]; }

  /// Sorted distinct coordinate values along one axis.
  std::vector<double> axis_values(std::size_t axis) const;

 private:
  DatasetKind kind_;
  std::size_t dim_;
  std::size_t width_;
  std::size_t n_;
  std::vector<double> coords_;
};

/// Full grid {1..w}^dim in lexicographic order (last axis fastest).
GridDataset make_grid(std::size_t w, std::size_t dim, std::size_t point_cap = kDefaultPointCap);

/// Points X_i = (i, i, ..., i) for i = 1..n, with w = n.
GridDataset make_diagonal(std::size_t n, std::size_t dim,
                          std::size_t point_cap = kDefaultPointCap);

/// 1-D dataset from strictly increasing values; duplicates or unsorted input
/// are rejected.
GridDataset make_sorted1d(std::vector<double> values);

/// The 1-D dataset 1, 2, ..., n.
GridDataset make_line(std::size_t n);

/// Per-point importance weights W_i in [1, lambda].
class WeightedDataset {
 public:
  WeightedDataset(GridDataset base, std::vector<double> weights, double lambda);

  const GridDataset& base() const { return base_; }
  std::span<const double> weights() const { return weights_; }
  double lambda() const { return lambda_; }
  double total_weight() const { return total_; }

 private:
  GridDataset base_;
  std::vector<double> weights_;
  double lambda_;
  double total_;
};

}  // namespace activedt
