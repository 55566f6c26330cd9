#include "activedt/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "activedt/errors.hpp"
#include "activedt/random.hpp"

namespace activedt {

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::grid:
      return "grid";
    case DatasetKind::diagonal:
      return "diagonal";
    case DatasetKind::sorted1d:
      return "sorted1d";
  }
  return "unknown";
}

DatasetKind dataset_kind_from_string(const std::string& s) {
  if (s == "grid") return DatasetKind::grid;
  if (s == "diagonal") return DatasetKind::diagonal;
  if (s == "sorted1d") return DatasetKind::sorted1d;
  throw std::invalid_argument("unknown dataset kind: " + s);
}

GridDataset::GridDataset(DatasetKind kind, std::size_t dim, std::size_t width,
                         std::vector<double> coords)
    : kind_(kind), dim_(dim), width_(width), n_(0), coords_(std::move(coords)) {
  if (dim_ == 0) throw std::invalid_argument("dataset dimension must be >= 1");
  if (coords_.size() % dim_ != 0) {
    throw std::invalid_argument("coordinate buffer is not a multiple of dim");
  }
  n_ = coords_.size() / dim_;
  if (n_ == 0) throw std::invalid_argument("dataset must contain at least one point");
}

std::vector<double> GridDataset::axis_values(std::size_t axis) const {
  std::vector<double> vals;
  vals.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) vals.push_back(coord(i, axis));
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

namespace {

std::size_t checked_power(std::size_t w, std::size_t dim, std::size_t cap) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    if (n > cap / w) {
      throw BudgetExceeded("grid of width " + std::to_string(w) + " and dim " +
                           std::to_string(dim) + " exceeds point cap " + std::to_string(cap));
    }
    n *= w;
  }
  if (n > cap) throw BudgetExceeded("grid exceeds point cap " + std::to_string(cap));
  return n;
}

}  // namespace

GridDataset make_grid(std::size_t w, std::size_t dim, std::size_t point_cap) {
  if (w == 0 || dim == 0) throw std::invalid_argument("make_grid requires w >= 1 and dim >= 1");
  const std::size_t n = checked_power(w, dim, point_cap);
  std::vector<double> coords(n * dim);
  std::vector<std::size_t> digits(dim, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < dim; ++a) coords[i * dim + a] = static_cast<double>(digits[a]);
    for (std::size_t a = dim; a-- > 0;) {
      if (++digits[a] <= w) break;
      digits[a] = 1;
    }
  }
  return GridDataset(DatasetKind::grid, dim, w, std::move(coords));
}

GridDataset make_diagonal(std::size_t n, std::size_t dim, std::size_t point_cap) {
  if (n == 0 || dim == 0) {
    throw std::invalid_argument("make_diagonal requires n >= 1 and dim >= 1");
  }
  if (n > point_cap || dim > point_cap / n) {
    throw BudgetExceeded("diagonal dataset exceeds point cap " + std::to_string(point_cap));
  }
  std::vector<double> coords(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill_n(coords.begin() + static_cast<std::ptrdiff_t>(i * dim), dim,
                static_cast<double>(i + 1));
  }
  return GridDataset(DatasetKind::diagonal, dim, n, std::move(coords));
}

GridDataset make_sorted1d(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("sorted 1-D dataset must be non-empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) {
      throw std::invalid_argument("sorted 1-D dataset requires strictly increasing values");
    }
  }
  const std::size_t n = values.size();
  return GridDataset(DatasetKind::sorted1d, 1, n, std::move(values));
}

GridDataset make_line(std::size_t n) {
  std::vector<double> values(n);
  std::iota(values.begin(), values.end(), 1.0);
  return make_sorted1d(std::move(values));
}

WeightedDataset::WeightedDataset(GridDataset base, std::vector<double> weights, double lambda)
    : base_(std::move(base)), weights_(std::move(weights)), lambda_(lambda), total_(0.0) {
  if (weights_.size() != base_.size()) {
    throw std::invalid_argument("weight vector length must equal dataset size");
  }
  if (!(lambda_ >= 1.0)) throw std::invalid_argument("lambda must be >= 1");
  for (double w : weights_) {
    if (!(w >= 1.0 && w <= lambda_)) {
      throw std::invalid_argument("weights must lie in [1, lambda]");
    }
    total_ += w;
  }
}

std::vector<std::size_t> sample_positions(std::size_t population, std::size_t a, Rng& rng) {
  a = std::min(a, population);
  std::vector<std::size_t> out;
  if (a == 0) return out;
  if (a == population) {
    out.resize(population);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  out.reserve(a);
  std::unordered_set<std::size_t> chosen;
  chosen.reserve(a * 2);
  for (std::size_t j = population - a; j < population; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(rng);
    if (chosen.insert(t).second) {
      out.push_back(t);
    } else {
      chosen.insert(j);
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> sample_without_replacement(std::span<const std::size_t> indices,
                                                    std::size_t a, Rng& rng) {
  std::vector<std::size_t> pos = sample_positions(indices.size(), a, rng);
  for (std::size_t& p : pos) p = indices[p];
  return pos;
}

}  // namespace activedt
