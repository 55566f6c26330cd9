#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "activedt/bit_vector.hpp"
#include "activedt/dataset.hpp"
#include "json.hpp"

namespace activedt {

using Label = int;

/// Threshold classifier on sorted 1-D data: h(x) = 1 iff x >= X_index, with
/// X_0 = -infinity. Indices range over {0, ..., n}.
struct Stump {
  std::size_t index = 0;
  friend bool operator==(const Stump&, const Stump&) = default;
};

struct TreeNode;
using NodePtr = std::shared_ptr<const TreeNode>;

/// A node is either a leaf carrying a label or an axis test routing x to
/// `yes` iff threshold <= x[dimension]. Nodes are immutable and shared between
/// trees produced by enumeration.
struct TreeNode {
  bool is_leaf = true;
  Label label = 0;
  std::size_t dimension = 0;
  double threshold = 0.0;
  NodePtr no;
  NodePtr yes;

  static NodePtr leaf(Label label);
  static NodePtr split(std::size_t dimension, double threshold, NodePtr no, NodePtr yes);
};

class DecisionTree {
 public:
  DecisionTree(NodePtr root, std::size_t dim, int depth_bound, bool unique_dims);

  const NodePtr& root() const { return root_; }
  std::size_t dim() const { return dim_; }
  int depth_bound() const { return depth_bound_; }
  bool unique_dims() const { return unique_dims_; }

  int height() const;
  std::size_t leaf_count() const;
  /// Leaf labels in left-to-right order ("no" subtree before "yes").
  std::vector<Label> leaf_labels() const;
  bool paths_use_distinct_dims() const;

  Label eval(std::span<const double> x) const;
  /// Index of the leaf reached by x, in left-to-right order.
  std::size_t leaf_of(std::span<const double> x) const;

 private:
  void check_point(std::span<const double> x) const;

  NodePtr root_;
  std::size_t dim_;
  int depth_bound_;
  bool unique_dims_;
};

/// Agrees with the base tree's leaf label on points reaching `leaf_index`,
/// outputs the opposite label everywhere else.
struct LineTree {
  DecisionTree base;
  std::size_t leaf_index = 0;
  Label label = 0;

  Label eval(std::span<const double> x) const {
    return base.leaf_of(x) == leaf_index ? label : 1 - label;
  }
};

using Hypothesis = std::variant<Stump, DecisionTree, LineTree>;

/// Label of point i of the dataset.
Label eval(const Hypothesis& h, const GridDataset& data, std::size_t i);
/// Label of an arbitrary point. A stump is evaluated against the dataset's
/// sorted values, so `data` must be 1-D.
Label eval(const Hypothesis& h, const GridDataset& data, std::span<const double> x);

/// Labeling vector of h over every point of the dataset.
BitVector labeling(const Hypothesis& h, const GridDataset& data);

/// Line trees of every leaf of h, in leaf order.
std::vector<LineTree> line_trees_of(const DecisionTree& h);

enum class ClassKind { stump, tree, line_tree };

struct ClassSpec {
  int depth = 1;
  std::size_t dim = 1;
  bool unique_dims = true;
};

inline constexpr std::size_t kDefaultMemberCap = 200000;

/// A hypothesis class materialized against one dataset: members paired with
/// their labeling vectors, deduplicated so no two members share a labeling.
/// Member order is the canonical order (first enumeration occurrence).
class HypothesisClass {
 public:
  HypothesisClass(ClassKind kind, ClassSpec spec, std::size_t n);

  /// Dedups `candidates` by labeling on `data`, keeping first occurrences.
  static HypothesisClass from_members(ClassKind kind, ClassSpec spec, const GridDataset& data,
                                      std::span<const Hypothesis> candidates);

  ClassKind kind() const { return kind_; }
  const ClassSpec& spec() const { return spec_; }
  std::size_t points() const { return n_; }
  std::size_t size() const { return members_.size(); }
  std::size_t words_per_row() const { return words_per_row_; }

  const Hypothesis& member(std::size_t i) const { return members_[i]; }
  std::span<const BitVector::Word> row(std::size_t i) const {
    return {bits_.data() + i * words_per_row_, words_per_row_};
  }
  BitVector labeling(std::size_t i) const;
  Label label(std::size_t i, std::size_t point) const {
    return static_cast<Label>((row(i)[point / 64] >> (point % 64)) & 1U);
  }

  /// Appends a member; the caller guarantees its labeling is new.
  void append(Hypothesis h, const BitVector& lab);

 private:
  ClassKind kind_;
  ClassSpec spec_;
  std::size_t n_;
  std::size_t words_per_row_;
  std::vector<Hypothesis> members_;
  std::vector<BitVector::Word> bits_;
};

/// The raw stump index space {0, ..., n}.
std::vector<Stump> enumerate_stumps(std::size_t n);

/// Stumps on a 1-D dataset as a class. Stumps 0 and 1 both label every point
/// 1, so the deduplicated class has n members.
HypothesisClass stump_class(const GridDataset& data);

/// Every labeling realizable by a tree of height <= d over canonical
/// thresholds (distinct coordinate values plus one above the maximum).
HypothesisClass enumerate_trees(const GridDataset& data, int d, bool unique_dims,
                                std::size_t member_cap = kDefaultMemberCap);

/// All line trees of all members of a tree class, deduplicated.
HypothesisClass line_tree_class(const GridDataset& data, const HypothesisClass& trees,
                                std::size_t member_cap = kDefaultMemberCap);

/// Fraction of `subset` where `lab` disagrees with `labels`.
double err(const BitVector& lab, const BitVector& labels, std::span<const std::size_t> subset);
double err(const Hypothesis& h, const GridDataset& data, const BitVector& labels,
           std::span<const std::size_t> subset);

/// Fraction of `subset` on which h1 and h2 disagree.
double distance(const Hypothesis& h1, const Hypothesis& h2, const GridDataset& data,
                std::span<const std::size_t> subset);
double distance(const BitVector& a, const BitVector& b, std::span<const std::size_t> subset);

std::vector<std::size_t> all_indices(std::size_t n);

nlohmann::json to_json(const Hypothesis& h);
Hypothesis hypothesis_from_json(const nlohmann::json& j);

}  // namespace activedt
