#include "activedt/hypothesis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>

#include "activedt/errors.hpp"

namespace activedt {

NodePtr TreeNode::leaf(Label label) {
  auto node = std::make_shared<TreeNode>();
  node->is_leaf = true;
  node->label = label;
  return node;
}

NodePtr TreeNode::split(std::size_t dimension, double threshold, NodePtr no, NodePtr yes) {
  auto node = std::make_shared<TreeNode>();
  node->is_leaf = false;
  node->dimension = dimension;
  node->threshold = threshold;
  node->no = std::move(no);
  node->yes = std::move(yes);
  return node;
}

namespace {

int node_height(const TreeNode& node) {
  if (node.is_leaf) return 0;
  return 1 + std::max(node_height(*node.no), node_height(*node.yes));
}

void collect_leaves(const TreeNode& node, std::vector<Label>& out) {
  if (node.is_leaf) {
    out.push_back(node.label);
    return;
  }
  collect_leaves(*node.no, out);
  collect_leaves(*node.yes, out);
}

std::size_t count_leaves(const TreeNode& node) {
  if (node.is_leaf) return 1;
  return count_leaves(*node.no) + count_leaves(*node.yes);
}

bool distinct_on_paths(const TreeNode& node, std::vector<char>& used) {
  if (node.is_leaf) return true;
  if (node.dimension >= used.size() || used[node.dimension]) return false;
  used[node.dimension] = 1;
  const bool ok = distinct_on_paths(*node.no, used) && distinct_on_paths(*node.yes, used);
  used[node.dimension] = 0;
  return ok;
}

std::size_t max_dimension(const TreeNode& node) {
  if (node.is_leaf) return 0;
  return std::max({node.dimension + 1, max_dimension(*node.no), max_dimension(*node.yes)});
}

}  // namespace

DecisionTree::DecisionTree(NodePtr root, std::size_t dim, int depth_bound, bool unique_dims)
    : root_(std::move(root)), dim_(dim), depth_bound_(depth_bound), unique_dims_(unique_dims) {
  if (!root_) throw std::invalid_argument("decision tree requires a root node");
  if (max_dimension(*root_) > dim_) {
    throw std::invalid_argument("tree tests a dimension outside its input space");
  }
  if (height() > depth_bound_) throw std::invalid_argument("tree height exceeds depth bound");
  if (unique_dims_ && !paths_use_distinct_dims()) {
    throw std::invalid_argument("tree repeats a dimension on a root-to-leaf path");
  }
}

int DecisionTree::height() const { return node_height(*root_); }

std::size_t DecisionTree::leaf_count() const { return count_leaves(*root_); }

std::vector<Label> DecisionTree::leaf_labels() const {
  std::vector<Label> out;
  collect_leaves(*root_, out);
  return out;
}

bool DecisionTree::paths_use_distinct_dims() const {
  std::vector<char> used(dim_, 0);
  return distinct_on_paths(*root_, used);
}

void DecisionTree::check_point(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("point dimensionality " + std::to_string(x.size()) +
                                " does not match tree input dimension " + std::to_string(dim_));
  }
}

Label DecisionTree::eval(std::span<const double> x) const {
  check_point(x);
  const TreeNode* node = root_.get();
  while (!node->is_leaf) {
    node = node->threshold <= x[node->dimension] ? node->yes.get() : node->no.get();
  }
  return node->label;
}

std::size_t DecisionTree::leaf_of(std::span<const double> x) const {
  check_point(x);
  std::size_t offset = 0;
  const TreeNode* node = root_.get();
  while (!node->is_leaf) {
    if (node->threshold <= x[node->dimension]) {
      offset += count_leaves(*node->no);
      node = node->yes.get();
    } else {
      node = node->no.get();
    }
  }
  return offset;
}

namespace {

Label eval_stump(const Stump& s, const GridDataset& data, std::size_t i) {
  if (data.dim() != 1) throw std::invalid_argument("stumps require a 1-D dataset");
  if (s.index > data.size()) throw std::out_of_range("stump index exceeds dataset size");
  return (s.index == 0 || i + 1 >= s.index) ? 1 : 0;
}

}  // namespace

Label eval(const Hypothesis& h, const GridDataset& data, std::size_t i) {
  if (i >= data.size()) throw std::out_of_range("point index out of range");
  return std::visit(
      [&](const auto& hyp) -> Label {
        using T = std::decay_t<decltype(hyp)>;
        if constexpr (std::is_same_v<T, Stump>) {
          return eval_stump(hyp, data, i);
        } else {
          return hyp.eval(data.point(i));
        }
      },
      h);
}

Label eval(const Hypothesis& h, const GridDataset& data, std::span<const double> x) {
  return std::visit(
      [&](const auto& hyp) -> Label {
        using T = std::decay_t<decltype(hyp)>;
        if constexpr (std::is_same_v<T, Stump>) {
          if (data.dim() != 1 || x.size() != 1) {
            throw std::invalid_argument("stumps evaluate 1-D points only");
          }
          if (hyp.index > data.size()) throw std::out_of_range("stump index exceeds dataset size");
          if (hyp.index == 0) return 1;
          return x[0] >= data.value(hyp.index - 1) ? 1 : 0;
        } else {
          return hyp.eval(x);
        }
      },
      h);
}

BitVector labeling(const Hypothesis& h, const GridDataset& data) {
  BitVector out(data.size());
  if (const auto* s = std::get_if<Stump>(&h)) {
    if (data.dim() != 1) throw std::invalid_argument("stumps require a 1-D dataset");
    if (s->index > data.size()) throw std::out_of_range("stump index exceeds dataset size");
    const std::size_t first = s->index == 0 ? 0 : s->index - 1;
    for (std::size_t i = first; i < data.size(); ++i) out.set(i);
    return out;
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (eval(h, data, i) == 1) out.set(i);
  }
  return out;
}

std::vector<LineTree> line_trees_of(const DecisionTree& h) {
  const std::vector<Label> labels = h.leaf_labels();
  std::vector<LineTree> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out.push_back(LineTree{h, i, labels[i]});
  return out;
}

HypothesisClass::HypothesisClass(ClassKind kind, ClassSpec spec, std::size_t n)
    : kind_(kind), spec_(spec), n_(n), words_per_row_(BitVector::word_count(n)) {}

BitVector HypothesisClass::labeling(std::size_t i) const {
  BitVector out(n_);
  auto src = row(i);
  std::copy(src.begin(), src.end(), out.words().begin());
  return out;
}

void HypothesisClass::append(Hypothesis h, const BitVector& lab) {
  if (lab.size() != n_) throw std::invalid_argument("labeling length does not match class");
  members_.push_back(std::move(h));
  auto w = lab.words();
  bits_.insert(bits_.end(), w.begin(), w.end());
}

HypothesisClass HypothesisClass::from_members(ClassKind kind, ClassSpec spec,
                                              const GridDataset& data,
                                              std::span<const Hypothesis> candidates) {
  HypothesisClass out(kind, spec, data.size());
  std::unordered_set<BitVector, BitVectorHash> seen;
  for (const Hypothesis& h : candidates) {
    BitVector lab = activedt::labeling(h, data);
    if (seen.insert(lab).second) out.append(h, lab);
  }
  return out;
}

std::vector<Stump> enumerate_stumps(std::size_t n) {
  if (n == 0) throw std::invalid_argument("enumerate_stumps requires n >= 1");
  std::vector<Stump> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k].index = k;
  return out;
}

HypothesisClass stump_class(const GridDataset& data) {
  std::vector<Hypothesis> raw;
  for (const Stump& s : enumerate_stumps(data.size())) raw.emplace_back(s);
  return HypothesisClass::from_members(ClassKind::stump, ClassSpec{1, 1, true}, data, raw);
}

namespace {

struct Entry {
  BitVector bits;
  NodePtr node;
};

/// Builds the labelings realizable on a region bottom-up: the labelings of a
/// split are unions of the children's (already deduplicated) labelings.
class TreeEnumerator {
 public:
  TreeEnumerator(const GridDataset& data, bool unique_dims, std::size_t cap)
      : data_(data), unique_dims_(unique_dims), cap_(cap), used_(data.dim(), 0) {
    const std::size_t n = data.size();
    splits_.resize(data.dim());
    for (std::size_t axis = 0; axis < data.dim(); ++axis) {
      std::vector<double> values = data.axis_values(axis);
      values.push_back(values.back() + 1.0);
      for (double t : values) {
        BitVector yes(n);
        for (std::size_t i = 0; i < n; ++i) {
          if (t <= data.coord(i, axis)) yes.set(i);
        }
        splits_[axis].push_back({t, std::move(yes)});
      }
    }
  }

  std::vector<Entry> run(const BitVector& region, int depth) {
    std::vector<Entry> result;
    std::unordered_map<BitVector, std::size_t, BitVectorHash> index;
    auto add = [&](BitVector bits, NodePtr node) {
      if (index.emplace(bits, result.size()).second) {
        result.push_back({std::move(bits), std::move(node)});
        if (result.size() > cap_) {
          throw BudgetExceeded("tree class exceeds member cap " + std::to_string(cap_));
        }
      }
    };
    add(BitVector(region.size()), TreeNode::leaf(0));
    add(region, TreeNode::leaf(1));
    if (depth == 0) return result;

    for (std::size_t axis = 0; axis < data_.dim(); ++axis) {
      if (unique_dims_ && used_[axis]) continue;
      std::unordered_set<BitVector, BitVectorHash> partitions;
      for (const auto& [threshold, global_yes] : splits_[axis]) {
        BitVector yes = region & global_yes;
        // Splits with an empty side realize nothing a shallower subtree cannot.
        if (yes.none() || yes == region) continue;
        if (!partitions.insert(yes).second) continue;
        BitVector no = region ^ yes;

        const char saved = used_[axis];
        used_[axis] = 1;
        std::vector<Entry> no_side = run(no, depth - 1);
        std::vector<Entry> yes_side = run(yes, depth - 1);
        used_[axis] = saved;

        for (const Entry& a : no_side) {
          for (const Entry& b : yes_side) {
            add(a.bits | b.bits, TreeNode::split(axis, threshold, a.node, b.node));
          }
        }
      }
    }
    return result;
  }

 private:
  const GridDataset& data_;
  bool unique_dims_;
  std::size_t cap_;
  std::vector<char> used_;
  std::vector<std::vector<std::pair<double, BitVector>>> splits_;
};

}  // namespace

HypothesisClass enumerate_trees(const GridDataset& data, int d, bool unique_dims,
                                std::size_t member_cap) {
  if (d < 0) throw std::invalid_argument("tree depth bound must be >= 0");
  TreeEnumerator enumerator(data, unique_dims, member_cap);
  std::vector<Entry> entries = enumerator.run(BitVector(data.size(), true), d);
  HypothesisClass out(ClassKind::tree, ClassSpec{d, data.dim(), unique_dims}, data.size());
  for (Entry& e : entries) {
    out.append(DecisionTree(e.node, data.dim(), d, unique_dims), e.bits);
  }
  return out;
}

HypothesisClass line_tree_class(const GridDataset& data, const HypothesisClass& trees,
                                std::size_t member_cap) {
  HypothesisClass out(ClassKind::line_tree, trees.spec(), data.size());
  std::unordered_set<BitVector, BitVectorHash> seen;
  for (std::size_t m = 0; m < trees.size(); ++m) {
    const auto* tree = std::get_if<DecisionTree>(&trees.member(m));
    if (tree == nullptr) throw std::invalid_argument("line_tree_class requires a tree class");
    for (LineTree& lt : line_trees_of(*tree)) {
      Hypothesis h = std::move(lt);
      BitVector lab = labeling(h, data);
      if (seen.insert(lab).second) {
        out.append(std::move(h), lab);
        if (out.size() > member_cap) {
          throw BudgetExceeded("line-tree class exceeds member cap " + std::to_string(member_cap));
        }
      }
    }
  }
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

double err(const BitVector& lab, const BitVector& labels, std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("error over an empty subset is undefined");
  std::size_t wrong = 0;
  for (std::size_t i : subset) wrong += lab.test(i) != labels.test(i) ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(subset.size());
}

double err(const Hypothesis& h, const GridDataset& data, const BitVector& labels,
           std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("error over an empty subset is undefined");
  std::size_t wrong = 0;
  for (std::size_t i : subset) {
    wrong += eval(h, data, i) != static_cast<Label>(labels.test(i)) ? 1 : 0;
  }
  return static_cast<double>(wrong) / static_cast<double>(subset.size());
}

double distance(const BitVector& a, const BitVector& b, std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("distance over an empty set is undefined");
  std::size_t diff = 0;
  for (std::size_t i : subset) diff += a.test(i) != b.test(i) ? 1 : 0;
  return static_cast<double>(diff) / static_cast<double>(subset.size());
}

double distance(const Hypothesis& h1, const Hypothesis& h2, const GridDataset& data,
                std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("distance over an empty set is undefined");
  std::size_t diff = 0;
  for (std::size_t i : subset) diff += eval(h1, data, i) != eval(h2, data, i) ? 1 : 0;
  return static_cast<double>(diff) / static_cast<double>(subset.size());
}

namespace {

nlohmann::json node_to_json(const TreeNode& node) {
  if (node.is_leaf) return {{"leaf", true}, {"label", node.label}};
  return {{"dimension", node.dimension},
          {"threshold", node.threshold},
          {"no", node_to_json(*node.no)},
          {"yes", node_to_json(*node.yes)}};
}

NodePtr node_from_json(const nlohmann::json& j) {
  if (j.value("leaf", false)) return TreeNode::leaf(j.at("label").get<Label>());
  return TreeNode::split(j.at("dimension").get<std::size_t>(), j.at("threshold").get<double>(),
                         node_from_json(j.at("no")), node_from_json(j.at("yes")));
}

nlohmann::json tree_to_json(const DecisionTree& t) {
  return {{"type", "tree"},
          {"dim", t.dim()},
          {"depth_bound", t.depth_bound()},
          {"unique_dims", t.unique_dims()},
          {"root", node_to_json(*t.root())}};
}

DecisionTree tree_from_json(const nlohmann::json& j) {
  return DecisionTree(node_from_json(j.at("root")), j.at("dim").get<std::size_t>(),
                      j.at("depth_bound").get<int>(), j.value("unique_dims", false));
}

}  // namespace

nlohmann::json to_json(const Hypothesis& h) {
  return std::visit(
      [](const auto& hyp) -> nlohmann::json {
        using T = std::decay_t<decltype(hyp)>;
        if constexpr (std::is_same_v<T, Stump>) {
          return {{"type", "stump"}, {"index", hyp.index}};
        } else if constexpr (std::is_same_v<T, DecisionTree>) {
          return tree_to_json(hyp);
        } else {
          return {{"type", "line_tree"},
                  {"leaf_index", hyp.leaf_index},
                  {"label", hyp.label},
                  {"base", tree_to_json(hyp.base)}};
        }
      },
      h);
}

Hypothesis hypothesis_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "stump") return Stump{j.at("index").get<std::size_t>()};
  if (type == "tree") return tree_from_json(j);
  if (type == "line_tree") {
    return LineTree{tree_from_json(j.at("base")), j.at("leaf_index").get<std::size_t>(),
                    j.at("label").get<Label>()};
  }
  throw std::invalid_argument("unknown hypothesis type: " + type);
}

}  // namespace activedt
