#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "activedt/bit_vector.hpp"
#include "activedt/dataset.hpp"
#include "activedt/hypothesis.hpp"
#include "json.hpp"

namespace activedt {

/// Hidden labels behind a query-counting oracle. Labels are realized once at
/// construction (h_star XOR independent Bernoulli(noise) flips) and never
/// change. Copies share the realized labels; each copy counts its own queries,
/// so concurrent trials should each work on their own copy.
class LabelSource {
 public:
  LabelSource(const GridDataset& data, const Hypothesis& h_star, double noise,
              std::uint64_t seed, bool charge_once = false);

  /// Wraps explicit labels (noise 0, no generating hypothesis).
  static LabelSource from_labels(BitVector labels, bool charge_once = false);

  /// Label of point `index`. Charges one query; in charge-once mode repeated
  /// queries of the same index are free.
  Label query(std::size_t index);

  std::size_t query_count() const { return queries_; }
  std::size_t size() const { return labels_->size(); }
  double noise() const { return noise_; }
  std::uint64_t seed() const { return seed_; }
  bool charge_once() const { return charge_once_; }

  /// Uncounted access for verification oracles; algorithms must use query().
  const BitVector& realized_labels() const { return *labels_; }

  /// A view over the same labels with a zero query count.
  LabelSource fresh() const;

 private:
  LabelSource(std::shared_ptr<const BitVector> labels, double noise, std::uint64_t seed,
              bool charge_once);

  std::shared_ptr<const BitVector> labels_;
  double noise_ = 0.0;
  std::uint64_t seed_ = 0;
  bool charge_once_ = false;
  std::size_t queries_ = 0;
  BitVector charged_;
};

LabelSource make_label_source(const GridDataset& data, const Hypothesis& h_star, double noise,
                              std::uint64_t seed);

/// Serializable recipe for a dataset plus its label source.
struct DatasetDescriptor {
  DatasetKind kind = DatasetKind::sorted1d;
  std::size_t w = 0;
  std::size_t dim = 1;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::optional<Hypothesis> h_star;
};

GridDataset build_dataset(const DatasetDescriptor& desc);

nlohmann::json to_json(const DatasetDescriptor& desc);
DatasetDescriptor descriptor_from_json(const nlohmann::json& j);

}  // namespace activedt
