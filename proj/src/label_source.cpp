#include "activedt/label_source.hpp"

#include <random>
#include <stdexcept>

#include "activedt/random.hpp"

namespace activedt {

namespace {

std::shared_ptr<const BitVector> realize(const GridDataset& data, const Hypothesis& h_star,
                                         double noise, std::uint64_t seed) {
  if (!(noise >= 0.0 && noise <= 1.0)) throw std::invalid_argument("noise must lie in [0, 1]");
  BitVector labels = labeling(h_star, data);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (unit(rng) < noise) labels.set(i, !labels.test(i));
  }
  return std::make_shared<const BitVector>(std::move(labels));
}

}  // namespace

LabelSource::LabelSource(std::shared_ptr<const BitVector> labels, double noise,
                         std::uint64_t seed, bool charge_once)
    : labels_(std::move(labels)), noise_(noise), seed_(seed), charge_once_(charge_once) {
  if (charge_once_) charged_ = BitVector(labels_->size());
}

LabelSource::LabelSource(const GridDataset& data, const Hypothesis& h_star, double noise,
                         std::uint64_t seed, bool charge_once)
    : LabelSource(realize(data, h_star, noise, seed), noise, seed, charge_once) {}

LabelSource LabelSource::from_labels(BitVector labels, bool charge_once) {
  return LabelSource(std::make_shared<const BitVector>(std::move(labels)), 0.0, 0, charge_once);
}

Label LabelSource::query(std::size_t index) {
  if (index >= labels_->size()) throw std::out_of_range("query index out of range");
  if (charge_once_) {
    if (!charged_.test(index)) {
      charged_.set(index);
      ++queries_;
    }
  } else {
    ++queries_;
  }
  return labels_->test(index) ? 1 : 0;
}

LabelSource LabelSource::fresh() const {
  return LabelSource(labels_, noise_, seed_, charge_once_);
}

LabelSource make_label_source(const GridDataset& data, const Hypothesis& h_star, double noise,
                              std::uint64_t seed) {
  return LabelSource(data, h_star, noise, seed);
}

GridDataset build_dataset(const DatasetDescriptor& desc) {
  switch (desc.kind) {
    case DatasetKind::grid:
      return make_grid(desc.w, desc.dim);
    case DatasetKind::diagonal:
      return make_diagonal(desc.n, desc.dim);
    case DatasetKind::sorted1d:
      return make_line(desc.n);
  }
  throw std::invalid_argument("unknown dataset kind");
}

nlohmann::json to_json(const DatasetDescriptor& desc) {
  nlohmann::json j{{"kind", to_string(desc.kind)}, {"w", desc.w},         {"dim", desc.dim},
                   {"n", desc.n},                  {"seed", desc.seed},   {"noise", desc.noise}};
  j["h_star"] = desc.h_star ? to_json(*desc.h_star) : nlohmann::json(nullptr);
  return j;
}

DatasetDescriptor descriptor_from_json(const nlohmann::json& j) {
  DatasetDescriptor d;
  d.kind = dataset_kind_from_string(j.at("kind").get<std::string>());
  d.dim = j.value("dim", std::size_t{1});
  d.w = j.value("w", std::size_t{0});
  d.n = j.value("n", std::size_t{0});
  d.seed = j.value("seed", std::uint64_t{0});
  d.noise = j.value("noise", 0.0);
  if (j.contains("h_star") && !j.at("h_star").is_null()) {
    d.h_star = hypothesis_from_json(j.at("h_star"));
  }
  if (d.kind == DatasetKind::grid) {
    if (d.w == 0) throw std::invalid_argument("grid descriptor requires w >= 1");
    std::size_t n = 1;
    for (std::size_t k = 0; k < d.dim; ++k) n *= d.w;
    if (d.n != 0 && d.n != n) throw std::invalid_argument("grid descriptor n must equal w^dim");
    d.n = n;
  } else {
    if (d.n == 0) throw std::invalid_argument("descriptor requires n >= 1");
    if (d.w != 0 && d.w != d.n) throw std::invalid_argument("descriptor w must equal n");
    d.w = d.n;
  }
  if (!(d.noise >= 0.0 && d.noise <= 1.0)) throw std::invalid_argument("noise must lie in [0, 1]");
  return d;
}

}  // namespace activedt
