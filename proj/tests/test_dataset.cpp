#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "activedt/dataset.hpp"
#include "activedt/errors.hpp"
#include "activedt/label_source.hpp"
#include "activedt/random.hpp"

using namespace activedt;

namespace {

std::vector<std::vector<double>> points_of(const GridDataset& d) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto p = d.point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

}  // namespace

TEST(MakeGrid, TwoByTwo) {
  const GridDataset g = make_grid(2, 2);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.dim(), 2u);
  EXPECT_EQ(g.width(), 2u);
  const std::vector<std::vector<double>> want{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  EXPECT_EQ(points_of(g), want);
}

TEST(MakeGrid, OneDimensional) {
  const std::vector<std::vector<double>> want{{1}, {2}, {3}};
  EXPECT_EQ(points_of(make_grid(3, 1)), want);
}

TEST(MakeGrid, CubeHasEveryCellOnce) {
  const GridDataset g = make_grid(4, 3);
  ASSERT_EQ(g.size(), 64u);
  std::set<std::vector<double>> seen;
  for (const auto& p : points_of(g)) {
    for (double c : p) {
      EXPECT_GE(c, 1.0);
      EXPECT_LE(c, 4.0);
    }
    seen.insert(p);
  }
  EXPECT_EQ(seen.size(), 64u);
}

TEST(MakeGrid, BudgetExceeded) {
  EXPECT_THROW(make_grid(10, 4, 1000), BudgetExceeded);
  EXPECT_NO_THROW(make_grid(10, 3, 1000));
  EXPECT_THROW(make_grid(0, 2), std::invalid_argument);
  EXPECT_THROW(make_grid(2, 0), std::invalid_argument);
}

TEST(MakeDiagonal, Examples) {
  const std::vector<std::vector<double>> a{{1, 1}, {2, 2}, {3, 3}};
  EXPECT_EQ(points_of(make_diagonal(3, 2)), a);
  const std::vector<std::vector<double>> b{{1, 1, 1, 1, 1}};
  EXPECT_EQ(points_of(make_diagonal(1, 5)), b);
  const std::vector<std::vector<double>> c{{1}, {2}, {3}, {4}, {5}};
  EXPECT_EQ(points_of(make_diagonal(5, 1)), c);
  EXPECT_EQ(make_diagonal(7, 3).width(), 7u);
}

TEST(MakeSorted1d, RejectsUnsortedAndDuplicates) {
  EXPECT_NO_THROW(make_sorted1d({-2.5, 0.0, 3.25}));
  EXPECT_THROW(make_sorted1d({1.0, 1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(make_sorted1d({2.0, 1.0}), std::invalid_argument);
  const GridDataset d = make_sorted1d({-2.5, 0.0, 3.25});
  EXPECT_EQ(d.kind(), DatasetKind::sorted1d);
  EXPECT_DOUBLE_EQ(d.value(2), 3.25);
}

TEST(WeightedDataset, ValidatesWeights) {
  EXPECT_NO_THROW(WeightedDataset(make_line(3), {1.0, 2.0, 1.5}, 2.0));
  EXPECT_THROW(WeightedDataset(make_line(3), {1.0, 2.5, 1.5}, 2.0), std::invalid_argument);
  EXPECT_THROW(WeightedDataset(make_line(3), {0.5, 1.0, 1.0}, 2.0), std::invalid_argument);
  EXPECT_THROW(WeightedDataset(make_line(3), {1.0, 1.0}, 2.0), std::invalid_argument);
  EXPECT_THROW(WeightedDataset(make_line(3), {1.0, 1.0, 1.0}, 0.5), std::invalid_argument);
  const WeightedDataset w(make_line(3), {1.0, 2.0, 1.5}, 2.0);
  EXPECT_DOUBLE_EQ(w.total_weight(), 4.5);
}

TEST(LabelSource, NoiselessMatchesTarget) {
  const GridDataset d = make_line(50);
  const LabelSource s = make_label_source(d, Stump{20}, 0.0, 11);
  EXPECT_EQ(s.realized_labels(), labeling(Stump{20}, d));
}

TEST(LabelSource, FullNoiseFlipsEverything) {
  const GridDataset d = make_line(50);
  const LabelSource s = make_label_source(d, Stump{20}, 1.0, 11);
  EXPECT_EQ(s.realized_labels(), ~labeling(Stump{20}, d));
}

TEST(LabelSource, FlipFractionNearNoiseRate) {
  const GridDataset d = make_line(100000);
  const LabelSource s = make_label_source(d, Stump{500}, 0.1, 2024);
  const double flips =
      static_cast<double>((s.realized_labels() ^ labeling(Stump{500}, d)).count()) / 100000.0;
  EXPECT_GE(flips, 0.09);
  EXPECT_LE(flips, 0.11);
}

TEST(LabelSource, RejectsBadNoise) {
  const GridDataset d = make_line(5);
  EXPECT_THROW(make_label_source(d, Stump{1}, -0.1, 0), std::invalid_argument);
  EXPECT_THROW(make_label_source(d, Stump{1}, 1.5, 0), std::invalid_argument);
}

TEST(LabelSource, QueryCounting) {
  const GridDataset d = make_line(10);
  LabelSource s = make_label_source(d, Stump{4}, 0.3, 5);
  const Label first = s.query(3);
  EXPECT_EQ(s.query(3), first);
  EXPECT_EQ(s.query_count(), 2u);
  for (std::size_t i = 0; i < 10; ++i) s.query(i);
  EXPECT_EQ(s.query_count(), 12u);
  EXPECT_THROW(s.query(10), std::out_of_range);
  EXPECT_EQ(s.query_count(), 12u);
}

TEST(LabelSource, AllOnesStumpAnswersOne) {
  const GridDataset d = make_line(20);
  LabelSource s = make_label_source(d, Stump{0}, 0.0, 1);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(s.query(i), 1);
  EXPECT_EQ(s.query_count(), 20u);
}

TEST(LabelSource, ChargeOnceMode) {
  const GridDataset d = make_line(10);
  LabelSource s(d, Stump{4}, 0.0, 5, /*charge_once=*/true);
  s.query(1);
  s.query(1);
  s.query(2);
  EXPECT_EQ(s.query_count(), 2u);
}

TEST(LabelSource, DeterministicFromArguments) {
  const GridDataset d = make_line(1000);
  const LabelSource a = make_label_source(d, Stump{300}, 0.2, 77);
  const LabelSource b = make_label_source(d, Stump{300}, 0.2, 77);
  const LabelSource c = make_label_source(d, Stump{300}, 0.2, 78);
  EXPECT_EQ(a.realized_labels(), b.realized_labels());
  EXPECT_NE(a.realized_labels(), c.realized_labels());
}

TEST(LabelSource, FreshSharesLabelsAndResetsCount) {
  const GridDataset d = make_line(10);
  LabelSource s = make_label_source(d, Stump{4}, 0.5, 9);
  s.query(0);
  LabelSource f = s.fresh();
  EXPECT_EQ(f.query_count(), 0u);
  EXPECT_EQ(f.realized_labels(), s.realized_labels());
}

TEST(Sampling, FullAndEmptyDraws) {
  Rng rng(1);
  const std::vector<std::size_t> S{3, 8, 9, 15};
  EXPECT_EQ(sample_without_replacement(S, 4, rng), S);
  EXPECT_EQ(sample_without_replacement(S, 10, rng), S);
  EXPECT_TRUE(sample_without_replacement(S, 0, rng).empty());
  EXPECT_TRUE(sample_positions(0, 5, rng).empty());
}

TEST(Sampling, PairsAreUniform) {
  Rng rng(42);
  const std::vector<std::size_t> S{1, 2, 3};
  std::map<std::vector<std::size_t>, int> counts;
  const int draws = 6000;
  for (int t = 0; t < draws; ++t) counts[sample_without_replacement(S, 2, rng)]++;
  ASSERT_EQ(counts.size(), 3u);
  for (const auto& [pair, c] : counts) {
    EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 3.0, 0.02);
  }
}

TEST(Sampling, NoDuplicatesAndSubset) {
  Rng rng(3);
  std::vector<std::size_t> S;
  for (std::size_t i = 0; i < 500; i += 3) S.push_back(i);
  for (std::size_t a : {1u, 7u, 50u, 166u, 167u}) {
    const auto out = sample_without_replacement(S, a, rng);
    EXPECT_EQ(out.size(), std::min<std::size_t>(a, S.size()));
    EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
    EXPECT_EQ(std::adjacent_find(out.begin(), out.end()), out.end());
    for (std::size_t x : out) EXPECT_TRUE(std::binary_search(S.begin(), S.end(), x));
  }
}

TEST(Sampling, DeterministicGivenSeed) {
  Rng a(99), b(99);
  EXPECT_EQ(sample_positions(1000000, 50, a), sample_positions(1000000, 50, b));
}

TEST(Seeds, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 20; ++c) {
    for (std::uint64_t t = 0; t < 20; ++t) seen.insert(derive_seed(5, {c, t}));
  }
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_EQ(derive_seed(5, {1, 2}), derive_seed(5, {1, 2}));
  EXPECT_NE(derive_seed(5, {1, 2}), derive_seed(6, {1, 2}));
}

TEST(Descriptor, JsonRoundTrip) {
  DatasetDescriptor d;
  d.kind = DatasetKind::grid;
  d.w = 3;
  d.dim = 2;
  d.n = 9;
  d.seed = 17;
  d.noise = 0.25;
  d.h_star = Stump{2};
  const DatasetDescriptor back = descriptor_from_json(to_json(d));
  EXPECT_EQ(back.kind, d.kind);
  EXPECT_EQ(back.w, 3u);
  EXPECT_EQ(back.n, 9u);
  EXPECT_EQ(back.seed, 17u);
  EXPECT_DOUBLE_EQ(back.noise, 0.25);
  ASSERT_TRUE(back.h_star.has_value());
  EXPECT_EQ(std::get<Stump>(*back.h_star).index, 2u);
  EXPECT_EQ(build_dataset(back).size(), 9u);
}

TEST(Descriptor, RejectsInconsistentSizes) {
  nlohmann::json j{{"kind", "grid"}, {"w", 3}, {"dim", 2}, {"n", 10}};
  EXPECT_THROW(descriptor_from_json(j), std::invalid_argument);
  nlohmann::json k{{"kind", "sorted1d"}, {"n", 0}};
  EXPECT_THROW(descriptor_from_json(k), std::invalid_argument);
  nlohmann::json m{{"kind", "diagonal"}, {"n", 4}, {"dim", 2}, {"noise", 2.0}};
  EXPECT_THROW(descriptor_from_json(m), std::invalid_argument);
  nlohmann::json u{{"kind", "torus"}, {"n", 4}};
  EXPECT_THROW(descriptor_from_json(u), std::invalid_argument);
}
