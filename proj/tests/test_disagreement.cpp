#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "activedt/disagreement.hpp"
#include "activedt/errors.hpp"
#include "activedt/random.hpp"

using namespace activedt;

namespace {

/// Pairwise form: x is disputed iff some pair in V labels it differently.
BitVector dis_pairwise(const std::vector<BitVector>& V, const BitVector& S) {
  BitVector out(S.size());
  for (std::size_t i : S.indices()) {
    for (std::size_t a = 0; a < V.size() && !out.test(i); ++a) {
      for (std::size_t b = a + 1; b < V.size(); ++b) {
        if (V[a].test(i) != V[b].test(i)) {
          out.set(i);
          break;
        }
      }
    }
  }
  return out;
}

/// θ_h straight from the definition, scanning r = k/|S| with pairwise DIS.
double theta_oracle(const HypothesisClass& H, std::size_t center, const BitVector& S) {
  const auto pts = S.indices();
  const double pop = static_cast<double>(pts.size());
  const BitVector c = H.labeling(center);
  double best = 0.0;
  for (std::size_t k = 1; k <= pts.size(); ++k) {
    const double r = static_cast<double>(k) / pop;
    std::vector<BitVector> ball_members;
    for (std::size_t m = 0; m < H.size(); ++m) {
      if (distance(c, H.labeling(m), pts) <= r + 1e-12) ball_members.push_back(H.labeling(m));
    }
    const double dis = static_cast<double>(dis_pairwise(ball_members, S).count());
    best = std::max(best, dis / (r * pop));
  }
  return best;
}

HypothesisClass class_of(const std::vector<BitVector>& labelings) {
  HypothesisClass H(ClassKind::tree, ClassSpec{}, labelings.front().size());
  for (const BitVector& b : labelings) H.append(Stump{0}, b);
  return H;
}

BitVector random_labels(std::size_t n, Rng& rng, double p = 0.5) {
  BitVector b(n);
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i) b.set(i, coin(rng));
  return b;
}

std::size_t member_with(const HypothesisClass& H, const BitVector& lab) {
  for (std::size_t m = 0; m < H.size(); ++m) {
    if (H.labeling(m) == lab) return m;
  }
  return H.size();
}

std::size_t stump_member(const HypothesisClass& H, std::size_t index) {
  for (std::size_t m = 0; m < H.size(); ++m) {
    if (std::get<Stump>(H.member(m)).index == index) return m;
  }
  return H.size();
}

}  // namespace

TEST(DisRegion, SingletonIsEmpty) {
  const GridDataset d = make_line(10);
  const std::vector<BitVector> V{labeling(Stump{4}, d)};
  EXPECT_TRUE(dis_region(V, BitVector(10, true)).none());
}

TEST(DisRegion, TwoStumps) {
  const GridDataset d = make_line(10);
  const std::vector<BitVector> V{labeling(Stump{2}, d), labeling(Stump{5}, d)};
  EXPECT_EQ(dis_region(V, BitVector(10, true)).indices(), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(DisRegion, AllStumpsSpareTheLastPoint) {
  const GridDataset d = make_line(10);
  std::vector<BitVector> V;
  for (const Stump& s : enumerate_stumps(10)) V.push_back(labeling(s, d));
  EXPECT_EQ(dis_region(V, BitVector(10, true)).indices(),
            (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(DisRegion, EmptySetThrows) {
  EXPECT_THROW(dis_region(std::vector<BitVector>{}, BitVector(3, true)), std::invalid_argument);
  const HypothesisClass H = stump_class(make_line(5));
  EXPECT_THROW(dis_region(H, std::vector<std::size_t>{}, BitVector(5, true)),
               std::invalid_argument);
}

TEST(DisRegion, SingleReferenceMatchesPairwise) {
  Rng rng(21);
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = 1 + rng() % 130;
    const std::size_t k = 1 + rng() % 6;
    std::vector<BitVector> V;
    for (std::size_t j = 0; j < k; ++j) V.push_back(random_labels(n, rng, 0.1 + 0.8 * (j % 2)));
    const BitVector S = random_labels(n, rng, 0.7);
    EXPECT_EQ(dis_region(V, S), dis_pairwise(V, S));
    const HypothesisClass H = class_of(V);
    std::vector<std::size_t> members(k);
    for (std::size_t j = 0; j < k; ++j) members[j] = j;
    EXPECT_EQ(dis_region(H, members, S), dis_pairwise(V, S));
  }
}

TEST(DisRegion, MonotoneInV) {
  Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 100;
    std::vector<BitVector> V;
    for (int j = 0; j < 5; ++j) V.push_back(random_labels(n, rng, 0.2));
    const BitVector S(n, true);
    const std::size_t cut = 1 + rng() % 5;
    const BitVector small = dis_region(std::span(V).first(cut), S);
    const BitVector big = dis_region(V, S);
    EXPECT_EQ(small & big, small);
  }
}

TEST(Ball, Examples) {
  const GridDataset d = make_line(10);
  const HypothesisClass H = stump_class(d);
  const BitVector S(10, true);
  const std::size_t c = stump_member(H, 5);
  EXPECT_EQ(ball(H, c, 1.0, S).size(), H.size());
  EXPECT_EQ(ball(H, c, 3.0, S).size(), H.size());
  EXPECT_EQ(ball(H, c, 0.0, S), (std::vector<std::size_t>{c}));
  std::vector<std::size_t> got;
  for (std::size_t m : ball(H, c, 0.2, S)) got.push_back(std::get<Stump>(H.member(m)).index);
  EXPECT_EQ(got, (std::vector<std::size_t>{3, 4, 5, 6, 7}));
  EXPECT_THROW(ball(H, c, -0.1, S), std::invalid_argument);
}

TEST(Ball, MonotoneInRadius) {
  const HypothesisClass H = enumerate_trees(make_grid(3, 2), 2, true);
  const BitVector S(9, true);
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const std::size_t c = rng() % H.size();
    std::vector<std::size_t> prev;
    for (std::size_t k = 0; k <= 9; ++k) {
      const auto cur = ball(H, c, k / 9.0, S);
      EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = cur;
    }
  }
}

TEST(Radius, Examples) {
  const GridDataset d = make_line(10);
  const HypothesisClass H = stump_class(d);
  const BitVector S(10, true);
  EXPECT_DOUBLE_EQ(radius(H, std::vector<std::size_t>{3}, S), 0.0);
  const std::vector<std::size_t> pair{stump_member(H, 2), stump_member(H, 5)};
  EXPECT_DOUBLE_EQ(radius(H, pair, S), 0.3);
  EXPECT_THROW(radius(H, std::vector<std::size_t>{}, S), std::invalid_argument);
}

TEST(Radius, SubsetOfBallHasRadiusAtMostTwiceR) {
  Rng rng(24);
  const HypothesisClass H = enumerate_trees(make_grid(3, 2), 2, true);
  const BitVector S(9, true);
  for (int t = 0; t < 300; ++t) {
    const std::size_t c = rng() % H.size();
    const double r = static_cast<double>(rng() % 10) / 9.0;
    const auto B = ball(H, c, r, S);
    std::vector<std::size_t> sub{c};
    for (std::size_t m : B) {
      if (m != c && rng() % 2 == 0) sub.push_back(m);
    }
    EXPECT_LE(radius(H, sub, S), 2.0 * r + 1e-12);
  }
}

TEST(Theta, SingletonClassIsZero) {
  HypothesisClass H(ClassKind::stump, ClassSpec{}, 6);
  H.append(Stump{0}, BitVector(6, true));
  const auto rep = theta_of(H, 0, BitVector(6, true));
  EXPECT_DOUBLE_EQ(rep.theta_h, 0.0);
  EXPECT_EQ(rep.per_radius.size(), 6u);
}

TEST(Theta, DiagonalAllZeroAtLeastN) {
  const GridDataset d = make_diagonal(6, 2);
  const HypothesisClass H = enumerate_trees(d, 2, true);
  const std::size_t zero = member_with(H, BitVector(6));
  ASSERT_LT(zero, H.size());
  const auto rep = theta_of(H, zero, BitVector(6, true));
  EXPECT_GE(rep.theta_h, 6.0);
  EXPECT_DOUBLE_EQ(rep.per_radius.front().ratio, 6.0);
}

TEST(Theta, StumpCenterMatchesDefinition) {
  const HypothesisClass H = stump_class(make_line(8));
  const BitVector S(8, true);
  const std::size_t c = stump_member(H, 0);
  const auto rep = theta_of(H, c, S);
  EXPECT_DOUBLE_EQ(rep.theta_h, theta_oracle(H, c, S));
  for (const RadiusEntry& e : rep.per_radius) {
    EXPECT_DOUBLE_EQ(e.ratio, static_cast<double>(e.dis_size) / (e.r * 8.0));
    EXPECT_LE(e.ratio, rep.theta_h);
  }
}

TEST(Theta, EngineMatchesDefinitionOnRandomClasses) {
  Rng rng(25);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 24;
    std::vector<BitVector> V;
    const std::size_t k = 1 + rng() % 12;
    std::set<BitVector> seen;
    for (std::size_t j = 0; j < k; ++j) {
      BitVector b = random_labels(n, rng, 0.3);
      if (seen.insert(b).second) V.push_back(b);
    }
    const HypothesisClass H = class_of(V);
    BitVector S = random_labels(n, rng, 0.8);
    if (S.none()) S.set(0);
    for (std::size_t c = 0; c < H.size(); ++c) {
      EXPECT_NEAR(theta_of(H, c, S).theta_h, theta_oracle(H, c, S), 1e-12);
    }
  }
}

TEST(Theta, ConstantClassIsOne) {
  const HypothesisClass H = enumerate_trees(make_grid(3, 2), 0, true);
  ASSERT_EQ(H.size(), 2u);
  EXPECT_DOUBLE_EQ(theta_class(H, BitVector(9, true)).theta, 1.0);
}

TEST(Theta, RepeatedDimensionsGrowWithN) {
  double prev = 0.0;
  for (std::size_t n : {4u, 8u, 16u}) {
    const HypothesisClass H = enumerate_trees(make_line(n), 2, false);
    const double theta = theta_class(H, BitVector(n, true)).theta;
    EXPECT_GT(theta, prev);
    EXPECT_DOUBLE_EQ(theta, static_cast<double>(n));
    prev = theta;
  }
}

TEST(Theta, UniqueDimsDepthOneStaysLogarithmic) {
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    const HypothesisClass H = enumerate_trees(make_grid(n, 1), 1, true);
    const double theta = theta_class(H, BitVector(n, true)).theta;
    EXPECT_LE(theta / std::log(static_cast<double>(n)), 10.0);
    EXPECT_GE(theta, 1.0);
  }
}

TEST(Theta, AtMostN) {
  Rng rng(26);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng() % 10;
    const HypothesisClass H = enumerate_trees(make_line(n), 2, false);
    EXPECT_LE(theta_class(H, BitVector(n, true)).theta, static_cast<double>(n));
  }
}

TEST(Theta, LineTreeAllSameLabelSpotCheck) {
  for (std::size_t w : {3u, 4u}) {
    const GridDataset g = make_grid(w, 2);
    const HypothesisClass L = line_tree_class(g, enumerate_trees(g, 1, true));
    const std::size_t zero = member_with(L, BitVector(g.size()));
    ASSERT_LT(zero, L.size());
    const double bound = std::pow(3.0 * std::log(static_cast<double>(w)), 1);
    EXPECT_LE(theta_of(L, zero, BitVector(g.size(), true)).theta_h, 4.0 * bound);
  }
}

TEST(Theta, BudgetExceeded) {
  const HypothesisClass H = stump_class(make_line(50));
  EXPECT_THROW(theta_of(H, 0, BitVector(50, true), ThetaBudget{10, 4096}), BudgetExceeded);
  EXPECT_THROW(theta_class(H, BitVector(50, true), ThetaBudget{1000, 20}), BudgetExceeded);
  EXPECT_THROW(theta_of(H, 99, BitVector(50, true)), std::out_of_range);
}

TEST(Theta, ReportSerialization) {
  const HypothesisClass H = stump_class(make_line(4));
  const auto rep = theta_of(H, 0, BitVector(4, true));
  const auto j = to_json(rep);
  EXPECT_EQ(j.at("per_radius").size(), 4u);
  EXPECT_DOUBLE_EQ(j.at("theta_h").get<double>(), rep.theta_h);
  std::ostringstream csv;
  write_csv(csv, rep);
  std::string line;
  std::istringstream in(csv.str());
  std::getline(in, line);
  EXPECT_EQ(line, "r,ball_size,dis_size,ratio");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(WeightedDistance, Examples) {
  const GridDataset d = make_line(4);
  const BitVector a = labeling(Stump{1}, d);  // 1111
  const BitVector b = labeling(Stump{3}, d);  // 0011
  const WeightedDataset flat(d, {1.0, 1.0, 1.0, 1.0}, 1.0);
  EXPECT_DOUBLE_EQ(weighted_distance(a, b, flat), distance(a, b, all_indices(4)));
  EXPECT_DOUBLE_EQ(weighted_distance(a, a, flat), 0.0);
  const WeightedDataset w(d, {2.0, 1.0, 1.0, 1.0}, 2.0);
  double num = 0.0;
  for (std::size_t i = 0; i < 4; ++i) num += a.test(i) != b.test(i) ? w.weights()[i] : 0.0;
  EXPECT_DOUBLE_EQ(weighted_distance(a, b, w), num / 5.0);
  EXPECT_DOUBLE_EQ(weighted_distance(a, b, w), 0.6);
}

TEST(WeightedTheta, UnitAndUniformWeightsMatchUnweighted) {
  const GridDataset d = make_line(12);
  const HypothesisClass H = enumerate_trees(d, 1, true);
  const BitVector S(12, true);
  const WeightedDataset ones(d, std::vector<double>(12, 1.0), 1.0);
  const WeightedDataset top(d, std::vector<double>(12, 1.7), 1.7);
  for (std::size_t c = 0; c < H.size(); ++c) {
    const double theta = theta_of(H, c, S).theta_h;
    EXPECT_NEAR(weighted_theta(H, c, ones), theta, 1e-9);
    EXPECT_NEAR(weighted_theta(H, c, top), theta, 1e-9);
  }
}

TEST(WeightedTheta, BoundedByLambdaSquared) {
  Rng rng(27);
  std::uniform_real_distribution<double> unit(1.0, 2.0);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + rng() % 20;
    const GridDataset d = make_line(n);
    const HypothesisClass H = stump_class(d);
    std::vector<double> w(n);
    for (double& x : w) x = unit(rng);
    const WeightedDataset W(d, w, 2.0);
    for (std::size_t c = 0; c < H.size(); ++c) {
      EXPECT_LE(weighted_theta(H, c, W), 4.0 * theta_of(H, c, BitVector(n, true)).theta_h + 1e-9);
    }
  }
}

TEST(ThetaFormula, ClampedToRange) {
  EXPECT_DOUBLE_EQ(theta_formula(50, 3, 2), 50.0);
  EXPECT_NEAR(theta_formula(2, 3, 2), 4.0 * std::log(2.0) * std::log(2.0), 1e-12);
  EXPECT_GE(theta_formula(100, 1, 1), 1.0);
  EXPECT_NEAR(theta_formula(1000, 1, 1), 4.0 * std::log(1000.0), 1e-9);
  EXPECT_LE(theta_formula(1000, 2, 4), 1000.0);
  EXPECT_THROW(theta_formula(0, 1, 1), std::invalid_argument);
}
