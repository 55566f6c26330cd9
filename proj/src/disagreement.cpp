#include "activedt/disagreement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "activedt/errors.hpp"

namespace activedt {

BitVector dis_region(std::span<const BitVector> labelings, const BitVector& subset) {
  if (labelings.empty()) throw std::invalid_argument("disagreement region of an empty set");
  const BitVector& ref = labelings.front();
  BitVector dis(ref.size());
  for (const BitVector& lab : labelings.subspan(1)) dis |= lab ^ ref;
  dis &= subset;
  return dis;
}

BitVector dis_region(const HypothesisClass& H, std::span<const std::size_t> members,
                     const BitVector& subset) {
  if (members.empty()) throw std::invalid_argument("disagreement region of an empty set");
  BitVector dis(H.points());
  auto out = dis.words();
  auto ref = H.row(members.front());
  for (std::size_t m : members.subspan(1)) {
    auto r = H.row(m);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] |= r[k] ^ ref[k];
  }
  dis &= subset;
  return dis;
}

std::vector<std::size_t> ball(const HypothesisClass& H, std::size_t center, double r,
                              const BitVector& subset) {
  if (r < 0.0) throw std::invalid_argument("ball radius must be >= 0");
  const std::size_t pop = subset.count();
  if (pop == 0) throw std::invalid_argument("ball over an empty set");
  const auto mask = subset.words();
  const auto c = H.row(center);
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < H.size(); ++m) {
    // Compare counts so that r = k/|S| admits distance exactly k/|S|.
    const double count = static_cast<double>(hamming(c, H.row(m), mask));
    if (count <= r * static_cast<double>(pop) * (1.0 + 1e-12)) out.push_back(m);
  }
  return out;
}

double radius(const HypothesisClass& H, std::span<const std::size_t> members,
              const BitVector& subset) {
  if (members.empty()) throw std::invalid_argument("radius of an empty set");
  const std::size_t pop = subset.count();
  if (pop == 0) throw std::invalid_argument("radius over an empty set");
  const auto mask = subset.words();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t c : members) {
    std::size_t worst = 0;
    for (std::size_t m : members) {
      worst = std::max(worst, hamming(H.row(c), H.row(m), mask));
      if (worst >= best) break;
    }
    best = std::min(best, worst);
  }
  return static_cast<double>(best) / static_cast<double>(pop);
}

namespace {

void check_budget(const HypothesisClass& H, std::size_t pop, const ThetaBudget& budget) {
  if (H.size() > budget.max_members) {
    throw BudgetExceeded("class of " + std::to_string(H.size()) +
                         " members exceeds brute-force budget " +
                         std::to_string(budget.max_members));
  }
  if (pop > budget.max_points) {
    throw BudgetExceeded("population of " + std::to_string(pop) +
                         " points exceeds brute-force budget " +
                         std::to_string(budget.max_points));
  }
}

/// Sweeps k = 1..|S| growing the ball around `center`; calls
/// visit(k, ball_size, dis_size) at every level.
template <typename Visit>
void sweep_levels(const HypothesisClass& H, std::size_t center, const BitVector& subset,
                  std::vector<std::pair<std::size_t, std::size_t>>& scratch, Visit&& visit) {
  const std::size_t pop = subset.count();
  const auto mask = subset.words();
  const auto c = H.row(center);
  scratch.clear();
  for (std::size_t m = 0; m < H.size(); ++m) scratch.emplace_back(hamming(c, H.row(m), mask), m);
  std::sort(scratch.begin(), scratch.end());

  std::vector<BitVector::Word> dis(H.words_per_row(), 0);
  std::size_t dis_size = 0;
  std::size_t next = 0;
  while (next < scratch.size() && scratch[next].first == 0) ++next;
  std::size_t ball_size = next;
  for (std::size_t k = 1; k <= pop; ++k) {
    bool grew = false;
    while (next < scratch.size() && scratch[next].first <= k) {
      const auto r = H.row(scratch[next].second);
      for (std::size_t w = 0; w < dis.size(); ++w) dis[w] |= (r[w] ^ c[w]) & mask[w];
      ++ball_size;
      ++next;
      grew = true;
    }
    if (grew) {
      dis_size = 0;
      for (auto w : dis) dis_size += static_cast<std::size_t>(std::popcount(w));
    }
    visit(k, ball_size, dis_size);
  }
}

}  // namespace

DisagreementReport theta_of(const HypothesisClass& H, std::size_t center,
                            const BitVector& subset, const ThetaBudget& budget) {
  if (center >= H.size()) throw std::out_of_range("center is not a class member");
  const std::size_t pop = subset.count();
  if (pop == 0) throw std::invalid_argument("disagreement coefficient over an empty set");
  check_budget(H, pop, budget);

  DisagreementReport report;
  report.center = center;
  report.population = pop;
  report.per_radius.reserve(pop);
  std::vector<std::pair<std::size_t, std::size_t>> scratch;
  sweep_levels(H, center, subset, scratch,
               [&](std::size_t k, std::size_t ball_size, std::size_t dis_size) {
                 RadiusEntry e;
                 e.k = k;
                 e.r = static_cast<double>(k) / static_cast<double>(pop);
                 e.ball_size = ball_size;
                 e.dis_size = dis_size;
                 e.ratio = static_cast<double>(dis_size) / static_cast<double>(k);
                 if (e.ratio > report.theta_h) {
                   report.theta_h = e.ratio;
                   report.argmax_r = e.r;
                 }
                 report.per_radius.push_back(e);
               });
  return report;
}

ThetaResult theta_class(const HypothesisClass& H, const BitVector& subset,
                        const ThetaBudget& budget) {
  const std::size_t pop = subset.count();
  if (pop == 0) throw std::invalid_argument("disagreement coefficient over an empty set");
  check_budget(H, pop, budget);
  ThetaResult best;
  std::vector<std::pair<std::size_t, std::size_t>> scratch;
  for (std::size_t c = 0; c < H.size(); ++c) {
    double theta = 0.0;
    sweep_levels(H, c, subset, scratch, [&](std::size_t k, std::size_t, std::size_t dis_size) {
      theta = std::max(theta, static_cast<double>(dis_size) / static_cast<double>(k));
    });
    if (theta > best.theta) {
      best.theta = theta;
      best.argmax_center = c;
    }
  }
  return best;
}

double weighted_distance(const BitVector& a, const BitVector& b, const WeightedDataset& W) {
  if (a.size() != W.base().size() || b.size() != W.base().size()) {
    throw std::invalid_argument("labeling length does not match weighted dataset");
  }
  const auto weights = W.weights();
  double sum = 0.0;
  for (std::size_t i : (a ^ b).indices()) sum += weights[i];
  return sum / W.total_weight();
}

double weighted_theta(const HypothesisClass& H, std::size_t center, const WeightedDataset& W,
                      const ThetaBudget& budget) {
  if (center >= H.size()) throw std::out_of_range("center is not a class member");
  if (H.points() != W.base().size()) {
    throw std::invalid_argument("class and weighted dataset sizes differ");
  }
  check_budget(H, H.points(), budget);
  const auto weights = W.weights();
  const BitVector c = H.labeling(center);

  std::vector<std::pair<double, std::size_t>> order;
  std::vector<BitVector> diffs(H.size());
  for (std::size_t m = 0; m < H.size(); ++m) {
    diffs[m] = H.labeling(m) ^ c;
    double sum = 0.0;
    for (std::size_t i : diffs[m].indices()) sum += weights[i];
    order.emplace_back(sum, m);
  }
  std::sort(order.begin(), order.end());

  BitVector dis(H.points());
  double theta = 0.0;
  std::size_t next = 0;
  while (next < order.size() && order[next].first == 0.0) ++next;
  while (next < order.size()) {
    // Members whose weighted distances agree up to rounding form one level.
    const double level = order[next].first;
    while (next < order.size() && order[next].first <= level * (1.0 + 1e-12)) {
      dis |= diffs[order[next].second];
      ++next;
    }
    double mass = 0.0;
    for (std::size_t i : dis.indices()) mass += weights[i];
    theta = std::max(theta, mass / level);  // (mass/total) / (level/total)
  }
  return theta;
}

double theta_formula(std::size_t n, int d, std::size_t dim) {
  if (n == 0) throw std::invalid_argument("theta_formula requires n >= 1");
  const int depth = std::min<int>(d, static_cast<int>(dim));
  if (depth <= 0) return 1.0;
  double binom = 1.0;
  for (int k = 0; k < depth; ++k) {
    binom = binom * static_cast<double>(dim - static_cast<std::size_t>(k)) /
            static_cast<double>(k + 1);
  }
  const double leaves = std::ldexp(1.0, depth);
  const double per_set =
      std::pow(2.0 * std::log(static_cast<double>(n)) / static_cast<double>(dim), depth);
  return std::clamp(leaves * binom * per_set, 1.0, static_cast<double>(n));
}

nlohmann::json to_json(const DisagreementReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RadiusEntry& e : report.per_radius) {
    rows.push_back({{"k", e.k},
                    {"r", e.r},
                    {"ball_size", e.ball_size},
                    {"dis_size", e.dis_size},
                    {"ratio", e.ratio}});
  }
  return {{"center", report.center},
          {"population", report.population},
          {"theta_h", report.theta_h},
          {"argmax_r", report.argmax_r},
          {"per_radius", rows}};
}

void write_csv(std::ostream& out, const DisagreementReport& report) {
  out << "r,ball_size,dis_size,ratio\n";
  for (const RadiusEntry& e : report.per_radius) {
    out << e.k << '/' << report.population << ',' << e.ball_size << ',' << e.dis_size << ','
        << e.ratio << '\n';
  }
}

}  // namespace activedt
