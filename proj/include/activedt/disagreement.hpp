#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "activedt/bit_vector.hpp"
#include "activedt/dataset.hpp"
#include "activedt/hypothesis.hpp"
#include "json.hpp"

namespace activedt {

/// Caps for brute-force disagreement coefficients.
struct ThetaBudget {
  std::size_t max_members = 200000;
  std::size_t max_points = 4096;
};

/// Points of S on which some pair of the given labelings differ. Computed
/// against the first labeling as reference: a point is disputed iff some
/// labeling differs from the reference there.
BitVector dis_region(std::span<const BitVector> labelings, const BitVector& subset);

/// Same, for a subset of class members given by index.
BitVector dis_region(const HypothesisClass& H, std::span<const std::size_t> members,
                     const BitVector& subset);

/// Members within distance r of `center` (distances normalized by |S|).
std::vector<std::size_t> ball(const HypothesisClass& H, std::size_t center, double r,
                              const BitVector& subset);

/// Smallest r such that some member of the set holds all others within r.
double radius(const HypothesisClass& H, std::span<const std::size_t> members,
              const BitVector& subset);

struct RadiusEntry {
  std::size_t k = 0;  ///< r = k / |S|
  double r = 0.0;
  std::size_t ball_size = 0;
  std::size_t dis_size = 0;
  double ratio = 0.0;
};

struct DisagreementReport {
  std::size_t center = 0;
  std::size_t population = 0;
  std::vector<RadiusEntry> per_radius;
  double theta_h = 0.0;
  double argmax_r = 0.0;
};

/// theta_h = sup_{r>0} |DIS(B(h, r))| / (r |S|), evaluated exactly at every
/// r = k/|S|, k = 1..|S|. Between consecutive levels the ball is constant and
/// the ratio falls with r, so the grid contains the supremum.
DisagreementReport theta_of(const HypothesisClass& H, std::size_t center,
                            const BitVector& subset, const ThetaBudget& budget = {});

struct ThetaResult {
  double theta = 0.0;
  std::size_t argmax_center = 0;
};

/// Worst case of theta_of over every member.
ThetaResult theta_class(const HypothesisClass& H, const BitVector& subset,
                        const ThetaBudget& budget = {});

/// sum_i W_i [h1(X_i) != h2(X_i)] / sum_i W_i.
double weighted_distance(const BitVector& a, const BitVector& b, const WeightedDataset& W);

/// Weighted analogue of theta_of: sup over attained weighted distances r of
/// W(DIS(B_W(h, r))) / (r W_total).
double weighted_theta(const HypothesisClass& H, std::size_t center, const WeightedDataset& W,
                      const ThetaBudget& budget = {});

/// Closed-form stand-in for θ on unique-dimension trees of height d: the
/// leaf-decomposition count L * C(dim, d) * (2 ln n / dim)^d with unit
/// constant, clamped to [1, n].
double theta_formula(std::size_t n, int d, std::size_t dim);

nlohmann::json to_json(const DisagreementReport& report);
/// Columns: r,ball_size,dis_size,ratio.
void write_csv(std::ostream& out, const DisagreementReport& report);

}  // namespace activedt
