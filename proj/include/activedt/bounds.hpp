#pragma once

#include <cstddef>

#include "activedt/hypothesis.hpp"
#include "json.hpp"

namespace activedt {

struct ClassComplexity {
  ClassKind kind = ClassKind::stump;
  int depth = 1;
  std::size_t dim = 1;
  std::size_t vc = 1;
};

/// 1 for stumps; ceil(10 * 2^d * (d + log2 dim)) for trees of height d.
/// Throws std::invalid_argument for trees with dim < 2.
std::size_t vc_dimension(ClassKind kind, int depth = 1, std::size_t dim = 2);

/// Complexity of a materialized class. Tree and line-tree classes over fewer
/// than two dimensions use dim = 2, which bounds the 1-D class from above.
ClassComplexity class_complexity(const HypothesisClass& H);

/// (64/eps^2)(2 V ln(12/eps) + ln(4/delta)): with this many samples every
/// member's empirical error is within eps of its true error, w.p. 1 - delta.
double sample_size_formula(double epsilon, double delta, std::size_t vc);
std::size_t sample_size(double epsilon, double delta, std::size_t vc);

/// Samples needed for confidence intervals of total width w:
/// (256/w^2)(2 V ln(24/w) + ln(4/delta)).
double bound_sample_size_formula(double width, double delta, std::size_t vc);
std::size_t bound_sample_size(double width, double delta, std::size_t vc);

/// Smallest width w in (0, 1] whose bound sample size is at most m, found by
/// bisection to relative tolerance 1e-9. Saturates at 1 for small m.
double achievable_width(std::size_t m, double delta, std::size_t vc);

struct BoundPair {
  double lb = 0.0;
  double ub = 1.0;
  double width = 1.0;
  double confidence = 0.0;
  std::size_t sample_size = 0;
};

/// [emp - w/2, emp + w/2] clamped into [0, 1].
BoundPair bounds_from_width(double empirical_err, double width, double delta, std::size_t m);

/// Bounds at the width achievable with m samples.
BoundPair bound_pair(double empirical_err, std::size_t m, double delta, std::size_t vc);

/// Exact zero-width bounds when the sample is the whole population.
BoundPair census_bound(double exact_err, std::size_t m);

nlohmann::json to_json(const BoundPair& b);

}  // namespace activedt
