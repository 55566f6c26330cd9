#include "activedt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace activedt {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

void check_vc(std::size_t vc) {
  if (vc == 0) throw std::invalid_argument("VC dimension must be >= 1");
}

std::size_t ceil_size(double x) {
  if (!(x < 1.8e19)) throw std::overflow_error("sample size overflows");
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

std::size_t vc_dimension(ClassKind kind, int depth, std::size_t dim) {
  if (kind == ClassKind::stump) return 1;
  if (depth < 1) throw std::invalid_argument("tree depth must be >= 1");
  if (dim < 2) throw std::invalid_argument("tree VC bound requires dim >= 2");
  const double v = 10.0 * std::ldexp(1.0, depth) *
                   (static_cast<double>(depth) + std::log2(static_cast<double>(dim)));
  // Shave rounding noise so exact integers do not ceil upward.
  return static_cast<std::size_t>(std::ceil(v - 1e-9 * v));
}

ClassComplexity class_complexity(const HypothesisClass& H) {
  ClassComplexity c;
  c.kind = H.kind();
  c.depth = H.spec().depth;
  c.dim = H.spec().dim;
  if (c.kind == ClassKind::stump) {
    c.vc = 1;
  } else {
    c.vc = vc_dimension(ClassKind::tree, std::max(c.depth, 1), std::max<std::size_t>(c.dim, 2));
  }
  return c;
}

double sample_size_formula(double epsilon, double delta, std::size_t vc) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  check_delta(delta);
  check_vc(vc);
  return 64.0 / (epsilon * epsilon) *
         (2.0 * static_cast<double>(vc) * std::log(12.0 / epsilon) + std::log(4.0 / delta));
}

std::size_t sample_size(double epsilon, double delta, std::size_t vc) {
  return ceil_size(sample_size_formula(epsilon, delta, vc));
}

double bound_sample_size_formula(double width, double delta, std::size_t vc) {
  if (!(width > 0.0 && width <= 1.0)) throw std::invalid_argument("width must lie in (0, 1]");
  check_delta(delta);
  check_vc(vc);
  return 256.0 / (width * width) *
         (2.0 * static_cast<double>(vc) * std::log(24.0 / width) + std::log(4.0 / delta));
}

std::size_t bound_sample_size(double width, double delta, std::size_t vc) {
  return ceil_size(bound_sample_size_formula(width, delta, vc));
}

double achievable_width(std::size_t m, double delta, std::size_t vc) {
  check_delta(delta);
  check_vc(vc);
  const double budget = static_cast<double>(m);
  if (bound_sample_size_formula(1.0, delta, vc) >= budget) return 1.0;
  double lo = 1e-12;
  double hi = 1.0;
  if (bound_sample_size_formula(lo, delta, vc) <= budget) return lo;
  // Invariant: formula(lo) > m >= formula(hi); the formula falls strictly in w.
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (bound_sample_size_formula(mid, delta, vc) <= budget) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

BoundPair bounds_from_width(double empirical_err, double width, double delta, std::size_t m) {
  if (!(empirical_err >= 0.0 && empirical_err <= 1.0)) {
    throw std::invalid_argument("empirical error must lie in [0, 1]");
  }
  if (!(width >= 0.0)) throw std::invalid_argument("width must be >= 0");
  const double w = std::min(width, 1.0);
  BoundPair b;
  b.width = w;
  b.lb = std::clamp(empirical_err - w / 2.0, 0.0, 1.0);
  b.ub = std::clamp(empirical_err + w / 2.0, 0.0, 1.0);
  b.confidence = 1.0 - delta;
  b.sample_size = m;
  return b;
}

BoundPair bound_pair(double empirical_err, std::size_t m, double delta, std::size_t vc) {
  if (m == 0) throw std::invalid_argument("bound_pair requires m >= 1");
  return bounds_from_width(empirical_err, achievable_width(m, delta, vc), delta, m);
}

BoundPair census_bound(double exact_err, std::size_t m) {
  BoundPair b = bounds_from_width(exact_err, 0.0, 0.5, m);
  b.confidence = 1.0;
  return b;
}

nlohmann::json to_json(const BoundPair& b) {
  return {{"lb", b.lb},
          {"ub", b.ub},
          {"width", b.width},
          {"confidence", b.confidence},
          {"sample_size", b.sample_size}};
}

}  // namespace activedt
