#include "activedt/active.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "activedt/bounds.hpp"
#include "activedt/errors.hpp"
#include "activedt/random.hpp"

namespace activedt {

std::string to_string(ThetaMode mode) {
  switch (mode) {
    case ThetaMode::automatic:
      return "automatic";
    case ThetaMode::brute_force:
      return "brute_force";
    case ThetaMode::supplied:
      return "supplied";
    case ThetaMode::bound_formula:
      return "bound_formula";
  }
  return "automatic";
}

ThetaMode theta_mode_from_string(const std::string& s) {
  if (s == "automatic") return ThetaMode::automatic;
  if (s == "brute_force") return ThetaMode::brute_force;
  if (s == "supplied") return ThetaMode::supplied;
  if (s == "bound_formula") return ThetaMode::bound_formula;
  throw std::invalid_argument("unknown theta mode: " + s);
}

std::string to_string(Termination t) {
  return t == Termination::loop ? "loop" : "direct_estimation";
}

void RunConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  for (double c : {c1, b1, c2, b2}) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("sample-size constants must be finite and >= 0");
    }
  }
  if (theta_mode == ThetaMode::supplied && !(theta_value >= 1.0)) {
    throw std::invalid_argument("supplied theta must be >= 1");
  }
}

RunConfig RunConfig::theoretical(double epsilon, double delta) {
  RunConfig cfg;
  cfg.epsilon = epsilon;
  cfg.delta = delta;
  // 256/w^2 (2 ln(24/w) + ln(4/delta')) at w = 1/16, split into c1 ln(1/delta') + b1.
  cfg.c1 = 65536.0;
  cfg.b1 = 65536.0 * (2.0 * std::log(384.0) + std::log(4.0));
  // 2 * 65536/eps^2 (ln(1/(delta eps)) + b2) dominates the width-eps/16
  // requirement at confidence delta/2.
  cfg.c2 = 131072.0;
  cfg.b2 = (2.0 * std::log(384.0) + std::log(8.0)) / 2.0;
  return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
  return {{"epsilon", cfg.epsilon},
          {"delta", cfg.delta},
          {"c1", cfg.c1},
          {"b1", cfg.b1},
          {"c2", cfg.c2},
          {"b2", cfg.b2},
          {"theta_mode", to_string(cfg.theta_mode)},
          {"theta_value", cfg.theta_value},
          {"seed", cfg.seed},
          {"clamp", cfg.clamp}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.c1 = j.value("c1", cfg.c1);
  cfg.b1 = j.value("b1", cfg.b1);
  cfg.c2 = j.value("c2", cfg.c2);
  cfg.b2 = j.value("b2", cfg.b2);
  cfg.theta_mode = theta_mode_from_string(j.value("theta_mode", std::string("automatic")));
  cfg.theta_value = j.value("theta_value", cfg.theta_value);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.clamp = j.value("clamp", cfg.clamp);
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const RunStats& s) {
  return {{"queries", s.queries},
          {"iterations", s.iterations},
          {"terminated_via", to_string(s.terminated_via)},
          {"returned", to_json(s.returned)},
          {"achieved_err", s.achieved_err},
          {"eta", s.eta},
          {"clamps", s.clamps},
          {"theta", s.theta},
          {"vc", s.vc}};
}

nlohmann::json to_json(const RunResult& result, const RunConfig& cfg) {
  nlohmann::json trace = nlohmann::json::array();
  for (const StumpIteration& it : result.stump_trace) {
    nlohmann::json row{{"iteration", it.iteration}, {"L", it.L},
                       {"R", it.R},                 {"population", it.population},
                       {"requested", it.requested}, {"sample_size", it.sample_size},
                       {"width", it.width},         {"beta", it.beta},
                       {"next_L", it.next_L},       {"next_R", it.next_R},
                       {"direct", it.direct}};
    if (it.direct) {
      row["direct_requested"] = it.direct_requested;
      row["direct_sample_size"] = it.direct_sample_size;
      row["direct_width"] = it.direct_width;
    }
    trace.push_back(std::move(row));
  }
  for (const VersionSpaceIteration& it : result.trace) {
    nlohmann::json row{{"iteration", it.iteration},
                       {"version_space", it.version_space},
                       {"radius", it.radius},
                       {"dis_size", it.dis_size},
                       {"requested", it.requested},
                       {"sample_size", it.sample_size},
                       {"width", it.width},
                       {"beta", it.beta},
                       {"survivors", it.survivors.size()},
                       {"next_radius", it.next_radius},
                       {"direct", it.direct}};
    if (it.direct) {
      row["direct_requested"] = it.direct_requested;
      row["direct_sample_size"] = it.direct_sample_size;
      row["direct_width"] = it.direct_width;
    }
    trace.push_back(std::move(row));
  }
  return {{"config", to_json(cfg)}, {"trace", trace}, {"stats", to_json(result.stats)}};
}

namespace {

std::size_t ceil_count(double x) {
  if (!(x < 1.8e19)) throw std::overflow_error("sample size overflows");
  return static_cast<std::size_t>(std::ceil(std::max(x, 0.0)));
}

/// Applies the clamp policy to a requested draw.
std::size_t clamp_draw(std::size_t requested, std::size_t population, const RunConfig& cfg,
                       RunStats& stats) {
  if (requested <= population) return requested;
  if (!cfg.clamp) {
    throw BudgetExceeded("requested " + std::to_string(requested) + " labels from a population of " +
                         std::to_string(population));
  }
  ++stats.clamps;
  return population;
}

/// Width of intervals computed from m draws out of `population`: zero for a
/// census, otherwise the inverted sample-size relation.
double draw_width(std::size_t m, std::size_t population, double delta, std::size_t vc) {
  if (m >= population) return 0.0;
  if (m == 0) return 1.0;
  return achievable_width(m, delta, vc);
}

struct Interval {
  double lb;
  double ub;
};

Interval interval(std::size_t errors, std::size_t m, double width) {
  const double emp = m == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(m);
  return {std::clamp(emp - width / 2.0, 0.0, 1.0), std::clamp(emp + width / 2.0, 0.0, 1.0)};
}

/// Labeled draw from the stump population of interval [L, R]: 1-based
/// points max(L, 1)..R.
struct StumpSample {
  std::vector<std::size_t> points;  ///< 1-based, ascending
  std::vector<Label> labels;
};

StumpSample draw_stump_sample(std::size_t first, std::size_t population, std::size_t m,
                              LabelSource& source, Rng& rng) {
  StumpSample s;
  for (std::size_t pos : sample_positions(population, m, rng)) {
    const std::size_t j = first + pos;
    s.points.push_back(j);
    s.labels.push_back(source.query(j - 1));
  }
  return s;
}

/// errors[h - L] = mistakes of stump h on the sample, for h in [L, R].
std::vector<std::size_t> stump_errors(const StumpSample& s, std::size_t L, std::size_t R) {
  std::size_t zeros = 0;
  for (Label y : s.labels) zeros += y == 0 ? 1 : 0;
  std::vector<std::size_t> out;
  out.reserve(R - L + 1);
  std::size_t ones_before = 0;   // sampled j < h with label 1
  std::size_t zeros_before = 0;  // sampled j < h with label 0
  std::size_t k = 0;
  for (std::size_t h = L; h <= R; ++h) {
    const std::size_t cut = std::max<std::size_t>(h, 1);
    while (k < s.points.size() && s.points[k] < cut) {
      if (s.labels[k] == 1) {
        ++ones_before;
      } else {
        ++zeros_before;
      }
      ++k;
    }
    out.push_back(ones_before + (zeros - zeros_before));
  }
  return out;
}

}  // namespace

double loop_delta(double delta, std::size_t n) {
  if (n == 0) throw std::invalid_argument("loop_delta requires n >= 1");
  return delta / (2.0 * std::log2(2.0 * static_cast<double>(n)));
}

std::size_t stump_loop_size(const RunConfig& cfg, std::size_t n) {
  return ceil_count(cfg.c1 * std::log(1.0 / loop_delta(cfg.delta, n)) + cfg.b1);
}

std::size_t stump_direct_size(const RunConfig& cfg) {
  const double e = cfg.epsilon;
  return ceil_count(cfg.c2 / (e * e) * (std::log(1.0 / (cfg.delta * e)) + cfg.b2));
}

std::size_t general_loop_size(const RunConfig& cfg, std::size_t n, double theta, std::size_t vc) {
  const double v = static_cast<double>(vc);
  return ceil_count(cfg.c1 * theta * theta *
                        (v * std::log(theta) + std::log(1.0 / loop_delta(cfg.delta, n))) +
                    cfg.b1);
}

std::size_t general_direct_size(const RunConfig& cfg, double theta, std::size_t vc) {
  const double v = static_cast<double>(vc);
  const double e = cfg.epsilon;
  return ceil_count(cfg.c2 * theta * theta / (e * e) *
                        (v * std::log(theta / e) + std::log(1.0 / cfg.delta)) +
                    cfg.b2);
}

RunResult stump_active(const GridDataset& data, LabelSource& source, const RunConfig& cfg) {
  cfg.validate();
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("stump engine requires a non-empty dataset");
  if (data.dim() != 1) throw std::invalid_argument("stump engine requires 1-D data");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(data.value(i - 1) < data.value(i))) {
      throw std::invalid_argument("stump engine requires strictly increasing data");
    }
  }
  if (source.size() != n) throw std::invalid_argument("label source size differs from dataset");

  RunResult result;
  RunStats& stats = result.stats;
  stats.vc = 1;
  const std::size_t before = source.query_count();
  Rng rng(cfg.seed);
  const double dprime = loop_delta(cfg.delta, n);
  const std::size_t loop_request = stump_loop_size(cfg, n);

  std::size_t L = 0;
  std::size_t R = n;
  stats.terminated_via = Termination::loop;
  while (L < R) {
    StumpIteration it;
    it.iteration = ++stats.iterations;
    it.L = L;
    it.R = R;
    const std::size_t first = std::max<std::size_t>(L, 1);
    it.population = R - first + 1;
    it.requested = loop_request;
    it.sample_size = clamp_draw(loop_request, it.population, cfg, stats);
    const StumpSample s = draw_stump_sample(first, it.population, it.sample_size, source, rng);
    it.width = draw_width(it.sample_size, it.population, dprime, 1);

    const std::vector<std::size_t> errs = stump_errors(s, L, R);
    it.beta = std::numeric_limits<double>::infinity();
    for (std::size_t e : errs) it.beta = std::min(it.beta, interval(e, it.sample_size, it.width).ub);
    std::size_t newL = R;
    std::size_t newR = L;
    for (std::size_t h = L; h <= R; ++h) {
      if (interval(errs[h - L], it.sample_size, it.width).lb <= it.beta) {
        newL = std::min(newL, h);
        newR = std::max(newR, h);
      }
    }
    if (newL > newR) throw InternalConsistencyError("stump pruning removed every candidate");
    it.next_L = newL;
    it.next_R = newR;

    if (2 * (newR - newL) > R - L) {
      it.direct = true;
      it.direct_requested = stump_direct_size(cfg);
      it.direct_sample_size = clamp_draw(it.direct_requested, it.population, cfg, stats);
      const StumpSample sd =
          draw_stump_sample(first, it.population, it.direct_sample_size, source, rng);
      it.direct_width = draw_width(it.direct_sample_size, it.population, cfg.delta / 2.0, 1);
      const std::vector<std::size_t> derrs = stump_errors(sd, L, R);
      std::size_t best = L;
      double best_ub = std::numeric_limits<double>::infinity();
      for (std::size_t h = L; h <= R; ++h) {
        const double ub = interval(derrs[h - L], it.direct_sample_size, it.direct_width).ub;
        if (ub < best_ub) {
          best_ub = ub;
          best = h;
        }
      }
      result.stump_trace.push_back(it);
      stats.terminated_via = Termination::direct_estimation;
      stats.returned = Stump{best};
      result.returned_member = best;
      stats.queries = source.query_count() - before;
      return result;
    }
    result.stump_trace.push_back(it);
    L = newL;
    R = newR;
  }
  stats.returned = Stump{L};
  result.returned_member = L;
  stats.queries = source.query_count() - before;
  return result;
}

double resolve_theta(const HypothesisClass& H, const RunConfig& cfg) {
  const std::size_t n = H.points();
  auto formula = [&] {
    if (H.kind() == ClassKind::stump) return theta_formula(n, 1, 1);
    return theta_formula(n, H.spec().depth, H.spec().dim);
  };
  auto brute = [&] { return theta_class(H, BitVector(n, true), cfg.theta_budget).theta; };
  switch (cfg.theta_mode) {
    case ThetaMode::supplied:
      return cfg.theta_value;
    case ThetaMode::bound_formula:
      return formula();
    case ThetaMode::brute_force:
      return brute();
    case ThetaMode::automatic:
      if (H.size() <= cfg.theta_budget.max_members && n <= cfg.theta_budget.max_points) {
        return brute();
      }
      return formula();
  }
  return formula();
}

namespace {

/// Draws m points of `region` uniformly without replacement and queries them.
/// Returns (sample mask, positive-label mask) over the whole dataset.
std::pair<BitVector, BitVector> draw_region_sample(const std::vector<std::size_t>& region,
                                                   std::size_t m, LabelSource& source, Rng& rng) {
  const std::size_t n = source.size();
  BitVector mask(n);
  BitVector positive(n);
  for (std::size_t i : sample_without_replacement(region, m, rng)) {
    mask.set(i);
    if (source.query(i) == 1) positive.set(i);
  }
  return {std::move(mask), std::move(positive)};
}

std::size_t mistakes(const HypothesisClass& H, std::size_t member, const BitVector& mask,
                     const BitVector& positive) {
  const auto r = H.row(member);
  const auto m = mask.words();
  const auto y = positive.words();
  std::size_t count = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    count += static_cast<std::size_t>(std::popcount((r[k] ^ y[k]) & m[k]));
  }
  return count;
}

}  // namespace

RunResult general_active(const GridDataset& data, const HypothesisClass& H,
                         LabelSource& source, const RunConfig& cfg) {
  cfg.validate();
  if (H.size() == 0) throw std::invalid_argument("general engine requires a non-empty class");
  const std::size_t n = data.size();
  if (H.points() != n || source.size() != n) {
    throw std::invalid_argument("class, dataset and label source sizes differ");
  }

  RunResult result;
  RunStats& stats = result.stats;
  stats.vc = class_complexity(H).vc;
  if (H.size() == 1) {
    stats.returned = H.member(0);
    return result;
  }
  stats.theta = resolve_theta(H, cfg);
  const double theta = std::max(stats.theta, 1.0);
  const std::size_t before = source.query_count();
  Rng rng(cfg.seed);
  const double dprime = loop_delta(cfg.delta, n);
  const BitVector everything(n, true);

  std::vector<std::size_t> current(H.size());
  for (std::size_t m = 0; m < H.size(); ++m) current[m] = m;
  double r = 1.0;

  while (current.size() > 1) {
    VersionSpaceIteration it;
    it.iteration = ++stats.iterations;
    it.version_space = current.size();
    it.radius = r;
    const std::vector<std::size_t> region = dis_region(H, current, everything).indices();
    if (region.empty()) {
      throw InternalConsistencyError("distinct members with an empty disagreement region");
    }
    it.dis_size = region.size();
    it.requested = general_loop_size(cfg, n, theta, stats.vc);
    it.sample_size = clamp_draw(it.requested, region.size(), cfg, stats);
    const auto [mask, positive] = draw_region_sample(region, it.sample_size, source, rng);
    it.width = draw_width(it.sample_size, region.size(), dprime, stats.vc);

    std::vector<std::size_t> errs(current.size());
    it.beta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < current.size(); ++k) {
      errs[k] = mistakes(H, current[k], mask, positive);
      it.beta = std::min(it.beta, interval(errs[k], it.sample_size, it.width).ub);
    }
    for (std::size_t k = 0; k < current.size(); ++k) {
      if (interval(errs[k], it.sample_size, it.width).lb <= it.beta) {
        it.survivors.push_back(current[k]);
      }
    }
    if (it.survivors.empty()) throw InternalConsistencyError("pruning removed every member");
    it.next_radius = radius(H, it.survivors, everything);

    if (it.next_radius > r / 2.0) {
      it.direct = true;
      it.direct_requested = general_direct_size(cfg, theta, stats.vc);
      it.direct_sample_size = clamp_draw(it.direct_requested, region.size(), cfg, stats);
      const auto [dmask, dpositive] =
          draw_region_sample(region, it.direct_sample_size, source, rng);
      it.direct_width =
          draw_width(it.direct_sample_size, region.size(), cfg.delta / 2.0, stats.vc);
      std::size_t best = current.front();
      double best_ub = std::numeric_limits<double>::infinity();
      for (std::size_t m : current) {
        const double ub =
            interval(mistakes(H, m, dmask, dpositive), it.direct_sample_size, it.direct_width).ub;
        if (ub < best_ub) {
          best_ub = ub;
          best = m;
        }
      }
      result.trace.push_back(std::move(it));
      stats.terminated_via = Termination::direct_estimation;
      stats.returned = H.member(best);
      result.returned_member = best;
      stats.queries = source.query_count() - before;
      return result;
    }
    current = it.survivors;
    r = it.next_radius;
    result.trace.push_back(std::move(it));
  }
  stats.terminated_via = Termination::loop;
  stats.returned = H.member(current.front());
  result.returned_member = current.front();
  stats.queries = source.query_count() - before;
  return result;
}

Optimum brute_force_optimal(const HypothesisClass& H, const BitVector& labels,
                            std::size_t member_cap) {
  if (H.size() == 0) throw std::invalid_argument("optimum of an empty class");
  if (H.size() > member_cap) {
    throw BudgetExceeded("class of " + std::to_string(H.size()) + " members exceeds budget " +
                         std::to_string(member_cap));
  }
  if (labels.size() != H.points()) throw std::invalid_argument("label length differs from class");
  const auto y = labels.words();
  std::size_t best = 0;
  std::size_t best_errors = std::numeric_limits<std::size_t>::max();
  for (std::size_t m = 0; m < H.size(); ++m) {
    const std::size_t e = hamming(H.row(m), y);
    if (e < best_errors) {
      best_errors = e;
      best = m;
    }
  }
  Optimum o;
  o.member = best;
  o.hypothesis = H.member(best);
  o.eta = static_cast<double>(best_errors) / static_cast<double>(H.points());
  return o;
}

Optimum optimal_stump(const BitVector& labels) {
  const std::size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("optimum over an empty dataset");
  std::size_t zeros = n - labels.count();
  // Stump h >= 1 errs on ones among points 1..h-1 and zeros among h..n.
  std::size_t ones_before = 0;
  std::size_t zeros_before = 0;
  std::size_t best = 0;
  std::size_t best_errors = zeros;  // stump 0 labels everything 1
  for (std::size_t h = 1; h <= n; ++h) {
    if (h >= 2) {
      if (labels.test(h - 2)) {
        ++ones_before;
      } else {
        ++zeros_before;
      }
    }
    const std::size_t e = ones_before + (zeros - zeros_before);
    if (e < best_errors) {
      best_errors = e;
      best = h;
    }
  }
  Optimum o;
  o.member = best;
  o.hypothesis = Stump{best};
  o.eta = static_cast<double>(best_errors) / static_cast<double>(n);
  return o;
}

void verify_run(RunStats& stats, const GridDataset& data, const BitVector& labels, double eta) {
  const BitVector lab = labeling(stats.returned, data);
  if (lab.size() != labels.size()) throw std::invalid_argument("label length differs from dataset");
  stats.achieved_err =
      static_cast<double>(hamming(lab.words(), labels.words())) / static_cast<double>(data.size());
  stats.eta = eta;
}

bool run_succeeded(const RunStats& stats, double epsilon) {
  if (stats.achieved_err < 0.0 || stats.eta < 0.0) {
    throw std::logic_error("run has not been verified");
  }
  return stats.achieved_err <= (1.0 + epsilon) * stats.eta + 1e-12;
}

}  // namespace activedt
