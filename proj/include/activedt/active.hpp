#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "activedt/bit_vector.hpp"
#include "activedt/dataset.hpp"
#include "activedt/disagreement.hpp"
#include "activedt/hypothesis.hpp"
#include "activedt/label_source.hpp"
#include "json.hpp"

namespace activedt {

enum class ThetaMode { automatic, brute_force, supplied, bound_formula };

std::string to_string(ThetaMode mode);
ThetaMode theta_mode_from_string(const std::string& s);

struct RunConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  double c1 = 3.0;
  double b1 = 3.0;
  double c2 = 3.0;
  double b2 = 3.0;
  ThetaMode theta_mode = ThetaMode::automatic;
  double theta_value = 0.0;  ///< used when theta_mode == supplied
  ThetaBudget theta_budget;
  std::uint64_t seed = 0;
  /// Draws larger than their population are clamped to it (a census). When
  /// false such a draw throws BudgetExceeded instead.
  bool clamp = true;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  /// Constants large enough that every in-loop stump interval has width
  /// 1/16 and every direct-estimation interval width at most eps/16.
  static RunConfig theoretical(double epsilon, double delta);
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

enum class Termination { loop, direct_estimation };

std::string to_string(Termination t);

struct RunStats {
  std::size_t queries = 0;
  std::size_t iterations = 0;
  Termination terminated_via = Termination::loop;
  Hypothesis returned = Stump{0};
  double achieved_err = -1.0;  ///< filled by verify_run
  double eta = -1.0;           ///< filled by verify_run
  std::size_t clamps = 0;
  double theta = 0.0;  ///< general engine only
  std::size_t vc = 1;
};

struct StumpIteration {
  std::size_t iteration = 0;
  std::size_t L = 0;
  std::size_t R = 0;
  std::size_t population = 0;
  std::size_t requested = 0;
  std::size_t sample_size = 0;
  double width = 0.0;
  double beta = 0.0;
  std::size_t next_L = 0;
  std::size_t next_R = 0;
  bool direct = false;
  std::size_t direct_requested = 0;
  std::size_t direct_sample_size = 0;
  double direct_width = 0.0;
};

struct VersionSpaceIteration {
  std::size_t iteration = 0;
  std::size_t version_space = 0;
  double radius = 0.0;
  std::size_t dis_size = 0;
  std::size_t requested = 0;
  std::size_t sample_size = 0;
  double width = 0.0;
  double beta = 0.0;
  std::vector<std::size_t> survivors;
  double next_radius = 0.0;
  bool direct = false;
  std::size_t direct_requested = 0;
  std::size_t direct_sample_size = 0;
  double direct_width = 0.0;
};

struct RunResult {
  RunStats stats;
  /// Member index of the returned hypothesis (general engine).
  std::size_t returned_member = 0;
  std::vector<StumpIteration> stump_trace;
  std::vector<VersionSpaceIteration> trace;
};

nlohmann::json to_json(const RunStats& stats);
nlohmann::json to_json(const RunResult& result, const RunConfig& cfg);

/// delta' = delta / (2 log2(2n)).
double loop_delta(double delta, std::size_t n);

/// Per-iteration stump draw: ceil(c1 ln(1/delta') + b1).
std::size_t stump_loop_size(const RunConfig& cfg, std::size_t n);
/// Stump direct-estimation draw: ceil((c2/eps^2)(ln(1/(delta eps)) + b2)).
std::size_t stump_direct_size(const RunConfig& cfg);
/// General in-loop draw: ceil(c1 theta^2 (V ln theta + ln(1/delta')) + b1).
std::size_t general_loop_size(const RunConfig& cfg, std::size_t n, double theta, std::size_t vc);
/// General direct draw: ceil((c2 theta^2/eps^2)(V ln(theta/eps) + ln(1/delta)) + b2).
std::size_t general_direct_size(const RunConfig& cfg, double theta, std::size_t vc);

/// Halving search over stump thresholds on sorted 1-D data. Labels are read
/// only through source.query.
RunResult stump_active(const GridDataset& data, LabelSource& source, const RunConfig& cfg);

/// θ as selected by cfg.theta_mode.
double resolve_theta(const HypothesisClass& H, const RunConfig& cfg);

/// Version-space pruning over an arbitrary materialized class.
RunResult general_active(const GridDataset& data, const HypothesisClass& H,
                         LabelSource& source, const RunConfig& cfg);

struct Optimum {
  std::size_t member = 0;  ///< class member index, or stump index
  Hypothesis hypothesis = Stump{0};
  double eta = 0.0;
};

/// Exact minimizer of population error over the class; ties go to the lowest
/// member index. Throws BudgetExceeded when |H| > member_cap.
Optimum brute_force_optimal(const HypothesisClass& H, const BitVector& labels,
                            std::size_t member_cap = kDefaultMemberCap);

/// Exact minimizer over stumps {0..n} in O(n) via prefix sums; ties go to
/// the lowest stump index.
Optimum optimal_stump(const BitVector& labels);

/// Fills achieved_err (population error of the returned hypothesis) and eta.
void verify_run(RunStats& stats, const GridDataset& data, const BitVector& labels, double eta);

/// achieved_err <= (1 + eps) eta, with a small absolute slack for rounding.
bool run_succeeded(const RunStats& stats, double epsilon);

}  // namespace activedt
