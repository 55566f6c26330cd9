#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "activedt/active.hpp"
#include "activedt/dataset.hpp"
#include "activedt/hypothesis.hpp"
#include "activedt/label_source.hpp"
#include "json.hpp"

namespace activedt {

enum class ExperimentKind { success_grid, theta_scaling, label_complexity };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

/// Axes of the (c1, b1, c2, b2) product grid.
struct ConstantGrid {
  std::vector<double> c1{1, 2, 3, 5, 10};
  std::vector<double> b1{1, 2, 3, 5, 10};
  std::vector<double> c2{1, 2, 3, 5, 10};
  std::vector<double> b2{1, 2, 3, 5, 10};
};

/// One θ-versus-n series.
struct ThetaStudy {
  std::string name;
  DatasetKind dataset = DatasetKind::grid;
  std::vector<std::size_t> ns;
  ClassKind class_kind = ClassKind::tree;
  int depth = 1;
  std::size_t dim = 1;
  bool unique_dims = true;
  /// "class": worst case over members. "all_zero": θ of the constant-0
  /// labeling only, which stays cheap when the class is too large to scan.
  std::string center = "class";
  std::size_t member_cap = kDefaultMemberCap;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::success_grid;
  /// Stump experiments run on sorted 1-D data of this size.
  std::size_t n = 100000;
  double noise = 0.1;
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t trials = 50;
  std::uint64_t master_seed = 0;
  std::string output;
  /// Reuse one labeled instance for every trial of a cell instead of drawing
  /// a fresh target and noise pattern per trial.
  bool fixed_dataset = false;

  ConstantGrid grid;
  std::vector<ThetaStudy> studies;

  std::vector<std::size_t> ns;   ///< label-complexity sweep
  std::vector<double> epsilons;  ///< label-complexity sweep
  double c1 = 3, b1 = 3, c2 = 3, b2 = 3;

  /// Throws std::invalid_argument when the config cannot be run.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct GridCell {
  double c1 = 0, b1 = 0, c2 = 0, b2 = 0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double mean_queries = 0.0;
  std::size_t max_iterations = 0;
  std::size_t iteration_cap_violations = 0;
};

struct ThetaRow {
  std::string study;
  std::string dataset;
  std::string class_kind;
  std::size_t n = 0;
  int d = 0;
  std::size_t dim = 0;
  bool unique_dims = true;
  std::size_t members = 0;
  std::string center;
  double theta = 0.0;
};

struct ComplexityRow {
  std::size_t n = 0;
  double epsilon = 0.0;
  std::size_t trials = 0;
  double median_queries = 0.0;
  double p90_queries = 0.0;
  double success_rate = 0.0;
  std::size_t direct_runs = 0;
  double median_direct_queries = 0.0;
  std::size_t iteration_cap_violations = 0;
};

/// Outcome of one verified stump-engine trial.
struct TrialOutcome {
  bool success = false;
  std::size_t queries = 0;
  std::size_t iterations = 0;
  Termination terminated_via = Termination::loop;
  double achieved_err = 0.0;
  double eta = 0.0;
};

/// Builds an instance (uniform random target stump over {0..n}, noise flips)
/// from instance_seed, runs the stump engine with algorithm_seed and verifies
/// it against the exact optimum.
TrialOutcome run_stump_trial(const GridDataset& data, double noise, std::uint64_t instance_seed,
                             RunConfig cfg, std::uint64_t algorithm_seed);

/// Runs body(0..count-1) on `jobs` worker threads. Each index runs exactly
/// once; exceptions are rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

std::vector<GridCell> run_success_grid(const ExperimentConfig& cfg, unsigned jobs = 1);
std::vector<ThetaRow> run_theta_scaling(const ExperimentConfig& cfg, unsigned jobs = 1);
std::vector<ComplexityRow> run_label_complexity(const ExperimentConfig& cfg, unsigned jobs = 1);

/// c1,b1,c2,b2,successes,trials,success_rate,mean_queries
void write_csv(std::ostream& out, const std::vector<GridCell>& rows);
/// study,dataset,class_kind,n,d,dim,unique_dims,members,center,theta
void write_csv(std::ostream& out, const std::vector<ThetaRow>& rows);
/// n,epsilon,trials,median_queries,p90_queries,success_rate,direct_runs,median_direct_queries
void write_csv(std::ostream& out, const std::vector<ComplexityRow>& rows);

/// Linearly interpolated quantile of a non-empty sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace activedt
