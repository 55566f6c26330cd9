#include "activedt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "activedt/disagreement.hpp"
#include "activedt/random.hpp"

namespace activedt {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::success_grid:
      return "success_grid";
    case ExperimentKind::theta_scaling:
      return "theta_scaling";
    case ExperimentKind::label_complexity:
      return "label_complexity";
  }
  return "success_grid";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "success_grid" || s == "success-grid") return ExperimentKind::success_grid;
  if (s == "theta_scaling" || s == "theta-scaling") return ExperimentKind::theta_scaling;
  if (s == "label_complexity" || s == "label-complexity") return ExperimentKind::label_complexity;
  throw std::invalid_argument("unknown experiment: " + s);
}

namespace {

std::string class_kind_name(ClassKind k) {
  switch (k) {
    case ClassKind::stump:
      return "stump";
    case ClassKind::tree:
      return "tree";
    case ClassKind::line_tree:
      return "line_tree";
  }
  return "tree";
}

ClassKind class_kind_from_string(const std::string& s) {
  if (s == "stump") return ClassKind::stump;
  if (s == "tree") return ClassKind::tree;
  if (s == "line_tree") return ClassKind::line_tree;
  throw std::invalid_argument("unknown class kind: " + s);
}

void check_unit(double x, const char* name, bool allow_zero) {
  const bool ok = allow_zero ? (x >= 0.0 && x <= 1.0) : (x > 0.0 && x < 1.0);
  if (!ok) throw std::invalid_argument(std::string(name) + " out of range");
}

/// Exact integer root of n if one exists.
std::size_t exact_root(std::size_t n, std::size_t dim) {
  const auto guess = static_cast<std::size_t>(
      std::llround(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(dim))));
  for (std::size_t w = guess > 0 ? guess - 1 : 0; w <= guess + 1; ++w) {
    std::size_t p = 1;
    for (std::size_t k = 0; k < dim; ++k) p *= w;
    if (w > 0 && p == n) return w;
  }
  throw std::invalid_argument("grid size " + std::to_string(n) + " is not a perfect power");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  check_unit(noise, "noise", true);
  check_unit(epsilon, "epsilon", false);
  check_unit(delta, "delta", false);
  switch (kind) {
    case ExperimentKind::success_grid:
      if (n == 0) throw std::invalid_argument("n must be >= 1");
      if (grid.c1.empty() || grid.b1.empty() || grid.c2.empty() || grid.b2.empty()) {
        throw std::invalid_argument("grid ranges must be non-empty");
      }
      break;
    case ExperimentKind::theta_scaling:
      if (studies.empty()) throw std::invalid_argument("theta scaling needs at least one study");
      for (const ThetaStudy& s : studies) {
        if (s.ns.empty()) throw std::invalid_argument("study " + s.name + " has no sizes");
        if (s.center != "class" && s.center != "all_zero") {
          throw std::invalid_argument("study center must be 'class' or 'all_zero'");
        }
      }
      break;
    case ExperimentKind::label_complexity:
      if (ns.empty() || epsilons.empty()) {
        throw std::invalid_argument("label complexity needs non-empty ns and epsilons");
      }
      for (double e : epsilons) check_unit(e, "epsilon", false);
      break;
  }
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j{{"experiment", to_string(cfg.kind)},
                   {"n", cfg.n},
                   {"noise", cfg.noise},
                   {"epsilon", cfg.epsilon},
                   {"delta", cfg.delta},
                   {"trials", cfg.trials},
                   {"master_seed", cfg.master_seed},
                   {"output", cfg.output},
                   {"fixed_dataset", cfg.fixed_dataset}};
  switch (cfg.kind) {
    case ExperimentKind::success_grid:
      j["grid"] = {{"c1", cfg.grid.c1}, {"b1", cfg.grid.b1}, {"c2", cfg.grid.c2}, {"b2", cfg.grid.b2}};
      break;
    case ExperimentKind::theta_scaling: {
      nlohmann::json studies = nlohmann::json::array();
      for (const ThetaStudy& s : cfg.studies) {
        studies.push_back({{"name", s.name},
                           {"dataset", to_string(s.dataset)},
                           {"ns", s.ns},
                           {"class", class_kind_name(s.class_kind)},
                           {"depth", s.depth},
                           {"dim", s.dim},
                           {"unique_dims", s.unique_dims},
                           {"center", s.center},
                           {"member_cap", s.member_cap}});
      }
      j["studies"] = studies;
      break;
    }
    case ExperimentKind::label_complexity:
      j["ns"] = cfg.ns;
      j["epsilons"] = cfg.epsilons;
      j["constants"] = {{"c1", cfg.c1}, {"b1", cfg.b1}, {"c2", cfg.c2}, {"b2", cfg.b2}};
      break;
  }
  return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.kind = experiment_kind_from_string(j.at("experiment").get<std::string>());
  cfg.n = j.value("n", cfg.n);
  cfg.noise = j.value("noise", cfg.noise);
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  cfg.output = j.value("output", cfg.output);
  cfg.fixed_dataset = j.value("fixed_dataset", cfg.fixed_dataset);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    cfg.grid.c1 = g.value("c1", cfg.grid.c1);
    cfg.grid.b1 = g.value("b1", cfg.grid.b1);
    cfg.grid.c2 = g.value("c2", cfg.grid.c2);
    cfg.grid.b2 = g.value("b2", cfg.grid.b2);
  }
  if (j.contains("studies")) {
    for (const auto& sj : j.at("studies")) {
      ThetaStudy s;
      s.name = sj.value("name", std::string("study"));
      s.dataset = dataset_kind_from_string(sj.value("dataset", std::string("grid")));
      s.ns = sj.at("ns").get<std::vector<std::size_t>>();
      s.class_kind = class_kind_from_string(sj.value("class", std::string("tree")));
      s.depth = sj.value("depth", s.depth);
      s.dim = sj.value("dim", s.dim);
      s.unique_dims = sj.value("unique_dims", s.unique_dims);
      s.center = sj.value("center", s.center);
      s.member_cap = sj.value("member_cap", s.member_cap);
      cfg.studies.push_back(std::move(s));
    }
  }
  cfg.ns = j.value("ns", cfg.ns);
  cfg.epsilons = j.value("epsilons", cfg.epsilons);
  if (j.contains("constants")) {
    const auto& c = j.at("constants");
    cfg.c1 = c.value("c1", cfg.c1);
    cfg.b1 = c.value("b1", cfg.b1);
    cfg.c2 = c.value("c2", cfg.c2);
    cfg.b2 = c.value("b2", cfg.b2);
  }
  cfg.validate();
  return cfg;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

TrialOutcome run_stump_trial(const GridDataset& data, double noise, std::uint64_t instance_seed,
                             RunConfig cfg, std::uint64_t algorithm_seed) {
  Rng rng(instance_seed);
  const std::size_t target = std::uniform_int_distribution<std::size_t>(0, data.size())(rng);
  const LabelSource truth(data, Stump{target}, noise, derive_seed(instance_seed, {1}));
  LabelSource source = truth.fresh();
  const Optimum best = optimal_stump(truth.realized_labels());

  cfg.seed = algorithm_seed;
  RunResult result = stump_active(data, source, cfg);
  verify_run(result.stats, data, truth.realized_labels(), best.eta);

  TrialOutcome out;
  out.success = run_succeeded(result.stats, cfg.epsilon);
  out.queries = result.stats.queries;
  out.iterations = result.stats.iterations;
  out.terminated_via = result.stats.terminated_via;
  out.achieved_err = result.stats.achieved_err;
  out.eta = result.stats.eta;
  return out;
}

namespace {

std::size_t iteration_cap(std::size_t n) {
  return static_cast<std::size_t>(std::floor(std::log2(2.0 * static_cast<double>(n)) + 1e-9));
}

/// Seeds for trial t of cell c: (instance, algorithm).
std::pair<std::uint64_t, std::uint64_t> trial_seeds(std::uint64_t master, std::size_t cell,
                                                    std::size_t trial, bool fixed_dataset) {
  const std::uint64_t trial_seed = derive_seed(master, {cell, trial});
  const std::uint64_t instance =
      fixed_dataset ? derive_seed(master, {cell, 0xda7a}) : derive_seed(trial_seed, {0});
  return {instance, derive_seed(trial_seed, {1})};
}

}  // namespace

std::vector<GridCell> run_success_grid(const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  const GridDataset data = make_line(cfg.n);
  std::vector<GridCell> cells;
  for (double c1 : cfg.grid.c1) {
    for (double b1 : cfg.grid.b1) {
      for (double c2 : cfg.grid.c2) {
        for (double b2 : cfg.grid.b2) {
          GridCell cell;
          cell.c1 = c1;
          cell.b1 = b1;
          cell.c2 = c2;
          cell.b2 = b2;
          cell.trials = cfg.trials;
          cells.push_back(cell);
        }
      }
    }
  }
  std::sort(cells.begin(), cells.end(), [](const GridCell& a, const GridCell& b) {
    return std::tie(a.c1, a.b1, a.c2, a.b2) < std::tie(b.c1, b.b1, b.c2, b.b2);
  });

  std::vector<TrialOutcome> outcomes(cells.size() * cfg.trials);
  parallel_for(outcomes.size(), jobs, [&](std::size_t k) {
    const std::size_t c = k / cfg.trials;
    const std::size_t t = k % cfg.trials;
    RunConfig rc;
    rc.epsilon = cfg.epsilon;
    rc.delta = cfg.delta;
    rc.c1 = cells[c].c1;
    rc.b1 = cells[c].b1;
    rc.c2 = cells[c].c2;
    rc.b2 = cells[c].b2;
    const auto [instance, algorithm] = trial_seeds(cfg.master_seed, c, t, cfg.fixed_dataset);
    outcomes[k] = run_stump_trial(data, cfg.noise, instance, rc, algorithm);
  });

  const std::size_t cap = iteration_cap(cfg.n);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    GridCell& cell = cells[c];
    double queries = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = outcomes[c * cfg.trials + t];
      cell.successes += o.success ? 1 : 0;
      queries += static_cast<double>(o.queries);
      cell.max_iterations = std::max(cell.max_iterations, o.iterations);
      cell.iteration_cap_violations += o.iterations > cap ? 1 : 0;
    }
    cell.success_rate = static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
    cell.mean_queries = queries / static_cast<double>(cell.trials);
  }
  return cells;
}

std::vector<ThetaRow> run_theta_scaling(const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  struct Job {
    const ThetaStudy* study;
    std::size_t n;
  };
  std::vector<Job> work;
  for (const ThetaStudy& s : cfg.studies) {
    for (std::size_t n : s.ns) work.push_back({&s, n});
  }
  std::vector<ThetaRow> rows(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t k) {
    const ThetaStudy& s = *work[k].study;
    const std::size_t n = work[k].n;
    GridDataset data = [&] {
      switch (s.dataset) {
        case DatasetKind::grid:
          return make_grid(exact_root(n, s.dim), s.dim);
        case DatasetKind::diagonal:
          return make_diagonal(n, s.dim);
        case DatasetKind::sorted1d:
          return make_line(n);
      }
      throw std::invalid_argument("unknown dataset kind");
    }();
    HypothesisClass H = [&] {
      switch (s.class_kind) {
        case ClassKind::stump:
          return stump_class(data);
        case ClassKind::tree:
          return enumerate_trees(data, s.depth, s.unique_dims, s.member_cap);
        case ClassKind::line_tree:
          return line_tree_class(data, enumerate_trees(data, s.depth, s.unique_dims, s.member_cap),
                                 s.member_cap);
      }
      throw std::invalid_argument("unknown class kind");
    }();
    const ThetaBudget budget{s.member_cap, ThetaBudget{}.max_points};
    const BitVector everything(data.size(), true);

    ThetaRow row;
    row.study = s.name;
    row.dataset = to_string(s.dataset);
    row.class_kind = class_kind_name(s.class_kind);
    row.n = data.size();
    row.d = s.depth;
    row.dim = data.dim();
    row.unique_dims = s.unique_dims;
    row.members = H.size();
    row.center = s.center;
    if (s.center == "class") {
      row.theta = theta_class(H, everything, budget).theta;
    } else {
      std::size_t zero = H.size();
      for (std::size_t m = 0; m < H.size() && zero == H.size(); ++m) {
        if (H.labeling(m).none()) zero = m;
      }
      if (zero == H.size()) throw std::invalid_argument("class has no all-zero member");
      row.theta = theta_of(H, zero, everything, budget).theta_h;
    }
    rows[k] = std::move(row);
  });
  std::stable_sort(rows.begin(), rows.end(), [](const ThetaRow& a, const ThetaRow& b) {
    return std::tie(a.study, a.n) < std::tie(b.study, b.n);
  });
  return rows;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<ComplexityRow> run_label_complexity(const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  std::vector<std::pair<std::size_t, double>> keys;
  for (std::size_t n : cfg.ns) {
    for (double e : cfg.epsilons) keys.emplace_back(n, e);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<GridDataset> datasets;
  for (const auto& key : keys) datasets.push_back(make_line(key.first));

  std::vector<TrialOutcome> outcomes(keys.size() * cfg.trials);
  parallel_for(outcomes.size(), jobs, [&](std::size_t k) {
    const std::size_t c = k / cfg.trials;
    const std::size_t t = k % cfg.trials;
    RunConfig rc;
    rc.epsilon = keys[c].second;
    rc.delta = cfg.delta;
    rc.c1 = cfg.c1;
    rc.b1 = cfg.b1;
    rc.c2 = cfg.c2;
    rc.b2 = cfg.b2;
    const auto [instance, algorithm] = trial_seeds(cfg.master_seed, c, t, cfg.fixed_dataset);
    outcomes[k] = run_stump_trial(datasets[c], cfg.noise, instance, rc, algorithm);
  });

  std::vector<ComplexityRow> rows;
  for (std::size_t c = 0; c < keys.size(); ++c) {
    ComplexityRow row;
    row.n = keys[c].first;
    row.epsilon = keys[c].second;
    row.trials = cfg.trials;
    std::vector<double> queries;
    std::vector<double> direct;
    std::size_t successes = 0;
    const std::size_t cap = iteration_cap(row.n);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = outcomes[c * cfg.trials + t];
      queries.push_back(static_cast<double>(o.queries));
      if (o.terminated_via == Termination::direct_estimation) {
        direct.push_back(static_cast<double>(o.queries));
      }
      successes += o.success ? 1 : 0;
      row.iteration_cap_violations += o.iterations > cap ? 1 : 0;
    }
    row.median_queries = quantile(queries, 0.5);
    row.p90_queries = quantile(queries, 0.9);
    row.success_rate = static_cast<double>(successes) / static_cast<double>(cfg.trials);
    row.direct_runs = direct.size();
    row.median_direct_queries = direct.empty() ? 0.0 : quantile(direct, 0.5);
    rows.push_back(row);
  }
  return rows;
}

namespace {

/// Shortest precision that round-trips, so CSVs stay exact and stable.
std::string num(double x) {
  for (int p = 6; p < 17; ++p) {
    std::ostringstream t;
    t << std::setprecision(p) << x;
    if (std::stod(t.str()) == x) return t.str();
  }
  std::ostringstream t;
  t << std::setprecision(17) << x;
  return t.str();
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<GridCell>& rows) {
  out << "c1,b1,c2,b2,successes,trials,success_rate,mean_queries\n";
  for (const GridCell& r : rows) {
    out << num(r.c1) << ',' << num(r.b1) << ',' << num(r.c2) << ',' << num(r.b2) << ','
        << r.successes << ',' << r.trials << ',' << num(r.success_rate) << ','
        << num(r.mean_queries) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<ThetaRow>& rows) {
  out << "study,dataset,class_kind,n,d,dim,unique_dims,members,center,theta\n";
  for (const ThetaRow& r : rows) {
    out << r.study << ',' << r.dataset << ',' << r.class_kind << ',' << r.n << ',' << r.d << ','
        << r.dim << ',' << (r.unique_dims ? "true" : "false") << ',' << r.members << ','
        << r.center << ',' << num(r.theta) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<ComplexityRow>& rows) {
  out << "n,epsilon,trials,median_queries,p90_queries,success_rate,direct_runs,"
         "median_direct_queries\n";
  for (const ComplexityRow& r : rows) {
    out << r.n << ',' << num(r.epsilon) << ',' << r.trials << ',' << num(r.median_queries) << ','
        << num(r.p90_queries) << ',' << num(r.success_rate) << ',' << r.direct_runs << ','
        << num(r.median_direct_queries) << '\n';
  }
}

}  // namespace activedt
