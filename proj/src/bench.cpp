#include "ratiosparse/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "ratiosparse/errors.hpp"
#include "ratiosparse/instancegen.hpp"
#include "ratiosparse/io.hpp"
#include "ratiosparse/theory.hpp"

namespace ratiosparse {

namespace {

// %.12g: readable and still deterministic for identical doubles.
std::string fmt_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

int resolve_threads(int requested, int num_tasks) {
  int t = requested;
  if (t <= 0) {
    t = static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
  }
  if (const char* env = std::getenv("RATIO_SPARSE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < t) t = cap;
  }
  return std::max(1, std::min(t, num_tasks));
}

// fn must not throw; each task handles its own errors.
void parallel_for(int num_tasks, int threads,
                  const std::function<void(int)>& fn) {
  if (threads <= 1) {
    for (int i = 0; i < num_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < num_tasks; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

const char* class_name(const TrialRecord& rec) {
  if (!rec.classification) return "error";
  switch (*rec.classification) {
    case TrialClass::Success:
      return "success";
    case TrialClass::ModelFailure:
      return "model_failure";
    case TrialClass::AlgorithmFailure:
      return "algorithm_failure";
  }
  return "error";
}

}  // namespace

TrialClass classify(double objective_truth, double objective_sol,
                    double rel_error) {
  if (!std::isfinite(objective_truth) || !std::isfinite(objective_sol) ||
      !std::isfinite(rel_error)) {
    throw ParamError("classify: inputs must be finite");
  }
  if (rel_error <= 1e-3) return TrialClass::Success;
  const double tie_tol = 1e-9 * std::max(1.0, objective_truth);
  if (objective_truth > objective_sol + tie_tol) return TrialClass::ModelFailure;
  return TrialClass::AlgorithmFailure;  // includes the tie band
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.sparsity_grid.empty()) {
    throw ParamError("run_experiment: empty sparsity grid");
  }
  for (std::size_t i = 1; i < config.sparsity_grid.size(); ++i) {
    if (config.sparsity_grid[i] <= config.sparsity_grid[i - 1]) {
      throw ParamError("run_experiment: sparsity grid must be ascending");
    }
  }
  if (config.trials < 1) throw ParamError("run_experiment: trials must be >= 1");

  const int num_s = static_cast<int>(config.sparsity_grid.size());
  const int num_tasks = num_s * config.trials;
  ExperimentResult result;
  result.records.resize(num_tasks);
  std::atomic<int> ties{0};

  auto run_trial = [&](int task) {
    const int si = task / config.trials;
    const int k = task % config.trials;
    const Index s = config.sparsity_grid[static_cast<std::size_t>(si)];
    const std::uint64_t matrix_seed =
        config.base_seed + static_cast<std::uint64_t>(k);
    const std::uint64_t truth_seed =
        config.base_seed + 1000000ull + static_cast<std::uint64_t>(k);

    TrialRecord rec;
    rec.sparsity = s;
    rec.seed = matrix_seed;
    try {
      SensingMatrix a =
          config.matrix_kind == MatrixKind::OversampledDct
              ? gen_dct(config.m, config.n, config.matrix_param, matrix_seed)
              : gen_gaussian(config.m, config.n, config.matrix_param,
                             matrix_seed);
      GroundTruth truth =
          gen_sparse_signal(config.n, s, config.min_sep, truth_seed);
      const Vector x_true = truth.values;
      const Instance inst = make_instance(std::move(a), std::move(truth));

      const auto t0 = std::chrono::steady_clock::now();
      Vector sol;
      double obj_truth = 0.0;
      double obj_sol = 0.0;
      if (config.solver == SolverChoice::L1) {
        int iters = 0;
        sol = solve_l1_init(inst, config.solver_params.eps,
                            config.solver_params.max_iter, &iters);
        rec.iterations = iters;
        obj_truth = x_true.lpNorm<1>();
        obj_sol = sol.lpNorm<1>();
      } else {
        SolverConfig cfg = config.solver_params;
        cfg.init = InitKind::L1BasisPursuit;
        cfg.seed = truth_seed;
        if (config.solver == SolverChoice::L1L2Box) {
          if (!cfg.box) cfg.box = Box{-1.0, 1.0};
        } else {
          cfg.box.reset();
        }
        const SolveReport rep = solve(inst, cfg);
        sol = rep.solution;
        rec.iterations = rep.iterations;
        obj_truth = objective(x_true);
        obj_sol = objective(sol);
      }
      const auto t1 = std::chrono::steady_clock::now();
      rec.seconds =
          config.record_timing
              ? std::chrono::duration<double>(t1 - t0).count()
              : 0.0;
      rec.rel_error = (sol - x_true).norm() / x_true.norm();
      rec.classification = classify(obj_truth, obj_sol, rec.rel_error);
      if (*rec.classification != TrialClass::Success &&
          std::abs(obj_truth - obj_sol) <=
              1e-9 * std::max(1.0, obj_truth)) {
        ties.fetch_add(1);
      }
    } catch (const std::exception& e) {
      rec.classification = std::nullopt;
      rec.error = e.what();
    }
    result.records[task] = std::move(rec);
  };

  parallel_for(num_tasks, resolve_threads(config.threads, num_tasks),
               run_trial);
  result.tie_count = ties.load();

  std::ostringstream trials_csv;
  trials_csv << "sparsity,seed,rel_error,classification,iterations,seconds\n";
  for (const TrialRecord& rec : result.records) {
    trials_csv << rec.sparsity << ',' << rec.seed << ','
               << fmt_double(rec.rel_error) << ',' << class_name(rec) << ','
               << rec.iterations << ',' << fmt_short(rec.seconds) << '\n';
  }
  result.trials_csv = trials_csv.str();

  std::ostringstream summary;
  summary << "sparsity,trials,success_rate,model_failure_rate,"
             "algorithm_failure_rate,errored,mean_iters,mean_seconds\n";
  for (int si = 0; si < num_s; ++si) {
    int n_success = 0, n_model = 0, n_algo = 0, n_err = 0;
    double iter_sum = 0.0, sec_sum = 0.0;
    for (int k = 0; k < config.trials; ++k) {
      const TrialRecord& rec = result.records[si * config.trials + k];
      if (!rec.classification) {
        ++n_err;
        continue;
      }
      iter_sum += rec.iterations;
      sec_sum += rec.seconds;
      switch (*rec.classification) {
        case TrialClass::Success: ++n_success; break;
        case TrialClass::ModelFailure: ++n_model; break;
        case TrialClass::AlgorithmFailure: ++n_algo; break;
      }
    }
    const int valid = config.trials - n_err;
    const double denom = valid > 0 ? valid : 1.0;
    summary << config.sparsity_grid[static_cast<std::size_t>(si)] << ','
            << config.trials << ',' << fmt_short(n_success / denom) << ','
            << fmt_short(n_model / denom) << ',' << fmt_short(n_algo / denom)
            << ',' << n_err << ',' << fmt_short(iter_sum / denom) << ','
            << fmt_short(sec_sum / denom) << '\n';
  }
  result.summary_csv = summary.str();
  return result;
}

ToyLandscape toy_landscape(double t_min, double t_max, int steps) {
  if (steps < 2) throw ParamError("toy_landscape: steps must be >= 2");
  if (!(t_max > t_min)) throw ParamError("toy_landscape: empty range");

  const double step = (t_max - t_min) / (steps - 1);
  ToyLandscape out;
  out.l1_min = std::numeric_limits<double>::infinity();
  out.ratio_min = std::numeric_limits<double>::infinity();

  std::ostringstream csv;
  csv << "t,l1,l1_over_l2\n";
  for (int i = 0; i < steps; ++i) {
    const double t = t_min + i * step;
    const Vector x = toy_solution(t);
    const double l1 = x.lpNorm<1>();
    const double ratio = objective(x);
    csv << fmt_double(t) << ',' << fmt_double(l1) << ',' << fmt_double(ratio)
        << '\n';
    if (l1 < out.l1_min) {
      out.l1_min = l1;
      out.l1_argmin = t;
    }
    if (ratio < out.ratio_min) {
      out.ratio_min = ratio;
      out.ratio_argmin = t;
    }
  }
  out.csv = csv.str();
  return out;
}

RatioVsF run_ratio_vs_f(const std::vector<double>& f_grid, int realizations,
                        Index m, Index n, std::uint64_t base_seed,
                        int restarts, int threads,
                        const SolverConfig* base_config) {
  if (realizations < 2) {
    throw ParamError("run_ratio_vs_f: realizations must be >= 2");
  }
  if (f_grid.empty()) throw ParamError("run_ratio_vs_f: empty F grid");

  RatioVsF out;
  out.f_grid = f_grid;
  const int num_f = static_cast<int>(f_grid.size());
  const int num_tasks = num_f * realizations;
  std::vector<double> bounds(num_tasks,
                             std::numeric_limits<double>::quiet_NaN());

  parallel_for(num_tasks, resolve_threads(threads, num_tasks), [&](int task) {
    const int fi = task / realizations;
    const int k = task % realizations;
    const double f = f_grid[static_cast<std::size_t>(fi)];
    const std::uint64_t matrix_seed =
        base_seed + static_cast<std::uint64_t>(k);
    try {
      const SensingMatrix a = gen_dct(m, n, f, matrix_seed);
      bounds[task] = kernel_ratio_bound(
          a, restarts, base_seed + 1000000ull + static_cast<std::uint64_t>(k),
          base_config);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "ratio-vs-f: F=%g realization %d failed: %s\n", f,
                   k, e.what());
    }
  });

  std::ostringstream csv;
  csv << "F,mean_bound,std_bound\n";
  for (int fi = 0; fi < num_f; ++fi) {
    double sum = 0.0;
    int count = 0;
    for (int k = 0; k < realizations; ++k) {
      const double b = bounds[fi * realizations + k];
      if (std::isfinite(b)) {
        sum += b;
        ++count;
      }
    }
    const double mean = count > 0 ? sum / count : 0.0;
    double var = 0.0;
    for (int k = 0; k < realizations; ++k) {
      const double b = bounds[fi * realizations + k];
      if (std::isfinite(b)) var += (b - mean) * (b - mean);
    }
    const double sd = count > 1 ? std::sqrt(var / (count - 1)) : 0.0;
    out.mean_bound.push_back(mean);
    out.std_bound.push_back(sd);
    csv << fmt_short(f_grid[static_cast<std::size_t>(fi)]) << ','
        << fmt_double(mean) << ',' << fmt_double(sd) << '\n';
  }
  out.csv = csv.str();
  return out;
}

}  // namespace ratiosparse
