#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratiosparse/solver.hpp"
#include "ratiosparse/types.hpp"

namespace ratiosparse {

enum class SolverChoice { L1L2, L1L2Box, L1 };

enum class TrialClass { Success, ModelFailure, AlgorithmFailure };

struct ExperimentConfig {
  MatrixKind matrix_kind = MatrixKind::OversampledDct;
  double matrix_param = 10.0;  // F for DCT, r for Gaussian
  Index m = 64;
  Index n = 1024;
  std::vector<Index> sparsity_grid;  // nonempty, ascending
  int trials = 50;
  std::uint64_t base_seed = 0;
  SolverChoice solver = SolverChoice::L1L2Box;
  SolverConfig solver_params;       // box read from here for L1L2Box
  std::optional<Index> min_sep;     // minimum support separation, if any
  int threads = 0;                  // 0: RATIO_SPARSE_THREADS or hardware
  bool record_timing = true;        // false writes 0 seconds (byte-stable CSV)
};

struct TrialRecord {
  Index sparsity = 0;
  std::uint64_t seed = 0;
  double rel_error = 0.0;
  std::optional<TrialClass> classification;  // nullopt: the trial errored
  std::string error;
  int iterations = 0;
  double seconds = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // sorted by (sparsity, seed)
  std::string trials_csv;
  std::string summary_csv;  // header: sparsity,trials,success_rate,...
  int tie_count = 0;        // objective ties classified as algorithm failure
};

// Success iff rel_error <= 1e-3; otherwise compares objectives at the truth
// and the solution with tie tolerance 1e-9*max(1, objective_truth). Ties
// fall to AlgorithmFailure.
TrialClass classify(double objective_truth, double objective_sol,
                    double rel_error);

// Runs trials over the sparsity grid in a worker pool. Matrix seed for trial
// k is base_seed + k, truth seed is base_seed + 10^6 + k. Per-trial solver
// is initialized from the basis-pursuit solution.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct ToyLandscape {
  std::string csv;  // t,l1,l1_over_l2
  double l1_argmin = 0.0;
  double l1_min = 0.0;
  double ratio_argmin = 0.0;
  double ratio_min = 0.0;
};

// Evaluates ||x(t)||_1 and ||x(t)||_1/||x(t)||_2 along the toy solution
// line on `steps` equally spaced grid points.
ToyLandscape toy_landscape(double t_min, double t_max, int steps);

struct RatioVsF {
  std::vector<double> f_grid;
  std::vector<double> mean_bound;
  std::vector<double> std_bound;  // sample standard deviation
  std::string csv;                // F,mean_bound,std_bound
};

// Mean kernel-ratio bound over seeded DCT matrices per F value.
RatioVsF run_ratio_vs_f(const std::vector<double>& f_grid, int realizations,
                        Index m = 64, Index n = 1024,
                        std::uint64_t base_seed = 0, int restarts = 5,
                        int threads = 0,
                        const SolverConfig* base_config = nullptr);

}  // namespace ratiosparse
