#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ratiosparse/bench.hpp"
#include "ratiosparse/errors.hpp"

namespace rs = ratiosparse;

TEST_CASE("classification of the three outcomes") {
  // Small relative error wins regardless of objectives.
  CHECK(rs::classify(2.0, 1.5, 1e-4) == rs::TrialClass::Success);
  // Truth objective above the solution objective: the model preferred the
  // wrong point.
  CHECK(rs::classify(2.0, 1.5, 0.5) == rs::TrialClass::ModelFailure);
  // Solution objective above the truth: the algorithm stalled.
  CHECK(rs::classify(1.5, 2.0, 0.5) == rs::TrialClass::AlgorithmFailure);
  // Ties fall to algorithm failure.
  CHECK(rs::classify(1.5, 1.5, 0.5) == rs::TrialClass::AlgorithmFailure);
  CHECK(rs::classify(1.5, 1.5 - 1e-12, 0.5) == rs::TrialClass::AlgorithmFailure);
  CHECK_THROWS_AS(rs::classify(std::nan(""), 1.0, 0.1), rs::ParamError);
}

namespace {

rs::ExperimentConfig small_config() {
  rs::ExperimentConfig cfg;
  cfg.matrix_kind = rs::MatrixKind::OversampledDct;
  cfg.matrix_param = 5.0;
  cfg.m = 12;
  cfg.n = 48;
  cfg.sparsity_grid = {1, 2};
  cfg.trials = 4;
  cfg.base_seed = 11;
  cfg.solver = rs::SolverChoice::L1L2Box;
  cfg.solver_params.max_iter = 600;
  cfg.record_timing = false;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("experiment rates partition and reruns are byte-identical") {
  const rs::ExperimentConfig cfg = small_config();
  const rs::ExperimentResult a = rs::run_experiment(cfg);
  const rs::ExperimentResult b = rs::run_experiment(cfg);

  CHECK(a.summary_csv == b.summary_csv);
  CHECK(a.trials_csv == b.trials_csv);

  // Parse the summary and check the partition per sparsity row.
  std::istringstream is(a.summary_csv);
  std::string line;
  std::getline(is, line);
  CHECK(line ==
        "sparsity,trials,success_rate,model_failure_rate,"
        "algorithm_failure_rate,errored,mean_iters,mean_seconds");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 8);
    const double total = std::stod(cells[2]) + std::stod(cells[3]) +
                         std::stod(cells[4]);
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(cells[7] == "0");  // timing suppressed
  }
  CHECK(rows == 2);
  CHECK(a.records.size() == 8);
}

TEST_CASE("single-threaded and pooled runs agree") {
  rs::ExperimentConfig cfg = small_config();
  cfg.threads = 1;
  const rs::ExperimentResult serial = rs::run_experiment(cfg);
  cfg.threads = 4;
  const rs::ExperimentResult pooled = rs::run_experiment(cfg);
  CHECK(serial.trials_csv == pooled.trials_csv);
  CHECK(serial.summary_csv == pooled.summary_csv);
}

TEST_CASE("experiment validates its configuration") {
  rs::ExperimentConfig cfg = small_config();
  cfg.sparsity_grid.clear();
  CHECK_THROWS_AS(rs::run_experiment(cfg), rs::ParamError);
  cfg = small_config();
  cfg.sparsity_grid = {4, 2};
  CHECK_THROWS_AS(rs::run_experiment(cfg), rs::ParamError);
  cfg = small_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(rs::run_experiment(cfg), rs::ParamError);
}

TEST_CASE("toy landscape argmins match the paper's demo system") {
  const rs::ToyLandscape land = rs::toy_landscape(-5.0, 15.0, 2001);
  // Ratio minimum at t = 0 (grid-exact), value 78/sqrt(2324).
  CHECK(std::abs(land.ratio_argmin) < 0.005);
  CHECK(land.ratio_min ==
        doctest::Approx(78.0 / std::sqrt(2324.0)).epsilon(1e-9));
  // L1 minimum at t = 10 with value 32.
  CHECK(std::abs(land.l1_argmin - 10.0) < 0.005);
  CHECK(land.l1_min == doctest::Approx(32.0).epsilon(1e-9));

  // CSV has a header plus one row per grid point.
  int lines = 0;
  for (char ch : land.csv) lines += ch == '\n';
  CHECK(lines == 2002);

  CHECK_THROWS_AS(rs::toy_landscape(0.0, 1.0, 1), rs::ParamError);
}

TEST_CASE("ratio-vs-F sweep emits one row per F and nonnegative std") {
  const rs::RatioVsF res =
      rs::run_ratio_vs_f({1.0, 5.0}, 3, 8, 24, 21, 2, 2);
  CHECK(res.mean_bound.size() == 2);
  CHECK(res.std_bound.size() == 2);
  for (double sd : res.std_bound) CHECK(sd >= 0.0);
  for (double mb : res.mean_bound) CHECK(mb > 0.0);

  int lines = 0;
  for (char ch : res.csv) lines += ch == '\n';
  CHECK(lines == 3);

  // Deterministic under the same seed.
  const rs::RatioVsF res2 =
      rs::run_ratio_vs_f({1.0, 5.0}, 3, 8, 24, 21, 2, 1);
  CHECK(res.csv == res2.csv);

  CHECK_THROWS_AS(rs::run_ratio_vs_f({1.0}, 1, 8, 24, 0, 1, 1),
                  rs::ParamError);
}
