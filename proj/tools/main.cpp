// Command-line driver: instance generation, signal/image solvers, theory
// verifiers, and the benchmark harness.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ratiosparse/bench.hpp"
#include "ratiosparse/errors.hpp"
#include "ratiosparse/grad2d.hpp"
#include "ratiosparse/instancegen.hpp"
#include "ratiosparse/io.hpp"
#include "ratiosparse/solver.hpp"
#include "ratiosparse/theory.hpp"

namespace rs = ratiosparse;

namespace {

void ensure_parent_dir(const std::string& prefix) {
  const std::filesystem::path p(prefix);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

std::string join_indices(const std::vector<rs::Index>& idx) {
  std::ostringstream os;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) os << ';';
    os << idx[i];
  }
  return os.str();
}

std::string join_vector(const rs::Vector& v) {
  std::ostringstream os;
  for (rs::Index i = 0; i < v.size(); ++i) {
    if (i) os << ';';
    os << rs::fmt_double(v[i]);
  }
  return os.str();
}

std::string verdict_csv(const std::string& check, const rs::PropertyVerdict& v) {
  std::ostringstream os;
  os << "check,holds,margin,support,witness_vector\n";
  os << check << ',' << (v.holds ? 1 : 0) << ',' << rs::fmt_double(v.margin)
     << ',' << join_indices(v.witness_support) << ','
     << join_vector(v.witness_vector) << '\n';
  return os.str();
}

void emit_verdict(const std::string& check, const rs::PropertyVerdict& v,
                  const std::string& out) {
  const std::string csv = verdict_csv(check, v);
  if (out.empty()) {
    std::cout << csv;
  } else {
    ensure_parent_dir(out);
    rs::write_text_file(out, csv);
  }
}

struct SolverFlags {
  double rho1 = 100.0;
  double rho2 = 100.0;
  double eps = 1e-8;
  int max_iter = 0;
  std::vector<double> box;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rho1", rho1, "x=y penalty weight");
    cmd->add_option("--rho2", rho2, "x=z penalty weight");
    cmd->add_option("--eps", eps, "relative-change stopping tolerance");
    cmd->add_option("--max-iter", max_iter, "iteration cap (0: 10n)");
    cmd->add_option("--box", box, "box constraint: lo hi")->expected(2);
    cmd->add_option("--seed", seed, "RNG seed");
  }

  rs::SolverConfig config() const {
    rs::SolverConfig cfg;
    cfg.rho1 = rho1;
    cfg.rho2 = rho2;
    cfg.eps = eps;
    cfg.max_iter = max_iter;
    cfg.seed = seed;
    if (!box.empty()) cfg.box = rs::Box{box[0], box[1]};
    return cfg;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"sparse recovery via the scale-invariant L1/L2 ratio"};
  app.set_config("--config", "", "flat key=value config file");
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate matrices and signals");
  std::string gen_kind = "dct";
  rs::Index gen_m = 64, gen_n = 1024, gen_s = 10;
  double gen_f = 10.0, gen_r = 0.1;
  int gen_min_sep = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "out/gen";
  gen->add_option("--kind", gen_kind, "dct|gaussian|signal|toy")
      ->check(CLI::IsMember({"dct", "gaussian", "signal", "toy"}));
  gen->add_option("-m", gen_m, "rows");
  gen->add_option("-n", gen_n, "cols / signal length");
  gen->add_option("--F", gen_f, "DCT oversampling factor");
  gen->add_option("--r", gen_r, "Gaussian row correlation");
  gen->add_option("-s", gen_s, "signal sparsity");
  gen->add_option("--min-sep", gen_min_sep, "minimum support separation");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("-o", gen_out, "output path prefix");

  // ---- solve --------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "signal-domain L1/L2 solver");
  std::string solve_matrix, solve_rhs, solve_truth, solve_init = "l1";
  std::string solve_out = "out/solve";
  SolverFlags solve_flags;
  solve_cmd->add_option("--matrix", solve_matrix, "matrix file (.bin)")
      ->required();
  solve_cmd->add_option("--rhs", solve_rhs, "right-hand side file (.bin)")
      ->required();
  solve_cmd->add_option("--truth", solve_truth, "ground truth file (.bin)");
  solve_cmd->add_option("--init", solve_init, "l1|leastnorm|file:<path>");
  solve_flags.attach(solve_cmd);
  solve_cmd->add_option("-o", solve_out, "output path prefix");

  // ---- mri ----------------------------------------------------------
  auto* mri = app.add_subcommand("mri", "phantom reconstruction study");
  rs::Index mri_size = 128;
  int mri_lines = 8;
  std::string mri_solver = "ratio";
  std::string mri_out = "out/mri";
  double mri_lambda = 1e3, mri_rho1 = 10.0, mri_rho2 = 10.0, mri_rho3 = 1.0;
  double mri_eps = 1e-8;
  int mri_max_iter = 20000;
  std::uint64_t mri_seed = 0;
  mri->add_option("--size", mri_size, "image size n (n x n)");
  mri->add_option("--lines", mri_lines, "radial line count");
  mri->add_option("--solver", mri_solver, "ratio|tv")
      ->check(CLI::IsMember({"ratio", "tv"}));
  mri->add_option("--lambda", mri_lambda, "data penalty weight");
  mri->add_option("--rho1", mri_rho1, "d = grad u penalty");
  mri->add_option("--rho2", mri_rho2, "h = grad u penalty");
  mri->add_option("--rho3", mri_rho3, "v = u penalty");
  mri->add_option("--eps", mri_eps, "stopping tolerance");
  mri->add_option("--max-iter", mri_max_iter, "iteration cap");
  mri->add_option("--seed", mri_seed, "RNG seed");
  mri->add_option("-o", mri_out, "output path prefix");

  // ---- theory -------------------------------------------------------
  auto* theory = app.add_subcommand("theory", "recovery-condition verifiers");
  theory->require_subcommand(1);
  std::string th_matrix, th_rhs, th_x, th_out;
  int th_s = 1, th_smax = 3, th_trials = 20, th_restarts = 5;
  std::uint64_t th_seed = 0;
  std::vector<double> th_tgrid = {-0.1, -0.01, -0.001, 0.001, 0.01, 0.1};
  auto* th_coh = theory->add_subcommand("coherence", "column coherence");
  auto* th_nsp = theory->add_subcommand("nsp", "null space property");
  auto* th_snsp = theory->add_subcommand("snsp", "strong null space property");
  auto* th_ratio = theory->add_subcommand("ratio-bound", "kernel ratio bound");
  auto* th_l0 = theory->add_subcommand("l0", "brute-force sparsest solution");
  auto* th_local = theory->add_subcommand("localmin", "local-minimum check");
  for (CLI::App* sub : {th_coh, th_nsp, th_snsp, th_ratio, th_l0, th_local}) {
    sub->add_option("--matrix", th_matrix, "matrix file (.bin)")->required();
    sub->add_option("-o", th_out, "output CSV (default: stdout)");
  }
  th_nsp->add_option("-s", th_s, "order");
  th_snsp->add_option("-s", th_s, "order");
  th_ratio->add_option("--restarts", th_restarts, "multistart count");
  th_ratio->add_option("--seed", th_seed, "RNG seed");
  th_l0->add_option("--rhs", th_rhs, "right-hand side (.bin)")->required();
  th_l0->add_option("--s-max", th_smax, "largest support size tried");
  th_local->add_option("--x", th_x, "feasible point (.bin)")->required();
  th_local->add_option("--rhs", th_rhs, "right-hand side (.bin)");
  th_local->add_option("--trials", th_trials, "random kernel directions");
  th_local->add_option("--t-grid", th_tgrid, "step sizes")->delimiter(',');
  th_local->add_option("--seed", th_seed, "RNG seed");

  // ---- bench --------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "success-rate experiment");
  std::string bench_kind = "dct", bench_solver = "l1l2box";
  std::string bench_out = "out/bench";
  rs::Index bench_m = 64, bench_n = 1024;
  double bench_f = 10.0, bench_r = 0.1;
  std::vector<rs::Index> bench_sparsity;
  int bench_trials = 50, bench_min_sep = 0, bench_threads = 0;
  std::uint64_t bench_base_seed = 0;
  bool bench_no_timing = false;
  SolverFlags bench_flags;
  bench->add_option("--kind", bench_kind, "dct|gaussian")
      ->check(CLI::IsMember({"dct", "gaussian"}));
  bench->add_option("-m", bench_m, "rows");
  bench->add_option("-n", bench_n, "cols");
  bench->add_option("--F", bench_f, "DCT oversampling factor");
  bench->add_option("--r", bench_r, "Gaussian row correlation");
  bench->add_option("--sparsity", bench_sparsity, "sparsity grid")
      ->delimiter(',');
  bench->add_option("--trials", bench_trials, "trials per sparsity");
  bench->add_option("--base-seed", bench_base_seed, "base seed");
  bench->add_option("--solver", bench_solver, "l1l2|l1l2box|l1")
      ->check(CLI::IsMember({"l1l2", "l1l2box", "l1"}));
  bench->add_option("--min-sep", bench_min_sep, "minimum support separation");
  bench->add_option("--threads", bench_threads,
                    "worker count (0: hardware, RATIO_SPARSE_THREADS caps)");
  bench->add_flag("--no-timing", bench_no_timing,
                  "write 0 seconds for byte-stable CSV output");
  bench_flags.attach(bench);
  bench->add_option("-o", bench_out, "output path prefix");

  // ---- toy ----------------------------------------------------------
  auto* toy = app.add_subcommand("toy", "objective landscape of the demo system");
  double toy_tmin = -5.0, toy_tmax = 15.0;
  int toy_steps = 2001;
  std::string toy_out;
  toy->add_option("--t-min", toy_tmin, "grid start");
  toy->add_option("--t-max", toy_tmax, "grid end");
  toy->add_option("--steps", toy_steps, "grid points");
  toy->add_option("-o", toy_out, "output CSV (default: stdout)");

  // ---- ratio-vs-f ---------------------------------------------------
  auto* rvf = app.add_subcommand("ratio-vs-f", "kernel ratio bound vs F");
  std::vector<double> rvf_grid = {1, 2, 5, 10, 15, 20};
  int rvf_realizations = 50, rvf_restarts = 5, rvf_threads = 0;
  rs::Index rvf_m = 64, rvf_n = 1024;
  std::uint64_t rvf_seed = 0;
  std::string rvf_out;
  rvf->add_option("--f-grid", rvf_grid, "F values")->delimiter(',');
  rvf->add_option("--realizations", rvf_realizations, "matrices per F");
  rvf->add_option("-m", rvf_m, "rows");
  rvf->add_option("-n", rvf_n, "cols");
  rvf->add_option("--base-seed", rvf_seed, "base seed");
  rvf->add_option("--restarts", rvf_restarts, "multistart count");
  rvf->add_option("--threads", rvf_threads, "worker count");
  rvf->add_option("-o", rvf_out, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // config error
  }

  if (gen->parsed()) {
    ensure_parent_dir(gen_out);
    if (gen_kind == "dct" || gen_kind == "gaussian") {
      const rs::SensingMatrix a =
          gen_kind == "dct" ? rs::gen_dct(gen_m, gen_n, gen_f, gen_seed)
                            : rs::gen_gaussian(gen_m, gen_n, gen_r, gen_seed);
      rs::save_bin(gen_out + "_matrix.bin", a.entries);
      rs::save_csv(gen_out + "_matrix.csv", a.entries);
      std::cout << "wrote " << gen_out << "_matrix.{bin,csv} (" << a.rows()
                << "x" << a.cols() << ")\n";
    } else if (gen_kind == "signal") {
      const rs::GroundTruth x = rs::gen_sparse_signal(
          gen_n, gen_s,
          gen_min_sep > 0 ? std::optional<rs::Index>(gen_min_sep) : std::nullopt,
          gen_seed);
      rs::save_bin(gen_out + "_signal.bin", x.values);
      rs::save_csv(gen_out + "_signal.csv", x.values);
      std::cout << "wrote " << gen_out << "_signal.{bin,csv} (n=" << gen_n
                << ", s=" << x.sparsity() << ")\n";
    } else {
      const rs::Instance inst = rs::toy_instance();
      rs::save_bin(gen_out + "_a.bin", inst.matrix.entries);
      rs::save_csv(gen_out + "_a.csv", inst.matrix.entries);
      rs::save_bin(gen_out + "_b.bin", inst.rhs);
      rs::save_csv(gen_out + "_b.csv", inst.rhs);
      rs::save_bin(gen_out + "_x.bin", inst.truth->values);
      rs::save_csv(gen_out + "_x.csv", inst.truth->values);
      std::cout << "wrote " << gen_out << "_{a,b,x}.{bin,csv}\n";
    }
    return 0;
  }

  if (solve_cmd->parsed()) {
    ensure_parent_dir(solve_out);
    const rs::Matrix a = rs::load_bin_matrix(solve_matrix);
    const rs::Vector b = rs::load_bin_vector(solve_rhs);
    rs::Instance inst = rs::make_instance(rs::explicit_matrix(a), b);
    rs::SolverConfig cfg = solve_flags.config();
    if (solve_init == "l1") {
      cfg.init = rs::InitKind::L1BasisPursuit;
    } else if (solve_init == "leastnorm") {
      cfg.init = rs::InitKind::LeastNorm;
    } else if (solve_init.rfind("file:", 0) == 0) {
      cfg.init = rs::InitKind::Explicit;
      cfg.init_vector = rs::load_bin_vector(solve_init.substr(5));
    } else {
      throw rs::ParamError("solve: unknown --init " + solve_init);
    }

    const rs::SolveReport rep = rs::solve(inst, cfg);
    rs::save_bin(solve_out + "_solution.bin", rep.solution);
    rs::save_csv(solve_out + "_solution.csv", rep.solution);

    std::ostringstream log;
    log << "iter,objective,feasibility,res_y,res_z\n";
    for (int k = 0; k < rep.iterations; ++k) {
      log << (k + 1) << ',' << rs::fmt_double(rep.objective_history[k]) << ','
          << rs::fmt_double(rep.feasibility_history[k]) << ','
          << rs::fmt_double(rep.residual_y[k]) << ','
          << rs::fmt_double(rep.residual_z[k]) << '\n';
    }
    rs::write_text_file(solve_out + "_log.csv", log.str());

    std::cout << "status: "
              << (rep.status == rs::SolveStatus::Converged ? "converged"
                                                           : "max-iter")
              << " after " << rep.iterations
              << " iterations, objective = " << rs::objective(rep.solution)
              << "\n";
    if (!solve_truth.empty()) {
      const rs::Vector xt = rs::load_bin_vector(solve_truth);
      std::cout << "relative error vs truth: "
                << (rep.solution - xt).norm() / xt.norm() << "\n";
    }
    return 0;
  }

  if (mri->parsed()) {
    ensure_parent_dir(mri_out);
    const rs::ImageGrid phantom = rs::shepp_logan(mri_size);
    const rs::FourierMask mask = rs::radial_mask(mri_size, mri_size, mri_lines);
    const rs::FreqGrid data = rs::measure(phantom, mask);

    rs::GradSolverConfig cfg;
    cfg.lambda = mri_lambda;
    cfg.rho1 = mri_rho1;
    cfg.rho2 = mri_rho2;
    cfg.rho3 = mri_rho3;
    cfg.eps = mri_eps;
    cfg.max_iter = mri_max_iter;
    cfg.seed = mri_seed;

    const rs::GradSolveReport rep = mri_solver == "ratio"
                                        ? rs::solve_grad(data, mask, cfg)
                                        : rs::solve_tv(data, mask, cfg);

    rs::save_pgm16(mri_out + ".pgm", rep.image);
    rs::save_bin(mri_out + ".bin", rs::Matrix(rep.image));
    rs::save_pbm(mri_out + "_mask.pbm", mask.keep);

    std::ostringstream log;
    log << "iter,objective,data_residual,rel_change\n";
    for (int k = 0; k < rep.iterations; ++k) {
      log << (k + 1) << ',' << rs::fmt_double(rep.objective_history[k]) << ','
          << rs::fmt_double(rep.data_residual[k]) << ','
          << rs::fmt_double(rep.rel_change[k]) << '\n';
    }
    rs::write_text_file(mri_out + "_log.csv", log.str());

    const double re = (rep.image - phantom).norm() / phantom.norm();
    std::cout << "status: "
              << (rep.status == rs::SolveStatus::Converged ? "converged"
                                                           : "max-iter")
              << " after " << rep.iterations << " iterations\n"
              << "kept " << mask.kept_count() << " of "
              << mri_size * mri_size << " frequencies ("
              << 100.0 * mask.kept_count() / (mri_size * mri_size) << "%)\n"
              << "relative error vs phantom: " << re << "\n";
    return 0;
  }

  if (theory->parsed()) {
    const rs::Matrix a = rs::load_bin_matrix(th_matrix);
    if (th_coh->parsed()) {
      std::ostringstream os;
      os << "check,value\ncoherence," << rs::fmt_double(rs::coherence(a))
         << '\n';
      if (th_out.empty()) {
        std::cout << os.str();
      } else {
        ensure_parent_dir(th_out);
        rs::write_text_file(th_out, os.str());
      }
    } else if (th_nsp->parsed()) {
      emit_verdict("nsp", rs::check_nsp(a, th_s), th_out);
    } else if (th_snsp->parsed()) {
      emit_verdict("snsp", rs::check_snsp(a, th_s), th_out);
    } else if (th_ratio->parsed()) {
      const double bound =
          rs::kernel_ratio_bound(rs::explicit_matrix(a), th_restarts, th_seed);
      std::ostringstream os;
      os << "check,value\nratio_bound," << rs::fmt_double(bound) << '\n';
      if (th_out.empty()) {
        std::cout << os.str();
      } else {
        ensure_parent_dir(th_out);
        rs::write_text_file(th_out, os.str());
      }
    } else if (th_l0->parsed()) {
      const rs::Vector b = rs::load_bin_vector(th_rhs);
      const auto res = rs::l0_oracle(
          rs::make_instance(rs::explicit_matrix(a), b), th_smax);
      std::ostringstream os;
      os << "check,sparsity,solution\n";
      if (res) {
        os << "l0," << res->sparsity << ',' << join_vector(res->solution)
           << '\n';
      } else {
        os << "l0,-1,\n";
      }
      if (th_out.empty()) {
        std::cout << os.str();
      } else {
        ensure_parent_dir(th_out);
        rs::write_text_file(th_out, os.str());
      }
    } else if (th_local->parsed()) {
      const rs::Vector x = rs::load_bin_vector(th_x);
      std::optional<rs::Vector> b;
      if (!th_rhs.empty()) b = rs::load_bin_vector(th_rhs);
      const rs::PropertyVerdict v = rs::verify_local_min(
          a, x, th_trials, th_tgrid, th_seed, b ? &*b : nullptr);
      emit_verdict("localmin", v, th_out);
    }
    return 0;
  }

  if (bench->parsed()) {
    ensure_parent_dir(bench_out);
    rs::ExperimentConfig cfg;
    cfg.matrix_kind = bench_kind == "dct" ? rs::MatrixKind::OversampledDct
                                          : rs::MatrixKind::CorrelatedGaussian;
    cfg.matrix_param = bench_kind == "dct" ? bench_f : bench_r;
    cfg.m = bench_m;
    cfg.n = bench_n;
    cfg.sparsity_grid = bench_sparsity.empty()
                            ? std::vector<rs::Index>{2, 4, 6, 8, 10, 12, 14,
                                                     16, 18, 20, 22, 24, 26,
                                                     28, 30}
                            : bench_sparsity;
    cfg.trials = bench_trials;
    cfg.base_seed = bench_base_seed;
    cfg.solver = bench_solver == "l1l2"      ? rs::SolverChoice::L1L2
                 : bench_solver == "l1l2box" ? rs::SolverChoice::L1L2Box
                                             : rs::SolverChoice::L1;
    cfg.solver_params = bench_flags.config();
    if (bench_min_sep > 0) cfg.min_sep = bench_min_sep;
    cfg.threads = bench_threads;
    cfg.record_timing = !bench_no_timing;

    const rs::ExperimentResult res = rs::run_experiment(cfg);
    rs::write_text_file(bench_out + "_trials.csv", res.trials_csv);
    rs::write_text_file(bench_out + "_summary.csv", res.summary_csv);
    if (res.tie_count > 0) {
      std::cerr << "note: " << res.tie_count
                << " objective ties classified as algorithm failure\n";
    }
    std::cout << res.summary_csv;
    return 0;
  }

  if (toy->parsed()) {
    const rs::ToyLandscape land = rs::toy_landscape(toy_tmin, toy_tmax, toy_steps);
    if (toy_out.empty()) {
      std::cout << land.csv;
    } else {
      ensure_parent_dir(toy_out);
      rs::write_text_file(toy_out, land.csv);
    }
    std::cerr << "l1 argmin: t = " << land.l1_argmin << " (value "
              << land.l1_min << ")\n"
              << "l1/l2 argmin: t = " << land.ratio_argmin << " (value "
              << land.ratio_min << ")\n";
    return 0;
  }

  if (rvf->parsed()) {
    const rs::RatioVsF res = rs::run_ratio_vs_f(
        rvf_grid, rvf_realizations, rvf_m, rvf_n, rvf_seed, rvf_restarts,
        rvf_threads);
    if (rvf_out.empty()) {
      std::cout << res.csv;
    } else {
      ensure_parent_dir(rvf_out);
      rs::write_text_file(rvf_out, res.csv);
      std::cout << res.csv;
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rs::UnsupportedSizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const rs::ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rs::DegenerateInstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
