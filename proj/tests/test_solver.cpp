#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ratiosparse/errors.hpp"
#include "ratiosparse/instancegen.hpp"
#include "ratiosparse/solver.hpp"
#include "ratiosparse/theory.hpp"

namespace rs = ratiosparse;

namespace {

// Independent root oracle: bisection on F(tau) = tau^3 - tau^2 - D over
// [1, hi]. F(1) = -D <= 0 and F grows without bound, so the root is
// bracketed.
double cubic_root_bisect(double D) {
  double lo = 1.0;
  double hi = 1.0 + std::cbrt(D) + 1.0;
  auto f = [D](double t) { return ((t - 1.0) * t) * t - D; };
  REQUIRE(f(lo) <= 0.0);
  REQUIRE(f(hi) > 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// L1 norm along the toy line: 3|t| + |20-2t| + |40-4t| + 2|t-9|.
double toy_l1(double t) {
  return 3.0 * std::abs(t) + std::abs(20.0 - 2.0 * t) +
         std::abs(40.0 - 4.0 * t) + 2.0 * std::abs(t - 9.0);
}

}  // namespace

TEST_CASE("objective: unit basis vector, ones, zero") {
  rs::Vector e1 = rs::Vector::Zero(8);
  e1[0] = 1.0;
  CHECK(rs::objective(e1) == 1.0);
  CHECK(rs::objective(rs::Vector::Ones(16)) ==
        doctest::Approx(4.0).epsilon(1e-15));
  CHECK(rs::objective(rs::Vector::Zero(5)) == 0.0);
}

TEST_CASE("objective is scale invariant and bounded") {
  rs::SplitMix64 rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    rs::Vector x(32);
    for (rs::Index i = 0; i < 32; ++i) x[i] = rng.normal();
    const double obj = rs::objective(x);
    CHECK(obj >= 1.0);
    CHECK(obj <= std::sqrt(32.0) + 1e-12);
    for (double alpha : {-3.7, 0.25, 1e8}) {
      CHECK(rs::objective(alpha * x) == obj);
    }
  }
}

TEST_CASE("shrink examples") {
  rs::Vector v(3);
  v << 2.0, -0.5, 0.0;
  const rs::Vector out = rs::shrink(v, 1.0);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 0.0);

  CHECK((rs::shrink(v, 0.0) - v).norm() == 0.0);  // identity at mu = 0

  rs::Vector single(1);
  single << 3.0;
  CHECK(rs::shrink(single, 1.0)[0] == 2.0);

  CHECK_THROWS_AS(rs::shrink(v, -0.1), rs::ParamError);
}

TEST_CASE("cubic root: D = 0 and D = 1") {
  CHECK(rs::solve_cubic_tau(0.0) == 1.0);
  const double tau1 = rs::solve_cubic_tau(1.0);
  CHECK(tau1 == doctest::Approx(1.46557).epsilon(1e-5));
  CHECK(tau1 == doctest::Approx(cubic_root_bisect(1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(rs::solve_cubic_tau(-1e-9), rs::ParamError);
}

TEST_CASE("cubic root: residual, monotonicity, bisection agreement") {
  // 1000 log-spaced D values spanning [0, 1e8].
  double prev_tau = 1.0;
  CHECK(rs::solve_cubic_tau(0.0) >= 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double D = std::pow(10.0, -8.0 + 16.0 * k / 999.0);
    const double tau = rs::solve_cubic_tau(D);
    const double resid = std::abs(((tau - 1.0) * tau) * tau - D);
    CHECK(resid <= 1e-10 * std::max(1.0, D));
    CHECK(tau >= 1.0);
    CHECK(tau > prev_tau);  // strictly increasing in D
    prev_tau = tau;

    const double oracle = cubic_root_bisect(D);
    CHECK(std::abs(tau - oracle) <= 1e-9 * oracle);
  }
}

TEST_CASE("project_affine: hand oracle A=[1 1], b=[2]") {
  rs::Matrix a(1, 2);
  a << 1.0, 1.0;
  rs::Vector b(1);
  b << 2.0;
  const rs::ProjectionCache cache(a, b);
  // Least-norm solution of x1 + x2 = 2 from the origin is (1, 1).
  const rs::Vector p = cache.project(rs::Vector::Zero(2));
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("project_affine: fixes feasible points, enforces feasibility") {
  const rs::SensingMatrix a = rs::gen_dct(16, 80, 5.0, 21);
  const rs::GroundTruth xt = rs::gen_sparse_signal(80, 3, std::nullopt, 22);
  const rs::Instance inst = rs::make_instance(a, xt);
  const rs::ProjectionCache cache(a.entries, inst.rhs);

  // Feasible point is (numerically) fixed.
  const rs::Vector fixed = cache.project(inst.truth->values);
  CHECK((fixed - inst.truth->values).norm() <= 1e-10);

  rs::SplitMix64 rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    rs::Vector f(80);
    for (rs::Index i = 0; i < 80; ++i) f[i] = 10.0 * rng.normal();
    const rs::Vector p = cache.project(f);
    CHECK((a.entries * p - inst.rhs).norm() <= 1e-10 * (1.0 + inst.rhs.norm()));

    // Euclidean-nearest: the correction is orthogonal to the kernel, so any
    // other feasible point is farther away.
    const rs::Vector q = cache.project(f + rs::Vector::Ones(80));
    CHECK((p - f).norm() <= (q - f).norm() + 1e-10);
  }
}

TEST_CASE("projector matrix is symmetric and idempotent") {
  const rs::SensingMatrix a = rs::gen_gaussian(8, 24, 0.2, 5);
  const rs::Vector b = a.entries * rs::Vector::Ones(24);
  const rs::ProjectionCache cache(a.entries, b);
  const rs::Matrix p = cache.projector();
  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-10);
  // project(f) agrees with the materialized form P f + offset.
  rs::Vector f(24);
  f.setLinSpaced(24, -3.0, 3.0);
  CHECK((cache.project(f) - (p * f + cache.offset())).norm() <= 1e-10);
}

TEST_CASE("singular AA^T is a rank error") {
  rs::Matrix a(2, 4);
  a.row(0) << 1.0, 2.0, 3.0, 4.0;
  a.row(1) = a.row(0);  // duplicate row
  const rs::Vector b = rs::Vector::Ones(2);
  CHECK_THROWS_AS(rs::ProjectionCache(a, b), rs::RankError);
}

TEST_CASE("y_update: the three branches") {
  rs::SplitMix64 rng(17);

  // c = 0 returns d unchanged.
  rs::Vector d(4);
  d << 1.0, -2.0, 0.5, 0.0;
  CHECK((rs::y_update(0.0, d, 3.0, rng) - d).norm() == 0.0);

  // c = 1, rho1 = 1, d = e1: y = tau * e1 with tau ~ 1.46557.
  rs::Vector e1 = rs::Vector::Zero(3);
  e1[0] = 1.0;
  const rs::Vector y = rs::y_update(1.0, e1, 1.0, rng);
  CHECK(y[0] == doctest::Approx(cubic_root_bisect(1.0)).epsilon(1e-9));
  CHECK(y[1] == 0.0);
  CHECK(y[2] == 0.0);

  // c = 8, rho1 = 1, d = 0: any vector of norm cbrt(8) = 2, deterministic
  // under a fixed seed.
  rs::SplitMix64 r1(5), r2(5);
  const rs::Vector z1 = rs::y_update(8.0, rs::Vector::Zero(6), 1.0, r1);
  const rs::Vector z2 = rs::y_update(8.0, rs::Vector::Zero(6), 1.0, r2);
  CHECK(z1.norm() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((z1 - z2).norm() == 0.0);

  CHECK_THROWS_AS(rs::y_update(-1.0, d, 1.0, rng), rs::ParamError);
  CHECK_THROWS_AS(rs::y_update(1.0, d, 0.0, rng), rs::ParamError);
}

TEST_CASE("z_update: shrink then clip") {
  rs::Vector r(2);
  r << 2.0, -0.5;
  const rs::Vector z = rs::z_update(r, 1.0, rs::Box{-1.0, 1.0});
  CHECK(z[0] == 1.0);
  CHECK(z[1] == 0.0);

  // Without a box it is exactly shrink.
  rs::SplitMix64 rng(3);
  rs::Vector v(16);
  for (rs::Index i = 0; i < 16; ++i) v[i] = 4.0 * rng.normal();
  CHECK((rs::z_update(v, 0.7, std::nullopt) - rs::shrink(v, 0.7)).norm() == 0.0);

  CHECK_THROWS_AS(rs::z_update(r, 0.5, rs::Box{1.0, 1.0}), rs::ParamError);
}

TEST_CASE("symmetric box: clipped-shrink identity on 10^4 random inputs") {
  // sign(r) * min(max(|r| - nu, 0), d) must equal shrink-then-clip when the
  // box is [-d, d].
  rs::SplitMix64 rng(31);
  const double d = 1.0;
  for (int rep = 0; rep < 10000; ++rep) {
    rs::Vector r(1);
    r[0] = 6.0 * (rng.uniform01() - 0.5);
    const double nu = rng.uniform01();
    const rs::Vector viaclip = rs::z_update(r, nu, rs::Box{-d, d});
    const double direct =
        (r[0] > 0 ? 1.0 : (r[0] < 0 ? -1.0 : 0.0)) *
        std::min(std::max(std::abs(r[0]) - nu, 0.0), d);
    CHECK(viaclip[0] == doctest::Approx(direct).epsilon(1e-15));
  }
}

TEST_CASE("solve on the toy system finds the sparsest point") {
  const rs::Instance inst = rs::toy_instance();
  rs::SolverConfig cfg;
  cfg.init = rs::InitKind::Explicit;
  cfg.init_vector = rs::toy_solution(0.5);
  cfg.eps = 1e-10;
  cfg.max_iter = 20000;
  const rs::SolveReport rep = rs::solve(inst, cfg);

  const rs::Vector target = rs::toy_solution(0.0);
  CHECK((rep.solution - target).norm() / target.norm() <= 1e-3);
  // Analytic objective at the sparsest point: 78 / sqrt(2324).
  CHECK(rs::objective(rep.solution) ==
        doctest::Approx(78.0 / std::sqrt(2324.0)).epsilon(1e-4));

  // Every iterate satisfied the affine constraint.
  for (double feas : rep.feasibility_history) {
    CHECK(feas <= 1e-8 * (1.0 + inst.rhs.norm()));
  }
  REQUIRE(rep.status == rs::SolveStatus::Converged);
  REQUIRE(static_cast<int>(rep.objective_history.size()) == rep.iterations);
  const double xn = rep.solution.norm();
  CHECK(rep.residual_y.back() <= 1e-5 * (1.0 + xn));
  CHECK(rep.residual_z.back() <= 1e-5 * (1.0 + xn));
}

TEST_CASE("solve rejects b = 0") {
  rs::Matrix a(2, 4);
  a << 1, 0, 1, 0, 0, 1, 0, 1;
  const rs::Instance inst = rs::make_instance(rs::explicit_matrix(a),
                                              rs::Vector::Zero(2));
  rs::SolverConfig cfg;
  CHECK_THROWS_AS(rs::solve(inst, cfg), rs::DegenerateInstanceError);
}

TEST_CASE("box solve keeps z inside the box") {
  const rs::SensingMatrix a = rs::gen_dct(16, 96, 5.0, 51);
  const rs::GroundTruth xt = rs::gen_sparse_signal(96, 3, std::nullopt, 52);
  const rs::Instance inst = rs::make_instance(a, xt);
  rs::SolverConfig cfg;
  cfg.box = rs::Box{-1.0, 1.0};
  cfg.max_iter = 3000;
  const rs::SolveReport rep = rs::solve(inst, cfg);
  CHECK(rep.final_z.maxCoeff() <= 1.0 + 1e-15);
  CHECK(rep.final_z.minCoeff() >= -1.0 - 1e-15);
}

TEST_CASE("basis pursuit on the toy system reaches L1 = 32 at t = 10") {
  // Grid oracle for min_t ||x(t)||_1 over a fine grid.
  double best_t = 0.0, best_val = 1e300;
  for (int k = 0; k <= 200000; ++k) {
    const double t = -5.0 + 20.0 * k / 200000.0;
    const double val = toy_l1(t);
    if (val < best_val) {
      best_val = val;
      best_t = t;
    }
  }
  CHECK(best_val == doctest::Approx(32.0).epsilon(1e-6));
  CHECK(best_t == doctest::Approx(10.0).epsilon(1e-3));

  const rs::Instance inst = rs::toy_instance();
  const rs::Vector sol = rs::solve_l1_init(inst, 1e-10, 50000);
  CHECK(sol.lpNorm<1>() == doctest::Approx(32.0).epsilon(1e-4));
  CHECK((sol - rs::toy_solution(10.0)).norm() <= 1e-2);
}

TEST_CASE("basis pursuit never beats a feasible point's L1 norm") {
  const rs::SensingMatrix a = rs::gen_gaussian(10, 40, 0.0, 61);
  const rs::GroundTruth xt = rs::gen_sparse_signal(40, 3, std::nullopt, 62);
  const rs::Instance inst = rs::make_instance(a, xt);
  const rs::Vector sol = rs::solve_l1_init(inst, 1e-10, 20000);
  CHECK((a.entries * sol - inst.rhs).norm() <=
        1e-8 * (1.0 + inst.rhs.norm()));
  CHECK(sol.lpNorm<1>() <= xt.values.lpNorm<1>() + 1e-6);
}

TEST_CASE("basis pursuit recovers a unique 1-sparse solution") {
  // Tiny instance where the L0 oracle's sparsest solution is unique and
  // 1-sparse; cross-checked through the oracle itself.
  const rs::SensingMatrix a = rs::gen_gaussian(4, 8, 0.0, 71);
  rs::Vector x = rs::Vector::Zero(8);
  x[5] = 1.0;
  const rs::Instance inst =
      rs::make_instance(a, rs::GroundTruth{x, {5}});
  const auto oracle = rs::l0_oracle(inst, 2);
  REQUIRE(oracle.has_value());
  REQUIRE(oracle->sparsity == 1);
  REQUIRE((oracle->solution - x).norm() <= 1e-9);

  const rs::Vector sol = rs::solve_l1_init(inst, 1e-12, 20000);
  CHECK((sol - x).norm() <= 1e-4);
}

TEST_CASE("ratio objective approaches the kernel ratio along rays") {
  // For t = 1e6 ||x||/||v||, |objective(x + t v) - ||v||_1/||v||_2| <= 1e-4.
  rs::SplitMix64 rng(81);
  const rs::SensingMatrix a = rs::gen_gaussian(6, 16, 0.0, 82);
  const rs::Matrix basis = rs::kernel_basis(a.entries);
  REQUIRE(basis.cols() == 10);
  for (int rep = 0; rep < 100; ++rep) {
    rs::Vector c(basis.cols());
    for (rs::Index i = 0; i < c.size(); ++i) c[i] = rng.normal();
    const rs::Vector v = basis * c;
    rs::Vector x(16);
    for (rs::Index i = 0; i < 16; ++i) x[i] = rng.normal();
    const double t = 1e6 * x.norm() / v.norm();
    const double limit = v.lpNorm<1>() / v.norm();
    CHECK(std::abs(rs::objective(x + t * v) - limit) <= 1e-4);
  }
}

TEST_CASE("dct recovery at s=2 with the box succeeds across seeds") {
  // Small-count version of the desk-scale experiment; the acceptance suite
  // runs the full 20 trials.
  int successes = 0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const rs::SensingMatrix a = rs::gen_dct(64, 1024, 5.0, 1000 + k);
    const rs::GroundTruth xt =
        rs::gen_sparse_signal(1024, 2, std::nullopt, 2000 + k);
    const rs::Instance inst = rs::make_instance(a, xt);
    rs::SolverConfig cfg;
    cfg.box = rs::Box{-1.0, 1.0};
    const rs::SolveReport rep = rs::solve(inst, cfg);
    const double re = (rep.solution - xt.values).norm() / xt.values.norm();
    successes += re <= 1e-3;
  }
  CHECK(successes >= 4);
}
