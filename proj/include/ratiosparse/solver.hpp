#pragma once

#include <Eigen/Cholesky>
#include <cstdint>
#include <optional>
#include <vector>

#include "ratiosparse/rng.hpp"
#include "ratiosparse/types.hpp"

namespace ratiosparse {

struct Box {
  double lo;
  double hi;
};

enum class InitKind { L1BasisPursuit, Explicit, LeastNorm };

struct SolverConfig {
  double rho1 = 100.0;
  double rho2 = 100.0;
  double eps = 1e-8;     // relative-change stopping tolerance
  int max_iter = 0;      // 0 means 10*n
  std::optional<Box> box;
  InitKind init = InitKind::L1BasisPursuit;
  Vector init_vector;    // used when init == Explicit
  std::uint64_t seed = 0;
};

enum class SolveStatus { Converged, MaxIter };

struct SolveReport {
  Vector solution;  // final x: the feasible iterate
  Vector final_z;   // final z: the box-feasible iterate
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIter;
  std::vector<double> objective_history;    // ||x||_1/||x||_2 per iteration
  std::vector<double> feasibility_history;  // ||A x - b||_2
  std::vector<double> residual_y;           // ||x - y||_2
  std::vector<double> residual_z;           // ||x - z||_2
};

// Euclidean projector onto {x : A x = b}. AA^T is factored once (Cholesky);
// project() applies I - A^T(AA^T)^{-1}A in factored form, O(m n) per call.
// Throws RankError when the condition estimate of AA^T exceeds 1e12.
class ProjectionCache {
 public:
  ProjectionCache(const Matrix& a, const Vector& b);

  Vector project(const Vector& f) const;

  const Vector& offset() const { return offset_; }

  // Materializes the n x n projector I - A^T(AA^T)^{-1}A. For inspection
  // and tests; the solve loop never forms it.
  Matrix projector() const;

 private:
  Matrix a_;
  Eigen::LLT<Matrix> llt_;
  Vector rhs_;
  Vector offset_;  // A^T (AA^T)^{-1} b
};

// ||x||_1 / ||x||_2 with 0/0 = 0.
double objective(const Vector& x);

// Componentwise sign(v_i) * max(|v_i| - mu, 0).
Vector shrink(const Vector& v, double mu);

// Unique real root tau >= 1 of tau^3 - tau^2 - D = 0, closed form plus a
// Newton polish; |F(tau)| <= 1e-10 * max(1, D).
double solve_cubic_tau(double D);

// argmin_y c/||y||_2 + rho1/2 ||y - d||^2. Zero d falls back to a seeded
// random direction of norm cbrt(c/rho1).
Vector y_update(double c, const Vector& d, double rho1, SplitMix64& rng);

// shrink followed by clipping to the box when one is given.
Vector z_update(const Vector& r, double nu, const std::optional<Box>& box);

// L1/L2 minimization over {x : A x = b} by five-step ADMM splitting
// (x = y = z with the ratio split across y and z), optional box on z.
SolveReport solve(const Instance& instance, const SolverConfig& config);

// Basis pursuit min ||x||_1 s.t. A x = b by ADMM (projection + shrinkage).
// Returns the feasible iterate with the smallest L1 norm seen.
Vector solve_l1_init(const Instance& instance, double eps = 1e-8,
                     int max_iter = 0, int* iterations_out = nullptr);

}  // namespace ratiosparse
