#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ratiosparse/solver.hpp"
#include "ratiosparse/types.hpp"

namespace ratiosparse {

enum class VerifyMethod { Exhaustive, GridRefine };

struct PropertyVerdict {
  bool holds = false;
  VerifyMethod method = VerifyMethod::Exhaustive;
  // Largest violation margin found (the checked inequality fails when the
  // margin is positive); the witness attains it.
  double margin = 0.0;
  std::vector<Index> witness_support;
  Vector witness_vector;
};

// max_{i != j} |a_i . a_j| / (||a_i|| ||a_j||). Zero columns are rejected.
double coherence(const Matrix& a);
double coherence(const SensingMatrix& a);

// Exhaustive null space property check of order s: every unit kernel vector
// must satisfy ||v_S||_1 < ||v_Sbar||_1 on every |S| <= s. Only instances
// with n <= 14 and kernel dimension <= 3 are accepted.
PropertyVerdict check_nsp(const Matrix& a, int s);

// Strong variant: (s+1)||v_S||_1 <= ||v_Sbar||_1 (non-strict).
PropertyVerdict check_snsp(const Matrix& a, int s);

// Upper estimate of min{||v||_1/||v||_2 : v in ker(A)\{0}} via the ratio
// solver on the sum-to-one expanded system [A; 1^T] x = [0; 1], best of
// `restarts` seeded starts (first start is the basis-pursuit solution).
double kernel_ratio_bound(const SensingMatrix& a, int restarts = 5,
                          std::uint64_t seed = 0,
                          const SolverConfig* base_config = nullptr);

struct L0Result {
  Index sparsity = 0;
  Vector solution;
};

// Brute-force sparsest solution of A x = b: smallest s <= s_max whose
// support admits a least-squares residual <= 1e-9 ||b||. Enumeration
// budget: n <= 24 or C(n, s_max) <= 1e6.
std::optional<L0Result> l0_oracle(const Instance& instance, int s_max);

// Samples seeded unit kernel directions and grid steps t, shrinking the
// probe radius on failure (start min |x_i|/4 over the support, floor 1e-6)
// before reporting a violation of local minimality of ||x||_1/||x||_2.
PropertyVerdict verify_local_min(const Matrix& a, const Vector& x, int trials,
                                 const std::vector<double>& t_grid,
                                 std::uint64_t seed = 0,
                                 const Vector* rhs = nullptr);

// Orthonormal basis of ker(A) via SVD (columns span the kernel).
Matrix kernel_basis(const Matrix& a);

}  // namespace ratiosparse
