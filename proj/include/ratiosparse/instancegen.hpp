#pragma once

#include <cstdint>
#include <optional>

#include "ratiosparse/types.hpp"

namespace ratiosparse {

// Oversampled DCT matrix: column j (1-based) is cos(2*pi*w*j/F)/sqrt(m) for a
// single frequency vector w drawn uniformly from [0,1]^m with `seed` and
// shared by all columns. Larger F gives a more coherent matrix.
SensingMatrix gen_dct(Index m, Index n, double F, std::uint64_t seed);

// Rows drawn iid from N(0, Sigma) with Sigma_ii = 1, Sigma_ij = r, sampled
// through the rank-one decomposition x = sqrt(1-r)*g + sqrt(r)*h*1.
SensingMatrix gen_gaussian(Index m, Index n, double r, std::uint64_t seed);

// s-sparse signal on a uniformly random support, iid standard normal values,
// normalized to max |x_i| = 1. With min_sep, supports are rejection-sampled
// (at most 10^4 retries) until consecutive indices differ by >= min_sep.
GroundTruth gen_sparse_signal(Index n, Index s, std::optional<Index> min_sep,
                              std::uint64_t seed);

// The built-in 5x6 demo system whose solution line x(t) =
// (t,t,t,20-2t,40-4t,2(t-9)) has its sparsest point at t = 0.
Instance toy_instance();

// Point on the toy solution line.
Vector toy_solution(double t);

}  // namespace ratiosparse
