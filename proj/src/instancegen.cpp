#include "ratiosparse/instancegen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ratiosparse/errors.hpp"
#include "ratiosparse/rng.hpp"

namespace ratiosparse {

Instance make_instance(SensingMatrix matrix, GroundTruth truth) {
  Vector rhs = matrix.entries * truth.values;
  return Instance{std::move(matrix), std::move(truth), std::move(rhs)};
}

Instance make_instance(SensingMatrix matrix, GroundTruth truth, Vector rhs) {
  const double resid = (matrix.entries * truth.values - rhs).norm();
  if (resid > 1e-12 * rhs.norm()) {
    throw ParamError("instance inconsistent: ||A x - b|| exceeds 1e-12 ||b||");
  }
  return Instance{std::move(matrix), std::move(truth), std::move(rhs)};
}

Instance make_instance(SensingMatrix matrix, Vector rhs) {
  if (rhs.size() != matrix.rows()) {
    throw ParamError("rhs length does not match matrix rows");
  }
  return Instance{std::move(matrix), std::nullopt, std::move(rhs)};
}

SensingMatrix gen_dct(Index m, Index n, double F, std::uint64_t seed) {
  if (m < 1 || n < 1) throw ParamError("gen_dct: dimensions must be positive");
  if (!(F > 0.0)) throw ParamError("gen_dct: F must be positive");

  SplitMix64 rng(seed);
  Vector w(m);
  for (Index i = 0; i < m; ++i) w[i] = rng.uniform01();

  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix a(m, n);
  for (Index j = 0; j < n; ++j) {
    const double freq = 2.0 * M_PI * static_cast<double>(j + 1) / F;
    for (Index i = 0; i < m; ++i) a(i, j) = scale * std::cos(freq * w[i]);
  }
  return SensingMatrix{std::move(a), MatrixKind::OversampledDct, F, seed};
}

SensingMatrix gen_gaussian(Index m, Index n, double r, std::uint64_t seed) {
  if (m < 1 || n < 1)
    throw ParamError("gen_gaussian: dimensions must be positive");
  if (!(r >= 0.0 && r < 1.0))
    throw ParamError("gen_gaussian: r must lie in [0, 1)");

  SplitMix64 rng(seed);
  const double sg = std::sqrt(1.0 - r);
  const double sh = std::sqrt(r);
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i) {
    const double h = rng.normal();  // shared component of the row
    for (Index j = 0; j < n; ++j) a(i, j) = sg * rng.normal() + sh * h;
  }
  return SensingMatrix{std::move(a), MatrixKind::CorrelatedGaussian, r, seed};
}

namespace {

bool separation_ok(const std::vector<Index>& sorted, Index min_sep) {
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] < min_sep) return false;
  }
  return true;
}

std::vector<Index> draw_support(SplitMix64& rng, Index n, Index s) {
  std::set<Index> support;
  while (static_cast<Index>(support.size()) < s) {
    support.insert(static_cast<Index>(rng.uniform_index(n)));
  }
  return {support.begin(), support.end()};
}

}  // namespace

GroundTruth gen_sparse_signal(Index n, Index s, std::optional<Index> min_sep,
                              std::uint64_t seed) {
  if (n < 1 || s < 1) throw ParamError("gen_sparse_signal: n, s must be >= 1");
  if (s > n) throw ParamError("gen_sparse_signal: s exceeds n");
  if (min_sep) {
    if (*min_sep < 1) throw ParamError("gen_sparse_signal: min_sep must be >= 1");
    if ((s - 1) * *min_sep >= n) {
      throw ParamError("gen_sparse_signal: min_sep infeasible for (n, s)");
    }
  }

  SplitMix64 rng(seed);
  std::vector<Index> support = draw_support(rng, n, s);
  if (min_sep) {
    constexpr int kMaxRetries = 10000;
    int tries = 0;
    while (!separation_ok(support, *min_sep)) {
      if (++tries > kMaxRetries) {
        throw ParamError("gen_sparse_signal: min_sep retry cap exhausted");
      }
      support = draw_support(rng, n, s);
    }
  }

  Vector x = Vector::Zero(n);
  for (Index idx : support) x[idx] = rng.normal();
  const double maxabs = x.cwiseAbs().maxCoeff();
  x /= maxabs;
  return GroundTruth{std::move(x), std::move(support)};
}

Vector toy_solution(double t) {
  Vector x(6);
  x << t, t, t, 20.0 - 2.0 * t, 40.0 - 4.0 * t, 2.0 * (t - 9.0);
  return x;
}

Instance toy_instance() {
  Matrix a(5, 6);
  a << 1, -1, 0, 0, 0, 0,
       1, 0, -1, 0, 0, 0,
       0, 1, 1, 1, 0, 0,
       2, 2, 0, 0, 1, 0,
       1, 1, 0, 0, 0, -1;
  GroundTruth truth;
  truth.values = toy_solution(0.0);
  truth.support = {3, 4, 5};
  return make_instance(explicit_matrix(std::move(a)), std::move(truth));
}

}  // namespace ratiosparse
