#include "ratiosparse/theory.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ratiosparse/errors.hpp"
#include "ratiosparse/instancegen.hpp"

namespace ratiosparse {

double coherence(const Matrix& a) {
  const Index n = a.cols();
  Vector norms(n);
  for (Index j = 0; j < n; ++j) {
    norms[j] = a.col(j).norm();
    if (norms[j] == 0.0) throw ParamError("coherence: zero column");
  }
  const Matrix gram = a.transpose() * a;
  double mu = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double c = std::abs(gram(i, j)) / (norms[i] * norms[j]);
      if (c > mu) mu = c;
    }
  }
  return mu;
}

double coherence(const SensingMatrix& a) { return coherence(a.entries); }

Matrix kernel_basis(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = std::max(a.rows(), a.cols()) *
                     Eigen::NumTraits<double>::epsilon() * smax;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return svd.matrixV().rightCols(a.cols() - rank);
}

namespace {

// Sum of the s largest |v_i| together with their indices.
double top_s_sum(const Vector& v, int s, std::vector<Index>* idx_out) {
  std::vector<Index> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + s, idx.end(),
                    [&](Index a, Index b) {
                      return std::abs(v[a]) > std::abs(v[b]);
                    });
  double sum = 0.0;
  for (int k = 0; k < s; ++k) sum += std::abs(v[idx[k]]);
  if (idx_out) {
    idx_out->assign(idx.begin(), idx.begin() + s);
    std::sort(idx_out->begin(), idx_out->end());
  }
  return sum;
}

// Violation margin maximized over supports for a fixed kernel vector:
//   max_{|S| = s} factor*||v_S||_1 - ||v_Sbar||_1
//     = (factor + 1) * (sum of s largest |v_i|) - ||v||_1.
// The worst support of size exactly s dominates all smaller ones.
double support_margin(const Vector& v, int s, double factor) {
  return (factor + 1.0) * top_s_sum(v, s, nullptr) - v.lpNorm<1>();
}

Vector direction_from_angles(const Matrix& basis,
                             const std::vector<double>& ang) {
  const Index kd = basis.cols();
  Vector c(kd);
  if (kd == 1) {
    c[0] = 1.0;
  } else if (kd == 2) {
    c << std::cos(ang[0]), std::sin(ang[0]);
  } else {
    c << std::sin(ang[0]) * std::cos(ang[1]),
        std::sin(ang[0]) * std::sin(ang[1]), std::cos(ang[0]);
  }
  return basis * c;
}

struct MarginSearch {
  double margin = -std::numeric_limits<double>::infinity();
  Vector v;
};

// Grid the unit sphere of the kernel at 1 degree, then refine the best
// candidates by shrinking-step coordinate ascent. Exact for dim 1.
MarginSearch max_violation(const Matrix& basis, int s, double factor) {
  const Index kd = basis.cols();
  auto eval = [&](const std::vector<double>& ang) {
    return support_margin(direction_from_angles(basis, ang), s, factor);
  };

  if (kd == 1) {
    MarginSearch out;
    out.v = basis.col(0);
    out.margin = support_margin(out.v, s, factor);
    return out;
  }

  const double step0 = M_PI / 180.0;
  std::vector<std::pair<double, std::vector<double>>> best;  // margin, angles
  const std::size_t keep = 8;
  auto offer = [&](double mval, std::vector<double> ang) {
    best.emplace_back(mval, std::move(ang));
    std::sort(best.begin(), best.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (best.size() > keep) best.pop_back();
  };

  if (kd == 2) {
    for (int i = 0; i < 180; ++i) {  // v and -v are equivalent
      std::vector<double> ang{i * step0};
      offer(eval(ang), ang);
    }
  } else {
    for (int i = 0; i <= 180; ++i) {
      for (int j = 0; j < 360; ++j) {
        std::vector<double> ang{i * step0, j * step0};
        offer(eval(ang), ang);
      }
    }
  }

  MarginSearch out;
  for (auto& [mval, ang0] : best) {
    std::vector<double> ang = ang0;
    double cur = mval;
    double step = step0;
    while (step > 1e-10) {
      bool improved = false;
      for (std::size_t k = 0; k < ang.size(); ++k) {
        for (double delta : {step, -step}) {
          std::vector<double> cand = ang;
          cand[k] += delta;
          const double val = eval(cand);
          if (val > cur) {
            cur = val;
            ang = cand;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (cur > out.margin) {
      out.margin = cur;
      out.v = direction_from_angles(basis, ang);
    }
  }
  return out;
}

PropertyVerdict check_nsp_impl(const Matrix& a, int s, double factor,
                               bool strict) {
  const Index n = a.cols();
  if (s < 1 || s > n) throw ParamError("null space check: bad order s");
  if (n > 14) {
    throw UnsupportedSizeError("null space check: n > 14 not supported");
  }
  const Matrix basis = kernel_basis(a);
  const Index kd = basis.cols();
  if (kd > 3) {
    throw UnsupportedSizeError(
        "null space check: kernel dimension > 3 not supported");
  }

  PropertyVerdict verdict;
  if (kd == 0) {  // injective matrix: no nonzero kernel vectors
    verdict.holds = true;
    verdict.method = VerifyMethod::Exhaustive;
    verdict.margin = -std::numeric_limits<double>::infinity();
    return verdict;
  }

  const MarginSearch found = max_violation(basis, s, factor);
  verdict.margin = found.margin;
  verdict.method = kd == 1 ? VerifyMethod::Exhaustive : VerifyMethod::GridRefine;
  constexpr double kTol = 1e-9;
  verdict.holds = strict ? found.margin < -kTol : found.margin <= kTol;
  verdict.witness_vector = found.v;
  top_s_sum(found.v, s, &verdict.witness_support);
  return verdict;
}

}  // namespace

PropertyVerdict check_nsp(const Matrix& a, int s) {
  return check_nsp_impl(a, s, 1.0, true);
}

PropertyVerdict check_snsp(const Matrix& a, int s) {
  return check_nsp_impl(a, s, static_cast<double>(s) + 1.0, false);
}

double kernel_ratio_bound(const SensingMatrix& a, int restarts,
                          std::uint64_t seed, const SolverConfig* base_config) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (restarts < 1) throw ParamError("kernel_ratio_bound: restarts must be >= 1");
  if (n < m + 1) throw ParamError("kernel_ratio_bound: requires n >= m + 1");

  Matrix ext(m + 1, n);
  ext.topRows(m) = a.entries;
  ext.row(m).setOnes();
  Vector bt = Vector::Zero(m + 1);
  bt[m] = 1.0;
  const Instance inst =
      make_instance(explicit_matrix(std::move(ext)), std::move(bt));

  // Validates rank of the expanded system up front.
  const ProjectionCache cache(inst.matrix.entries, inst.rhs);

  SolverConfig cfg = base_config ? *base_config : SolverConfig{};
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < restarts; ++j) {
    SolverConfig c = cfg;
    c.seed = seed + static_cast<std::uint64_t>(j);
    if (j == 0) {
      c.init = InitKind::L1BasisPursuit;
    } else {
      SplitMix64 rng(seed + static_cast<std::uint64_t>(j));
      Vector g(n);
      for (Index i = 0; i < n; ++i) g[i] = rng.normal();
      c.init = InitKind::Explicit;
      c.init_vector = cache.project(g);
    }
    const SolveReport rep = solve(inst, c);
    best = std::min(best, objective(rep.solution));
    for (double obj : rep.objective_history) {
      // Every iterate is feasible, so each objective is a valid upper bound.
      if (obj > 0.0) best = std::min(best, obj);
    }
  }
  return best;
}

std::optional<L0Result> l0_oracle(const Instance& instance, int s_max) {
  const Matrix& a = instance.matrix.entries;
  const Vector& b = instance.rhs;
  const Index n = a.cols();
  if (s_max < 0 || s_max > n) throw ParamError("l0_oracle: bad s_max");

  auto binom = [](Index nn, int kk) {
    double r = 1.0;
    for (int i = 1; i <= kk; ++i) {
      r *= static_cast<double>(nn - kk + i) / i;
    }
    return r;
  };
  if (n > 24 && binom(n, s_max) > 1e6) {
    throw UnsupportedSizeError("l0_oracle: enumeration budget exceeded");
  }

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    return L0Result{0, Vector::Zero(n)};
  }

  for (int s = 1; s <= s_max; ++s) {
    std::vector<Index> comb(s);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      Matrix sub(a.rows(), s);
      for (int k = 0; k < s; ++k) sub.col(k) = a.col(comb[k]);
      const Vector xs = sub.colPivHouseholderQr().solve(b);
      if ((sub * xs - b).norm() <= 1e-9 * bnorm) {
        Vector x = Vector::Zero(n);
        for (int k = 0; k < s; ++k) x[comb[k]] = xs[k];
        return L0Result{static_cast<Index>(s), std::move(x)};
      }
      // next lexicographic combination
      int i = s - 1;
      while (i >= 0 && comb[i] == n - s + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int k = i + 1; k < s; ++k) comb[k] = comb[k - 1] + 1;
    }
  }
  return std::nullopt;
}

PropertyVerdict verify_local_min(const Matrix& a, const Vector& x, int trials,
                                 const std::vector<double>& t_grid,
                                 std::uint64_t seed, const Vector* rhs) {
  if (x.size() != a.cols()) throw ParamError("verify_local_min: bad x length");
  if (x.norm() == 0.0) throw ParamError("verify_local_min: x must be nonzero");
  if (rhs) {
    const double scale = std::max(1.0, rhs->norm());
    if ((a * x - *rhs).norm() > 1e-10 * scale) {
      throw ParamError("verify_local_min: x is infeasible");
    }
  }
  if (trials < 1 || t_grid.empty()) {
    throw ParamError("verify_local_min: need trials >= 1 and a t grid");
  }

  const Matrix basis = kernel_basis(a);
  const Index kd = basis.cols();
  PropertyVerdict verdict;
  verdict.method = VerifyMethod::GridRefine;
  if (kd == 0) {
    verdict.holds = true;
    verdict.margin = -std::numeric_limits<double>::infinity();
    return verdict;
  }

  double min_nonzero = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]);
    if (m > 0.0 && m < min_nonzero) min_nonzero = m;
  }
  const double radius0 = min_nonzero / 4.0;
  const double f0 = objective(x);
  constexpr double kSlack = 1e-12;

  SplitMix64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    Vector c(kd);
    double cn = 0.0;
    do {
      for (Index i = 0; i < kd; ++i) c[i] = rng.normal();
      cn = c.norm();
    } while (cn == 0.0);
    const Vector v = basis * (c / cn);

    double radius = radius0;
    while (true) {
      double viol = -std::numeric_limits<double>::infinity();
      double viol_t = 0.0;
      for (double t : t_grid) {
        if (std::abs(t) > radius) continue;
        const double gap = f0 - objective(x + t * v);  // positive: descent
        if (gap > viol) {
          viol = gap;
          viol_t = t;
        }
      }
      if (viol > worst) worst = viol;
      if (viol <= kSlack) break;  // no violation inside this radius
      radius *= 0.5;
      if (radius < 1e-6) {
        verdict.holds = false;
        verdict.margin = viol;
        verdict.witness_vector = viol_t * v;  // violating step t * v
        return verdict;
      }
    }
  }
  verdict.holds = true;
  verdict.margin = worst;
  return verdict;
}

}  // namespace ratiosparse
