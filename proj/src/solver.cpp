#include "ratiosparse/solver.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "ratiosparse/errors.hpp"

namespace ratiosparse {

double objective(const Vector& x) {
  const double l2 = x.norm();
  if (l2 == 0.0) return 0.0;  // convention 0/0 = 0
  return x.lpNorm<1>() / l2;
}

Vector shrink(const Vector& v, double mu) {
  if (!(mu >= 0.0)) throw ParamError("shrink: mu must be nonnegative");
  return v.unaryExpr([mu](double t) {
    const double mag = std::abs(t) - mu;
    if (mag <= 0.0) return 0.0;
    return t > 0.0 ? mag : -mag;
  });
}

double solve_cubic_tau(double D) {
  if (!(D >= 0.0)) throw ParamError("solve_cubic_tau: D must be nonnegative");
  // (27D + 2)^2 - 4 expands to 729 D^2 + 108 D, which avoids cancellation
  // for small D.
  const double disc = std::sqrt(729.0 * D * D + 108.0 * D);
  const double c = std::cbrt((27.0 * D + 2.0 + disc) / 2.0);
  double tau = (1.0 + c + 1.0 / c) / 3.0;
  // Newton polish; the closed form is already close.
  for (int i = 0; i < 2; ++i) {
    const double f = ((tau - 1.0) * tau) * tau - D;
    const double fp = (3.0 * tau - 2.0) * tau;
    if (fp > 0.0) tau -= f / fp;
  }
  return tau < 1.0 ? 1.0 : tau;
}

Vector y_update(double c, const Vector& d, double rho1, SplitMix64& rng) {
  if (!(rho1 > 0.0)) throw ParamError("y_update: rho1 must be positive");
  if (!(c >= 0.0)) throw ParamError("y_update: c must be nonnegative");
  if (c == 0.0) return d;
  const double dn = d.norm();
  if (dn == 0.0) {
    // Any vector of norm cbrt(c/rho1) minimizes; take a seeded direction
    // uniform on the sphere.
    Vector e(d.size());
    double en = 0.0;
    do {
      for (Index i = 0; i < e.size(); ++i) e[i] = rng.normal();
      en = e.norm();
    } while (en == 0.0);
    return e * (std::cbrt(c / rho1) / en);
  }
  const double tau = solve_cubic_tau(c / (rho1 * dn * dn * dn));
  return tau * d;
}

Vector z_update(const Vector& r, double nu, const std::optional<Box>& box) {
  if (box && !(box->lo < box->hi)) throw ParamError("z_update: empty box");
  Vector z = shrink(r, nu);
  if (box) z = z.cwiseMax(box->lo).cwiseMin(box->hi);
  return z;
}

ProjectionCache::ProjectionCache(const Matrix& a, const Vector& b) : a_(a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw ParamError("ProjectionCache: empty matrix");
  }
  if (b.size() != a.rows()) {
    throw ParamError("ProjectionCache: rhs length does not match rows");
  }
  const Matrix aat = a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(aat, Eigen::EigenvaluesOnly);
  const double emax = es.eigenvalues().maxCoeff();
  const double emin = es.eigenvalues().minCoeff();
  if (!(emin > 0.0) || emax > 1e12 * emin) {
    throw RankError("ProjectionCache: AA^T condition estimate exceeds 1e12");
  }
  llt_.compute(aat);
  if (llt_.info() != Eigen::Success) {
    throw RankError("ProjectionCache: Cholesky of AA^T failed");
  }
  rhs_ = b;
  offset_ = a.transpose() * llt_.solve(b);
}

Vector ProjectionCache::project(const Vector& f) const {
  // P f + offset written as f - A^T (AA^T)^{-1} (A f - b)
  return f - a_.transpose() * llt_.solve(a_ * f - rhs_);
}

Matrix ProjectionCache::projector() const {
  const Index n = a_.cols();
  return Matrix::Identity(n, n) - a_.transpose() * llt_.solve(a_);
}

namespace {

double relative_change(const Vector& x_new, const Vector& x_old) {
  const double xn = x_new.norm();
  const double dx = (x_new - x_old).norm();
  return xn > 0.0 ? dx / xn : dx;  // absolute fallback at x = 0
}

}  // namespace

Vector solve_l1_init(const Instance& instance, double eps, int max_iter,
                     int* iterations_out) {
  const Matrix& a = instance.matrix.entries;
  const Index n = a.cols();
  ProjectionCache cache(a, instance.rhs);
  if (max_iter <= 0) {
    max_iter = std::max<int>(10 * static_cast<int>(n), 5000);
  }
  const double rho = 10.0;

  Vector x = cache.offset();  // least-norm point, feasible
  Vector z = x;
  Vector u = Vector::Zero(n);
  Vector best = x;
  double best_l1 = x.lpNorm<1>();
  int iters = 0;

  for (int k = 0; k < max_iter; ++k) {
    const Vector x_new = cache.project(z - u / rho);
    z = shrink(x_new + u / rho, 1.0 / rho);
    u += rho * (x_new - z);
    const double l1 = x_new.lpNorm<1>();
    if (l1 < best_l1) {
      best_l1 = l1;
      best = x_new;
    }
    const double rel = relative_change(x_new, x);
    x = x_new;
    iters = k + 1;
    if (rel <= eps) break;
  }
  if (iterations_out) *iterations_out = iters;
  return best;
}

SolveReport solve(const Instance& instance, const SolverConfig& config) {
  const Matrix& a = instance.matrix.entries;
  const Vector& b = instance.rhs;
  const Index n = a.cols();

  if (!(config.rho1 > 0.0) || !(config.rho2 > 0.0)) {
    throw ParamError("solve: rho1 and rho2 must be positive");
  }
  if (!(config.eps > 0.0)) throw ParamError("solve: eps must be positive");
  if (config.box && !(config.box->lo < config.box->hi)) {
    throw ParamError("solve: empty box");
  }
  if (b.norm() == 0.0) {
    throw DegenerateInstanceError("solve: b = 0 is not supported");
  }

  ProjectionCache cache(a, b);
  const int max_iter =
      config.max_iter > 0 ? config.max_iter : 10 * static_cast<int>(n);
  const double rho1 = config.rho1;
  const double rho2 = config.rho2;

  Vector x;
  switch (config.init) {
    case InitKind::L1BasisPursuit:
      x = solve_l1_init(instance);
      break;
    case InitKind::Explicit:
      if (config.init_vector.size() != n) {
        throw ParamError("solve: explicit init has wrong length");
      }
      x = config.init_vector;
      break;
    case InitKind::LeastNorm:
      x = cache.offset();
      break;
  }

  SplitMix64 rng(config.seed);
  Vector y = x;
  Vector z = config.box ? Vector(x.cwiseMax(config.box->lo).cwiseMin(config.box->hi)) : x;
  Vector v = Vector::Zero(n);
  Vector w = Vector::Zero(n);

  SolveReport report;
  report.status = SolveStatus::MaxIter;

  for (int k = 0; k < max_iter; ++k) {
    const Vector f =
        (rho1 * (y - v / rho1) + rho2 * (z - w / rho2)) / (rho1 + rho2);
    const Vector x_new = cache.project(f);

    const double c = z.lpNorm<1>();
    y = y_update(c, x_new + v / rho1, rho1, rng);

    const double yn = y.norm();
    const double nu =
        yn > 0.0 ? 1.0 / (rho2 * yn) : std::numeric_limits<double>::infinity();
    z = z_update(x_new + w / rho2, nu, config.box);

    v += rho1 * (x_new - y);
    w += rho2 * (x_new - z);

    report.objective_history.push_back(objective(x_new));
    report.feasibility_history.push_back((a * x_new - b).norm());
    report.residual_y.push_back((x_new - y).norm());
    report.residual_z.push_back((x_new - z).norm());
    report.iterations = k + 1;

    const double rel = relative_change(x_new, x);
    x = x_new;
    if (rel <= config.eps) {
      report.status = SolveStatus::Converged;
      break;
    }
  }

  report.solution = x;
  report.final_z = z;
  return report;
}

}  // namespace ratiosparse
