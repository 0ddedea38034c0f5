#include "ratiosparse/grad2d.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>

#include "ratiosparse/errors.hpp"
#include "ratiosparse/rng.hpp"

namespace ratiosparse {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Complex 2D DFT pair on a fixed grid. Unnormalized forward; backward is the
// unnormalized inverse (scale by 1/(n*m) to invert). Eigen's column-major
// (rows, cols) buffer is the row-major buffer of the transpose, so plans are
// built on swapped dims and run in place on Eigen data.
class Dft2 {
 public:
  Dft2(Index rows, Index cols) : rows_(rows), cols_(cols) {
    FreqGrid scratch(rows, cols);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_2d(static_cast<int>(cols), static_cast<int>(rows), p,
                            p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_2d(static_cast<int>(cols), static_cast<int>(rows), p,
                            p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  ~Dft2() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  Dft2(const Dft2&) = delete;
  Dft2& operator=(const Dft2&) = delete;

  FreqGrid forward(const FreqGrid& a) const { return run(fwd_, a); }
  FreqGrid forward(const ImageGrid& a) const {
    return run(fwd_, a.cast<std::complex<double>>());
  }
  FreqGrid backward(const FreqGrid& a) const { return run(bwd_, a); }
  ImageGrid inverse_real(const FreqGrid& a) const {
    return backward(a).real() / static_cast<double>(rows_ * cols_);
  }

 private:
  FreqGrid run(fftw_plan plan, FreqGrid a) const {
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan, p, p);
    return a;
  }

  Index rows_;
  Index cols_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

GradField shrink_field(const GradField& p, double mu) {
  auto soft = [mu](double t) {
    const double mag = std::abs(t) - mu;
    if (mag <= 0.0) return 0.0;
    return t > 0.0 ? mag : -mag;
  };
  return GradField{p.dx.unaryExpr(soft), p.dy.unaryExpr(soft)};
}

bool mask_is_symmetric(const FourierMask& mask) {
  const Index n = mask.rows();
  const Index m = mask.cols();
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (mask.keep(i, j) != mask.keep((n - i) % n, (m - j) % m)) return false;
    }
  }
  return true;
}

FreqGrid apply_mask(const FourierMask& mask, const FreqGrid& a) {
  return mask.keep.select(a, FreqGrid::Zero(a.rows(), a.cols()));
}

// Fourier symbol of div_adjoint(grad(.)) = -Laplacian (periodic).
ImageGrid laplacian_symbol(Index n, Index m) {
  ImageGrid l(n, m);
  for (Index j = 0; j < m; ++j) {
    const double sj = std::sin(M_PI * static_cast<double>(j) / m);
    for (Index i = 0; i < n; ++i) {
      const double si = std::sin(M_PI * static_cast<double>(i) / n);
      l(i, j) = 4.0 * (si * si + sj * sj);
    }
  }
  return l;
}

}  // namespace

GradField grad(const ImageGrid& u) {
  const Index n = u.rows();
  const Index m = u.cols();
  GradField g{ImageGrid(n, m), ImageGrid(n, m)};
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      g.dx(i, j) = u(i, j) - u((i + 1) % n, j);
      g.dy(i, j) = u(i, j) - u(i, (j + 1) % m);
    }
  }
  return g;
}

ImageGrid div_adjoint(const GradField& p) {
  if (p.dx.rows() != p.dy.rows() || p.dx.cols() != p.dy.cols()) {
    throw ParamError("div_adjoint: channel dims differ");
  }
  const Index n = p.dx.rows();
  const Index m = p.dx.cols();
  ImageGrid out(n, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      out(i, j) = p.dx(i, j) - p.dx((i + n - 1) % n, j) + p.dy(i, j) -
                  p.dy(i, (j + m - 1) % m);
    }
  }
  return out;
}

FourierMask radial_mask(Index n, Index m, int lines) {
  if (n < 1 || m < 1) throw ParamError("radial_mask: empty grid");
  if (lines < 1) throw ParamError("radial_mask: lines must be >= 1");

  BoolGrid keep = BoolGrid::Constant(n, m, false);
  const long ilo = -static_cast<long>(n / 2), ihi = static_cast<long>((n - 1) / 2);
  const long jlo = -static_cast<long>(m / 2), jhi = static_cast<long>((m - 1) / 2);
  const double rmax = std::hypot(n / 2.0, m / 2.0);

  for (int k = 0; k < lines; ++k) {
    const double ang = M_PI * static_cast<double>(k) / lines;
    const double di = std::cos(ang);
    const double dj = std::sin(ang);
    for (double r = 0.0; r <= rmax; r += 0.5) {
      for (double sgn : {1.0, -1.0}) {
        const long fi = std::lround(sgn * r * di);
        const long fj = std::lround(sgn * r * dj);
        if (fi < ilo || fi > ihi || fj < jlo || fj > jhi) continue;
        keep((fi + n) % n, (fj + m) % m) = true;
      }
    }
  }

  // Conjugate symmetry, then DC.
  BoolGrid sym = keep;
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (keep(i, j)) sym((n - i) % n, (m - j) % m) = true;
    }
  }
  sym(0, 0) = true;
  return FourierMask{std::move(sym), lines};
}

FourierMask full_mask(Index n, Index m) {
  return FourierMask{BoolGrid::Constant(n, m, true), 0};
}

ImageGrid shepp_logan(Index n) {
  if (n < 16) throw ParamError("shepp_logan: grid too small");
  struct Ellipse {
    double val, a, b, x0, y0, phi_deg;
  };
  static constexpr Ellipse kEllipses[10] = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
  };

  ImageGrid img = ImageGrid::Zero(n, n);
  for (const Ellipse& e : kEllipses) {
    const double phi = e.phi_deg * M_PI / 180.0;
    const double ct = std::cos(phi);
    const double st = std::sin(phi);
    for (Index i = 0; i < n; ++i) {
      const double y = 1.0 - (2.0 * i + 1.0) / n;
      for (Index j = 0; j < n; ++j) {
        const double x = (2.0 * j + 1.0) / n - 1.0;
        const double rx = (x - e.x0) * ct + (y - e.y0) * st;
        const double ry = -(x - e.x0) * st + (y - e.y0) * ct;
        if ((rx * rx) / (e.a * e.a) + (ry * ry) / (e.b * e.b) <= 1.0) {
          img(i, j) += e.val;
        }
      }
    }
  }
  return img.cwiseMax(0.0).cwiseMin(1.0);
}

FreqGrid dft2(const ImageGrid& u) { return Dft2(u.rows(), u.cols()).forward(u); }

ImageGrid idft2_real(const FreqGrid& f) {
  return Dft2(f.rows(), f.cols()).inverse_real(f);
}

FreqGrid measure(const ImageGrid& u, const FourierMask& mask) {
  if (u.rows() != mask.rows() || u.cols() != mask.cols()) {
    throw ParamError("measure: image and mask dims differ");
  }
  return apply_mask(mask, dft2(u));
}

namespace {

GradSolveReport solve_grad_impl(const FreqGrid& f, const FourierMask& mask,
                                const GradSolverConfig& config,
                                bool ratio_model) {
  const Index n = mask.rows();
  const Index m = mask.cols();
  if (f.rows() != n || f.cols() != m) {
    throw ParamError("solve_grad: data and mask dims differ");
  }
  if (!mask.keep(0, 0)) throw ParamError("solve_grad: mask must keep DC");
  if (!mask_is_symmetric(mask)) {
    throw ParamError("solve_grad: mask must be conjugate-symmetric");
  }
  if (!(config.lambda > 0.0) || !(config.rho1 > 0.0) ||
      !(config.rho2 > 0.0) || !(config.rho3 > 0.0) || !(config.eps > 0.0) ||
      config.max_iter < 1) {
    throw ParamError("solve_grad: parameters must be positive");
  }

  const double lambda = config.lambda;
  const double rho1 = config.rho1;
  const double rho2 = ratio_model ? config.rho2 : 0.0;
  const double rho3 = config.rho3;
  const double npix = static_cast<double>(n * m);

  const Dft2 dft(n, m);
  const FreqGrid data = apply_mask(mask, f);

  // Symbol of lambda A^T A - (rho1 [+ rho2]) Laplacian + rho3 I. With the
  // unnormalized forward DFT, A^T A is diagonal with value n*m on kept
  // frequencies.
  ImageGrid denom = (rho1 + rho2) * laplacian_symbol(n, m);
  denom.array() += rho3;
  denom += mask.keep.cast<double>().matrix() * (lambda * npix);

  SplitMix64 rng(config.seed);

  ImageGrid u = dft.inverse_real(data);  // zero-filled reconstruction
  ImageGrid v = u.cwiseMax(0.0).cwiseMin(1.0);
  GradField d = grad(u);
  GradField h = d;
  GradField b{ImageGrid::Zero(n, m), ImageGrid::Zero(n, m)};  // dual of d
  GradField g = b;                                            // dual of h
  ImageGrid e = ImageGrid::Zero(n, m);                        // dual of v
  FreqGrid w = FreqGrid::Zero(n, m);                          // dual of Au=f

  GradSolveReport report;
  report.status = SolveStatus::MaxIter;

  for (int k = 0; k < config.max_iter; ++k) {
    // u-update, diagonal in the Fourier domain
    ImageGrid num = rho1 * div_adjoint({d.dx - b.dx, d.dy - b.dy}) +
                    rho3 * (v - e) +
                    dft.backward(apply_mask(mask, data + w)).real() * lambda;
    if (ratio_model) {
      num += rho2 * div_adjoint({h.dx - g.dx, h.dy - g.dy});
    }
    FreqGrid uhat = dft.forward(num);
    uhat.array() /= denom.cast<std::complex<double>>().array();
    const ImageGrid u_new = dft.inverse_real(uhat);

    if (k % 50 == 0 && num.norm() > 0.0) {
      // Spot-check the linear system residual in the pixel domain.
      ImageGrid lhs =
          dft.backward(apply_mask(mask, dft.forward(u_new))).real() * lambda +
          (rho1 + rho2) * div_adjoint(grad(u_new)) + rho3 * u_new;
      const double resid = (lhs - num).norm() / num.norm();
      if (resid > report.max_usolve_residual) {
        report.max_usolve_residual = resid;
      }
    }

    v = (u_new + e).cwiseMax(0.0).cwiseMin(1.0);

    const GradField gu = grad(u_new);

    if (ratio_model) {
      const GradField th{gu.dx + g.dx, gu.dy + g.dy};
      const double c = d.norm1();
      const double tn = th.norm2();
      if (tn == 0.0) {
        // Any field of norm cbrt(c/rho2) minimizes; seeded direction.
        GradField rnd{ImageGrid(n, m), ImageGrid(n, m)};
        for (Index j = 0; j < m; ++j) {
          for (Index i = 0; i < n; ++i) {
            rnd.dx(i, j) = rng.normal();
            rnd.dy(i, j) = rng.normal();
          }
        }
        const double scale = std::cbrt(c / rho2) / rnd.norm2();
        h = GradField{rnd.dx * scale, rnd.dy * scale};
      } else {
        const double tau = solve_cubic_tau(c / (rho2 * tn * tn * tn));
        h = GradField{tau * th.dx, tau * th.dy};
      }
    }

    const double hn = ratio_model ? h.norm2() : 1.0;
    const double nu = ratio_model
                          ? (hn > 0.0 ? 1.0 / (rho1 * hn)
                                      : std::numeric_limits<double>::infinity())
                          : 1.0 / rho1;
    d = shrink_field({gu.dx + b.dx, gu.dy + b.dy}, nu);

    b.dx += gu.dx - d.dx;
    b.dy += gu.dy - d.dy;
    if (ratio_model) {
      g.dx += gu.dx - h.dx;
      g.dy += gu.dy - h.dy;
    }
    const FreqGrid au = apply_mask(mask, dft.forward(u_new));
    w += data - au;
    e += u_new - v;

    const double gun = gu.norm2();
    report.objective_history.push_back(
        ratio_model ? (gun > 0.0 ? gu.norm1() / gun : 0.0) : gu.norm1());
    report.data_residual.push_back((au - data).norm());
    const double un = u_new.norm();
    const double rel = un > 0.0 ? (u_new - u).norm() / un : (u_new - u).norm();
    report.rel_change.push_back(rel);
    report.iterations = k + 1;

    u = u_new;
    if (rel <= config.eps) {
      report.status = SolveStatus::Converged;
      break;
    }
  }

  report.image = u;
  return report;
}

}  // namespace

GradSolveReport solve_grad(const FreqGrid& f, const FourierMask& mask,
                           const GradSolverConfig& config) {
  return solve_grad_impl(f, mask, config, true);
}

GradSolveReport solve_tv(const FreqGrid& f, const FourierMask& mask,
                         const GradSolverConfig& config) {
  return solve_grad_impl(f, mask, config, false);
}

}  // namespace ratiosparse
