#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ratiosparse/solver.hpp"

namespace ratiosparse {

using ImageGrid = Eigen::MatrixXd;                       // pixels, row = y
using FreqGrid = Eigen::MatrixXcd;                       // DFT coefficients
using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Forward differences with periodic wrap; dx differences rows, dy columns.
struct GradField {
  ImageGrid dx;
  ImageGrid dy;

  double norm1() const { return dx.cwiseAbs().sum() + dy.cwiseAbs().sum(); }
  double norm2() const {
    return std::sqrt(dx.squaredNorm() + dy.squaredNorm());
  }
};

// Boolean frequency-sampling set over DFT indices. DC is always kept and the
// set is invariant under frequency negation so real images stay consistent.
struct FourierMask {
  BoolGrid keep;
  int line_count = 0;

  Index rows() const { return keep.rows(); }
  Index cols() const { return keep.cols(); }
  Index kept_count() const { return keep.count(); }
};

struct GradSolverConfig {
  double lambda = 1e3;
  double rho1 = 10.0;
  double rho2 = 10.0;
  double rho3 = 1.0;
  double eps = 1e-8;
  int max_iter = 20000;
  std::uint64_t seed = 0;
};

struct GradSolveReport {
  ImageGrid image;  // final u (real part; clamp to [0,1] only when emitting)
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIter;
  std::vector<double> objective_history;  // ||grad u||_1 / ||grad u||_2
  std::vector<double> data_residual;      // ||A u - f||_2 over kept freqs
  std::vector<double> rel_change;
  double max_usolve_residual = 0.0;  // spot-checked u-system residual
};

GradField grad(const ImageGrid& u);

// Exact adjoint of grad: <grad(u), p> = <u, div_adjoint(p)> for all u, p.
ImageGrid div_adjoint(const GradField& p);

// `lines` equally-angled lines through DC, rasterized at radius step 0.5,
// then symmetrized under k -> -k and DC forced on.
FourierMask radial_mask(Index n, Index m, int lines);

// Full mask (every frequency kept); line_count records 0.
FourierMask full_mask(Index n, Index m);

// Standard 10-ellipse Shepp-Logan head phantom on an n x n grid in [0,1].
ImageGrid shepp_logan(Index n);

// Unnormalized forward 2D DFT restricted to kept frequencies (zeros off the
// mask). The inverse transform used throughout scales by 1/(n*m).
FreqGrid measure(const ImageGrid& u, const FourierMask& mask);

// Plain unnormalized forward DFT / matching inverse, for external use.
FreqGrid dft2(const ImageGrid& u);
ImageGrid idft2_real(const FreqGrid& f);

// L1/L2 on the gradient over {u : A u = f, u in [0,1]} by ADMM; u-update is
// solved diagonally in the Fourier domain.
GradSolveReport solve_grad(const FreqGrid& f, const FourierMask& mask,
                           const GradSolverConfig& config);

// Anisotropic TV baseline: same splitting with the ratio denominator
// removed (rho2 unused).
GradSolveReport solve_tv(const FreqGrid& f, const FourierMask& mask,
                         const GradSolverConfig& config);

}  // namespace ratiosparse
