#pragma once

#include <functional>
#include <vector>

#include "ymlab/form_field.hpp"
#include "ymlab/heat_flow.hpp"

namespace ymlab {

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Matrix-free conjugate gradients for an SPD operator; x holds the initial
/// guess on entry. Throws a numeric error when the relative residual does not
/// reach `tol` within `max_iter` iterations.
CgResult conjugate_gradient(const std::function<FormField(const FormField&)>& apply,
                            const FormField& rhs, FormField& x, double tol, int max_iter);

/// e^{t Delta_Ahat} f by m backward-Euler substeps (1 - (t/m) Delta_Ahat)^{-m},
/// each solved by CG to relative residual 1e-10 within 10 n iterations.
FormField apply_semigroup(const FormField& A_bar, double t, const FormField& f, int m);

struct PicardOptions {
  int substeps = 4;
  /// Stop once the correction falls below this fraction of max ||w||; the
  /// CG solves leave a floor near 1e-10.
  double tolerance = 1e-9;
};

struct PicardResult {
  /// iterates[k][n] = k-th iterate at node n; iterates[0] is the free
  /// propagation e^{t Delta_Ahat} w0.
  std::vector<std::vector<FormField>> iterates;
  /// max_n ||iterates[k+1][n] - iterates[k][n]||_2
  std::vector<double> corrections;
  FormField A_bar;

  const std::vector<FormField>& limit() const { return iterates.back(); }
  /// corrections[k+1] / corrections[k]
  std::vector<double> ratios() const;
};

/// Fixed-point iteration of w(t) = e^{t Delta_Ahat} w0 + int_0^t e^{(t-s)
/// Delta_Ahat} K(s) w(s) ds on the trajectory's nodes, which must be
/// uniform. Ahat = A(T). Trapezoid in time. Three consecutive correction
/// ratios >= 1 raise a horizon-too-long error.
PicardResult solve_mild_picard(const FormField& w0, const FlowTrajectory& traj, int n_iter,
                               const PicardOptions& opt = {});

struct PicardHorizon {
  double T = 0.0;
  FlowTrajectory traj;
  PicardResult result;
};

/// Halves the horizon from T0 until the iteration contracts (at most
/// `max_halvings` times).
PicardHorizon choose_picard_horizon(const FormField& A0, const FormField& w0, double T0,
                                    int nodes, int n_iter, const PicardOptions& opt = {},
                                    const FlowOptions& flow = {}, int max_halvings = 6);

}  // namespace ymlab
