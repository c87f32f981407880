#pragma once

#include <optional>

#include "ymlab/form_field.hpp"

namespace ymlab {

/// (sum_sites h^3 |f(site)|^p)^{1/p}, with |f(site)|^2 the sum over components
/// and basis coefficients. p = infinity returns the pointwise maximum.
double lp_norm(const FormField& f, double p);

struct SobolevSpec {
  double b = 0.0;
  /// Reference connection for the gauge-covariant norm; absent means zero.
  std::optional<FormField> reference_connection;
};

struct LanczosOptions {
  int max_nodes = 20;
  double tolerance = 1e-8;
};

/// ||(1 - Delta_Ahat)^{b/2} f||_2. Flat case by Fourier multiplier with the
/// discrete symbol; covariant case by Lanczos quadrature of <f, S^b f> with
/// S = 1 - Delta_Ahat.
double h_b_norm(const FormField& f, const SobolevSpec& spec, const LanczosOptions& opt = {});

/// ||f||_{H_1^A}^2 = sum_j ||d_j^A f||^2 + ||f||^2
double h1A_norm(const FormField& f, const FormField& A);
/// sum_j ||d_j^A f||^2 alone.
double covariant_gradient_sq(const FormField& f, const FormField& A);

}  // namespace ymlab
