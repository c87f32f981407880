#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "ymlab/form_field.hpp"

namespace ymlab {

/// amplitude * cos(2 pi k.x / L + phase) in one (component, basis) channel.
struct Mode {
  int component = 0;
  int basis = 0;
  std::array<int, 3> k{1, 0, 0};
  double amplitude = 1.0;
  double phase = 0.0;
};

/// Samples a sum of modes at each component's staggered location.
FormField sample_modes(const Grid& grid, const GroupSpec& group, int degree,
                       std::span<const Mode> modes);

/// Random field with |f_hat(k)| ~ (1 + |k|^2)^{-s/2 - 3/4} xi_k (xi Gaussian,
/// continuum |k|), rescaled to root-mean-square value `rms`. kmax > 0 drops
/// modes with max_j |k_j| > kmax (integer wave numbers). `coulomb` projects
/// a 1-form onto the flat divergence-free subspace; `zero_mean` removes the
/// constant mode.
struct SpectralSampler {
  double roughness = 0.5;
  double rms = 1.0;
  int kmax = 0;
  bool coulomb = false;
  bool zero_mean = true;
};

FormField sample_spectral(const Grid& grid, const GroupSpec& group, int degree,
                          const SpectralSampler& spec, std::uint64_t seed, std::uint64_t stream);

/// Localised periodic Gaussian bump exp(-|x - c|^2 / (2 w^2)) with random
/// Lie-algebra direction per component; used to probe Sobolev ratios.
FormField sample_bump(const Grid& grid, const GroupSpec& group, int degree, double width,
                      std::uint64_t seed, std::uint64_t stream);

}  // namespace ymlab
