#include "ymlab/sampling.hpp"

#include <cmath>
#include <numbers>

#include "ymlab/error.hpp"
#include "ymlab/parallel.hpp"
#include "ymlab/spectral.hpp"

namespace ymlab {

FormField sample_modes(const Grid& grid, const GroupSpec& group, int degree,
                       std::span<const Mode> modes) {
  FormField f(grid, group, degree);
  const int n = grid.n();
  const double w = 2.0 * std::numbers::pi / grid.L();
  for (const auto& m : modes) {
    if (m.component < 0 || m.component >= f.components() || m.basis < 0 || m.basis >= f.dim())
      throw Error(ErrorCode::InvalidInput, "mode addresses a missing component or basis index");
    auto ch = f.channel(m.component, m.basis);
    const unsigned mask = f.mask(m.component);
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
          const auto p = grid.position(x, y, z, mask);
          const double arg = w * (m.k[0] * p[0] + m.k[1] * p[1] + m.k[2] * p[2]) + m.phase;
          ch[grid.index(x, y, z)] += m.amplitude * std::cos(arg);
        }
  }
  return f;
}

FormField sample_spectral(const Grid& grid, const GroupSpec& group, int degree,
                          const SpectralSampler& spec, std::uint64_t seed, std::uint64_t stream) {
  FormField f(grid, group, degree);
  CounterRng rng(seed, stream);
  for (double& v : f.data()) v = rng.normal();
  const int n = grid.n();
  const double expo = -0.5 * spec.roughness - 0.75;
  apply_multiplier(f, [&](int kx, int ky, int kz) {
    auto sk = [n](int k) { return std::abs(2 * k > n ? k - n : k); };
    if (spec.kmax > 0 && (sk(kx) > spec.kmax || sk(ky) > spec.kmax || sk(kz) > spec.kmax))
      return 0.0;
    if (spec.zero_mean && kx == 0 && ky == 0 && kz == 0) return 0.0;
    return std::pow(1.0 + continuum_symbol(grid, kx, ky, kz), expo);
  });
  if (spec.coulomb) {
    if (degree != 1) throw Error(ErrorCode::InvalidInput, "Coulomb projection needs a 1-form");
    f = flat_helmholtz_split(f).divergence_free;
  }
  const double rms = norm2(f) / std::pow(grid.L(), 1.5);
  if (rms > 0.0) f *= spec.rms / rms;
  return f;
}

FormField sample_bump(const Grid& grid, const GroupSpec& group, int degree, double width,
                      std::uint64_t seed, std::uint64_t stream) {
  FormField f(grid, group, degree);
  CounterRng rng(seed, stream);
  const double L = grid.L();
  const std::array<double, 3> c{rng.uniform() * L, rng.uniform() * L, rng.uniform() * L};
  const int n = grid.n();
  for (int comp = 0; comp < f.components(); ++comp) {
    LieValue dir(f.dim());
    for (int a = 0; a < f.dim(); ++a) dir.coeffs[a] = rng.normal();
    const unsigned mask = f.mask(comp);
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
          const auto p = grid.position(x, y, z, mask);
          double r2 = 0.0;
          for (int j = 0; j < 3; ++j) {
            double d = std::remainder(p[j] - c[j], L);
            r2 += d * d;
          }
          const double g = std::exp(-r2 / (2.0 * width * width));
          f.set(grid.index(x, y, z), comp, dir * g);
        }
  }
  return f;
}

}  // namespace ymlab
