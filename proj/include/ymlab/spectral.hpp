#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "ymlab/form_field.hpp"

namespace ymlab {

/// Which Laplacian symbol a spectral operation uses. Discrete is the exact
/// symbol 4 sum sin^2(k_j h / 2) / h^2 of the lattice stencils; Continuum is
/// |k|^2 and serves as the truth for spatial-convergence studies.
enum class Symbol { Discrete, Continuum };

/// Real-to-complex 3-D transform of one channel on an n^3 grid. Output is the
/// half spectrum indexed (kz * n + ky) * (n/2 + 1) + kx.
class Fft3 {
 public:
  explicit Fft3(int n);
  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  int n() const { return n_; }
  int half() const { return n_ / 2 + 1; }
  std::size_t spectrum_size() const;

  void forward(std::span<const double> in, std::vector<std::complex<double>>& out);
  /// Unnormalised inverse; divide by n^3 to undo forward().
  void inverse(const std::vector<std::complex<double>>& in, std::span<double> out);

  /// Number of times a half-spectrum entry represents itself in the full
  /// spectrum (1 or 2).
  double multiplicity(int kx) const { return (kx == 0 || 2 * kx == n_) ? 1.0 : 2.0; }
  int signed_k(int k) const { return 2 * k > n_ ? k - n_ : k; }

 private:
  int n_;
  double* real_;
  void* cplx_;
  void* fwd_;
  void* inv_;
};

double discrete_symbol(const Grid& g, int kx, int ky, int kz);
double continuum_symbol(const Grid& g, int kx, int ky, int kz);

/// e^{t Delta} f for abelian fields: exact solution of the discrete flat heat
/// equation when symbol = Discrete.
FormField spectral_heat(const FormField& f, double t, Symbol symbol = Symbol::Discrete);

struct HelmholtzParts {
  FormField divergence_free;
  FormField gradient_part;
};

/// Orthogonal split f = P f + (1 - P) f with coext_d(P f) = 0 and the
/// complement exact (range of ext_d). The zero mode goes to the
/// divergence-free part.
HelmholtzParts helmholtz_split(const FormField& f);

/// The same split applied channel by channel with the flat d, for any group.
/// Used to prepare flat-Coulomb initial data in the nonabelian case.
HelmholtzParts flat_helmholtz_split(const FormField& f);

/// sqrt(sum_k lambda_h(k)^{1/2} |f_hat(k)|^2) in L2-normalised units.
double h_half_seminorm(const FormField& f);

/// sqrt(sum_k m(lambda_h(k)) |f_hat(k)|^2) in L2-normalised units; used by the
/// flat fractional Sobolev norms.
double spectral_norm(const FormField& f, const std::function<double(double)>& multiplier);

/// Applies a real radial multiplier m(kx, ky, kz) to every channel.
void apply_multiplier(FormField& f,
                      const std::function<double(int, int, int)>& multiplier);

void require_abelian(const FormField& f, const char* what);

}  // namespace ymlab
