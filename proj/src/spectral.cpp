#include "ymlab/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "ymlab/error.hpp"
#include "ymlab/parallel.hpp"

namespace ymlab {

namespace {

// FFTW planning is not thread-safe; executes with new arrays are.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

using cplx = std::complex<double>;

}  // namespace

Fft3::Fft3(int n) : n_(n) {
  const std::size_t N = static_cast<std::size_t>(n) * n * n;
  real_ = fftw_alloc_real(N);
  cplx_ = fftw_alloc_complex(spectrum_size());
  std::lock_guard<std::mutex> lock(plan_mutex());
  fwd_ = fftw_plan_dft_r2c_3d(n, n, n, real_, static_cast<fftw_complex*>(cplx_), FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r_3d(n, n, n, static_cast<fftw_complex*>(cplx_), real_, FFTW_ESTIMATE);
}

Fft3::~Fft3() {
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
  }
  fftw_free(real_);
  fftw_free(cplx_);
}

std::size_t Fft3::spectrum_size() const {
  return static_cast<std::size_t>(n_) * n_ * half();
}

void Fft3::forward(std::span<const double> in, std::vector<cplx>& out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  const auto* c = reinterpret_cast<const cplx*>(cplx_);
  out.assign(c, c + spectrum_size());
}

void Fft3::inverse(const std::vector<cplx>& in, std::span<double> out) {
  std::copy(in.begin(), in.end(), reinterpret_cast<cplx*>(cplx_));
  fftw_execute(static_cast<fftw_plan>(inv_));
  std::copy(real_, real_ + out.size(), out.begin());
}

double discrete_symbol(const Grid& g, int kx, int ky, int kz) {
  const double h = g.h();
  const double f = std::numbers::pi / g.n();
  const double sx = std::sin(f * kx), sy = std::sin(f * ky), sz = std::sin(f * kz);
  return 4.0 * (sx * sx + sy * sy + sz * sz) / (h * h);
}

double continuum_symbol(const Grid& g, int kx, int ky, int kz) {
  const int n = g.n();
  auto sk = [n](int k) { return 2 * k > n ? k - n : k; };
  const double w = 2.0 * std::numbers::pi / g.L();
  const double a = w * sk(kx), b = w * sk(ky), c = w * sk(kz);
  return a * a + b * b + c * c;
}

void require_abelian(const FormField& f, const char* what) {
  if (!f.group().structure().empty())
    throw Error(ErrorCode::InvalidInput, std::string(what) + " requires an abelian group");
}

void apply_multiplier(FormField& f, const std::function<double(int, int, int)>& multiplier) {
  const int n = f.grid().n();
  Fft3 fft(n);
  const int nh = fft.half();
  std::vector<double> m(fft.spectrum_size());
  for (int kz = 0; kz < n; ++kz)
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < nh; ++kx)
        m[(static_cast<std::size_t>(kz) * n + ky) * nh + kx] = multiplier(kx, ky, kz);
  const double norm = 1.0 / static_cast<double>(f.sites());
  std::vector<cplx> spec;
  for (int c = 0; c < f.components(); ++c)
    for (int a = 0; a < f.dim(); ++a) {
      fft.forward(f.channel(c, a), spec);
      for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= m[i] * norm;
      fft.inverse(spec, f.channel(c, a));
    }
}

FormField spectral_heat(const FormField& f, double t, Symbol symbol) {
  require_abelian(f, "spectral_heat");
  if (t < 0.0) throw Error(ErrorCode::InvalidInput, "spectral_heat needs t >= 0");
  FormField out = f;
  if (t == 0.0) return out;
  const Grid& g = f.grid();
  apply_multiplier(out, [&](int kx, int ky, int kz) {
    const double lam = symbol == Symbol::Discrete ? discrete_symbol(g, kx, ky, kz)
                                                  : continuum_symbol(g, kx, ky, kz);
    return std::exp(-lam * t);
  });
  return out;
}

HelmholtzParts helmholtz_split(const FormField& f) {
  require_abelian(f, "helmholtz_split");
  return flat_helmholtz_split(f);
}

HelmholtzParts flat_helmholtz_split(const FormField& f) {
  if (f.degree() != 1) throw Error(ErrorCode::InvalidDegree, "helmholtz_split needs a 1-form");
  const Grid& g = f.grid();
  const int n = g.n();
  const double h = g.h();
  Fft3 fft(n);
  const int nh = fft.half();
  const double norm = 1.0 / static_cast<double>(f.sites());
  HelmholtzParts parts{f.zeros_like(), f.zeros_like()};
  // Symbol of the 0 -> 1 difference along each axis: (e^{i theta} - 1) / h.
  auto sym = [&](int k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    return cplx(std::cos(th) - 1.0, std::sin(th)) / h;
  };
  std::array<std::vector<cplx>, 3> spec;
  for (int a = 0; a < f.dim(); ++a) {
    for (int j = 0; j < 3; ++j) fft.forward(f.channel(j, a), spec[j]);
    std::array<std::vector<cplx>, 3> grad;
    for (auto& v : grad) v.assign(spec[0].size(), cplx(0.0));
    for (int kz = 0; kz < n; ++kz)
      for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < nh; ++kx) {
          const std::size_t i = (static_cast<std::size_t>(kz) * n + ky) * nh + kx;
          const cplx s[3] = {sym(kx), sym(ky), sym(kz)};
          const double den = std::norm(s[0]) + std::norm(s[1]) + std::norm(s[2]);
          if (den == 0.0) continue;
          const cplx p =
              (std::conj(s[0]) * spec[0][i] + std::conj(s[1]) * spec[1][i] +
               std::conj(s[2]) * spec[2][i]) / den;
          for (int j = 0; j < 3; ++j) grad[j][i] = s[j] * p;
        }
    for (int j = 0; j < 3; ++j) {
      for (auto& v : grad[j]) v *= norm;
      fft.inverse(grad[j], parts.gradient_part.channel(j, a));
    }
  }
  parts.divergence_free = f;
  parts.divergence_free -= parts.gradient_part;
  return parts;
}

double spectral_norm(const FormField& f, const std::function<double(double)>& multiplier) {
  const Grid& g = f.grid();
  const int n = g.n();
  Fft3 fft(n);
  const int nh = fft.half();
  std::vector<double> m(fft.spectrum_size());
  for (int kz = 0; kz < n; ++kz)
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < nh; ++kx)
        m[(static_cast<std::size_t>(kz) * n + ky) * nh + kx] =
            fft.multiplicity(kx) * multiplier(discrete_symbol(g, kx, ky, kz));
  std::vector<double> terms(fft.spectrum_size(), 0.0);
  std::vector<cplx> spec;
  for (int c = 0; c < f.components(); ++c)
    for (int a = 0; a < f.dim(); ++a) {
      fft.forward(f.channel(c, a), spec);
      for (std::size_t i = 0; i < spec.size(); ++i) terms[i] += m[i] * std::norm(spec[i]);
    }
  // Parseval: h^3 sum |f|^2 = h^3 / N sum |F|^2
  const double scale = g.cell_volume() / static_cast<double>(f.sites());
  return std::sqrt(std::max(0.0, scale * pairwise_sum(terms)));
}

double h_half_seminorm(const FormField& f) {
  require_abelian(f, "h_half_seminorm");
  const double l2 = norm2(f);
  const double tol = 1e-12 * std::max(l2 / std::pow(f.grid().L(), 1.5), 1e-300);
  for (int c = 0; c < f.components(); ++c)
    for (int a = 0; a < f.dim(); ++a)
      if (std::abs(channel_mean(f, c, a)) > tol + 1e-14)
        throw Error(ErrorCode::InvalidInput,
                    "h_half_seminorm: field has a nonzero mean (homogeneous norm undefined)");
  return spectral_norm(f, [](double lam) { return std::sqrt(lam); });
}

}  // namespace ymlab
