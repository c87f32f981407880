#include "ymlab/form_field.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "ymlab/error.hpp"
#include "ymlab/parallel.hpp"

namespace ymlab {

namespace {
constexpr unsigned kMasks0[] = {0u};
constexpr unsigned kMasks1[] = {1u, 2u, 4u};
constexpr unsigned kMasks2[] = {3u, 5u, 6u};
constexpr unsigned kMasks3[] = {7u};
}  // namespace

std::span<const unsigned> component_masks(int degree) {
  switch (degree) {
    case 0: return kMasks0;
    case 1: return kMasks1;
    case 2: return kMasks2;
    case 3: return kMasks3;
    default: throw Error(ErrorCode::InvalidDegree, "form degree must be 0..3");
  }
}

int component_count(int degree) { return static_cast<int>(component_masks(degree).size()); }

int wedge_sign(unsigned I, unsigned J) {
  // count pairs (i in I, j in J) with i > j
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    if (I & (1u << i))
      for (int j = 0; j < i; ++j)
        if (J & (1u << j)) ++inversions;
  return (inversions % 2) ? -1 : 1;
}

FormField::FormField(const Grid& grid, const GroupSpec& group, int degree)
    : grid_(grid), group_(&group), degree_(degree) {
  data_.assign(static_cast<std::size_t>(component_count(degree)) * group.dim() * grid.sites(),
               0.0);
}

int FormField::component_of(unsigned m) const {
  const auto masks = component_masks(degree_);
  for (std::size_t c = 0; c < masks.size(); ++c)
    if (masks[c] == m) return static_cast<int>(c);
  return -1;
}

std::span<double> FormField::component(int c) {
  const std::size_t len = static_cast<std::size_t>(dim()) * sites();
  return std::span<double>(data_).subspan(static_cast<std::size_t>(c) * len, len);
}

std::span<const double> FormField::component(int c) const {
  const std::size_t len = static_cast<std::size_t>(dim()) * sites();
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * len, len);
}

std::span<double> FormField::channel(int c, int a) {
  return std::span<double>(data_).subspan(
      (static_cast<std::size_t>(c) * dim() + a) * sites(), sites());
}

std::span<const double> FormField::channel(int c, int a) const {
  return std::span<const double>(data_).subspan(
      (static_cast<std::size_t>(c) * dim() + a) * sites(), sites());
}

LieValue FormField::at(std::size_t site, int c) const {
  LieValue v(dim());
  for (int a = 0; a < dim(); ++a) v.coeffs[a] = channel(c, a)[site];
  return v;
}

void FormField::set(std::size_t site, int c, const LieValue& v) {
  for (int a = 0; a < dim(); ++a) channel(c, a)[site] = v.coeffs[a];
}

bool FormField::same_shape(const FormField& o) const {
  return grid_ == o.grid_ && group_ == o.group_ && degree_ == o.degree_;
}

void FormField::require_same_shape(const FormField& o, const char* what) const {
  if (!same_shape(o))
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": field shapes differ");
}

FormField& FormField::operator+=(const FormField& o) { return axpy(1.0, o); }

FormField& FormField::operator-=(const FormField& o) { return axpy(-1.0, o); }

FormField& FormField::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

FormField& FormField::axpy(double s, const FormField& o) {
  require_same_shape(o, "axpy");
  const std::size_t len = data_.size();
  const double* src = o.data_.data();
  double* dst = data_.data();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < len; ++i) dst[i] += s * src[i];
  return *this;
}

void FormField::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool FormField::is_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

FormField operator+(FormField a, const FormField& b) { return a += b; }
FormField operator-(FormField a, const FormField& b) { return a -= b; }
FormField operator*(double s, FormField a) { return a *= s; }

double inner(const FormField& f, const FormField& g) {
  f.require_same_shape(g, "inner");
  const std::size_t N = f.sites();
  std::vector<double> site(N, 0.0);
  const auto fd = f.data();
  const auto gd = g.data();
  const std::size_t channels = fd.size() / N;
  for (std::size_t ch = 0; ch < channels; ++ch)
    for (std::size_t i = 0; i < N; ++i) site[i] += fd[ch * N + i] * gd[ch * N + i];
  return f.grid().cell_volume() * pairwise_sum(site);
}

double norm2(const FormField& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

double channel_mean(const FormField& f, int c, int a) {
  return pairwise_sum(f.channel(c, a)) / static_cast<double>(f.sites());
}

}  // namespace ymlab
