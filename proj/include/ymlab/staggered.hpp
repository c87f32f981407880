#pragma once

#include <span>
#include <vector>

#include "ymlab/form_field.hpp"

namespace ymlab::detail {

/// One Lie-valued scalar channel bundle (dim * sites values) living at a
/// staggered offset. Intermediate results of the covariant stencils that do
/// not sit on a form-component location (e.g. d_j of a 1-form component)
/// are carried in this type.
struct Staggered {
  unsigned mask = 0;
  int dim = 0;
  std::vector<double> v;

  Staggered() = default;
  Staggered(unsigned m, int d, std::size_t sites) : mask(m), dim(d), v(d * sites, 0.0) {}

  std::span<double> channel(int a, std::size_t sites) {
    return std::span<double>(v).subspan(a * sites, sites);
  }
  std::span<const double> channel(int a, std::size_t sites) const {
    return std::span<const double>(v).subspan(a * sites, sites);
  }
};

Staggered take(const FormField& f, int c);
void add_into(FormField& f, int c, const Staggered& s, double coef = 1.0);

/// Moves a bundle to another offset by two-point averages along every
/// differing axis.
Staggered move_to(const Grid& g, const Staggered& s, unsigned to_mask);

/// Centred difference along `axis`; flips that offset bit.
Staggered diff(const Grid& g, const Staggered& s, int axis);

/// out += coef * [x, y] channelwise (x, y, out at a common offset).
void bracket_acc(const GroupSpec& grp, std::size_t sites, std::span<const double> x,
                 std::span<const double> y, std::span<double> out, double coef);

Staggered bracket(const GroupSpec& grp, std::size_t sites, const Staggered& x,
                  const Staggered& y);

/// s += coef * o
void axpy(Staggered& s, double coef, const Staggered& o);

}  // namespace ymlab::detail
