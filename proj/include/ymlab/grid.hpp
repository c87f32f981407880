#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace ymlab {

enum class Boundary { Periodic };

/// Periodic cubic lattice with n points per axis on a box of side L.
///
/// Forms are staggered: a component dx^I of a p-form is sampled at
/// h * (i + mask(I) / 2), i.e. 0-forms at sites, 1-form component j at edge
/// midpoints, 2-forms at face centres and 3-forms at cube centres. A
/// component's location is therefore identified by a 3-bit offset mask.
class Grid {
 public:
  Grid(int n, double L);

  int n() const { return n_; }
  double L() const { return L_; }
  double h() const { return L_ / n_; }
  double cell_volume() const { return h() * h() * h(); }
  std::size_t sites() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  Boundary boundary() const { return Boundary::Periodic; }

  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) + static_cast<std::size_t>(n_) *
                                             (static_cast<std::size_t>(y) +
                                              static_cast<std::size_t>(n_) * z);
  }
  /// Physical coordinate of the point (x,y,z) at staggered offset mask.
  std::array<double, 3> position(int x, int y, int z, unsigned mask) const;

  bool operator==(const Grid& o) const { return n_ == o.n_ && L_ == o.L_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int n_;
  double L_;
};

namespace stencil {

/// dst[i] (+)= c0 * src[i] + c1 * src[i + dir * e_axis], periodic.
void two_point(const Grid& g, std::span<const double> src, std::span<double> dst, int axis,
               int dir, double c0, double c1, bool accumulate);

/// Centred difference that moves a channel from offset bit `from_bit` on
/// `axis` to the complementary bit. Exact adjoint pairs: diff(0->1)^T =
/// -diff(1->0).
void diff(const Grid& g, std::span<const double> src, std::span<double> dst, int axis,
          unsigned from_bit, double scale = 1.0, bool accumulate = false);

/// Two-point average with the same offset bookkeeping; avg(0->1)^T = avg(1->0).
void average(const Grid& g, std::span<const double> src, std::span<double> dst, int axis,
             unsigned from_bit);

}  // namespace stencil

}  // namespace ymlab
