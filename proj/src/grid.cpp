#include "ymlab/grid.hpp"

#include <string>

#include "ymlab/error.hpp"

namespace ymlab {

Grid::Grid(int n, double L) : n_(n), L_(L) {
  if (n < 4) throw Error(ErrorCode::InvalidInput, "grid needs n >= 4, got " + std::to_string(n));
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidInput, "box side must be positive");
}

std::array<double, 3> Grid::position(int x, int y, int z, unsigned mask) const {
  const double hh = h();
  return {hh * (x + 0.5 * ((mask >> 0) & 1u)), hh * (y + 0.5 * ((mask >> 1) & 1u)),
          hh * (z + 0.5 * ((mask >> 2) & 1u))};
}

namespace stencil {

void two_point(const Grid& g, std::span<const double> src, std::span<double> dst, int axis,
               int dir, double c0, double c1, bool accumulate) {
  const int n = g.n();
  const std::size_t stride = axis == 0 ? 1 : axis == 1 ? static_cast<std::size_t>(n)
                                                       : static_cast<std::size_t>(n) * n;
  const std::size_t wrap = stride * n;
  const std::size_t total = g.sites();
  // Index along `axis` is (i / stride) % n; neighbour offset is +-stride with wrap.
#pragma omp parallel for schedule(static)
  for (std::size_t outer = 0; outer < total / wrap; ++outer) {
    const std::size_t base = outer * wrap;
    for (int k = 0; k < n; ++k) {
      const int kn = (k + dir + n) % n;
      const std::size_t row = base + static_cast<std::size_t>(k) * stride;
      const std::size_t nrow = base + static_cast<std::size_t>(kn) * stride;
      for (std::size_t s = 0; s < stride; ++s) {
        const double v = c0 * src[row + s] + c1 * src[nrow + s];
        if (accumulate)
          dst[row + s] += v;
        else
          dst[row + s] = v;
      }
    }
  }
}

void diff(const Grid& g, std::span<const double> src, std::span<double> dst, int axis,
          unsigned from_bit, double scale, bool accumulate) {
  const double ih = scale / g.h();
  if (from_bit == 0)
    two_point(g, src, dst, axis, +1, -ih, ih, accumulate);
  else
    two_point(g, src, dst, axis, -1, ih, -ih, accumulate);
}

void average(const Grid& g, std::span<const double> src, std::span<double> dst, int axis,
             unsigned from_bit) {
  two_point(g, src, dst, axis, from_bit == 0 ? +1 : -1, 0.5, 0.5, false);
}

}  // namespace stencil
}  // namespace ymlab
