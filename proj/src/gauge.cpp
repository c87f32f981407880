#include "ymlab/gauge.hpp"

#include "ymlab/error.hpp"

namespace ymlab {

GaugeField::GaugeField(const Grid& grid, const GroupSpec& group)
    : grid_(grid), group_(&group), g_(grid.sites(), SmallMatrix::identity(group.matrix_size())) {}

GaugeField GaugeField::from_generator(const FormField& generator) {
  if (generator.degree() != 0)
    throw Error(ErrorCode::InvalidDegree, "gauge generator must be a 0-form");
  GaugeField out(generator.grid(), generator.group());
  for (std::size_t s = 0; s < generator.sites(); ++s)
    out.g_[s] = group_exp(generator.at(s, 0), generator.group());
  return out;
}

SmallMatrix geodesic_midpoint(const SmallMatrix& a, const SmallMatrix& b, const GroupSpec& grp) {
  const LieValue half = group_log(a.adjoint() * b, grp) * 0.5;
  return a * group_exp(half, grp);
}

SmallMatrix GaugeField::at_offset(int x, int y, int z, unsigned mask) const {
  if (mask == 0) return at(x, y, z);
  for (int axis = 0; axis < 3; ++axis) {
    const unsigned bit = 1u << axis;
    if (!(mask & bit)) continue;
    const int dx = axis == 0, dy = axis == 1, dz = axis == 2;
    const SmallMatrix lo = at_offset(x, y, z, mask & ~bit);
    const SmallMatrix hi = at_offset(x + dx, y + dy, z + dz, mask & ~bit);
    return geodesic_midpoint(lo, hi, *group_);
  }
  return at(x, y, z);
}

GaugeField GaugeField::inverse() const {
  GaugeField out(grid_, *group_);
  for (std::size_t s = 0; s < g_.size(); ++s) out.g_[s] = g_[s].adjoint();
  return out;
}

FormField pure_gauge(const GaugeField& g) {
  return gauge_transform(FormField(g.grid(), g.group(), 1), g);
}

FormField gauge_transform(const FormField& A, const GaugeField& g) {
  if (A.degree() != 1) throw Error(ErrorCode::InvalidDegree, "gauge_transform needs a 1-form");
  if (A.grid() != g.grid() || &A.group() != &g.group())
    throw Error(ErrorCode::InvalidInput, "gauge_transform: grid or group mismatch");
  const Grid& grid = A.grid();
  const GroupSpec& grp = A.group();
  const int n = grid.n();
  const double h = grid.h();
  FormField out = A.zeros_like();
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const std::size_t s = grid.index(x, y, z);
        for (int j = 0; j < 3; ++j) {
          const SmallMatrix link = group_exp(A.at(s, j) * h, grp);
          const SmallMatrix& g0 = g.at(x, y, z);
          const SmallMatrix& g1 = g.at(x + (j == 0), y + (j == 1), z + (j == 2));
          out.set(s, j, group_log(g0.adjoint() * link * g1, grp) * (1.0 / h));
        }
      }
  return out;
}

FormField gauge_transform_form(const FormField& w, const GaugeField& g) {
  if (w.grid() != g.grid() || &w.group() != &g.group())
    throw Error(ErrorCode::InvalidInput, "gauge_transform_form: grid or group mismatch");
  const Grid& grid = w.grid();
  const int n = grid.n();
  FormField out = w.zeros_like();
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const std::size_t s = grid.index(x, y, z);
        for (int c = 0; c < w.components(); ++c) {
          const SmallMatrix gm = g.at_offset(x, y, z, w.mask(c));
          out.set(s, c, adjoint_action(gm.adjoint(), w.at(s, c), w.group()));
        }
      }
  return out;
}

}  // namespace ymlab
