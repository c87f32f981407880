#pragma once

#include <vector>

#include "ymlab/form_field.hpp"

namespace ymlab {

/// Group-valued function on the lattice sites.
class GaugeField {
 public:
  GaugeField(const Grid& grid, const GroupSpec& group);

  /// g(x) = exp(X(x)) for a 0-form generator X.
  static GaugeField from_generator(const FormField& generator);

  const Grid& grid() const { return grid_; }
  const GroupSpec& group() const { return *group_; }

  SmallMatrix& at(int x, int y, int z) { return g_[grid_.index(wrap(x), wrap(y), wrap(z))]; }
  const SmallMatrix& at(int x, int y, int z) const {
    return g_[grid_.index(wrap(x), wrap(y), wrap(z))];
  }
  /// Value at a staggered location, built from geodesic midpoints of the
  /// surrounding site values (second-order accurate for smooth g).
  SmallMatrix at_offset(int x, int y, int z, unsigned mask) const;

  GaugeField inverse() const;

 private:
  int wrap(int i) const { return ((i % grid_.n()) + grid_.n()) % grid_.n(); }

  Grid grid_;
  const GroupSpec* group_;
  std::vector<SmallMatrix> g_;
};

/// Geodesic midpoint a exp(log(a^{-1} b) / 2).
SmallMatrix geodesic_midpoint(const SmallMatrix& a, const SmallMatrix& b, const GroupSpec& grp);

/// Discrete g^{-1} dg: A_j(edge x -> x + h e_j) = log(g(x)^{-1} g(x + h e_j)) / h.
FormField pure_gauge(const GaugeField& g);

/// A^g = g^{-1} A g + g^{-1} dg, through the edge transport
/// log(g(x)^{-1} exp(h A_j) g(x + h e_j)) / h, which reduces to pure_gauge
/// at A = 0.
FormField gauge_transform(const FormField& A, const GaugeField& g);

/// w^g = g^{-1} w g with g evaluated at each component's location.
FormField gauge_transform_form(const FormField& w, const GaugeField& g);

}  // namespace ymlab
