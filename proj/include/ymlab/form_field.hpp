#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ymlab/grid.hpp"
#include "ymlab/lie_algebra.hpp"

namespace ymlab {

/// Axis-set masks of the components of a p-form, in storage order:
/// p=1: x,y,z; p=2: xy,xz,yz.
std::span<const unsigned> component_masks(int degree);
int component_count(int degree);
/// Sign of dx^I ^ dx^J relative to the sorted basis element dx^(I u J).
int wedge_sign(unsigned I, unsigned J);

/// Lie-algebra valued p-form on a periodic lattice. Storage is
/// structure-of-arrays: channel (component c, basis a) occupies
/// data[(c * dim + a) * sites, ...).
class FormField {
 public:
  FormField(const Grid& grid, const GroupSpec& group, int degree);
  FormField(const Grid& grid, GroupName group, int degree)
      : FormField(grid, GroupSpec::get(group), degree) {}

  int degree() const { return degree_; }
  const Grid& grid() const { return grid_; }
  const GroupSpec& group() const { return *group_; }
  int dim() const { return group_->dim(); }
  int components() const { return component_count(degree_); }
  std::size_t sites() const { return grid_.sites(); }
  unsigned mask(int c) const { return component_masks(degree_)[c]; }
  int component_of(unsigned mask) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  /// All dim channels of component c.
  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  std::span<double> channel(int c, int a);
  std::span<const double> channel(int c, int a) const;

  LieValue at(std::size_t site, int c) const;
  void set(std::size_t site, int c, const LieValue& v);

  FormField zeros_like() const { return FormField(grid_, *group_, degree_); }
  bool same_shape(const FormField& o) const;
  void require_same_shape(const FormField& o, const char* what) const;

  FormField& operator+=(const FormField& o);
  FormField& operator-=(const FormField& o);
  FormField& operator*=(double s);
  /// this += s * o
  FormField& axpy(double s, const FormField& o);
  void fill(double v);

  /// Validity scan: true iff every stored value is finite.
  bool is_finite() const;

 private:
  Grid grid_;
  const GroupSpec* group_;
  int degree_;
  std::vector<double> data_;
};

FormField operator+(FormField a, const FormField& b);
FormField operator-(FormField a, const FormField& b);
FormField operator*(double s, FormField a);

/// L2 inner product h^3 sum_sites <f, g>, pairwise-summed.
double inner(const FormField& f, const FormField& g);
double norm2(const FormField& f);
/// Spatial mean of one channel.
double channel_mean(const FormField& f, int c, int a);

}  // namespace ymlab
