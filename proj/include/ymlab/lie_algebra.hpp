#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ymlab {

using Complex = std::complex<double>;

enum class GroupName : std::uint32_t { U1 = 0, SU2 = 1 };

std::string to_string(GroupName g);
GroupName parse_group(const std::string& s);

/// Complex matrix of size 1 or 2 (defining representation of U1 or SU2).
struct SmallMatrix {
  int size = 2;
  std::array<Complex, 4> a{};  // row-major

  Complex& operator()(int r, int c) { return a[2 * r + c]; }
  const Complex& operator()(int r, int c) const { return a[2 * r + c]; }

  static SmallMatrix identity(int size);
  SmallMatrix adjoint() const;
  SmallMatrix operator*(const SmallMatrix& o) const;
  SmallMatrix operator+(const SmallMatrix& o) const;
  SmallMatrix operator-(const SmallMatrix& o) const;
  SmallMatrix operator*(Complex s) const;
  Complex trace() const;
  /// Frobenius norm; used as an upper bound on the operator norm.
  double frobenius() const;
};

struct StructureConstant {
  int a, b, c;
  double f;  // [e_a, e_b] = sum_c f_abc e_c
};

/// Element of the Lie algebra as coefficients in the orthonormal basis.
struct LieValue {
  std::array<double, 3> coeffs{};
  int dim = 0;

  LieValue() = default;
  explicit LieValue(int d) : dim(d) {}
  LieValue(std::initializer_list<double> c);

  double norm() const;
  double dot(const LieValue& o) const;
  LieValue operator+(const LieValue& o) const;
  LieValue operator-(const LieValue& o) const;
  LieValue operator*(double s) const;
};

/// The compact structure group and its algebra. U1 uses the basis {i} with
/// <X,Y> = -Re tr(XY); SU2 uses e_a = -(i/2) sigma_a with <X,Y> = -2 Re tr(XY),
/// so both bases are orthonormal. Only the two singletons returned by get()
/// exist; fields hold pointers to them.
class GroupSpec {
 public:
  static const GroupSpec& get(GroupName name);

  GroupName name() const { return name_; }
  int dim() const { return dim_; }
  int matrix_size() const { return matrix_size_; }
  double ip_normalization() const { return ip_normalization_; }
  const std::vector<SmallMatrix>& basis() const { return basis_; }
  std::span<const StructureConstant> structure() const { return structure_; }
  /// sup { |ad x| : |x| <= 1 }, measured at construction (0 for U1).
  double commutator_bound() const { return commutator_bound_; }

  /// <X,Y> on matrices under the declared normalization.
  double inner(const SmallMatrix& x, const SmallMatrix& y) const;

 private:
  explicit GroupSpec(GroupName name);

  GroupName name_;
  int dim_;
  int matrix_size_;
  double ip_normalization_;
  std::vector<SmallMatrix> basis_;
  std::vector<StructureConstant> structure_;
  double commutator_bound_ = 0.0;
};

void require_same_group(const LieValue& x, const LieValue& y, const GroupSpec& g);

LieValue commutator(const LieValue& x, const LieValue& y, const GroupSpec& g);

/// |<[X,Y],Z> + <Y,[X,Z]>|
double ad_invariance_check(const LieValue& x, const LieValue& y, const LieValue& z,
                           const GroupSpec& g);

SmallMatrix to_matrix(const LieValue& x, const GroupSpec& g);
LieValue from_matrix(const SmallMatrix& m, const GroupSpec& g);

/// Closed-form exponential: complex phase for U1, Rodrigues form for SU2.
SmallMatrix group_exp(const LieValue& x, const GroupSpec& g);
/// Principal logarithm, inverse of group_exp away from the cut (angle pi for
/// U1, 2 pi for SU2).
LieValue group_log(const SmallMatrix& u, const GroupSpec& g);

/// Ad(u) X = u X u^{-1}
LieValue adjoint_action(const SmallMatrix& u, const LieValue& x, const GroupSpec& g);

}  // namespace ymlab
