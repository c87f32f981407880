#pragma once

#include <vector>

#include "ymlab/form_field.hpp"
#include "ymlab/staggered.hpp"

namespace ymlab {

// Discrete gauge-covariant exterior calculus on the staggered periodic
// lattice. d uses centred differences between staggered locations, d* is
// its exact L2 adjoint, and commutator products average their factors to
// the output location. The interior product is defined as the exact
// lattice transpose of the exterior product, so d_A and d_A^* are exact
// adjoints for every A.

FormField ext_d(const FormField& f);
FormField coext_d(const FormField& f);

/// [u ^ v] = sum_{I,J} [u_I, v_J] dx^I ^ dx^J
FormField wedge_comm(const FormField& u, const FormField& v);
/// <w, [u _| v]> = <[u ^ w], v> for all w of degree deg v - deg u.
FormField interior_comm(const FormField& u, const FormField& v);

FormField cov_d(const FormField& A, const FormField& u);
FormField cov_d_star(const FormField& A, const FormField& u);

/// B = dA + (1/2)[A ^ A]
FormField curvature(const FormField& A);

/// d_j^A u for every component of u, each at offset mask(I) xor e_j.
std::vector<detail::Staggered> covariant_partial(const FormField& A, const FormField& u, int j);
/// Transpose of covariant_partial(A, ., j), accumulated into `out`.
void covariant_partial_transpose_acc(const FormField& A, const std::vector<detail::Staggered>& y,
                                     int j, FormField& out, double coef);

/// Delta_A u = -sum_j (d_j^A)^T (d_j^A) u; -Delta_A is symmetric positive
/// semidefinite by construction.
FormField bochner_laplacian(const FormField& A, const FormField& u);

/// L_A u = -(d_A^* d_A + d_A d_A^*) u
FormField hodge_laplacian(const FormField& A, const FormField& u);

FormField zero_connection(const Grid& g, const GroupSpec& grp);

}  // namespace ymlab
