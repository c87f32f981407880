#pragma once

#include <cstddef>
#include <vector>

#include "ymlab/form_field.hpp"
#include "ymlab/heat_flow.hpp"

namespace ymlab {

/// Which discretisation of the augmented right-hand side to integrate.
/// Hodge: L_A w - [w _| B], for which the energy identities hold exactly
/// on the lattice. Bochner: Delta_A w - 2 [w _| B]; the two agree up to the
/// O(h^2) Weitzenboeck defect.
enum class RhsForm { Hodge, Bochner };

/// Delta_A w - 2 [w _| B]. B must be curvature(A) to 1e-12.
FormField augmented_rhs(const FormField& w, const FormField& A, const FormField& B);
/// -((d_A^* d_A + d_A d_A^*) w + [w _| B])
FormField augmented_rhs_hodge(const FormField& w, const FormField& A, const FormField& B);
FormField augmented_rhs(const FormField& w, const FormField& A, const FormField& B, RhsForm form);

struct VariationalState {
  FormField w;
  double t = 0.0;
  FormField psi;  // d_{A(t)}^* w
  FormField eta;  // trapezoid of psi from the first positive node to t
};

struct AugmentedOptions {
  double cfl_safety = 0.5;
  int refine = 1;
  RhsForm form = RhsForm::Hodge;
  /// Exponent of the assumed s^{(b-1)/2} profile of psi on [0, t_1].
  double b = 0.75;
  /// Integrate the right-hand sides of the three energy identities alongside w.
  bool track_balances = false;
};

/// Energy balances per node. Each entry is lhs(t_n) - lhs(0) + int_0^{t_n} rhs,
/// which vanishes for the exact solution of the semi-discrete system.
struct EnergyBalances {
  std::vector<double> order0;  // ||w||^2
  std::vector<double> order1;  // ||d_A w||^2 + ||d_A^* w||^2
  std::vector<double> order2;  // ||w'||^2
  std::vector<double> scale0, scale1, scale2;
};

struct AugmentedSolution {
  std::vector<VariationalState> states;
  /// Power-rule estimate of int_0^{t_1} psi.
  FormField sliver;
  EnergyBalances balances;

  std::size_t size() const { return states.size(); }
  /// int_0^{t_n} psi: zero at n = 0, sliver + eta_n afterwards.
  FormField eta_from_zero(std::size_t n) const;
};

AugmentedSolution solve_augmented(const FormField& w0, const FlowTrajectory& traj,
                                  const AugmentedOptions& opt = {});

enum class RecoveryMode { AlmostStrong, Strong };

struct RecoveryConfig {
  double tau = 0.0;
  double b = 0.75;
  RecoveryMode mode = RecoveryMode::AlmostStrong;
};

/// v_tau(t_n) = w(t_n) + d_{A(t_n)} int_tau^{t_n} psi(s) ds
std::vector<FormField> recover_v(const AugmentedSolution& sol, const FlowTrajectory& traj,
                                 const RecoveryConfig& cfg);

/// z(t_n) = d_{A(t_n)} alpha
std::vector<FormField> vertical_solution(const FormField& alpha, const FlowTrajectory& traj);

/// -(d_A^* d_A v + [v _| B])
FormField variational_rhs(const FormField& v, const FormField& A, const FormField& B);

/// One RK4 step of the variational equation with A, B frozen. Cross-check
/// oracle only.
FormField direct_variational_step(const FormField& v, const FormField& A, const FormField& B,
                                  double dt);

struct DirectOptions {
  /// Fraction of the augmented solver's step; the equation is only weakly
  /// parabolic.
  double cfl_safety = 0.125;
  int refine = 1;
};

/// RK4 integration of the variational equation along the interpolated
/// trajectory; one value per node.
std::vector<FormField> solve_direct_variational(const FormField& v0, const FlowTrajectory& traj,
                                                const DirectOptions& opt = {});

/// int_0^T s^{-b} ||w(s)||_{H_1^{A(s)}}^2 ds, and its running values.
double b_action(const AugmentedSolution& sol, const FlowTrajectory& traj, double b);
std::vector<double> b_action_series(const AugmentedSolution& sol, const FlowTrajectory& traj,
                                    double b);

struct InitialBehaviorRow {
  double t;
  double weighted_energy;    // t^{1-b} (||d_A w||^2 + ||d_A^* w||^2)
  double weighted_integral;  // int_0^t s^{1-b} (||w'||^2 + ||L_A w||^2) ds
};

std::vector<InitialBehaviorRow> initial_behavior_monitor(const AugmentedSolution& sol,
                                                         const FlowTrajectory& traj, double b,
                                                         RhsForm form = RhsForm::Hodge);

/// M(t) w = sum_j (ad alpha_j)^2 w + [div_Ahat alpha, w] - 2 [w _| B]
FormField mult_operator_M(const FormField& w, const FormField& alpha, const FormField& A_bar,
                          const FormField& B);
/// K(t) w = 2 sum_j [alpha_j, d_j^Ahat w] + M(t) w, with a centred d_j^Ahat.
FormField operator_K(const FormField& w, const FormField& alpha, const FormField& A_bar,
                     const FormField& B);

}  // namespace ymlab
