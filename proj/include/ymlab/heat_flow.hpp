#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ymlab/form_field.hpp"
#include "ymlab/gauge.hpp"

namespace ymlab {

/// Time nodes 0 = t_0 < t_1 < ... < t_N = T. The interior nodes follow
/// t_n = T (n/N)^gamma, so t_1 = eps0 is the first positive node; extra
/// pinned times (e.g. recovery cutoffs) are merged in.
class TimeGrid {
 public:
  static TimeGrid clustered(double T, int N, double gamma, std::span<const double> pinned = {});
  static TimeGrid from_nodes(std::vector<double> nodes);

  double T() const { return nodes_.back(); }
  double gamma() const { return gamma_; }
  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }
  /// Index of the node equal to t within 1e-12 * T, if any.
  std::optional<std::size_t> find(double t) const;

 private:
  std::vector<double> nodes_;
  double gamma_ = 1.0;
};

/// Explicit stability limit used by every RK4 driver: dt <= h^2 / 6.
double rk4_stability_limit(const Grid& g);

/// Number of equal substeps covering [a, b] with dt <= cfl_safety * h^2 / 6,
/// times `refine`.
int substep_count(const Grid& g, double a, double b, double cfl_safety, int refine = 1);

struct FlowOptions {
  double cfl_safety = 0.5;
  int refine = 1;
  /// Relative per-node tolerance of the ||B|| monotonicity check.
  double monotone_tolerance = 1e-10;
  bool enforce_monotone = true;
};

enum class Quadrature { PowerWeightedTrapezoid };

struct FlowTrajectory {
  TimeGrid times;
  std::vector<FormField> A;
  std::vector<FormField> B;
  Quadrature quadrature = Quadrature::PowerWeightedTrapezoid;
  /// Nodes where ||B|| grew beyond the tolerance (only filled when the
  /// monotonicity check is not enforced).
  std::vector<std::size_t> monotone_violations;

  std::size_t size() const { return A.size(); }
  const Grid& grid() const { return A.front().grid(); }
  /// Piecewise-linear A(t); the interval is chosen by `node` (t in
  /// [t_node, t_node+1]) so substeps never straddle nodes.
  FormField A_at(std::size_t node, double t) const;
  /// Slope of the interpolant on [t_node, t_node+1].
  FormField A_slope(std::size_t node) const;
  /// Max relative difference between cached and recomputed curvatures.
  double curvature_cache_defect() const;
};

/// A' = -d_A^* B(A)
FormField ym_rhs(const FormField& A);

/// One RK4 step; dt beyond the stability limit is a configuration error.
FormField ym_step(const FormField& A, double dt, std::size_t step_index = 0);

FlowTrajectory ym_flow(const FormField& A0, const TimeGrid& tg, const FlowOptions& opt = {});

/// (1/2) int_0^T s^{-a} ||B(s)||^2 ds by the power-weighted trapezoid.
double action_rho(const FlowTrajectory& traj, double a);
/// rho_A(t_n) for every node.
std::vector<double> action_rho_series(const FlowTrajectory& traj, double a);

struct HeatFlowRow {
  double t, B2, B3, B6, Binf, rho, Adot2, weighted_B2;
};

/// One row per node: norms of B, running rho_A, ||A'||_2 and s^{1-a} ||B||^2.
std::vector<HeatFlowRow> heat_flow_series(const FlowTrajectory& traj, double a);

}  // namespace ymlab
