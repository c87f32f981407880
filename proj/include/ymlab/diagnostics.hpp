#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ymlab/form_field.hpp"
#include "ymlab/variational.hpp"

namespace ymlab {

inline constexpr int kReportSchemaVersion = 1;

struct ReportEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;
};

/// Entries are kept sorted by name so output order never depends on the
/// order in which checks finished.
class DiagnosticsReport {
 public:
  void add(ReportEntry e);
  void merge(const DiagnosticsReport& other);
  const std::vector<ReportEntry>& entries() const { return entries_; }
  bool all_pass() const;
  std::size_t failures() const;

  std::string to_json(const std::string& config_hash) const;
  std::string to_csv(const std::string& config_hash) const;

 private:
  std::vector<ReportEntry> entries_;
};

/// Inequality entry: pass iff lhs <= rhs + tolerance.
ReportEntry inequality_entry(std::string name, double lhs, double rhs, double tolerance,
                             std::string provenance);
/// Second-order refinement entry: pass iff coarse / fine lies in [lo, hi].
ReportEntry refinement_entry(std::string name, double coarse, double fine,
                             std::string provenance, double lo = 3.2, double hi = 4.8);
/// Integrator-order entry: pass iff coarse / fine >= min_ratio.
ReportEntry order_entry(std::string name, double coarse, double fine, double min_ratio,
                        std::string provenance);

/// int_0^T t^{-beta} G(t)^2 dt <= 4/(1-beta)^2 int_0^T s^{2-beta} g(s)^2 ds,
/// G(t) = int_t^T g. Both sides by the power-weighted trapezoid on the nodes
/// t (t_0 = 0); the quadrature error is estimated from the same rule on
/// every other node.
ReportEntry hardy_check(std::span<const double> t, std::span<const double> g, double beta,
                        std::string name = "hardy");

struct GfsCalibration {
  double kappa_measured = 0.0;  // max ||w||_6 / ||w||_{H_1} over the samples
  double safety = 1.5;
  double kappa = 0.0;           // safety * kappa_measured
  double c = 0.0;               // commutator bound of the group
  double gamma = 0.0;           // (27/4) kappa^6 c^4
  std::uint64_t seed = 0;
  int samples = 0;
  int n = 0;
  double L = 0.0;
  std::string group;

  std::string to_json() const;
  static GfsCalibration from_json(const std::string& text);
};

GfsCalibration calibrate_gfs(const Grid& grid, const GroupSpec& group, std::uint64_t seed,
                             int samples = 1000, double safety = 1.5);

/// 1/2 ||w||_{H_1^A}^2 <= ||d_A^* w||^2 + ||d_A w||^2 + (1 + gamma ||B||_2^4) ||w||^2.
/// A missing calibration is a configuration error.
ReportEntry gfs_check(const FormField& omega, const FormField& A,
                      const std::optional<GfsCalibration>& cal, std::string name = "gfs");

// Relative residuals of the lattice identities, each normalised by the size
// of the terms it balances. All vanish in the continuum limit.
double bianchi_residual(const FormField& A);
double weitzenbock_residual(const FormField& A, const FormField& u);
double coderivative_residual(const FormField& A, const FormField& w);
double psi_evolution_residual(const FormField& A, const FormField& w);
double second_derivative_residual(const FormField& A, const FormField& w);
/// ||z' + d_A^* d_A z + [z _| B]|| for z = d_A alpha and A' = -d_A^* B.
double vertical_residual(const FormField& A, const FormField& alpha);
/// ||Delta_Ahat w + K w - (Delta_A w - 2 [w _| B])|| relative.
double split_residual(const FormField& A, const FormField& A_bar, const FormField& w);

/// Builds (A, w) on a given grid; used to evaluate the same smooth data at
/// two resolutions.
using SmoothPairFactory = std::function<std::pair<FormField, FormField>(const Grid&)>;

struct BalanceRuns {
  EnergyBalances coarse;
  EnergyBalances fine;
};

/// Spatial refinement entries (n -> 2n) for the pointwise identities, plus
/// integrator-order entries for the energy balances when supplied.
DiagnosticsReport identity_suite(const SmoothPairFactory& factory, int n, double L,
                                 const std::optional<BalanceRuns>& balances = std::nullopt);

}  // namespace ymlab
