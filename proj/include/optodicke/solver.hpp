// Stationary points, critical couplings and ground-state selection.
#pragma once

#include <optional>
#include <vector>

#include "optodicke/errors.hpp"
#include "optodicke/model.hpp"

namespace optodicke {

enum class PhaseLabel { NP_Nminus, SP, NP_Nplus };

const char* to_string(PhaseLabel label);

struct SolverConfig {
  double tol_root{1e-10};  // absolute tolerance on gamma_bar
  double tol_curv{1e-9};   // |curvature| at or below this is Marginal
  int scan_points{2000};
  double tol_gt{1e-6};     // tolerance on the turning point coupling

  void validate() const;
};

struct RootSet {
  SpinBranch branch{SpinBranch::Normal};
  std::vector<VariationalPoint<double>> roots;  // amplitude > 0, ascending
  VariationalPoint<double> zero_point;
};

struct TurningPoint {
  double g_t{0};
  double fold_amplitude{0};  // gamma_bar where the two Normal roots merge
  double residual{0};        // p_- at the merged root
  double slope{0};           // d p_- / d gamma_bar at the merged root
};

struct SpClosure {
  double zeta_star{0};
  double zeta_estimate{0};  // small-amplitude estimate sqrt(omega_b omega^2 / omega_a)
  double width_tol{0};
};

struct GroundState {
  PhaseLabel phase{PhaseLabel::NP_Nminus};
  VariationalPoint<double> point;
  Observables<double> observables;
};

/// g_c = sqrt(omega omega_a).
double critical_coupling(const ModelParams<double>& params);

VariationalPoint<double> zero_photon_point(const ModelParams<double>& params, SpinBranch branch,
                                           const SolverConfig& config = {});

/// All positive-amplitude roots of p on one branch.
///
/// Dense scan in x = gamma_bar^2 followed by bisection. Cells in which p has
/// an interior extremum are refined so that a close pair of roots inside a
/// single cell is still separated. Throws DegenerateBracket if the extremum
/// value is zero to rounding.
RootSet find_roots(const ModelParams<double>& params, SpinBranch branch,
                   const SolverConfig& config = {});

/// Fold of the Normal branch where the stable and unstable roots merge.
/// params.g is ignored. Returns nullopt for zeta == 0 (no fold); throws
/// NotFound when the superradiant window is empty.
std::optional<TurningPoint> turning_point(const ModelParams<double>& params,
                                          const SolverConfig& config = {});

/// Width g_t - g_c of the superradiant window, 0 when it is empty and
/// +infinity for zeta == 0.
double sp_window(const ModelParams<double>& params, const SolverConfig& config = {});

/// Smallest zeta whose superradiant window is at most width_tol wide.
/// params.g and params.zeta are ignored.
SpClosure sp_closure(const ModelParams<double>& params, const SolverConfig& config = {},
                     double width_tol = 1e-3);

GroundState ground_state(const ModelParams<double>& params, const SolverConfig& config = {});

}  // namespace optodicke
