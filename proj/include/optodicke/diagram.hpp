// Parameter sweeps: observable curves versus g and the g-zeta phase diagram.
#pragma once

#include <optional>
#include <vector>

#include "optodicke/solver.hpp"

namespace optodicke {

/// Stationary-point families drawn in the observable-vs-g curves.
enum class BranchTag {
  NMinus,        // zero photons, normal spin
  NPlus,         // zero photons, inverted spin
  GammaSMinus,   // stable nonzero root of p_-
  GammaUsMinus,  // unstable nonzero root of p_-
  GammaUsPlus,   // unstable nonzero root of p_+
};

inline constexpr BranchTag kAllBranchTags[] = {BranchTag::NMinus, BranchTag::NPlus,
                                               BranchTag::GammaSMinus, BranchTag::GammaUsMinus,
                                               BranchTag::GammaUsPlus};

const char* to_string(BranchTag tag);

struct SweepSpec {
  ModelParams<double> base;  // g is overwritten per row; zeta is held fixed
  double g_min{0};
  double g_max{3};
  int g_steps{301};

  void validate() const;
};

struct BranchEntry {
  BranchTag tag{BranchTag::NMinus};
  Observables<double> observables;
  Stability stability{Stability::Stable};
};

struct SweepRow {
  double g{0};
  PhaseLabel phase{PhaseLabel::NP_Nminus};
  Observables<double> ground;
  std::vector<BranchEntry> branches;  // at most one entry per tag, in kAllBranchTags order

  const BranchEntry* find(BranchTag tag) const;
};

struct GridSpec {
  ModelParams<double> base;
  double g_min{0};
  double g_max{3};
  int g_steps{61};
  double zeta_min{0};
  double zeta_max{3};
  int zeta_steps{31};

  void validate() const;
};

struct GridCell {
  double g{0};
  double zeta{0};
  PhaseLabel phase{PhaseLabel::NP_Nminus};
};

/// A phase change between two neighbouring g cells, refined by bisection.
struct BoundarySample {
  double zeta{0};
  double g{0};
  PhaseLabel below{PhaseLabel::NP_Nminus};
  PhaseLabel above{PhaseLabel::SP};
};

struct PhaseGrid {
  std::vector<GridCell> cells;  // zeta-major, g-minor
  std::vector<BoundarySample> boundaries;
};

struct BoundaryRow {
  double zeta{0};
  double g_c{0};
  std::optional<double> g_t;
};

/// Every stationary point at one parameter set, tagged. Propagates DegenerateBracket.
std::vector<BranchEntry> classify_branches(const ModelParams<double>& params,
                                           const SolverConfig& config);

std::vector<SweepRow> sweep_g(const SweepSpec& spec, const SolverConfig& config = {},
                              int workers = 1);

PhaseGrid phase_grid(const GridSpec& spec, const SolverConfig& config = {}, int workers = 1,
                     double boundary_tol = 1e-4);

std::vector<BoundaryRow> boundary_trace(const GridSpec& spec, const SolverConfig& config = {},
                                        int workers = 1);

}  // namespace optodicke
